"""Gaussian-pointer model of measuring a basis observable between pre- and post-selection.

A position pointer with initial standard deviation ``width`` is shifted by
``coupling * eigenvalue[m]`` conditioned on the intermediate outcome m. The
observable joint density of (pointer reading, final outcome b) is an ordinary
non-negative probability for every pointer width, which is how the negative
and imaginary structure of the underlying joint table stays covered up: wide
pointers read out real weak values, narrow pointers recover projective
statistics, and nothing in between ever exposes a negative density.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .kdq import PostSelectionError
from .qcore import TOL, Operator, OrthonormalBasis, StateVector, _same_dim

CHUNK = 65536  # fixed sampling chunk; chunk k draws from generator (seed, k)
GRID_POINTS = 2**14


@dataclass(frozen=True)
class PointerConfig:
    """Pointer coupling strength, initial width and measured spectrum."""

    coupling: float
    width: float
    eigenvalue: tuple[float, ...]

    def __post_init__(self) -> None:
        g = float(self.coupling)
        s = float(self.width)
        if not (np.isfinite(g) and g > 0.0):
            raise ValueError(f"coupling must be positive and finite, got {self.coupling}")
        if not (np.isfinite(s) and s > 0.0):
            raise ValueError(f"width must be positive and finite, got {self.width}")
        kappa = tuple(float(k) for k in self.eigenvalue)
        if not kappa or not all(np.isfinite(kappa)):
            raise ValueError("eigenvalue list must be non-empty and finite")
        object.__setattr__(self, "coupling", g)
        object.__setattr__(self, "width", s)
        object.__setattr__(self, "eigenvalue", kappa)


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """Seeded draw of (pointer reading, final outcome) pairs.

    Readings and outcome indices are stored as parallel arrays; ``records()``
    yields the (reading, b_label) tuples in draw order. Identical
    (seed, shots, config, scenario) inputs give bit-identical batches.
    """

    seed: int
    shots: int
    readings: np.ndarray
    b_index: np.ndarray
    b_labels: tuple[str, ...]

    def __post_init__(self) -> None:
        readings = np.asarray(self.readings, dtype=float)
        b_index = np.asarray(self.b_index, dtype=np.int64)
        if readings.shape != (self.shots,) or b_index.shape != (self.shots,):
            raise ValueError("readings and b_index must both hold one entry per shot")
        readings.setflags(write=False)
        b_index.setflags(write=False)
        object.__setattr__(self, "readings", readings)
        object.__setattr__(self, "b_index", b_index)

    def __len__(self) -> int:
        return self.shots

    def records(self) -> list[tuple[float, str]]:
        return [(float(x), self.b_labels[i]) for x, i in zip(self.readings, self.b_index)]


def observable_from_eigenvalues(basis_m: OrthonormalBasis, eigenvalue: tuple[float, ...]) -> Operator:
    """The measured observable ``sum_m eigenvalue[m] |m><m|``."""
    if len(eigenvalue) != basis_m.dim:
        raise ValueError(f"need {basis_m.dim} eigenvalues, got {len(eigenvalue)}")
    m_mat = basis_m.matrix
    return Operator((m_mat.T * np.asarray(eigenvalue, dtype=float)) @ m_mat.conj())


def _coefficients(
    a: StateVector, basis_m: OrthonormalBasis, basis_b: OrthonormalBasis, cfg: PointerConfig, b_index: int
) -> np.ndarray:
    dim = _same_dim(a.dim, basis_m.dim, basis_b.dim)
    if len(cfg.eigenvalue) != dim:
        raise ValueError(f"config lists {len(cfg.eigenvalue)} eigenvalues for dimension {dim}")
    if not 0 <= b_index < dim:
        raise ValueError(f"b_index {b_index} out of range for dimension {dim}")
    b_vec = basis_b.vectors[b_index].amp
    bm = b_vec.conj() @ basis_m.matrix.T  # <b|m>
    ma = basis_m.matrix.conj() @ a.amp  # <m|a>
    return bm * ma


def _overlap_kernel(cfg: PointerConfig) -> np.ndarray:
    """Gaussian overlap of pointer wave packets centered per outcome."""
    kappa = np.asarray(cfg.eigenvalue)
    delta = kappa[:, None] - kappa[None, :]
    return np.exp(-(cfg.coupling**2) * delta**2 / (8.0 * cfg.width**2))


def pointer_joint_density(
    a: StateVector,
    basis_m: OrthonormalBasis,
    basis_b: OrthonormalBasis,
    cfg: PointerConfig,
    x: float | np.ndarray,
    b_index: int,
) -> float | np.ndarray:
    """Joint density of reading ``x`` and post-selecting outcome ``b_index``.

    ``p(x, b) = |sum_m <b|m><m|a> A(x - g k_m)|^2`` with ``A`` the amplitude
    of a mean-zero Gaussian of standard deviation ``width``. Non-negative by
    construction; integrates over x to the outcome probability of b.
    """
    c = _coefficients(a, basis_m, basis_b, cfg, b_index)
    centers = cfg.coupling * np.asarray(cfg.eigenvalue)
    xs = np.asarray(x, dtype=float)
    prefactor = (2.0 * np.pi * cfg.width**2) ** -0.25
    amps = prefactor * np.exp(-((xs[..., None] - centers) ** 2) / (4.0 * cfg.width**2))
    density = np.abs(amps @ c) ** 2
    return float(density) if np.isscalar(x) or np.ndim(x) == 0 else density


def post_selection_probability(
    a: StateVector, basis_m: OrthonormalBasis, basis_b: OrthonormalBasis, cfg: PointerConfig, b_index: int
) -> float:
    """Probability of outcome b after the pointer interaction (closed form)."""
    c = _coefficients(a, basis_m, basis_b, cfg, b_index)
    value = complex(c.conj() @ _overlap_kernel(cfg) @ c)
    return float(value.real)


def conditional_pointer_mean(
    a: StateVector, basis_m: OrthonormalBasis, basis_b: OrthonormalBasis, cfg: PointerConfig, b_index: int
) -> float:
    """Mean pointer reading conditioned on outcome b (closed Gaussian form).

    Wide pointers approach ``coupling * Re`` of the weak value of the
    measured observable; narrow pointers approach the projective average.
    """
    c = _coefficients(a, basis_m, basis_b, cfg, b_index)
    kernel = _overlap_kernel(cfg)
    kappa = np.asarray(cfg.eigenvalue)
    centers_avg = 0.5 * (kappa[:, None] + kappa[None, :])
    denominator = complex(c.conj() @ kernel @ c).real
    if denominator <= TOL:
        raise PostSelectionError(f"post-selection probability ~ 0 for b index {b_index}")
    numerator = cfg.coupling * complex(c.conj() @ (kernel * centers_avg) @ c).real
    return float(numerator / denominator)


def conditional_pointer_mean_quadrature(
    a: StateVector, basis_m: OrthonormalBasis, basis_b: OrthonormalBasis, cfg: PointerConfig, b_index: int
) -> float:
    """Same conditional mean via adaptive quadrature of the joint density."""
    centers = cfg.coupling * np.asarray(cfg.eigenvalue)
    span = float(np.max(np.abs(centers))) + 12.0 * cfg.width
    interior = sorted(float(c) for c in centers if -span < c < span)

    def density(x: float) -> float:
        return pointer_joint_density(a, basis_m, basis_b, cfg, x, b_index)

    mass, _ = integrate.quad(density, -span, span, points=interior, limit=400, epsabs=1e-13, epsrel=1e-12)
    if mass <= TOL:
        raise PostSelectionError(f"post-selection probability ~ 0 for b index {b_index}")
    first, _ = integrate.quad(
        lambda x: x * density(x), -span, span, points=interior, limit=400, epsabs=1e-13, epsrel=1e-12
    )
    return float(first / mass)


def _tabulated_distributions(
    a: StateVector, basis_m: OrthonormalBasis, basis_b: OrthonormalBasis, cfg: PointerConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Per-outcome cumulative distributions of the reading on a fixed grid."""
    centers = cfg.coupling * np.asarray(cfg.eigenvalue)
    span = float(np.max(np.abs(centers))) + 8.0 * cfg.width
    grid = np.linspace(-span, span, GRID_POINTS)
    step = grid[1] - grid[0]
    cdfs = []
    for b in range(basis_b.dim):
        density = pointer_joint_density(a, basis_m, basis_b, cfg, grid, b)
        cdf = np.concatenate([[0.0], np.cumsum(0.5 * (density[1:] + density[:-1]) * step)])
        cdfs.append(cdf)
    return grid, np.stack(cdfs)


def sample(
    a: StateVector,
    basis_m: OrthonormalBasis,
    basis_b: OrthonormalBasis,
    cfg: PointerConfig,
    shots: int,
    seed: int,
) -> SampleBatch:
    """Draw (reading, outcome) pairs from the joint pointer density.

    Sampling inverts grid-tabulated cumulative distributions with linear
    interpolation. Shots are partitioned into fixed chunks of ``CHUNK``;
    chunk k uses the generator derived from (seed, k) and chunks concatenate
    in order, so the batch is a pure function of (seed, shots, config)
    however the chunks are scheduled.
    """
    if not isinstance(shots, (int, np.integer)) or shots < 1:
        raise ValueError(f"shots must be a positive integer, got {shots}")
    if not isinstance(seed, (int, np.integer)) or not 0 <= int(seed) < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")

    grid, cdfs = _tabulated_distributions(a, basis_m, basis_b, cfg)
    outcome_mass = cdfs[:, -1]
    cumulative = np.cumsum(outcome_mass / outcome_mass.sum())

    readings = np.empty(shots, dtype=float)
    b_index = np.empty(shots, dtype=np.int64)
    position = 0
    for chunk in range(-(-shots // CHUNK)):
        count = min(CHUNK, shots - position)
        rng = np.random.default_rng([int(seed), chunk])
        u_outcome = rng.random(count)
        u_reading = rng.random(count)
        drawn = np.minimum(np.searchsorted(cumulative, u_outcome, side="right"), basis_b.dim - 1)
        chunk_readings = np.empty(count, dtype=float)
        for b in np.unique(drawn):
            mask = drawn == b
            chunk_readings[mask] = np.interp(u_reading[mask] * cdfs[b, -1], cdfs[b], grid)
        readings[position : position + count] = chunk_readings
        b_index[position : position + count] = drawn
        position += count
    return SampleBatch(
        seed=int(seed), shots=int(shots), readings=readings, b_index=b_index, b_labels=basis_b.labels
    )
