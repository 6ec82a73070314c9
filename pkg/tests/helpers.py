"""Shared randomized constructors for the test suite."""

from __future__ import annotations

import numpy as np

from kdqlab import OrthonormalBasis, StateVector


def random_state(rng: np.random.Generator, dim: int) -> StateVector:
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector.normalize(z)


def haar_basis(rng: np.random.Generator, dim: int, prefix: str = "v") -> OrthonormalBasis:
    """Haar-random orthonormal basis via phase-fixed QR."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    q = q * (diag / np.abs(diag)).conj()
    return OrthonormalBasis(
        tuple(f"{prefix}{k}" for k in range(dim)),
        tuple(StateVector(q[:, k]) for k in range(dim)),
    )
