import json
import math

import numpy as np
import pytest

from kdqlab import bell_chsh, three_box
from kdqlab.cli import EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def state_pairs(amp):
    return [[float(z.real), float(z.imag)] for z in np.asarray(amp, dtype=complex)]


def three_box_file(tmp_path, **extra):
    report = three_box()
    payload = {
        "dim": 3,
        "state_a": state_pairs(report.kd.state_a.amp),
        "basis_m": [state_pairs(v.amp) for v in report.kd.basis_m.vectors],
        "basis_b": [state_pairs(v.amp) for v in report.kd.basis_b.vectors],
        "labels_m": list(report.kd.basis_m.labels),
        "labels_b": list(report.kd.basis_b.labels),
    }
    payload.update(extra)
    path = tmp_path / "three_box.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


class TestScenarioCommand:
    def test_three_box_table(self, capsys):
        code, out, _ = run_cli(capsys, "scenario", "three-box")
        assert code == EXIT_OK
        assert "0.111111111111" in out
        assert "-0.111111111111" in out
        assert "overall: PASS" in out

    def test_leggett_garg_value(self, capsys):
        code, out, _ = run_cli(capsys, "scenario", "leggett-garg", "--theta", "1.0471975511965976")
        assert code == EXIT_OK
        assert "-0.125" in out

    def test_deg_flag_equivalent(self, capsys):
        _, rad_out, _ = run_cli(capsys, "scenario", "leggett-garg", "--theta", str(math.pi / 3))
        _, deg_out, _ = run_cli(capsys, "scenario", "leggett-garg", "--theta", "60", "--deg")
        assert rad_out == deg_out

    def test_bell_json_round_trip(self, capsys):
        theta = math.pi / 4
        code, out, _ = run_cli(capsys, "scenario", "bell", "--theta", str(theta), "--format", "json")
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["scenario"] == "bell"
        assert payload["pass"] is True
        table = np.array(payload["kd"]["re"]) + 1j * np.array(payload["kd"]["im"])
        engine = bell_chsh(theta).kd.table
        assert float(np.max(np.abs(table - engine))) <= 1e-12

    def test_bell_p_k_minus2_reported(self, capsys):
        _, out, _ = run_cli(capsys, "scenario", "bell", "--theta", str(math.pi / 4), "--format", "json")
        payload = json.loads(out)
        got = {c["name"]: c["got"] for c in payload["checks"]}
        assert got["P(K=-2) = (1 - sin - cos) / 2"] == pytest.approx(-0.207106781187, abs=1e-9)

    def test_complex_checks_serialize_as_pairs(self, capsys):
        _, out, _ = run_cli(capsys, "scenario", "three-box", "--format", "json")
        payload = json.loads(out)
        by_name = {c["name"]: c for c in payload["checks"]}
        entry_check = by_name["P(box 3, b | a) = -1/9"]
        assert entry_check["expected"] == pytest.approx([-0.111111111111, 0.0], abs=1e-12)
        assert isinstance(entry_check["got"], list) and len(entry_check["got"]) == 2
        scalar_check = by_name["post-selection probability P(b|a) = 1/9"]
        assert isinstance(scalar_check["got"], float)

    def test_csv_output(self, capsys):
        code, out, _ = run_cli(capsys, "scenario", "three-box", "--format", "csv")
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert lines[0] == "m_label,b_label,re,im,modulus,phase"
        assert len(lines) == 1 + 9
        assert any(line.startswith("3,b,-0.111111111111") for line in lines)

    def test_unknown_scenario_usage_error(self, capsys):
        code, _, _ = run_cli(capsys, "scenario", "ghz")
        assert code == EXIT_USAGE

    def test_theta_rejected_for_fixed_scenario(self, capsys):
        code, _, err = run_cli(capsys, "scenario", "three-box", "--theta", "1.0")
        assert code == EXIT_USAGE
        assert "no angle" in err

    def test_theta_out_of_range(self, capsys):
        code, _, err = run_cli(capsys, "scenario", "leggett-garg", "--theta", "9.0")
        assert code == EXIT_USAGE
        assert "error" in err


class TestKdCommand:
    def test_reproduces_builtin_three_box(self, capsys, tmp_path):
        path = three_box_file(tmp_path)
        code, out, err = run_cli(capsys, "kd", str(path))
        assert code == EXIT_OK
        assert err == ""
        assert "0.111111111111" in out
        assert "-0.111111111111" in out
        _, builtin, _ = run_cli(capsys, "scenario", "three-box")
        table_section = builtin.split("checks:")[0]
        for value in ("0.111111111111", "-0.111111111111", "0.444444444444"):
            assert value in table_section and value in out

    def test_json_round_trip_within_tolerance(self, capsys, tmp_path):
        path = three_box_file(tmp_path)
        code, out, _ = run_cli(capsys, "kd", str(path), "--format", "json")
        assert code == EXIT_OK
        payload = json.loads(out)
        table = np.array(payload["kd"]["re"]) + 1j * np.array(payload["kd"]["im"])
        engine = three_box().kd.table
        assert float(np.max(np.abs(table - engine))) <= 1e-12
        assert payload["negativity"]["argmin"] == ["3", "b"]

    def test_csv_shape(self, capsys, tmp_path):
        path = three_box_file(tmp_path)
        code, out, _ = run_cli(capsys, "kd", str(path), "--format", "csv")
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert len(lines) == 10
        undefined_rows = [line for line in lines if line.endswith(",undefined")]
        assert undefined_rows  # zero-modulus entries have no phase

    def test_action_phase_overlap_columns(self, capsys, tmp_path):
        path = three_box_file(tmp_path, action_phase=[0.0, 0.0, math.pi])
        code, out, _ = run_cli(capsys, "kd", str(path))
        assert code == EXIT_OK
        assert "overlap_from_kd" in out
        assert "undefined" in out  # the dead column has P(b|a) = 0
        payload_code, json_out, _ = run_cli(capsys, "kd", str(path), "--format", "json")
        payload = json.loads(json_out)
        rows = {row["b"]: row for row in payload["overlaps"]}
        assert rows["b"]["overlap_from_kd"] == pytest.approx(1.0, abs=1e-9)
        assert rows["b"]["difference"] <= 1e-9
        assert rows["null"]["overlap_from_kd"] == "undefined"

    def test_random_file_overlap_agreement(self, capsys, tmp_path):
        rng = np.random.default_rng(8)
        from helpers import haar_basis, random_state

        a = random_state(rng, 3)
        basis_m = haar_basis(rng, 3, "m")
        basis_b = haar_basis(rng, 3, "b")
        payload = {
            "dim": 3,
            "state_a": state_pairs(a.amp),
            "basis_m": [state_pairs(v.amp) for v in basis_m.vectors],
            "basis_b": [state_pairs(v.amp) for v in basis_b.vectors],
            "action_phase": list(rng.uniform(-math.pi, math.pi, 3)),
        }
        path = tmp_path / "random.json"
        path.write_text(json.dumps(payload), encoding="utf-8")
        code, out, _ = run_cli(capsys, "kd", str(path), "--format", "json")
        assert code == EXIT_OK
        for row in json.loads(out)["overlaps"]:
            if row["difference"] != "undefined":
                assert row["difference"] <= 1e-9

    def test_parse_errors_exit_two(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{ not json", encoding="utf-8")
        assert run_cli(capsys, "kd", str(bad))[0] == EXIT_USAGE

        unknown = tmp_path / "unknown.json"
        unknown.write_text(json.dumps({"dim": 2, "state_a": [[1, 0], [0, 0]], "basis_m": [], "basis_b": [], "wat": 1}))
        code, _, err = run_cli(capsys, "kd", str(unknown))
        assert code == EXIT_USAGE and "unknown keys" in err

        skewed = tmp_path / "skewed.json"
        skewed.write_text(
            json.dumps(
                {
                    "dim": 2,
                    "state_a": [[1, 0], [0, 0]],
                    "basis_m": [[[1, 0], [0, 0]], [[0.9, 0], [0.435889894354, 0]]],
                    "basis_b": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
                }
            )
        )
        code, _, err = run_cli(capsys, "kd", str(skewed))
        assert code == EXIT_USAGE and "orthonormal" in err

        missing = tmp_path / "missing.json"
        missing.write_text(json.dumps({"dim": 2}))
        assert run_cli(capsys, "kd", str(missing))[0] == EXIT_USAGE
        assert run_cli(capsys, "kd", str(tmp_path / "does_not_exist.json"))[0] == EXIT_USAGE

    def test_same_basis_commuting_preparation(self, capsys, tmp_path):
        payload = {
            "dim": 2,
            "state_a": [[1.0, 0.0], [0.0, 0.0]],
            "basis_m": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
            "basis_b": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
        }
        path = tmp_path / "trivial.json"
        path.write_text(json.dumps(payload), encoding="utf-8")
        code, out, _ = run_cli(capsys, "kd", str(path), "--format", "json")
        assert code == EXIT_OK
        result = json.loads(out)
        re_table = np.array(result["kd"]["re"])
        im_table = np.array(result["kd"]["im"])
        assert float(re_table.min()) >= 0.0
        assert float(np.max(np.abs(im_table))) == 0.0
        assert result["negativity"]["total_negativity"] == 0.0

    def test_format_does_not_change_numbers(self, capsys, tmp_path):
        path = three_box_file(tmp_path)
        _, json_out, _ = run_cli(capsys, "kd", str(path), "--format", "json")
        _, csv_out, _ = run_cli(capsys, "kd", str(path), "--format", "csv")
        payload = json.loads(json_out)
        from_json = {}
        for i, m in enumerate(payload["kd"]["labels"]["m"]):
            for j, b in enumerate(payload["kd"]["labels"]["b"]):
                from_json[(m, b)] = (payload["kd"]["re"][i][j], payload["kd"]["im"][i][j])
        for line in csv_out.strip().splitlines()[1:]:
            m, b, re, im, _, _ = line.split(",")
            assert float(re) == pytest.approx(from_json[(m, b)][0], abs=1e-12)
            assert float(im) == pytest.approx(from_json[(m, b)][1], abs=1e-12)

    def test_unnormalized_state_warns_but_runs(self, capsys, tmp_path):
        payload = {
            "dim": 2,
            "state_a": [[2.0, 0.0], [0.0, 0.0]],
            "basis_m": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
            "basis_b": [
                [[0.707106781187, 0], [0.707106781187, 0]],
                [[0.707106781187, 0], [-0.707106781187, 0]],
            ],
        }
        path = tmp_path / "unnormalized.json"
        path.write_text(json.dumps(payload), encoding="utf-8")
        code, out, err = run_cli(capsys, "kd", str(path))
        assert code == EXIT_OK
        assert "renormalized" in err
        assert "0.5" in out


class TestWeakCommand:
    def test_three_box_pointer_run(self, capsys, tmp_path):
        path = three_box_file(tmp_path, kappa=[0.0, 0.0, 1.0])
        code, out, _ = run_cli(
            capsys, "weak", str(path), "--coupling", "1", "--width", "50",
            "--shots", "20000", "--seed", "42",
        )
        assert code == EXIT_OK
        b_row = [
            line for line in out.splitlines() if line.split() and line.split()[0] == "b" and "P(b)" not in line
        ][0]
        assert "-0.999" in b_row
        assert "undefined" in out  # dead-direction row

    def test_kappa_flag_overrides(self, capsys, tmp_path):
        path = three_box_file(tmp_path)
        code, out, _ = run_cli(
            capsys, "weak", str(path), "--kappa", "0,0,1", "--coupling", "1", "--width", "50",
            "--shots", "5000", "--seed", "1",
        )
        assert code == EXIT_OK
        assert "mean_closed" in out

    def test_missing_kappa_is_usage_error(self, capsys, tmp_path):
        path = three_box_file(tmp_path)
        code, _, err = run_cli(capsys, "weak", str(path), "--coupling", "1", "--width", "50")
        assert code == EXIT_USAGE and "kappa" in err

    def test_wrong_kappa_length(self, capsys, tmp_path):
        path = three_box_file(tmp_path)
        code, _, err = run_cli(
            capsys, "weak", str(path), "--kappa", "0,1", "--coupling", "1", "--width", "50"
        )
        assert code == EXIT_USAGE and "3 values" in err

    def test_replay_is_byte_identical(self, capsys, tmp_path):
        path = three_box_file(tmp_path, kappa=[0.0, 0.0, 1.0])
        argv = ("weak", str(path), "--coupling", "1", "--width", "50", "--shots", "20000", "--seed", "7")
        _, first, _ = run_cli(capsys, *argv)
        _, second, _ = run_cli(capsys, *argv)
        assert first == second

    def test_sweep_converges_to_weak_value(self, capsys, tmp_path):
        path = three_box_file(tmp_path, kappa=[0.0, 0.0, 1.0])
        code, out, _ = run_cli(
            capsys, "weak", str(path), "--coupling", "1", "--width", "2",
            "--shots", "1000", "--seed", "3", "--sweep",
        )
        assert code == EXIT_OK
        assert "width sweep" in out
        assert "target Re(weak value): b=-1" in out
        sweep_lines = [line for line in out.splitlines() if line and line[0].isdigit()]
        ratios, errors = [], []
        for line in sweep_lines:
            cells = line.split()
            ratios.append(float(cells[0]))
            errors.append(abs(float(cells[1]) + 1.0))
        assert ratios == [2.0, 4.0, 8.0, 16.0, 32.0, 64.0]
        assert all(e2 < e1 for e1, e2 in zip(errors, errors[1:]))


class TestExitCodeContract:
    def test_check_failure_exit_code_exists(self):
        assert EXIT_CHECK_FAILED == 3 and EXIT_USAGE == 2 and EXIT_OK == 0

    def test_help_exits_zero(self, capsys):
        assert run_cli(capsys, "--help")[0] == EXIT_OK

    def test_failed_check_exits_three(self, capsys, monkeypatch):
        import kdqlab.cli as cli_module
        from kdqlab.scenarios import ScenarioReport, make_check

        real = three_box()
        broken = ScenarioReport(
            scenario=real.scenario,
            dim=real.dim,
            kd=real.kd,
            negativity=real.negativity,
            checks=real.checks[:-1] + (make_check("forced failure", 1.0, 2.0),),
        )
        monkeypatch.setattr(cli_module.scenarios, "build", lambda name, theta=None: broken)
        code, out, _ = run_cli(capsys, "scenario", "three-box")
        assert code == EXIT_CHECK_FAILED
        assert "FAIL" in out and "overall: FAIL" in out
