import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qutrit_sync.cli import main, parse_amplitude, parse_target, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def fig2_file(tmp_path):
    path = tmp_path / "fig2.json"
    path.write_text(json.dumps({"n_states": 3, "letters": {"A": [2, 3, 1], "B": [2, 1, 1]}}))
    return str(path)


class TestSyncCheck:
    def test_exact(self, capsys):
        code, out, _ = run(capsys, "sync-check", "--theta", "1.5707963", "--phi", "1.5707963", "--word", "ABA")
        assert code == 0
        data = json.loads(out)
        assert set(data) == {"word", "theta", "phi", "worst_case_fidelity", "mixed_state_fidelity"}
        assert data["worst_case_fidelity"] == pytest.approx(1, abs=1e-9)

    def test_perturbed(self, capsys):
        _, out, _ = run(capsys, "sync-check", "--theta", "1.4137", "--phi", "1.4137", "--word", "ABA")
        assert json.loads(out)["mixed_state_fidelity"] > 0.975

    def test_pi_units(self, capsys):
        _, out, _ = run(capsys, "sync-check", "--theta", "0.5", "--phi", "0.5", "--pi-units")
        assert json.loads(out)["theta"] == pytest.approx(math.pi / 2, abs=1e-11)

    @pytest.mark.parametrize("word", ["", "ABX", "ABC"])
    def test_bad_words(self, capsys, word):
        code, _, err = run(capsys, "sync-check", "--word", word)
        assert code == 2
        assert "error" in err

    def test_c_with_phases(self, capsys):
        code, out, _ = run(capsys, "sync-check", "--word", "ABAC", "--alpha", "0.9", "--beta", "0.31")
        assert code == 0
        assert json.loads(out)["worst_case_fidelity"] == pytest.approx(1, abs=1e-12)


class TestScan:
    def test_default_grid(self, tmp_path, capsys):
        out = tmp_path / "scan.csv"
        assert run(capsys, "scan", "--out", str(out))[0] == 0
        rows = list(csv.DictReader(out.open()))
        assert len(rows) == 101 * 101
        centre = rows[50 * 101 + 50]
        assert float(centre["theta"]) == pytest.approx(math.pi / 2, abs=1e-11)
        assert float(centre["overlap"]) == pytest.approx(1, abs=1e-9)

    def test_row_major_and_deterministic(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["scan", "--steps", "4", "--theta-min", "1.3", "--theta-max", "1.8"]
        run(capsys, *args, "--out", str(a))
        run(capsys, *args, "--out", str(b))
        assert a.read_bytes() == b.read_bytes()
        lines = a.read_text().splitlines()
        assert lines[0] == "theta,phi,overlap"
        thetas = [float(line.split(",")[0]) for line in lines[1:]]
        assert thetas == sorted(thetas)

    def test_steps_validation(self, capsys):
        assert run(capsys, "scan", "--steps", "1")[0] == 2

    def test_unwritable(self, tmp_path, capsys):
        code, _, err = run(capsys, "scan", "--steps", "2", "--out", str(tmp_path / "missing" / "x.csv"))
        assert code == 3
        assert "cannot write" in err


class TestDfa:
    def test_check(self, capsys, fig2_file):
        _, out, _ = run(capsys, "dfa", fig2_file, "--check", "BAB")
        assert json.loads(out) == {"synchronizing": True, "state": 1}

    def test_check_fails(self, capsys, fig2_file):
        _, out, _ = run(capsys, "dfa", fig2_file, "--check", "B")
        assert json.loads(out) == {"synchronizing": False, "state": None}

    def test_shortest_and_greedy(self, capsys, fig2_file):
        _, out, _ = run(capsys, "dfa", fig2_file, "--shortest")
        assert json.loads(out) == {"word": "BAB", "word_length": 3}
        _, out, _ = run(capsys, "dfa", fig2_file, "--greedy")
        assert json.loads(out)["word_length"] >= 3

    def test_cerny(self, capsys):
        _, out, _ = run(capsys, "dfa", "--cerny", "4")
        assert json.loads(out)["word_length"] == 9
        _, out2, _ = run(capsys, "cerny", "4")
        assert out2 == out

    def test_permutation_only(self, capsys, tmp_path):
        path = tmp_path / "perm.json"
        path.write_text(json.dumps({"n_states": 3, "letters": {"A": [2, 3, 1], "B": [2, 1, 3]}}))
        _, out, _ = run(capsys, "dfa", str(path), "--shortest")
        assert json.loads(out) == {"word": None}

    @pytest.mark.parametrize("content", ["{oops", '{"n_states": 2, "letters": {"A": [1, 5]}}'])
    def test_malformed(self, capsys, tmp_path, content):
        path = tmp_path / "bad.json"
        path.write_text(content)
        assert run(capsys, "dfa", str(path), "--shortest")[0] == 2

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "dfa", str(tmp_path / "nope.json"))[0] == 2


class TestStates:
    def test_fig6_top(self, capsys):
        code, out, _ = run(capsys, "states", "--theta", "0.0891089", "--phi", "0.1244284", "--n", "101")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["k", "j", "x", "y", "z"]
        xyz = np.array([[float(v) for v in r[2:]] for r in rows[1:]])
        assert xyz.shape == (10201, 3)
        np.testing.assert_allclose(np.sum(xyz**2, axis=1), 1, atol=1e-9)

    def test_single(self, capsys):
        _, out, _ = run(capsys, "states", "--n", "1")
        assert out.splitlines() == ["k,j,x,y,z", "0,0,0,1,0"]

    def test_complex_format(self, capsys):
        _, out, _ = run(capsys, "states", "--n", "3", "--alpha", "0.9", "--beta", "0.31")
        lines = out.splitlines()
        assert lines[0] == "l,k,j,re1,im1,re2,im2,re3,im3"
        assert len(lines) == 28
        assert all(len(line.split(",")) == 9 for line in lines)

    def test_cap(self, capsys):
        code, _, err = run(capsys, "states", "--n", "200", "--alpha", "1", "--beta", "2")
        assert code == 2
        assert "cap" in err

    def test_roundtrip_precision(self, capsys):
        from qutrit_sync.prep import PrepFamily, family_states

        _, out, _ = run(capsys, "states", "--n", "7", "--theta", "0.3", "--phi", "0.8")
        rows = list(csv.reader(io.StringIO(out)))[1:]
        values = np.array([[float(v) for v in r[2:]] for r in rows])
        expected = family_states(PrepFamily(0.3, 0.8, 7)).real
        np.testing.assert_allclose(values, expected, rtol=1e-11, atol=1e-12)


class TestPrepare:
    def test_reset_only(self, capsys):
        _, out, _ = run(capsys, "prepare", "--target", "0,1,0")
        data = json.loads(out)
        assert data["word"] == "ABA"
        assert data["predicted_fidelity"] == pytest.approx(1)

    def test_uniform(self, capsys):
        _, out, err = run(capsys, "prepare", "--target", "0.577,0.577,0.577", "--n", "101")
        assert "renormalized" in err
        data = json.loads(out)
        assert data["predicted_fidelity"] >= 0.99
        assert data["word"] == "ABA" + "A" * data["j"] + "B" * data["k"]

    def test_complex_without_phase(self, capsys):
        code, _, err = run(capsys, "prepare", "--target", "0,0.707i,0.707")
        assert code == 2
        assert "C gate" in err

    def test_complex_with_phase(self, capsys):
        code, out, _ = run(capsys, "prepare", "--target", "0,0.707i,0.707", "--alpha", "0.9",
                           "--beta", "0.31", "--n", "30")
        assert code == 0
        assert json.loads(out)["l"] > 0

    def test_rejects_unnormalized(self, capsys):
        assert run(capsys, "prepare", "--target", "1,1,0")[0] == 2


class TestParsing:
    @pytest.mark.parametrize(
        "text, value",
        [("0.5", 0.5), ("0.707i", 0.707j), ("1+2i", 1 + 2j), ("1-2i", 1 - 2j), ("-i", -1j), ("-0.5", -0.5)],
    )
    def test_amplitudes(self, text, value):
        assert parse_amplitude(text) == value

    @pytest.mark.parametrize("text", ["", "abc", "1+"])
    def test_bad_amplitudes(self, text):
        with pytest.raises(UsageError):
            parse_amplitude(text)

    def test_target_count(self):
        with pytest.raises(UsageError):
            parse_target("1,0")


def test_coverage(capsys):
    _, out, _ = run(capsys, "coverage", "--n", "20", "--probes", "500")
    data = json.loads(out)
    assert data["num_states"] == 400
    assert 0 < data["covering_radius"] < math.pi / 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qutrit_sync", "cerny", "3"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["word_length"] == 4


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2
