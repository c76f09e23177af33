import csv
import io
import json
import math
import subprocess
import sys

import pytest

from fluxtube import ab, cli, spectrum


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestParsing:
    def test_m_range(self):
        assert cli.parse_m_range("-4..4") == (-4, 4)
        assert cli.parse_m_range("2") == (2, 2)
        assert cli.parse_m_range("-3.0..-1") == (-3, -1)

    @pytest.mark.parametrize("text", ["4..-4", "a..b", "1.5..2"])
    def test_bad_m_range(self, text):
        with pytest.raises(Exception):
            cli.parse_m_range(text)

    def test_grid_is_exact(self):
        g = cli.parse_grid("-3:3:0.05")
        assert len(g) == 121
        assert g[0] == -3.0 and g[-1] == 3.0
        assert 0.5 in g and -2.5 in g and 1.0 in g

    def test_negative_values_glued(self):
        assert cli._join_negative_values(["--alpha", "-1.5", "--m", "-2..2"]) == [
            "--alpha=-1.5", "--m=-2..2"]


class TestExitCodes:
    def test_unknown_flag(self, capsys):
        code, out, err = run(capsys, "spectrum", "--alpha", "1", "--bogus")
        assert code == 1
        assert "usage" in err

    def test_missing_command(self, capsys):
        assert run(capsys)[0] == 1

    def test_validation_error(self, capsys):
        code, _, err = run(capsys, "match-scan", "--alpha", "0.5", "--r-tube", "-0.1")
        assert code == 1
        assert "r_tube" in err

    def test_nonfinite(self, capsys):
        assert run(capsys, "spectrum", "--alpha", "nan")[0] == 1

    def test_verify_quick(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "quick")
        assert code == 0
        assert json.loads(out)["passed"] is True

    def test_verify_failure_is_2(self, capsys, monkeypatch):
        from fluxtube import verify
        from fluxtube.analysis import VerificationReport

        def broken():
            rep = VerificationReport()
            rep.add("forced", 1.0, 0.0)
            return rep

        monkeypatch.setitem(verify.SUITES, "kappa", broken)
        code, out, _ = run(capsys, "verify", "--suite", "kappa")
        assert code == 2
        assert json.loads(out)["passed"] is False


class TestSpectrum:
    def test_csv_has_vacancy(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--alpha", "1", "--e-max", "5", "--m", "-4..4",
                           "--format", "csv")
        assert code == 0
        rows = [r for r in csv.reader(io.StringIO(out)) if r and not r[0].startswith("#")]
        assert rows[0][:3] == ["m_plus_sigma", "E", "family"]
        assert sum(r[2] == "vacancy" for r in rows[1:]) == 1

    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_round_trip(self, capsys, fmt):
        _, out, _ = run(capsys, "spectrum", "--alpha", "-1.5", "--kappa", "0.01", "--e-max", "4",
                        "--m", "-3..3", "--format", fmt)
        parse = spectrum.SpectrumTable.from_csv if fmt == "csv" else spectrum.SpectrumTable.from_json
        want = spectrum.enumerate_spectrum(-1.5, 0.01, 4.0, -3, 3)
        assert parse(out) == want

    def test_deterministic_order(self, capsys):
        a = run(capsys, "spectrum", "--alpha", "2.5", "--format", "json")[1]
        b = run(capsys, "spectrum", "--alpha", "2.5", "--format", "json")[1]
        assert a == b
        keys = [(s["sigma"], s["m"], s["E"]) for s in json.loads(a)["states"]]
        assert keys == sorted(keys)

    def test_output_file(self, capsys, tmp_path):
        path = tmp_path / "s.json"
        code, out, _ = run(capsys, "spectrum", "--alpha", "0.5", "--output", str(path))
        assert code == 0 and out == ""
        assert json.loads(path.read_text())["alpha"] == 0.5


class TestOtherCommands:
    def test_indices_csv(self, capsys):
        code, out, _ = run(capsys, "indices", "--alpha-grid", "-3:3:0.05", "--format", "csv")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert list(rows[0]) == ["alpha", "I_s", "I_AB"]
        assert len(rows) == 121
        for r in rows:
            a = float(r["alpha"])
            assert int(r["I_s"]) == spectrum.index_singular(a)
            assert int(r["I_AB"]) == ab.index_ab(a)
            if a == int(a):
                assert int(r["I_s"]) == int(r["I_AB"]) == int(a)

    def test_match_scan_landau(self, capsys):
        code, out, _ = run(capsys, "match-scan", "--alpha", "0", "--r-tube", "0.7", "--m", "0",
                           "--sigma", "0.5", "--e-max", "3.5")
        assert code == 0
        roots = [r["E"] for r in json.loads(out)["roots"]]
        assert roots == pytest.approx([1.0, 2.0, 3.0], abs=1e-8)

    def test_match_scan_kappa(self, capsys):
        _, out, _ = run(capsys, "match-scan", "--alpha", "0", "--r-tube", "0.7", "--m", "0",
                        "--sigma", "0.5", "--e-max", "1.5", "--kappa", "0.1")
        (r,) = json.loads(out)["roots"]
        assert r["E"] - r["E_kappa0"] == pytest.approx(0.05)

    def test_ab_json(self, capsys):
        code, out, _ = run(capsys, "ab", "--alpha", "-1", "--r-tube", "1e-3")
        d = json.loads(out)
        assert code == 0
        assert d["index_ab"] == d["index_singular"] == -1
        (mode,) = d["modes"]
        assert mode["regime"] == "LogNormalized"
        assert mode["nu"] == pytest.approx((-math.pi * math.log(1e-6)) ** -0.5)

    def test_ab_empty(self, capsys):
        code, out, _ = run(capsys, "ab", "--alpha", "0.3")
        assert code == 0 and json.loads(out)["modes"] == []


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "fluxtube", "indices", "--alpha-grid", "0:1:1",
                          "--format", "csv"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines() == ["alpha,I_s,I_AB", "0.0,0,0", "1.0,1,1"]
