import csv
import io
import json
import subprocess
import sys

import mpmath
import pytest

from qiw import cli, verify


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_wrt_both_agree(capsys):
    code, doc = run_json(capsys, "wrt", "--manifold", "E8", "--N", "3", "--method", "both")
    assert code == 0
    assert doc["schema"] == 1 and doc["status"] == "pass"
    assert [r["method"] for r in doc["results"]] == ["lr", "closed"]


def test_wrt_vanishing(capsys):
    code, doc = run_json(capsys, "wrt", "--manifold", "E7", "--N", "7")
    assert code == 0 and doc["results"][0]["vanishing"] is True
    code, doc = run_json(capsys, "wrt", "--manifold", "DK", "--K", "4", "--N", "5")
    assert code == 0 and doc["results"][0]["vanishing"] is True
    code, doc = run_json(capsys, "wrt", "--manifold", "E6", "--N", "5")
    assert doc["results"][0]["vanishing"] is False


def test_level_alias(capsys):
    _, a = run_json(capsys, "wrt", "--manifold", "E6", "--level", "4")
    _, b = run_json(capsys, "wrt", "--manifold", "E6", "--N", "6")
    assert a == b and a["results"][0]["N"] == 6


def test_tolerance_breach_exits_1(capsys, monkeypatch):
    real = cli.wc.compute

    def skewed(m, N, method, prec, jobs):
        r = real(m, N, method, prec, jobs)
        if method == "closed":
            r.tau = r.tau * (1 + mpmath.mpf("1e-20"))
        return r

    monkeypatch.setattr(cli.wc, "compute", skewed)
    code, doc = run_json(capsys, "wrt", "--manifold", "E6", "--N", "7", "--method", "both")
    assert code == 1 and doc["status"] == "fail"


@pytest.mark.parametrize(
    "argv",
    [
        ["wrt", "--manifold", "E6", "--N", "2"],
        ["wrt", "--manifold", "E9", "--N", "5"],
        ["wrt", "--manifold", "E6"],
        ["--prec", "32", "wrt", "--manifold", "E6", "--N", "5"],
        ["--tol", "2", "wrt", "--manifold", "E6", "--N", "5"],
        ["nosuch"],
        ["eichler", "--P", "3", "--a", "3", "--N", "2", "--integer"],
        ["qseries"],
        ["polyhedral", "--family", "dodeca"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_env_precision(capsys, monkeypatch):
    monkeypatch.setenv("QIW_PREC", "96")
    _, doc = run_json(capsys, "wrt", "--manifold", "E6", "--N", "5")
    assert doc["precision_bits"] == 96
    _, doc = run_json(capsys, "--prec", "128", "wrt", "--manifold", "E6", "--N", "5")
    assert doc["precision_bits"] == 128


def test_json_is_deterministic_across_jobs(capsys):
    _, a, _ = run(capsys, "--json", "wrt", "--manifold", "E8", "--N", "25", "--method", "lr")
    _, b, _ = run(capsys, "--json", "--jobs", "3", "wrt", "--manifold", "E8", "--N", "25", "--method", "lr")
    assert a == b


def test_eichler(capsys):
    code, doc = run_json(capsys, "eichler", "--P", "3", "--a", "1", "--N", "4", "--radial")
    assert code == 0
    assert float(doc["results"][0]["radial_diff"]) < 1e-4
    code, doc = run_json(capsys, "eichler", "--P", "2", "--a", "1", "--N", "0", "--integer")
    assert doc["results"][0]["value_re"].startswith("0.5")


def test_qseries_dump(capsys):
    code, out, _ = run(capsys, "qseries", "--series", "eta", "--qorder", "3", "--dump")
    assert code == 0
    assert out.splitlines() == ["1/24\t1\t1", "25/24\t-1\t1", "49/24\t-1\t1"]
    code, out, _ = run(capsys, "qseries", "--label", "E8", "--qorder", "2", "--dump")
    assert out.splitlines()[0] == "# component 0"
    assert out.splitlines()[1] == "-7/60\t1\t1"


def test_qseries_json(capsys):
    code, doc = run_json(capsys, "--order", "2", "qseries", "--series", "psi:6:3")
    assert doc["results"][0] == {"component": 0, "exponent": "3/8", "coefficient": "3", "surd": "1"}


def test_polyhedral_icosa(capsys):
    code, doc = run_json(capsys, "--order", "24", "polyhedral", "--family", "icosa")
    assert code == 0
    for r in doc["results"]:
        assert {"family", "relation", "status", "checked_order"} <= set(r)
        assert r["status"] == "pass"


def test_polyhedral_klein_reports_known_deviation(capsys):
    code, doc = run_json(capsys, "--order", "20", "polyhedral", "--family", "klein")
    assert code == 0
    lit = [r for r in doc["results"] if r["relation"] == "algebraic_237_phi237"]
    assert lit and lit[0]["status"] == "fail" and lit[0]["known_deviation"]


def test_asym(capsys):
    code, doc = run_json(capsys, "asym", "--manifold", "E6", "--N", "50", "--kmax", "8")
    assert code == 0 and float(doc["results"][0]["rel_error"]) < 1e-3


def test_flatconn(capsys):
    code, doc = run_json(capsys, "flatconn", "--manifold", "E7")
    assert sorted(r["CS"] for r in doc["results"]) == ["-1/48", "-25/48"]
    code, doc = run_json(capsys, "flatconn", "--manifold", "E7", "--raw")
    assert len(doc["results"]) == 1 * 2 * 3


def test_sweep_kashaev_column(capsys):
    code, out, _ = run(capsys, "--format", "csv", "--prec", "128", "sweep", "--manifold", "D5", "--Nmax", "30", "--modulus", "4", "--residue", "2", "--emit", "partition")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [int(r["N"]) for r in rows] == [6, 10, 14, 18, 22, 26, 30]
    assert all(float(r["kashaev_residual"]) < 1e-30 for r in rows)
    assert "prediction_re" in rows[0] and "rel_dev" in rows[0]


def test_sweep_default_emit_is_closed(capsys):
    code, out, _ = run(capsys, "--format", "csv", "sweep", "--manifold", "E8", "--Nmin", "10", "--Nmax", "30", "--step", "10")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert set(rows[0]) == {"manifold", "N", "tau_re", "tau_im"}


def test_sweep_e8_rel_dev_trends_down(capsys):
    _, doc = run_json(capsys, "--prec", "128", "sweep", "--manifold", "E8", "--Nmin", "10", "--Nmax", "200", "--step", "10", "--emit", "partition")
    devs = [float(r["rel_dev"]) for r in doc["results"] if r["rel_dev"] is not None]
    assert sum(devs[-5:]) < sum(devs[:5])


def test_sweep_parallel_identical(capsys):
    argv = ["--json", "--prec", "128", "sweep", "--manifold", "E6", "--Nmax", "20", "--emit", "partition"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, "--jobs", "2", *argv)
    assert a == b


@pytest.mark.parametrize("suite", ["numth", "poly"])
def test_verify_suites_pass(capsys, suite):
    code, doc = run_json(capsys, "verify", "--suite", suite)
    assert code == 0 and doc["status"] == "pass" and doc["failed"] == 0


def test_verify_wrt(capsys):
    code, doc = run_json(capsys, "verify", "--suite", "wrt", "--Nmax", "12")
    assert code == 0
    known = [r for r in doc["results"] if r.get("known_deviation")]
    assert known and all(r["status"] == "fail" for r in known)


def test_verify_failure_exits_1(capsys, monkeypatch):
    monkeypatch.setitem(verify.SUITES, "numth", lambda **_: [verify.Check("numth", "broken", False, "forced")])
    code, doc = run_json(capsys, "verify", "--suite", "numth")
    assert code == 1 and doc["first_failure"] == "numth: broken forced"


def test_console_script_module():
    p = subprocess.run([sys.executable, "-m", "qiw", "wrt", "--manifold", "E8", "--N", "3", "--json"], capture_output=True, text=True)
    assert p.returncode == 0
    assert json.loads(p.stdout)["results"][0]["manifold"] == "E8"
