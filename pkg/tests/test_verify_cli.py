import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from ellcot import verify
from ellcot.cli import berndt_table, run_cli
from ellcot.modular import S, T, CharMatrix, UnimodularMatrix
from ellcot.numeric import DomainError, PoleError, TruncationPolicy
from ellcot.quadratic import QuadraticNumber
from ellcot.thetakron import ModularParameter

KEYS = ["identity_id", "params", "lhs", "rhs", "abs_residual", "rel_residual", "tolerance", "pass",
        "terms_used", "elapsed_ms"]
R2 = QuadraticNumber.sqrt(2)
MP2 = ModularParameter(0.1 + 1.2j)


def test_report_schema_and_criterion():
    rep = verify.make_report("x", {"a": 1}, 2.0, 2.5, 0.3, "rel", 7, 0.0)
    d = rep.to_dict()
    assert list(d) == KEYS
    assert d["lhs"] == [2.0, 0.0] and d["rel_residual"] == pytest.approx(0.2)
    assert d["pass"] == 1 and d["params"]["criterion"] == "rel"
    assert verify.make_report("x", {}, 2.0, 2.5, 0.3, "abs", 0, 0.0).passed == 0
    assert verify.make_report("x", {}, 0.0, 1e-3, 1e-2, "either", 0, 0.0).passed == 1
    with pytest.raises(DomainError):
        verify.make_report("x", {}, 0, 0, 1, "bogus", 0, 0.0)


def test_report_denominator_floor():
    rep = verify.make_report("x", {}, 1e-5, 2e-5, 1.0, "rel", 0, 0.0)
    assert rep.rel_residual == pytest.approx(1e-5)


def test_transform_T_and_S(mp_i, M_generic):
    pol = TruncationPolicy(max_index=400)
    assert verify.check_transform(T, 4, R2, M_generic, mp_i, pol, tol=1e-10).passed == 1
    rep = verify.check_transform(S, 4, R2, M_generic, mp_i, pol)
    assert rep.passed == 1 and rep.tolerance == 1e-4
    with pytest.raises(DomainError):
        verify.check_transform(S, 4, R2, CharMatrix.of(0.2, 0.3, 1.0, 2.0), mp_i, pol)


def test_cocycle_examples(M_generic):
    rep = verify.check_cocycle(T, T, 3, 0.3 + 0.7j, M_generic, MP2)
    assert rep.passed == 1 and rep.abs_residual == 0
    assert verify.check_cocycle(T, S, 5, 0.3 + 0.7j, M_generic, MP2).passed == 1
    with pytest.raises(DomainError):
        verify.check_cocycle(S, T, 3, 0.3j, CharMatrix.of(1.0, 0.0, 0.5, 0.5), MP2)


def test_reciprocity_examples(M_generic):
    assert verify.check_reciprocity(UnimodularMatrix(1, 0, 1, 1), 3, Fraction(2, 3), M_generic, MP2).passed == 1
    # c = 0: both corrections vanish
    assert verify.check_reciprocity(T, 4, Fraction(2, 3), M_generic, MP2).passed == 1
    # j(V; r) < 0
    assert verify.check_reciprocity(UnimodularMatrix(-1, 1, -3, 2), 3, Fraction(1, 2), M_generic, MP2).passed == 1
    with pytest.raises(PoleError):
        verify.check_reciprocity(S, 3, Fraction(0), M_generic, MP2)


def test_hat_examples(M_generic):
    rep = verify.check_hat(S, 2, Fraction(1, 2), M_generic, 0.11 + 0.07j, -0.05 + 0.13j, MP2)
    assert rep.passed == 1
    assert float(rep.params["periodicity_residual"]) < 1e-12
    with pytest.raises(DomainError):
        verify.check_hat(S, 2, Fraction(-1, 2), M_generic, 0.11 + 0.07j, -0.05 + 0.13j, MP2)


def test_berndt_checks():
    assert verify.check_berndt(3, 5, TruncationPolicy(max_index=10 ** 5)).passed == 1
    assert verify.check_berndt(2, 2, TruncationPolicy(max_index=10 ** 6), tol=1e-3).passed == 1
    assert verify.check_berndt(2, 5, TruncationPolicy(max_index=10 ** 6), tol=1e-3, eps=1).passed == 0
    with pytest.raises(DomainError):
        verify.check_berndt(2, None, alpha=R2)


def test_degeneration_checks():
    pol = TruncationPolicy(max_index=400)
    assert verify.check_degeneration(5, R2, CharMatrix.of(0.0, 0.3, 0.0, 0.4), 8.0, pol).passed == 1
    assert verify.check_degeneration_edr(2, 2, Fraction(3), CharMatrix.of(0.25, 0.0, 0.4, 0.5)).passed == 1
    assert verify.check_degeneration_edr(1, 1, Fraction(1, 2), CharMatrix.of(0.3, 0.0, 0.45, 0.0)).passed == 1


def test_reports_deterministic(M_generic):
    a = verify.check_transform(S, 4, R2, M_generic, MP2, TruncationPolicy(max_index=100)).to_dict()
    b = verify.check_transform(S, 4, R2, M_generic, MP2, TruncationPolicy(max_index=100)).to_dict()
    a.pop("elapsed_ms"), b.pop("elapsed_ms")
    assert json.dumps(a) == json.dumps(b)


def test_suite_all_as_expected():
    reports, ok = verify.run_suite()
    assert ok
    assert any(r.expect == 0 for r in reports)
    assert all(r.passed == r.expect for r in reports)


def test_cli_berndt_example(tmp_path):
    out = tmp_path / "r.json"
    code = run_cli(["verify", "berndt", "--alpha", "1,1,5,2", "--l", "3", "--terms", "100000",
                    "--tol", "1e-8", "--out", str(out)], out=io.StringIO())
    assert code == 0
    d = json.loads(out.read_text())
    assert list(d) == KEYS and d["pass"] == 1


def test_cli_exit_codes(tmp_path):
    buf = io.StringIO()
    assert run_cli(["verify", "berndt", "--c", "5", "--l", "2", "--terms", "1000000", "--tol", "1e-3",
                    "--eps", "1"], out=buf) == 1
    assert "FAIL" in buf.getvalue()
    assert run_cli(["verify", "transform", "--charmat", "0.2,0.3,1,0"], out=buf) == 2
    assert run_cli(["verify", "transform", "--matrix", "1,1,1,3"], out=buf) == 2
    assert run_cli(["verify", "nothing"], out=buf) == 2
    assert run_cli(["verify", "berndt", "--l", "three"], out=buf) == 2
    assert run_cli(["verify", "reciprocity", "--r", "x/y"], out=buf) == 2


def test_cli_other_identities(tmp_path):
    buf = io.StringIO()
    assert run_cli(["verify", "cocycle", "--matrix", "1,1,0,1", "--matrix", "0,-1,1,0", "--l", "5"], out=buf) == 0
    assert run_cli(["verify", "reciprocity", "--matrix", "1,0,1,1", "--l", "3", "--r", "2/3"], out=buf) == 0
    assert run_cli(["verify", "hat", "--l", "2", "--r", "1/2"], out=buf) == 0
    assert run_cli(["verify", "degeneration", "--l", "5", "--charmat", "0,0.3,0,0.4", "--radius", "400"], out=buf) == 0
    assert run_cli(["verify", "degeneration", "--part", "ii", "--m", "2", "--n", "2", "--r", "3",
                    "--charmat", "0.25,0,0.4,0.5"], out=buf) == 0
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"max_index": 200}')
    assert run_cli(["verify", "transform", "--config", str(cfg), "--tau", "0,1"], out=buf) == 0


def test_cli_suite(tmp_path):
    out = tmp_path / "suite.json"
    buf = io.StringIO()
    assert run_cli(["verify", "suite", "--all", "--out", str(out)], out=buf) == 0
    data = json.loads(out.read_text())
    assert isinstance(data, list) and all(list(d) == KEYS for d in data)
    assert "negative control" in buf.getvalue()


def test_table_berndt_csv():
    buf = io.StringIO()
    assert run_cli(["table", "berndt", "--c", "2,3,5", "--l", "2,3,4", "--format", "csv"], out=buf) == 0
    rows = list(csv.DictReader(io.StringIO(buf.getvalue())))
    assert len(rows) == 9
    for row in rows:
        if row["l"] != "2":
            assert float(row["value"]) == pytest.approx(float(row["closed_form"]), rel=1e-12)
    buf = io.StringIO()
    assert run_cli(["table", "berndt", "--c", "5", "--l", "3", "--format", "json"], out=buf) == 0
    assert json.loads(buf.getvalue())[0]["s"] == 5
    assert berndt_table([5], [3], TruncationPolicy(max_index=10))[0]["terms"] == 10


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "ellcot", "verify", "berndt", "--c", "5", "--l", "3",
                          "--terms", "100000"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("PASS")
