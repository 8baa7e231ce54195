import io
import json
import subprocess
import sys

import pytest

jsonschema = pytest.importorskip("jsonschema")

from abelsurf.cli import run, schema_path


def _run(argv):
    buf = io.StringIO()
    code = run(argv, out=buf)
    return code, buf.getvalue()


def _json(argv):
    code, out = _run(argv + ["--json"])
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    return code, report


SCHEMA = json.loads(schema_path().read_text())


def test_schema_is_valid():
    jsonschema.Draft202012Validator.check_schema(SCHEMA)


def test_ring_verify_example():
    code, rep = _json(["ring", "verify", "--field", "fp:31", "--alpha", "0,1,1,0", "--beta", "0,1,1,0"])
    assert code == 0 and rep["status"] == "ok"
    assert all(c["ok"] for c in rep["checks"].values())
    assert {"moduli_equation", "homogeneity", "equivariance_sigma", "equivariance_iota",
            "equivariance_tau"} <= set(rep["checks"])


def test_ring_verify_witness_over_q():
    code, rep = _json(["ring", "verify", "--field", "q", "--alpha", "1,0,0,0", "--beta", "0,0,0,1"])
    assert code == 1
    assert rep["witness"] == "moduli equation residual 1/3"


def test_ring_verify_witness_over_fp():
    code, rep = _json(["ring", "verify", "--alpha", "1,0,0,0", "--beta", "0,0,0,1"])
    assert code == 1 and rep["witness"] == "moduli equation residual -10"     # 1/3 mod 31


def test_ring_build_text_is_one_generator_per_line():
    code, out = _run(["ring", "build", "--alpha", "0,1,1,0", "--beta", "0,1,1,0"])
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 9 and all("x" in l for l in lines)


def test_ring_build_rational_input():
    code, rep = _json(["ring", "build", "--field", "q", "--alpha", "0,1/2,1/2,0", "--beta", "0,1,1,0",
                       "--chart", "u0"])
    assert code == 0 and rep["ideal"]["chart"] == "u0"


def test_determinism():
    argv = ["ring", "verify", "--seed", "7", "--samples", "2", "--json"]
    assert _run(argv) == _run(argv)
    a = _run(["fiber", "--seed", "3", "--json"])[1]
    b = _run(["fiber", "--seed", "3", "--json"])[1]
    c = _run(["fiber", "--seed", "4", "--json"])[1]
    assert a == b and a != c


def test_fiber_report():
    code, rep = _json(["fiber", "--alpha", "0,1,1,0", "--beta", "0,1,1,0", "--point", "1,2,3"])
    assert code == 0
    assert rep["fiber"]["dimension"] == 6 and rep["fiber"]["associative"]


def test_fiber_point_off_chart():
    code, rep = _json(["fiber", "--point", "1,2,0"])
    assert code == 2 and rep["status"] == "error"


def test_classify_twists_table():
    code, rep = _json(["classify", "twists", "--field", "fp:31"])
    assert code == 0
    rows = {(r["m"], r["n"]): r for r in rep["classification"]}
    assert len(rows) == 9
    assert rows[(0, 1)]["label"] in ("C0=gamma*C3, C1=C2=0", "C0=C2=C3=0", "C0=C1=C3=0")
    for k in range(3):
        assert rows[(k, k)]["case"] == "common"


def test_classify_needs_omega():
    code, _ = _run(["classify", "twists", "--field", "fp:29"])
    assert code == 2


def test_moduli_commands():
    code, rep = _json(["moduli", "invariants", "--field", "q", "--alpha", "1,2,2,5", "--beta", "0,1,1,0"])
    assert code == 0 and rep["moduli"]["invariants"] == ["0", "-112", "-384"]
    code, rep = _json(["moduli", "equivalent", "--field", "q", "--alpha", "1,2,2,5", "--beta", "0,1,1,0",
                       "--other-alpha=-1,1,1,4", "--other-beta", "0,1,1,0"])
    assert code == 0 and rep["moduli"]["equivalent"]
    code, rep = _json(["moduli", "equivalent", "--field", "q", "--alpha", "1,2,2,5", "--beta", "0,1,1,0",
                       "--other-alpha", "1,2,2,6", "--other-beta", "0,1,1,0"])
    assert code == 1 and not rep["moduli"]["equivalent"]


def test_moduli_normalize_over_fp():
    code, rep = _json(["moduli", "normalize", "--field", "fp:31", "--alpha", "0,1,1,0", "--beta", "0,1,1,0"])
    assert code == 0 and rep["moduli"]["normalized"]["beta"] == ["0", "1", "1", "0"]
    code, rep = _json(["moduli", "normalize", "--field", "q", "--alpha", "0,1,1,0", "--beta", "1,0,0,1"])
    assert code == 2


def test_branch_scan():
    code, rep = _json(["branch", "scan", "--field", "fp:109", "--lam", "2", "--line", "1,4,2;5,1,3"])
    assert code == 0
    line = rep["branch"]["lines"][0]
    assert line["cube_divides"] and line["chart_power"] == 6 and line["degree"] == 24


def test_branch_scan_random_lines_with_jobs():
    a = _json(["branch", "scan", "--field", "fp:109", "--lam", "2", "--samples", "1", "--seed", "5"])
    b = _json(["branch", "scan", "--field", "fp:109", "--lam", "2", "--samples", "1", "--seed", "5",
               "--jobs", "2"])
    assert a == b and a[0] == 0


def test_branch_scan_needs_prime_field():
    assert _run(["branch", "scan", "--field", "q", "--lam", "2"])[0] == 2
    assert _run(["branch", "scan", "--field", "fp:31", "--lam", "2"])[0] == 2


def test_irregular_build(tmp_path):
    code, rep = _json(["irregular", "build", "--seed", "2"])
    assert code == 0 and rep["ideal"]["weights"] == {"x": 1, "y": 2, "z": 3}
    code, rep = _json(["irregular", "build", "--c", "c10=x1^2", "--c", "c31=x0^4"])
    assert code == 0
    code, rep = _json(["irregular", "build", "--c", "c10=x1^2", "--c", "c33=x0^4"])
    assert code == 1 and rep["witness"].startswith("relation residual")
    f = tmp_path / "c.json"
    f.write_text(json.dumps({"c10": "x2^2", "c13": "x0^2"}))
    assert _json(["irregular", "build", "--ctable", str(f)])[0] == 0
    assert _run(["irregular", "build", "--c", "c20=x0^2"])[0] == 2
    assert _run(["irregular", "build", "--c", "c10=x0"])[0] == 2


@pytest.mark.parametrize("argv", [
    ["ring", "build", "--field", "fp:4"],
    ["ring", "build", "--alpha", "1,2,3"],
    ["ring", "build", "--alpha", "1,2,3,4"],
    ["ring", "build", "--field", "fp:31", "--alpha", "1/31,0,0,0", "--beta", "0,0,0,0"],
    ["ring", "verify", "--jobs", "0"],
])
def test_invalid_input_exit_2(argv):
    code, rep = _json(argv)
    assert code == 2 and rep["status"] == "error"


def test_unknown_flag_exit_2():
    with pytest.raises(SystemExit) as exc:
        run(["ring", "build", "--bogus"], out=io.StringIO())
    assert exc.value.code == 2


def test_selftest_subset():
    code, rep = _json(["selftest", "--only", "1,10"])
    assert code == 0 and [r["number"] for r in rep["selftest"]] == [1, 10]


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "abelsurf.cli", "classify", "twists"],
                         capture_output=True, text=True, check=True).stdout
    assert len(out.strip().splitlines()) == 9
