import json
from pathlib import Path

import jsonschema
import pytest

from jkit.cli import collect, main, to_json
from jkit.dsl import parse_file

ROOT = Path(__file__).resolve().parent.parent
FIX = ROOT / "fixtures"
SCHEMA = json.loads((ROOT / "src" / "jkit" / "data" / "report.schema.json").read_text())

SMALL = """\
manifold R3 dim 3 coords x y z;
let L : mv2 = d(1)^d(2) + z*d(0)^d(2);
let E : mv1 = d(0);
let w : form2 = 0;
structure C = twisted_jacobi(L, E, w);
let L2 : mv2 = z*d(0)^d(1) + x*d(1)^d(2) + y*d(2)^d(0);
structure P = twisted_jacobi(L2, 0, 0);
check twisted-jacobi C;
check twisted-jacobi P;
subbundle G = graph_sharp(C);
check closure G;
check lift G;
"""


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_exit_codes(capsys):
    code, out, _ = run(capsys, "check", FIX / "example3.jk")
    assert code == 0 and out.startswith("PASS twisted-jacobi TJ")
    code, out, _ = run(capsys, "check", FIX / "negative.jk")
    assert code == 1 and "2*d0^d1^d3" in out


def test_json_matches_schema(capsys):
    for name in ("example3.jk", "negative.jk"):
        _, out, _ = run(capsys, "check", "--json", FIX / name)
        doc = json.loads(out)
        jsonschema.validate(doc, SCHEMA)
        assert all(c["ms"] == 0 for c in doc["checks"])


def test_timing_is_opt_in(capsys):
    _, out, _ = run(capsys, "check", "--json", "--timing", FIX / "example3.jk")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["checks"][0]["ms"] >= 0


def test_parallel_is_deterministic(tmp_path, capsys):
    f = tmp_path / "small.jk"
    f.write_text(SMALL)
    serial = collect(SMALL)
    assert len(serial) == 5  # lift without a variant runs both
    assert to_json(collect(SMALL, parallel=True)) == to_json(serial)
    code, a, _ = run(capsys, "check", "--json", f)
    _, b, _ = run(capsys, "check", "--json", "--parallel", f)
    assert a == b and code == 0


def test_max_test_degree(capsys):
    code, _, err = run(capsys, "check", "--max-test-degree", "-1", FIX / "example3.jk")
    assert code == 2 and "non-negative" in err
    assert run(capsys, "check", "--max-test-degree", "0", FIX / "example3.jk")[0] == 0


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", FIX / "example3.jk", "--expr", "wedge(E, L)")
    assert (code, out) == (0, "d0^d1^d3 + d0^d2^d4\n")


def test_parse_error_to_stderr(tmp_path, capsys):
    f = tmp_path / "bad.jk"
    f.write_text("manifold M dim 2 coords u v;\nlet L : mv2 = d(0)^dx(1);\n")
    code, out, err = run(capsys, "check", f)
    assert code == 2 and out == ""
    assert err.startswith(f"{f}:2:19: kind mismatch")


def test_missing_file(capsys):
    code, _, err = run(capsys, "check", "/nonexistent/x.jk")
    assert code == 2 and err.startswith("jkit:")


def test_poissonize_roundtrip(tmp_path, capsys):
    out = tmp_path / "p.jk"
    code, _, _ = run(capsys, "poissonize", FIX / "example3.jk", "--structure", "TJ", "--out", out)
    assert code == 0
    sf = parse_file(str(out))
    assert sf.chart.dim == 6 and sf.chart.tvar == 5
    assert [c.label for c in sf.checks] == ["homog-poisson TJ_P"]
    assert run(capsys, "check", out)[0] == 0


def test_poissonize_unknown_structure(tmp_path, capsys):
    code, _, err = run(capsys, "poissonize", FIX / "example3.jk", "--structure", "Q", "--out", tmp_path / "q.jk")
    assert code == 2 and "unbound name 'Q'" in err
    code, _, err = run(capsys, "poissonize", FIX / "example3.jk", "--structure", "L", "--out", tmp_path / "q.jk")
    assert code == 2 and "not a twisted Jacobi structure" in err


def test_packaged_data_matches_fixtures():
    for name in ("example3.jk", "negative.jk"):
        assert (ROOT / "src" / "jkit" / "data" / name).read_text() == (FIX / name).read_text()
    assert json.loads((ROOT / "docs" / "report.schema.json").read_text()) == SCHEMA


def test_usage_error():
    with pytest.raises(SystemExit):
        main(["check"])
