import csv
import io
import json
import math
import subprocess
import sys

import pytest

from oracles import INF_MOD_ZETA3_AT_2, SIGMA_STAR
from realproj.cli import main, run_verify
from realproj.core import Tolerances
from realproj.specfile import corpus_path, load_spec, parse_spec, rset_from_json, rset_to_json, \
    sum_to_json
from realproj.rset import compute_rset


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write_spec(tmp_path, doc, name="spec.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def test_rset_three_term(capsys):
    code, out, _ = run(capsys, "rset", corpus_path("zeta3-primes"))
    assert code == 0
    doc = json.loads(out)
    assert doc["certified"] is True
    (iv,) = doc["intervals"]
    assert iv["lo"] == pytest.approx(-1.0, abs=1e-12)
    assert iv["hi"] == pytest.approx(SIGMA_STAR, abs=1e-9)
    # 1-based positions in ascending exponent order: 3^-s is first, 1 is last
    assert (iv["lo_attribution"], iv["hi_attribution"]) == (1, 3)


def test_rset_single_term(capsys):
    code, out, _ = run(capsys, "rset", corpus_path("single-term"))
    assert code == 0
    doc = json.loads(out)
    assert doc["intervals"] == [] and doc["a_f"] is None


def test_rset_contradictory_independence(tmp_path, capsys):
    doc = {"basis": [{"name": "ln2", "value": math.log(2)}], "independent": True,
           "terms": [{"coeff": {"re": 1, "im": 0}, "exponent": -math.log(2), "coords": ["-1"]},
                     {"coeff": {"re": 1, "im": 0}, "exponent": -math.log(4), "coords": ["-2"]},
                     {"coeff": {"re": 1, "im": 0}, "exponent": 0.0, "coords": ["0"]}],
           "strip": {"alpha": -1, "beta": 1}}
    code, out, err = run(capsys, "rset", write_spec(tmp_path, doc))
    assert code == 2 and out == "" and "independ" in err


@pytest.mark.parametrize("doc", [
    {"terms": "nope"},
    {"terms": [{"coeff": {"re": 0, "im": 0}, "exponent": 1}]},
    {"terms": [{"coeff": {"re": 1, "im": 0}, "exponent": 1, "coords": ["2/4"]}]},
    {"terms": [{"coeff": {"re": 1, "im": 0}, "exponent": 1}], "strip": {"alpha": 2, "beta": 1}},
])
def test_malformed_specs(tmp_path, capsys, doc):
    code, _, err = run(capsys, "rset", write_spec(tmp_path, doc))
    assert code == 2 and err


def test_missing_file(capsys):
    code, _, err = run(capsys, "rset", "/nonexistent/spec.json")
    assert code == 2 and "cannot read" in err


def test_strict_uncertified(capsys):
    code, out, _ = run(capsys, "rset", corpus_path("zeta4-dependent"), "--strict")
    assert code == 3
    assert json.loads(out)["certified"] is False
    code, _, _ = run(capsys, "rset", corpus_path("zeta4-dependent"))
    assert code == 0


def test_out_flag(tmp_path, capsys):
    target = tmp_path / "result.json"
    code, out, _ = run(capsys, "rset", corpus_path("zeta3-primes"), "--out", target)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["certified"] is True


def test_zeros_exp_minus_one(capsys):
    code, out, _ = run(capsys, "zeros", corpus_path("exp-minus-one"), "--box", -1, 1, -1, 7)
    assert code == 0
    zeros = json.loads(out)["zeros"]
    assert len(zeros) == 2
    assert zeros[1]["im"] == pytest.approx(2 * math.pi, abs=1e-12)
    assert set(zeros[0]) == {"re", "im", "multiplicity", "residual"}


def test_zeros_three_term(capsys):
    code, out, _ = run(capsys, "zeros", corpus_path("zeta3-primes"), "--box", -1.5, 1.5, 0, 60)
    assert code == 0 and json.loads(out)["zeros"]


def test_zeros_empty_box(capsys):
    code, _, err = run(capsys, "zeros", corpus_path("exp-minus-one"), "--box", -1, 1, 3, 3)
    assert code == 2 and "box" in err


def test_verify_three_term(capsys):
    code, out, _ = run(capsys, "verify", corpus_path("zeta3-primes"))
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "pass"
    assert {c["property"] for c in doc["checks"]} >= {
        "boundary-classification", "disjoint-gaps", "no-isolated-points", "soundness"}
    assert doc["crosscheck"]["zeros_found"] > 0


def test_verify_huge_margin_fails():
    spec = load_spec(corpus_path("zeta3-primes"))
    rep = run_verify(spec, Tolerances(cert_margin=1.0))
    assert "boundary-classification" in [c.name for c in rep.failures]


def test_verify_huge_margin_exit_code(capsys):
    code, out, err = run(capsys, "verify", corpus_path("zeta3-primes"), "--cert-margin", 1.0)
    assert code == 1 and "boundary-classification" in err
    assert json.loads(out)["status"] == "fail"


def test_verify_zero_free_strip(capsys):
    code, out, _ = run(capsys, "verify", corpus_path("zero-free-strip"))
    doc = json.loads(out)
    assert code == 0 and doc["message"] == "empty set certified"


def test_verify_bad_flags(capsys):
    code, _, _ = run(capsys, "verify", corpus_path("zeta3-primes"), "--tmax", -1)
    assert code == 2


def test_profile_three_term(capsys):
    code, out, _ = run(capsys, "profile", corpus_path("zeta3-primes"), "--sigma-grid", -2, 2, 5)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["sigma", "inf_modulus", "B_1", "B_2", "B_3"]
    body = {float(r[0]): [float(x) for x in r[1:]] for r in rows[1:]}
    assert len(body) == 5
    assert body[0.0][0] == 0.0
    assert body[2.0][0] == pytest.approx(INF_MOD_ZETA3_AT_2, abs=1e-15)
    assert body[-2.0][0] == pytest.approx(4.0, abs=1e-12)


@pytest.mark.parametrize("grid", [("1", "0", "3"), ("0", "1", "0"), ("0", "1", "2.5"), ("a", "1", "3"),
                                  ("0", "inf", "3")])
def test_profile_bad_grid(capsys, grid):
    code, _, _ = run(capsys, "profile", corpus_path("zeta3-primes"), "--sigma-grid", *grid)
    assert code == 2


def test_basis_report(capsys):
    code, out, _ = run(capsys, "basis", corpus_path("zeta4-dependent"))
    doc = json.loads(out)
    assert code == 0
    assert doc["independence"] == "dependent"
    assert doc["integral"] is False
    assert doc["matrix"][2] == ["1/2", "0"]
    assert doc["certificate"] == ["1", "0", "-2", "0"]


def test_basis_three_term(capsys):
    _, out, _ = run(capsys, "basis", corpus_path("zeta3-primes"))
    doc = json.loads(out)
    assert doc["independence"] == "verified" and doc["basis_indices"] == [1, 2]
    assert doc["matrix"][2] == ["0", "0"]


def test_basis_without_coords(tmp_path, capsys):
    doc = {"terms": [{"coeff": {"re": 1, "im": 0}, "exponent": 0.5}], "independent": True}
    _, out, _ = run(capsys, "basis", write_spec(tmp_path, doc))
    assert json.loads(out)["independence"] == "declared-only"


@pytest.mark.parametrize("argv", [
    ("rset", "zeta3-primes"),
    ("profile", "zeta3-primes", "--sigma-grid", "-1", "1", "7"),
    ("verify", "zeta4-dependent", "--tmax", "50"),
    ("zeros", "two-term", "--box", "-1", "1", "0", "30"),
])
def test_output_is_byte_identical(capsys, argv):
    cmd, name, *rest = argv
    outs = []
    for _ in range(2):
        main([cmd, str(corpus_path(name)), *rest])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1] and outs[0].endswith("\n")


def test_rset_json_round_trip():
    for name in ("zeta3-primes", "zeta4-dependent", "two-term", "zero-free-strip"):
        spec = load_spec(corpus_path(name))
        res = compute_rset(spec.sum, spec.strip)
        doc = rset_to_json(res)
        back = rset_from_json(json.loads(json.dumps(doc)))
        assert rset_to_json(back) == doc


def test_spec_round_trip():
    for name in ("zeta3-primes", "zero-free-strip", "exp-minus-one"):
        spec = load_spec(corpus_path(name))
        again = parse_spec(json.loads(json.dumps(sum_to_json(spec.sum, spec.strip))))
        assert again.sum == spec.sum and again.strip == spec.strip


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "realproj", "rset", str(corpus_path("two-term"))],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["intervals"][0]["lo"] == 0.0
