import json
import re
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

import oracles
from rendezvous_k3.cli import main
from rendezvous_k3.game import uniform_distribution
from rendezvous_k3.relaxation import parse_sdpa, verify_feasible_bound
from rendezvous_k3.serialize import (
    parse_rat,
    rat,
    read_certificate,
    read_strategy,
    rle_decode,
    rle_encode,
    strategy_to_json,
)

GOLDEN = Path(__file__).parent / "golden"
RATIONAL = re.compile(r"^-?\d+/\d+$")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def all_exact_strings(node):
    if isinstance(node, dict):
        for v in node.values():
            yield from all_exact_strings(v)
    elif isinstance(node, list):
        for v in node:
            yield from all_exact_strings(v)
    elif isinstance(node, str):
        yield node


# -- certify ----------------------------------------------------------------------

def test_certify_k2(capsys):
    code, out, _ = run(capsys, "certify", "--k", "2")
    assert code == 0
    assert "bound 2/1" in out and out.strip().endswith("PASS")


def test_certify_json_schema(capsys):
    code, rep = run_json(capsys, "certify", "--k", "5")
    assert code == 0
    assert rep["schema"] == "rendezvous-k3/report" and rep["version"] == 1
    assert rep["exact"]["bound"] == "65/27"
    assert rep["verdict"]["status"] == "PASS"
    assert all(RATIONAL.match(s) for s in all_exact_strings(rep["exact"]))


@pytest.mark.slow
def test_certify_k15(capsys):
    code, rep = run_json(capsys, "certify", "--k", "15")
    assert code == 0 and rep["exact"]["bound"] == "16400/6561"


def test_certify_usage_and_cap(capsys, monkeypatch):
    assert run(capsys, "certify", "--k", "0")[0] == 2
    monkeypatch.setenv("RENDEZVOUS_MAX_K", "4")
    assert run(capsys, "certify", "--k", "5")[0] == 3
    monkeypatch.setenv("RENDEZVOUS_MAX_K", "many")
    assert run(capsys, "certify", "--k", "2")[0] == 2


def test_emitted_certificate_rechecks(capsys, tmp_path):
    path = tmp_path / "cert6.json"
    assert run(capsys, "certify", "--k", "6", "--emit-certificate", str(path))[0] == 0
    data = json.loads(path.read_text())
    assert data["schema"] == "rendezvous-k3/certificate"
    assert data["checks"]["spectrum"] and data["checks"]["domination"]
    # RLE keeps the file small
    assert len(data["x"]) < 3 ** 6
    k, x, bound = read_certificate(path)
    assert k == 6 and verify_feasible_bound(k, x) == bound == Fraction(22, 9)


# -- evaluate -------------------------------------------------------------------------

def test_evaluate_aw_k4(capsys):
    code, rep = run_json(capsys, "evaluate", "--k", "4", "--strategy", "aw")
    assert code == 0
    assert rep["exact"]["value"] == "7/3"
    assert rep["exact"]["tail"][-1] == "1/9"


def test_evaluate_uniform_k2(capsys):
    code, rep = run_json(capsys, "evaluate", "--k", "2", "--strategy", "uniform")
    assert code == 0
    expect = oracles.meeting_time_by_enumeration(2, uniform_distribution(2).tolist())
    assert rep["exact"]["value"] == rat(expect) == "19/9"


def test_evaluate_epsilon_golden(capsys):
    code, rep = run_json(capsys, "evaluate", "--k", "2", "--strategy", "aw", "--epsilon", "1/4")
    golden = json.loads((GOLDEN / "evaluate_k2_aw_eps1_4.json").read_text())
    assert code == 0
    assert rep["inputs"] == golden["inputs"] and rep["exact"] == golden["exact"]


def test_evaluate_stay(capsys):
    code, rep = run_json(capsys, "evaluate", "--k", "2", "--stay", "1")
    assert code == 0 and rep["exact"]["value"] == "3/1"


def test_evaluate_strategy_file(capsys, tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps(strategy_to_json(uniform_distribution(2))))
    code, rep = run_json(capsys, "evaluate", "--k", "2", "--strategy", str(path))
    assert code == 0 and rep["exact"]["value"] == "19/9"
    rle = tmp_path / "rle.json"
    rle.write_text(json.dumps({"k": 1, "p_rle": [["1/3", 3]]}))
    assert run_json(capsys, "evaluate", "--k", "1", "--strategy", str(rle))[1]["exact"]["value"] == "5/3"


@pytest.mark.parametrize("payload", [
    {"k": 1, "p": ["1/2", "1/2", "1/2"]},       # off the simplex
    {"k": 1, "p": ["0.5", "0.25", "0.25"]},     # decimals are rejected
    {"k": 1, "p": ["1/2", "1/2"]},              # wrong length
    {"k": 2, "p": ["1/3", "1/3", "1/3"]},       # level mismatch
    {"q": []},
])
def test_evaluate_bad_strategy_files(capsys, tmp_path, payload):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(payload))
    assert run(capsys, "evaluate", "--k", str(payload.get("k", 1)), "--strategy", str(path))[0] == 2


def test_evaluate_bad_epsilon(capsys):
    assert run(capsys, "evaluate", "--k", "2", "--epsilon", "1")[0] == 2


# -- lp --------------------------------------------------------------------------------

def test_lp_primal_k2(capsys):
    code, rep = run_json(capsys, "lp", "--k", "2")
    assert code == 0
    assert rep["exact"]["optimum"] == "18/1" and rep["exact"]["bound"] == "2/1"


def test_lp_dual_k2(capsys):
    code, rep = run_json(capsys, "lp", "--k", "2", "--dual")
    assert code == 0 and rep["exact"]["optimum"] == "2/1"
    code, rep = run_json(capsys, "lp", "--k", "2", "--dual", "--literal")
    assert rep["exact"]["optimum"] == "13/9" and not rep["verdict"]["matches_w_k"]


def test_lp_cap(capsys):
    assert run(capsys, "lp", "--k", "5")[0] == 3
    assert run(capsys, "lp", "--k", "4", "--export-sdpa", "x.dat-s")[0] == 3


def test_lp_export(capsys, tmp_path):
    out = tmp_path / "out.dat-s"
    code, text, _ = run(capsys, "lp", "--k", "3", "--export-sdpa", str(out))
    assert code == 0 and "parse-back OK" in text
    prob = parse_sdpa(out)
    assert prob.block_struct[0] == 27 and prob.m == 27 ** 2
    assert (tmp_path / "out.exact.json").exists()


# -- search ------------------------------------------------------------------------------

def test_search_k1(capsys):
    code, rep = run_json(capsys, "search", "--k", "1", "--restarts", "10", "--seed", "1")
    assert code == 0 and rep["exact"]["value"] == "2/3"


def test_search_deterministic(capsys):
    a = run(capsys, "search", "--k", "3", "--restarts", "8", "--seed", "5")[1]
    b = run(capsys, "--threads", "1", "search", "--k", "3", "--restarts", "8", "--seed", "5")[1]
    assert a == b


def test_search_usage(capsys):
    assert run(capsys, "search", "--k", "7")[0] == 2


# -- kn ------------------------------------------------------------------------------------

def test_kn_n3(capsys):
    code, rep = run_json(capsys, "kn", "--n", "3", "--optimize")
    assert code == 0
    assert rep["display_only"]["stay"] == pytest.approx(1 / 3, abs=1e-4)
    assert rep["display_only"]["expected_time"] == pytest.approx(2.5, abs=1e-4)


def test_kn_stay_one_never_meets(capsys):
    code, rep = run_json(capsys, "kn", "--n", "4", "--stay", "1")
    assert code == 0 and rep["verdict"]["status"] == "NO_MEETING"


def test_kn_usage(capsys):
    assert run(capsys, "kn", "--n", "7", "--optimize")[0] == 2
    with pytest.raises(SystemExit) as err:
        main(["kn", "--n", "7"])
    assert err.value.code == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "rendezvous_k3", "certify", "--k", "1"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "bound 5/3" in res.stdout


# -- serialization helpers -------------------------------------------------------------------

def test_rationals_and_rle():
    assert rat(2) == "2/1" and parse_rat("-3/6") == Fraction(-1, 2)
    with pytest.raises(ValueError):
        parse_rat("0.5")
    with pytest.raises(ValueError):
        parse_rat(0.5)
    values = [Fraction(1), Fraction(1), Fraction(1, 2), Fraction(1)]
    assert rle_encode(values) == [["1/1", 2], ["1/2", 1], ["1/1", 1]]
    assert rle_decode(rle_encode(values)) == values
    with pytest.raises(ValueError):
        rle_decode([["1/1", 0]])


def test_strategy_round_trip(tmp_path):
    p = uniform_distribution(2)
    path = tmp_path / "s.json"
    path.write_text(json.dumps(strategy_to_json(p)))
    assert read_strategy(path) == p
