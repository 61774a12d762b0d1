import json
import subprocess
import sys
from fractions import Fraction

import pytest

from colorfan import fixtures
from colorfan.cli import main
from colorfan.errors import InputError
from colorfan.harness import run_suite, verify_a, verify_b
from colorfan.io import (
    divisor_from_json,
    divisor_to_json,
    ground_from_json,
    ranks_from_json,
    ranks_to_json,
    rational,
)
from colorfan.multimatroid import sum_h_rank

FIX = fixtures.path("")
B2 = fixtures.ground("b2")

SMALL_SUITE = {
    "structure": {"sizes": [[2, 2]]},
    "theorem_a": {"exhaustive": [[2, 2]], "sampled": [], "samples": 0},
    "theorem_b": {
        "methods": ["triangulation"],
        "instances": [{"sizes": [2, 2], "mode": "general", "count": 3}, {"sizes": [2, 2, 2], "mode": "general", "count": 1}],
    },
    "normal_complex": {"sizes": [[2, 2]], "count": 1},
}


def fx(name):
    return str(FIX / name)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out) if out else None


def test_describe_fan(capsys):
    code, out = run_json(capsys, "describe-fan", fx("b2.json"))
    assert code == 0
    assert out["cone_counts"] == [1, 8, 8] and out["unimodular"] and out["balanced"]


def test_convert_basis(capsys):
    code, out = run_json(capsys, "convert-basis", fx("b2.json"), fx("b2_sum_h.json"), "--to", "X")
    assert code == 0 and out["basis"] == "X"
    assert [c["coef"] for c in out["coefficients"]] == ["3"] * 4 + ["5"] * 4


def test_convert_basis_csv(capsys):
    code, out, _ = run(capsys, "convert-basis", fx("b2.json"), fx("b2_sum_h.json"), "--to", "X", "--csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "set,coef" and len(lines) == 9


def test_degree(capsys):
    code, out = run_json(capsys, "degree", fx("b2.json"), "--divisors", fx("b2_sum_h_squared.json"))
    assert code == 0 and out == {"degree": "68"}


def test_check_axioms_exit_codes(capsys):
    code, out = run_json(capsys, "check-axioms", fx("b2.json"), fx("b2_multimatroid.json"))
    assert code == 0 and out["pass"]
    code, out = run_json(capsys, "check-axioms", fx("b2.json"), fx("b2_real_multimatroid.json"))
    assert code == 1
    assert out["R"]["R3"]["pass"] and not out["multimatroid"]["BR2"]["pass"]
    assert out["multimatroid"]["BR2"]["witness"] == [[], ["1"]]


def test_cubicality(capsys):
    code, out = run_json(capsys, "cubicality", fx("b2.json"), fx("b2_multimatroid.json"))
    assert code == 0
    assert out == {"kind": "pseudo_cubical", "chain": [["1"], ["1", "2"]], "witness": "2·1 = 0+2"}


def test_ipc_volume(capsys):
    code, out = run_json(capsys, "ipc-volume", fx("b2.json"), fx("b2_real_multimatroid.json"), "--method", "both")
    assert code == 0 and out == {"triangulation": "124", "transversal": "124", "volume": "124"}


def test_normal_complex_and_svg(capsys, tmp_path):
    svg = tmp_path / "pieces.svg"
    code, out = run_json(
        capsys, "normal-complex", fx("singletons.json"), fx("singletons_ranks.json"), "--chain", "1;1,2", "--emit-svg", str(svg)
    )
    assert code == 0
    assert not out["pseudo_cubical"] and not out["pieces_equal_global"]
    assert out["pieces"][0]["vertices"] == [["0", "0"], ["3/2", "3/2"], ["2", "0"], ["2", "1"]]
    assert svg.read_text().startswith("<svg")


def test_normal_complex_bad_chain(capsys):
    code, _, err = run(capsys, "normal-complex", fx("b2.json"), fx("b2_multimatroid.json"), "--chain", "1;1bar")
    assert code == 2 and "colorfan:" in err


def test_verify_a(capsys):
    code, out = run_json(capsys, "verify-a", fx("b2.json"), "--sets", fx("b2_sets.json"))
    assert code == 0 and out["lhs"] == out["rhs"] == "2" and out["equal"]


def test_verify_b(capsys):
    code, out = run_json(capsys, "verify-b", fx("b2.json"), fx("b2_real_multimatroid.json"), "--seed", "7")
    assert code == 0 and out["lhs"] == out["rhs"] == out["third"] == "124" and out["seed"] == 7


def test_random_is_seeded(capsys):
    _, first = run_json(capsys, "random", fx("b2.json"), "--seed", "3")
    _, again = run_json(capsys, "random", fx("b2.json"), "--seed", "3")
    assert first == again
    code, _, err = run(capsys, "random", fx("b2.json"), "--budget", "0")
    assert code == 2 and "attempts" in err


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "describe-fan", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "describe-fan", str(bad))[0] == 2
    bad.write_text(json.dumps({"blocks": [["1", "1"]]}))
    assert run(capsys, "describe-fan", str(bad))[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["degree"])
    assert exc.value.code == 2


def test_run_suite_corrupted(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(SMALL_SUITE))
    code, out = run_json(capsys, "run-suite", "--config", str(cfg))
    assert code == 0 and out["passed"]
    code, out = run_json(capsys, "run-suite", "--config", str(cfg), "--corrupt-fan")
    assert code == 1
    (failure,) = out["suites"]["structure"]["failures"]
    assert "not unimodular" in failure["detail"]


def test_run_suite_rejects_unknown_keys(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"sizes": [2]}))
    assert run(capsys, "run-suite", "--config", str(cfg))[0] == 2


def test_internal_consistency_exit_code(capsys, monkeypatch):
    from colorfan import cli
    from colorfan.errors import InternalConsistencyError

    def broken(fan):
        raise InternalConsistencyError("cycle unbalanced")

    monkeypatch.setattr(cli, "describe", broken)
    code, _, err = run(capsys, "describe-fan", fx("b2.json"))
    assert code == 3 and "internal consistency" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "colorfan", "degree", fx("b2.json"), "--divisors", fx("b2_sum_h_squared.json")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout) == {"degree": "68"}


def test_io_roundtrips():
    rk = sum_h_rank(B2)
    assert ranks_from_json(B2, ranks_to_json(rk)) == rk
    d = fixtures.divisor("b2_sum_h")
    assert divisor_from_json(B2, divisor_to_json(d)) == d
    assert rational("3/4") == Fraction(3, 4) and rational(2) == 2
    for bad in (1.5, True, "x", "1/0", None):
        with pytest.raises(InputError):
            rational(bad)
    with pytest.raises(InputError):
        ground_from_json({"blocks": "12"})
    with pytest.raises(InputError):
        ranks_from_json(B2, {"ranks": [{"set": ["1"], "rank": "1"}, {"set": ["1"], "rank": "2"}]})


def test_verification_reports():
    report = verify_a(B2, [B2.colored_set(["1", "2"]), B2.colored_set(["1bar", "2"])])
    assert report.equal and report.lhs == 2
    report = verify_b(B2, sum_h_rank(B2), ("triangulation", "transversal"))
    assert report.lhs == report.rhs == report.third == 68
    assert "elapsed" not in report.to_json(timing=False)
    with pytest.raises(InputError):
        verify_b(B2, sum_h_rank(B2), ("monte-carlo",))


def test_suite_replay_is_identical():
    first = json.dumps(run_suite(SMALL_SUITE | {"seed": 5}), sort_keys=True)
    assert json.dumps(run_suite(SMALL_SUITE | {"seed": 5}), sort_keys=True) == first


def test_suite_does_not_depend_on_worker_count(monkeypatch):
    monkeypatch.setenv("COLORFAN_THREADS", "1")
    serial = run_suite(SMALL_SUITE)
    monkeypatch.setenv("COLORFAN_THREADS", "2")
    assert run_suite(SMALL_SUITE) == serial


def test_default_suite_passes():
    summary = run_suite()
    assert summary["passed"], summary["suites"]
    assert summary["suites"]["theorem_b"]["non_pseudo_cubical"] > 0
