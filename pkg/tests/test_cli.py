"""Front-end behavior: outputs, exit codes, config, and the cache."""

from __future__ import annotations

import json
import shutil
import subprocess

import pytest

from refcalc.cli import run
from refcalc.oracle import proof_from_json, replay_proof
from refcalc.rc import parse_formula


def call(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out.rstrip("\n"), captured.err.rstrip("\n")


# --- decisions -----------------------------------------------------------------


def test_prove_true(capsys):
    code, out, err = call(capsys, "rc", "prove", "<1>T", "<0>T")
    assert (code, out, err) == (0, "true", "")


def test_prove_false_exits_one(capsys):
    code, out, _ = call(capsys, "rc", "prove", "<0>T", "<1>T")
    assert (code, out) == (1, "false")


def test_prove_certify_attaches_replayable_proof(capsys):
    code, out, _ = call(capsys, "--json", "rc", "prove", "<1>T", "<0>T", "--certify")
    assert code == 0
    payload = json.loads(out)
    assert payload["derivable"] is True
    proof = proof_from_json(payload["certificate"])
    assert replay_proof(proof)
    assert proof.lhs == parse_formula("<1>T")


def test_prove_certify_attaches_countermodel(capsys):
    code, out, _ = call(capsys, "--json", "rc", "prove", "<0>T", "<1>T", "--certify")
    assert code == 1
    payload = json.loads(out)
    assert payload["derivable"] is False
    assert payload["certificate"]["witness"] == 0
    assert payload["certificate"]["worlds"]


# --- worms and ordinals -----------------------------------------------------------


def test_worm_ord(capsys):
    assert call(capsys, "worm", "ord", "[0,1]")[:2] == (0, "w + 1")


def test_worm_compare(capsys):
    assert call(capsys, "worm", "compare", "[1]", "[2]")[1] == "LT"
    assert call(capsys, "worm", "compare", "[1,0]", "[1]")[1] == "EQ"


def test_ord_subcommands(capsys):
    assert call(capsys, "ord", "compare", "w", "w + 1")[1] == "LT"
    assert call(capsys, "ord", "add", "1", "w")[1] == "w"
    assert call(capsys, "ord", "omega", "w")[1] == "w^(w)"
    assert call(capsys, "ord", "eps", "0")[1] == "e(0)"
    assert call(capsys, "ord", "tower", "2", "1")[1] == "w^(w)"


# --- theory subcommands -------------------------------------------------------------


def test_theory_wo_prints_value_and_one_step_trace(capsys):
    code, out, _ = call(capsys, "theory", "wo", "R[Pi11, 1](ACA0)")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "e(1)"
    assert len(lines) == 2 and lines[1].lstrip().startswith("W1")


def test_theory_reduce_json(capsys):
    code, out, _ = call(
        capsys, "--json", "theory", "reduce", "ISigma1", "--target", "Pi1"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["result"] == "R[Pi1, w^(w)](EA+)"
    assert [s["rule"] for s in payload["trace"]] == ["B1", "S1"]
    assert all(s["citation"] for s in payload["trace"])


def test_theory_rank(capsys):
    code, out, _ = call(capsys, "theory", "rank", "R[Pi11, w](ACA0)")
    assert code == 0 and out.splitlines()[0] == "w"


def test_theory_interp(capsys):
    code, out, _ = call(capsys, "theory", "interp", "[1,0]")
    assert code == 0
    assert out == "ACA0 + RFN[Pi12](ACA0 + RFN[Pi11](ACA0))"


# --- error mapping ---------------------------------------------------------------


def test_parse_error_exits_two(capsys):
    code, _, err = call(capsys, "rc", "prove", "<1>>T", "<0>T")
    assert code == 2
    assert json.loads(err)["error"] == "parse_error"


def test_sort_error_exits_two(capsys):
    code, _, err = call(capsys, "theory", "reduce", "R[Pi11, 1](EA)", "--target", "Pi1")
    assert code == 2
    assert json.loads(err)["error"] == "sort_error"


def test_no_rule_exits_three_with_partial(capsys):
    code, out, err = call(capsys, "theory", "reduce", "PA", "--target", "Pi1")
    assert code == 3
    assert "stuck at PA" in out
    assert json.loads(err)["error"] == "no_rule_applies"


def test_unsupported_exits_three(capsys):
    code, _, err = call(
        capsys, "theory", "interp", "[2]", "--flavor", "RCA0_PI11PI03"
    )
    assert code == 3
    assert json.loads(err)["error"] == "unsupported"


def test_bad_budget_exits_two(capsys):
    code, _, err = call(capsys, "--max-worlds", "0", "rc", "prove", "T", "T")
    assert code == 2
    assert json.loads(err)["error"] == "invalid_value"


# --- config file and cache ------------------------------------------------------------


def test_config_file_sets_json_mode(capsys, tmp_path):
    cfg = tmp_path / "refcalc.cfg"
    cfg.write_text("json = true  # machine output\n")
    code, out, _ = call(capsys, "--config", str(cfg), "worm", "ord", "[1]")
    assert code == 0
    assert json.loads(out)["ordinal"] == "w"


def test_flags_override_config(capsys, tmp_path):
    cfg = tmp_path / "refcalc.cfg"
    cfg.write_text("proof_depth = 0\n")
    code, _, err = call(capsys, "--config", str(cfg), "rc", "prove", "T", "T")
    assert code == 2  # the config value is invalid, proving it was read
    code, out, _ = call(
        capsys, "--config", str(cfg), "--proof-depth", "6", "rc", "prove", "T", "T"
    )
    assert (code, out) == (0, "true")


def test_unknown_config_key_is_rejected(capsys, tmp_path):
    cfg = tmp_path / "refcalc.cfg"
    cfg.write_text("depth = 3\n")
    code, _, err = call(capsys, "--config", str(cfg), "worm", "ord", "[]")
    assert code == 2
    assert json.loads(err)["error"] == "parse_error"


def test_sequent_cache_round_trip(capsys, tmp_path):
    path = tmp_path / "sequents.json"
    code, out, _ = call(capsys, "--cache", str(path), "rc", "prove", "<1>T", "<0>T")
    assert (code, out) == (0, "true")
    blob = json.loads(path.read_text())
    assert blob["procedure"]
    assert blob["sequents"] == {"<1>T |- <0>T": True}
    # second run answers from the file
    code, out, _ = call(
        capsys, "--json", "--cache", str(path), "rc", "prove", "<1>T", "<0>T"
    )
    assert code == 0
    assert json.loads(out).get("cached") is True


def test_stale_cache_tag_is_discarded(capsys, tmp_path):
    path = tmp_path / "sequents.json"
    path.write_text(
        json.dumps({"procedure": "oracle-0", "sequents": {"<1>T |- <0>T": False}})
    )
    code, out, _ = call(capsys, "--cache", str(path), "rc", "prove", "<1>T", "<0>T")
    assert (code, out) == (0, "true")  # the stale wrong answer was not trusted
    assert json.loads(path.read_text())["procedure"] != "oracle-0"


# --- the check runner ---------------------------------------------------------------


def test_check_single_suite(capsys):
    code, out, _ = call(capsys, "check", "--suite", "schmerl")
    assert code == 0
    assert "schmerl" in out and "PASS" in out


def test_check_json_with_small_bounds(capsys):
    code, out, _ = call(
        capsys,
        "--json",
        "--size",
        "2",
        "--max-letter",
        "1",
        "--max-len",
        "2",
        "check",
        "--suite",
        "iso",
    )
    assert code == 0
    rows = json.loads(out)
    assert rows[0]["suite"] == "iso" and rows[0]["passed"] is True


def test_check_unknown_suite_rejected(capsys):
    code = run(["check", "--suite", "nonsense"])
    capsys.readouterr()
    assert code == 2  # argparse usage error


@pytest.mark.skipif(shutil.which("refcalc") is None, reason="script not installed")
def test_console_script():
    done = subprocess.run(
        ["refcalc", "worm", "ord", "[0,1]"], capture_output=True, text=True
    )
    assert done.returncode == 0
    assert done.stdout.strip() == "w + 1"
