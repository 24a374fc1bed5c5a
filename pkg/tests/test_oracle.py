"""Certified sequent decisions: proof replay, countermodels, budgets."""

from __future__ import annotations

import pytest

from refcalc.oracle import (
    AX4,
    AX5,
    AX6,
    AX_ID,
    AX_PROJ,
    AX_TOP,
    CONJ_INTRO,
    CUT,
    DERIVABLE,
    MONO,
    NOT_DERIVABLE,
    CounterModel,
    OracleBudgets,
    Proof,
    check_countermodel,
    countermodel_bounded,
    countermodel_from_json,
    countermodel_to_json,
    decide_oracle,
    frame_conditions_hold,
    proof_from_json,
    proof_to_json,
    prove_bounded,
    replay_proof,
)
from refcalc.rc import TOP, conj, derives, dia, parse_formula
from refcalc.worms import as_formula, enumerate_worms

D0 = dia(0, TOP)
D1 = dia(1, TOP)
D2 = dia(2, TOP)


# --- replaying hand-built proofs ---------------------------------------------


def test_axioms_replay():
    assert replay_proof(Proof(D1, D1, AX_ID))
    assert replay_proof(Proof(D1, TOP, AX_TOP))
    assert replay_proof(Proof(conj([D0, D1]), D1, AX_PROJ))
    assert replay_proof(Proof(dia(0, dia(0, TOP)), D0, AX4))
    assert replay_proof(Proof(D2, D1, AX5))
    lhs = conj([dia(1, D0), dia(0, D2)])
    rhs = dia(1, conj([D0, dia(0, D2)]))
    assert replay_proof(Proof(lhs, rhs, AX6))


def test_rules_replay():
    five = Proof(D2, D1, AX5)
    assert replay_proof(Proof(dia(0, D2), dia(0, D1), MONO, (five,)))
    lower = Proof(D1, D0, AX5)
    cut = Proof(D2, D0, CUT, (Proof(D2, D1, AX5), lower))
    assert replay_proof(cut)
    both = Proof(D2, conj([D1, D0]), CONJ_INTRO, (Proof(D2, D1, AX5), Proof(D2, D0, AX5)))
    assert replay_proof(both)


def test_corrupted_proofs_are_rejected():
    assert not replay_proof(Proof(D0, D1, AX5))  # wrong direction
    assert not replay_proof(Proof(D1, D0, AX_ID))
    assert not replay_proof(Proof(conj([D0, D1]), D2, AX_PROJ))
    five = Proof(D2, D1, AX5)
    # monotonicity must wrap both sides in the same diamond
    assert not replay_proof(Proof(dia(0, D2), dia(1, D1), MONO, (five,)))
    # cut children must chain through a common middle formula
    assert not replay_proof(Proof(D2, D0, CUT, (five, Proof(D2, D0, AX5))))
    assert not replay_proof(Proof(D2, D0, "AX99"))


def test_proof_json_round_trip():
    p = prove_bounded(conj([D1, D0]), dia(1, D0))
    assert p is not None and replay_proof(p)
    blob = proof_to_json(p)
    assert blob["sequent"]["lhs"] == "<1>T & <0>T"
    assert proof_from_json(blob) == p


# --- countermodels ------------------------------------------------------------


def test_countermodel_for_strictness():
    m = countermodel_bounded(D0, D1)
    assert m is not None
    assert frame_conditions_hold(m.n_worlds, m.rels)
    assert check_countermodel(m, D0, D1)


def test_countermodel_rejects_wrong_claims():
    m = countermodel_bounded(D0, D1)
    # the same model is no countermodel to a derivable sequent
    assert not check_countermodel(m, D1, D0)


def test_tampered_frame_is_rejected():
    # a higher relation not contained in the lower one breaks the frame
    bad = CounterModel(2, (frozenset(), frozenset({(0, 1)})), 0)
    assert not frame_conditions_hold(bad.n_worlds, bad.rels)
    assert not check_countermodel(bad, D0, D1)


def test_countermodel_json_round_trip():
    m = countermodel_bounded(dia(0, D0), dia(1, TOP) )
    assert m is not None
    blob = countermodel_to_json(m)
    assert countermodel_from_json(blob) == m


# --- the decision front end ----------------------------------------------------


def test_decide_derivable_comes_with_replaying_proof():
    v = decide_oracle(D1, D0)
    assert v.status == DERIVABLE
    assert v.model is None
    assert replay_proof(v.proof)
    assert v.proof.lhs == D1 and v.proof.rhs == D0


def test_decide_underivable_comes_with_checked_model():
    v = decide_oracle(D0, D1)
    assert v.status == NOT_DERIVABLE
    assert v.proof is None
    assert frame_conditions_hold(v.model.n_worlds, v.model.rels)
    assert check_countermodel(v.model, D0, D1)


HARD_DERIVABLE = [
    ("[1,2]", "[0,0,2]"),
    ("[2,0,0,0]", "[2,1,1,1]"),
    ("[2,1,2]", "[0,2,0,0]"),
    ("[2,2]", "[0,1,2,1]"),
]


@pytest.mark.parametrize("wa,wb", HARD_DERIVABLE)
def test_decide_hard_pairs(wa, wb):
    from refcalc.worms import parse_worm

    a = as_formula(parse_worm(wa))
    b = as_formula(parse_worm(wb))
    assert derives(a, b)
    v = decide_oracle(a, b)
    assert v.status == DERIVABLE
    assert replay_proof(v.proof)


def test_oracle_agrees_with_decision_procedure_on_short_worms():
    worms = list(enumerate_worms(2, 2))
    assert len(worms) == 13
    for wa in worms:
        for wb in worms:
            a, b = as_formula(wa), as_formula(wb)
            v = decide_oracle(a, b)
            expected = DERIVABLE if derives(a, b) else NOT_DERIVABLE
            assert v.status == expected, (wa, wb)
            if v.status == DERIVABLE:
                assert replay_proof(v.proof)
            else:
                assert check_countermodel(v.model, a, b)


def test_budgets_are_honored_types():
    v = decide_oracle(D1, D0, OracleBudgets(proof_depth=4, max_worlds=2, escalation=1))
    assert v.status == DERIVABLE


def test_prove_bounded_finds_nothing_for_underivable():
    assert prove_bounded(D0, D1, budget=6) is None
