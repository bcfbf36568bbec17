import pytest

from latproof.context import Context, m3_context
from latproof.order import check_side_condition, derive_leq
from latproof.rules import RuleInstance
from latproof.terms import equal_mod_ac, parse_term as P

EMPTY = Context()


def test_transitivity_through_f():
    d = derive_leq(EMPTY, P("f /\\ d"), P("e \\/ f"), 3)
    assert d.rule == "Transitivity"
    assert [p.rule for p in d.premises] == ["MeetLower", "JoinUpper"]
    step = d.premises[0].conclusion
    assert equal_mod_ac(step.lhs, P("f /\\ d")) and step.rhs == P("f")


def test_hypothesis():
    assert derive_leq(m3_context(), P("p"), P("q"), 1).rule == "Hypothesis"


def test_transitivity_through_d():
    d = derive_leq(EMPTY, P("d /\\ f"), P("d \\/ (e /\\ f)"), 3)
    assert d.rule == "Transitivity"
    assert d.premises[0].conclusion.rhs == P("d")


def test_independent_variables():
    assert derive_leq(EMPTY, P("d"), P("e"), 5) is None


def test_depth_must_be_positive():
    with pytest.raises(ValueError):
        derive_leq(EMPTY, P("d"), P("d"), 0)


def test_side_conditions_of_corpus_instances():
    ctx = m3_context()
    dp9 = RuleInstance.make("M1", a=P("d"), b=P("e"), c=P("f /\\ d"), variant="primal")
    assert check_side_condition(ctx, dp9).rule == "MeetLower"
    dp2 = RuleInstance.make("M2", a=P("(e /\\ q) \\/ p"), b=P("d /\\ q"), c=P("p"), variant="primal")
    assert check_side_condition(ctx, dp2).rule == "JoinUpper"
    bad = RuleInstance.make("M", a=P("e"), b=P("d"), c=P("q"), variant="primal")
    assert check_side_condition(EMPTY, bad) is None


def test_definition_expansion():
    ctx = m3_context()
    x = P("(e /\\ d) \\/ (e /\\ f) \\/ (d /\\ f)")
    d = derive_leq(ctx, x, P("q"))
    assert d is not None and "Hypothesis" in d.rules_used()


def test_derivations_are_sound_in_models():
    # anything derived must hold in M3 and N5 under every admissible assignment
    from itertools import product

    from latproof.lattice import eval_term, m3, n5

    cases = [("f /\\ d", "e \\/ f"), ("d /\\ f", "d \\/ (e /\\ f)"), ("d /\\ e", "d \\/ e")]
    for s, t in cases:
        assert derive_leq(EMPTY, P(s), P(t)) is not None
        for L in (m3(), n5()):
            for vals in product(range(L.n), repeat=3):
                env = dict(zip("def", vals))
                assert L.le(eval_term(L, P(s), env), eval_term(L, P(t), env))
