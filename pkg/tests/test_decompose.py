from itertools import product

import pytest

from latproof.context import Context, m3_context
from latproof.decompose import (
    DEFAULT_BUDGET,
    POSET_RULES,
    DecompositionError,
    ProofPoset,
    build_poset,
    decompose_justified,
    decompose_proof,
    decompose_step,
)
from latproof.lattice import eval_term, m3
from latproof.rules import RuleError, apply_rule
from latproof.script import STRICT, parse_justification, parse_script, verify_script
from latproof.terms import parse_term as P

DP3 = P("((e \\/ p) /\\ (d /\\ q)) \\/ p")
DP4 = P("(((e \\/ p) /\\ q) /\\ d) \\/ p")


def _replay(src, edges, ctx):
    t = src
    for e in edges:
        t = apply_rule(t, e.instance, ctx)
        assert t == e.term
    return t


def test_single_absorption():
    edges = decompose_step(P("d /\\ (d \\/ e)"), P("d"), {"L4"}, Context())
    assert [e.instance.rule for e in edges] == ["L4"]


def test_dp3_to_dp4_l1_l2():
    src, dst = P("((q /\\ (e \\/ p)) /\\ (d /\\ q)) \\/ p"), P("((e \\/ p) /\\ (d /\\ q)) \\/ p")
    edges = decompose_step(src, dst, {"L1", "L2", "L3"}, m3_context())
    assert edges is not None
    assert [e.instance.rule for e in edges] == ["L2", "L1", "L2", "L1", "L3"]
    assert _replay(src, edges, m3_context()) == dst


def test_step_unreachable_is_none():
    assert decompose_step(P("d"), P("e"), {"L1", "L2"}, Context()) is None
    assert decompose_step(P("d /\\ (d \\/ e)"), P("d"), {"L1", "L2"}, Context()) is None


def test_step_rejects_bad_input():
    with pytest.raises(ValueError):
        decompose_step(P("d"), P("d"), {"L1"}, Context(), budget=0)
    with pytest.raises(RuleError):
        decompose_step(P("d"), P("d"), {"L7"}, Context())


def test_step_is_shortest():
    # BFS optimality against exhaustive enumeration of shorter chains
    src, dst = P("(e /\\ d) /\\ f"), P("d /\\ (f /\\ e)")
    edges = decompose_step(src, dst, {"L1", "L2"}, Context())
    assert edges is not None
    from latproof.rules import enumerate_rewrites
    frontier = {src}
    for _ in range(len(edges) - 1):
        frontier = {r for t in frontier for _, r in enumerate_rewrites(t, Context(), ["L1", "L2"])}
        assert dst not in frontier


def test_justified_anchor_fires_once():
    ctx = Context()
    src = P("(d /\\ (d \\/ e)) \\/ f")
    just = [parse_justification("L4 with x := d, y := e")]
    edges = decompose_justified(src, P("f \\/ d"), just, ctx)
    assert [e.instance.rule for e in edges] == ["L4", "L2"]
    assert decompose_justified(P("(d /\\ (d \\/ e)) \\/ (d /\\ (d \\/ e))"), P("d \\/ d"), just, ctx) is None


def test_budget_one_fails(corpus_proofs):
    for s in corpus_proofs:
        with pytest.raises(DecompositionError) as info:
            decompose_proof(s, budget=1)
        assert info.value.step is not None


def test_budget_must_be_positive(corpus_proofs):
    with pytest.raises(ValueError):
        decompose_proof(corpus_proofs[0], budget=0)


def test_budgets_monotone(corpus_proofs, decomposed):
    for s, d in zip(corpus_proofs, decomposed):
        more = decompose_proof(s, budget=DEFAULT_BUDGET + 2)
        assert len(more.edges) <= len(d.edges)


def test_decomposed_strict_round_trip(decomposed):
    for d in decomposed:
        script = d.to_script()
        assert verify_script(script, STRICT).accepted
        again = parse_script(d.emit())
        assert verify_script(again, STRICT).accepted
        assert [st.term for st in again.steps] == d.terms[1:]


def test_decomposed_passes_displayed_terms(corpus_proofs, decomposed):
    for s, d in zip(corpus_proofs, decomposed):
        terms = set(d.terms)
        for st in s.steps:
            assert st.term in terms
        assert d.terms[-1] == s.goal[1]
        assert d.start == s.steps[0].term


def test_modular_edges_match_lenient_firings(corpus_proofs, decomposed):
    for s, d in zip(corpus_proofs, decomposed):
        m = sum(e.instance.is_modular for e in d.edges)
        assert m == verify_script(s).modular_firings()


def test_chain_is_semantically_sound(decomposed):
    # every vertex denotes the same element of M3 under every assignment
    ctx, L = m3_context(), m3()
    for d in decomposed:
        for vals in product(range(L.n), repeat=3):
            env = dict(zip("def", vals))
            env2 = dict(env)
            for name, body in ctx.definitions:
                env2[name] = eval_term(L, body, env2)
            if not L.lt(env2["p"], env2["q"]):
                continue
            values = {eval_term(L, t, env2) for t in d.terms}
            assert len(values) == 1


def test_poset_shape(decomposed):
    for d in decomposed:
        p = build_poset(d)
        assert p.length == len(d.edges) + 1
        assert p.top.startswith("u /\\ v = ")
        assert p.bottom == "u /\\ v = p"
        assert set(p.labels) <= set(POSET_RULES)
        lines = p.export().splitlines()
        assert sum(" > " in ln for ln in lines) == p.length - 1


def test_poset_validation():
    with pytest.raises(ValueError):
        ProofPoset("x", ("a", "b"), ())
    p = ProofPoset("x", ("a", "b", "c"), ("L1", "Other"))
    assert p.covers() == [(0, 1, "L1"), (1, 2, "Other")]
