from itertools import product

import pytest

from latproof.enumerate import SizeOutOfRangeError, enumerate_lattices
from latproof.lattice import (
    FiniteLattice,
    eval_term,
    is_distributive,
    is_modular,
    is_sublattice,
    m3,
    n5,
)
from latproof.terms import parse_term
from latproof.theorem import (
    PreconditionError,
    check_identity_uvp,
    check_lemmas,
    construct_m3_witness,
    construct_n5_witness,
    m3_values,
    verify_m3n5,
)

UV = parse_term("u /\\ v")


def _uvp_by_terms(L):
    """Oracle: evaluate u /\\ v and p through the term evaluator."""
    for d, e, f in product(range(L.n), repeat=3):
        env = m3_values(L, d, e, f)
        if eval_term(L, UV, env) != env["p"]:
            return d, e, f
    return None


def test_verify_up_to_six():
    r = verify_m3n5(6)
    assert r.consistent
    assert [s.lattices for s in r.sizes] == [1, 1, 1, 2, 5, 15]
    assert all(s.consistent == s.lattices for s in r.sizes)
    assert r.sizes[4].n5_witnesses == 1 and r.sizes[4].m3_witnesses == 1
    assert all(s.identity_modular == s.lattices - s.non_modular for s in r.sizes)


def test_verify_size_range():
    with pytest.raises(SizeOutOfRangeError):
        verify_m3n5(0)


def test_n5_witness_in_pentagon():
    L = n5()
    w = construct_n5_witness(L)
    d, e, f = w.triple
    assert L.lt(f, d)
    assert len(set(w.elements)) == 5 and is_sublattice(L, w.elements)
    assert L.lt(w.p, w.a) and L.lt(w.a, w.b) and L.lt(w.b, w.q)
    assert L.lt(w.p, w.e) and L.lt(w.e, w.q)


def test_m3_witness_in_diamond():
    L = m3()
    w = construct_m3_witness(L)
    assert all(ok for _, ok in w.properties)
    assert {w.u, w.v, w.w} == {L.index(x) for x in "abc"}


def test_preconditions():
    with pytest.raises(PreconditionError):
        construct_n5_witness(m3())
    with pytest.raises(PreconditionError):
        construct_m3_witness(n5())
    chain = enumerate_lattices(3)[0]
    with pytest.raises(PreconditionError):
        construct_m3_witness(chain)


@pytest.mark.parametrize("L", [L for n in range(1, 7) for L in enumerate_lattices(n)], ids=lambda L: f"n{L.n}")
def test_witnesses_on_all_small_lattices(L):
    if not is_modular(L):
        w = construct_n5_witness(L)
        assert is_sublattice(L, w.elements)
    elif not is_distributive(L):
        w = construct_m3_witness(L)
        assert is_sublattice(L, w.elements)


@pytest.mark.parametrize("L", [L for n in range(1, 7) for L in enumerate_lattices(n)] + [m3(), n5()],
                         ids=lambda L: f"n{L.n}")
def test_identity_kernel_matches_term_evaluation(L):
    r = check_identity_uvp(L)
    want = _uvp_by_terms(L)
    assert r.holds == (want is None)
    if not r.holds:
        assert r.counterexample == want


def test_identity_on_modular_lattices():
    for n in range(1, 7):
        for L in enumerate_lattices(n):
            if is_modular(L):
                assert check_identity_uvp(L).holds


def test_identity_holds_on_n5():
    # u /\ v = p does not separate N5 from the modular lattices
    r = check_identity_uvp(n5())
    assert r.holds and r.triples == 125


def test_identity_fails_on_some_nonmodular_six():
    L = FiniteLattice.from_covers([str(i) for i in range(6)],
                                  [("0", "1"), ("0", "4"), ("1", "5"), ("2", "5"), ("3", "5"), ("4", "2"), ("4", "3")])
    r = check_identity_uvp(L)
    assert not r.holds and not is_modular(L)
    assert "fails" in r.format()


def test_lemmas_small():
    for n in range(1, 7):
        for L in enumerate_lattices(n):
            assert check_lemmas(L).holds, check_lemmas(L).format()
