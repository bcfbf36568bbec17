from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from latproof.corpus import load_lattice
from latproof.enumerate import (
    SizeOutOfRangeError,
    count_lattices,
    enumerate_lattices,
    isomorphic,
    naive_lattices,
)
from latproof.lattice import (
    LatticeError,
    NotALatticeError,
    NotAPosetError,
    UnboundVariableError,
    FiniteLattice,
    eval_term,
    find_sublattice,
    is_distributive,
    is_modular,
    is_sublattice,
    m3,
    modular_counterexample,
    n5,
    parse_lattice,
)
from latproof.terms import parse_term

ALL5 = [L for n in range(1, 6) for L in enumerate_lattices(n)]


def test_bundled_files_match_builders():
    assert isomorphic(load_lattice("m3"), m3())
    assert isomorphic(load_lattice("n5"), n5())
    assert load_lattice("chain3").n == 3


def test_m3_n5_classification():
    assert is_modular(m3()) and not is_distributive(m3())
    assert not is_modular(n5()) and not is_distributive(n5())
    chain = load_lattice("chain3")
    assert is_modular(chain) and is_distributive(chain)


def test_n5_counterexample_is_genuine():
    L = n5()
    a, b, c = modular_counterexample(L)
    assert L.le(c, a)
    assert L.meet[a, L.join[b, c]] != L.join[L.meet[a, b], c]


def test_meet_join_tables():
    L = n5()
    v, u, w = L.index("v"), L.index("u"), L.index("w")
    assert L.meet[u, w] == L.bottom and L.join[v, w] == L.top
    assert L.join[v, u] == u


def test_parse_errors():
    with pytest.raises(LatticeError):
        parse_lattice("covers:\na < b\n")
    with pytest.raises(LatticeError, match="unknown element"):
        parse_lattice("elements: a b\ncovers:\na < c\n")
    with pytest.raises(NotAPosetError):
        parse_lattice("elements: a b\ncovers:\na < b\nb < a\n")
    with pytest.raises(NotALatticeError):
        # two incomparable maximal elements
        parse_lattice("elements: 0 a b\ncovers:\n0 < a\n0 < b\n")
    with pytest.raises(NotALatticeError):
        # a and b have two minimal upper bounds
        parse_lattice("elements: 0 a b c d 1\ncovers:\n0 < a\n0 < b\na < c\na < d\nb < c\nb < d\nc < 1\nd < 1\n")


def test_format_round_trip():
    for L in ALL5:
        again = parse_lattice(L.format())
        assert (again.leq == L.leq).all()


def test_eval_term_unbound():
    with pytest.raises(UnboundVariableError):
        eval_term(m3(), parse_term("d /\\ e"), {"d": 0})


@pytest.mark.parametrize("L", ALL5, ids=lambda L: f"n{L.n}")
def test_lattice_axioms_hold_in_tables(L):
    M, J = L.meet, L.join
    r = range(L.n)
    for a, b in product(r, r):
        assert M[a, b] == M[b, a] and J[a, b] == J[b, a]
        assert M[a, J[a, b]] == a and J[a, M[a, b]] == a
        assert L.le(a, b) == (M[a, b] == a)


@pytest.mark.parametrize("L", ALL5, ids=lambda L: f"n{L.n}")
def test_duality(L):
    D = L.dual()
    assert (D.meet == L.join).all() and (D.join == L.meet).all()
    assert is_modular(D) == is_modular(L)
    assert is_distributive(D) == is_distributive(L)


def _naive_modular(L):
    M, J = L.meet, L.join
    return all(not L.le(c, a) or M[a, J[b, c]] == J[M[a, b], c] for a, b, c in product(range(L.n), repeat=3))


def _naive_distributive(L):
    M, J = L.meet, L.join
    return all(M[a, J[b, c]] == J[M[a, b], M[a, c]] for a, b, c in product(range(L.n), repeat=3))


@pytest.mark.parametrize("L", [L for n in range(1, 7) for L in enumerate_lattices(n)], ids=lambda L: f"n{L.n}")
def test_laws_against_naive(L):
    assert is_modular(L) == _naive_modular(L)
    assert is_distributive(L) == _naive_distributive(L)


def test_sublattice_search():
    L = m3()
    assert find_sublattice(L, "m3") is not None
    assert find_sublattice(L, "n5") is None
    hit = find_sublattice(n5(), "n5")
    assert sorted(hit) == list(range(5))
    assert is_sublattice(L, [L.bottom, L.top])


def test_sublattice_needs_closure():
    # in M3, {a, b} is not closed under join
    L = m3()
    assert not is_sublattice(L, [L.index("a"), L.index("b")])


def test_counts_known():
    assert count_lattices(6) == {1: 1, 2: 1, 3: 1, 4: 2, 5: 5, 6: 15}


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_enumeration_matches_naive(n):
    fast, slow = enumerate_lattices(n), naive_lattices(n)
    assert len(fast) == len(slow)
    for L in fast:
        assert sum(isomorphic(L, M) for M in slow) == 1


def test_enumerated_are_pairwise_non_isomorphic():
    Ls = enumerate_lattices(6)
    for i in range(len(Ls)):
        for j in range(i + 1, len(Ls)):
            assert not isomorphic(Ls[i], Ls[j])


def test_size_out_of_range():
    with pytest.raises(SizeOutOfRangeError):
        enumerate_lattices(0)
    with pytest.raises(SizeOutOfRangeError):
        enumerate_lattices(8)


def test_size_seven():
    assert len(enumerate_lattices(7)) == 53


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_relabelling_preserves_everything(seed):
    rng = np.random.default_rng(seed)
    Ls = enumerate_lattices(5)
    L = Ls[seed % len(Ls)]
    perm = rng.permutation(L.n)
    R = FiniteLattice.from_leq(L.leq[np.ix_(perm, perm)].copy())
    assert isomorphic(L, R)
    assert is_modular(L) == is_modular(R)
    assert (find_sublattice(L, "n5") is None) == (find_sublattice(R, "n5") is None)
