"""Exhaustive desk-scale checks of the M3-N5 theorem and the identity u /\\ v = p."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import kernels
from .context import M3_DEFINITIONS
from .enumerate import MAX_SIZE, SizeOutOfRangeError, enumerate_lattices
from .lattice import (
    FiniteLattice,
    bundled_lattice,
    eval_term,
    find_sublattice,
    is_distributive,
    is_modular,
    is_sublattice,
)
from .terms import Var, parse_term


class PreconditionError(ValueError):
    pass


def _iso_to(L: FiniteLattice, elems, pattern: FiniteLattice) -> bool:
    """Does ``elems[i] -> pattern element i`` preserve and reflect the order?"""
    sub = L.leq[np.ix_(elems, elems)].astype(bool)
    return bool((sub == pattern.leq.astype(bool)).all())


@dataclass(frozen=True)
class N5Witness:
    triple: tuple[int, int, int]
    p: int
    q: int
    a: int
    b: int
    e: int

    @property
    def elements(self) -> tuple[int, int, int, int, int]:
        return (self.p, self.q, self.a, self.b, self.e)


def construct_n5_witness(L: FiniteLattice) -> N5Witness:
    """Build a pentagon inside a non-modular lattice from a failing triple.

    With ``d > f`` and ``d/\\(e\\/f) > (d/\\e)\\/f`` set ``a = (d/\\e)\\/f``,
    ``b = d/\\(e\\/f)``, ``p = a/\\e`` and ``q = a\\/e``; then ``p < a < b < q``
    and ``p < e < q`` form N5.
    """
    if is_modular(L):
        raise PreconditionError("lattice is modular; no pentagon to construct")
    M, J = L.meet, L.join
    pentagon = _pentagon_order()
    for d, e, f in product(range(L.n), repeat=3):
        if not L.lt(f, d):
            continue
        a = int(J[M[d, e], f])
        b = int(M[d, J[e, f]])
        if not L.lt(a, b):
            continue
        p, q = int(M[a, e]), int(J[a, e])
        elems = (p, q, a, b, e)
        if len(set(elems)) == 5 and is_sublattice(L, elems) and _iso_to(L, elems, pentagon):
            return N5Witness((d, e, f), p, q, a, b, e)
    raise AssertionError("non-modular lattice without a pentagon witness")


def _pentagon_order() -> FiniteLattice:
    # element order p, q, a, b, e
    return FiniteLattice.from_covers(
        ("p", "q", "a", "b", "e"), [("p", "a"), ("a", "b"), ("b", "q"), ("p", "e"), ("e", "q")]
    )


def _diamond_order() -> FiniteLattice:
    # element order p, q, u, v, w
    return FiniteLattice.from_covers(
        ("p", "q", "u", "v", "w"),
        [("p", "u"), ("p", "v"), ("p", "w"), ("u", "q"), ("v", "q"), ("w", "q")],
    )


_DEF_TERMS = tuple((name, parse_term(text)) for name, text in M3_DEFINITIONS)


def m3_values(L: FiniteLattice, d: int, e: int, f: int) -> dict[str, int]:
    """p, q, u, v, w of the construction, evaluated at ``(d, e, f)``."""
    env = {"d": d, "e": e, "f": f}
    for name, body in _DEF_TERMS:
        env[name] = eval_term(L, body, env)
    return env


@dataclass(frozen=True)
class M3Witness:
    triple: tuple[int, int, int]
    p: int
    q: int
    u: int
    v: int
    w: int
    properties: tuple[tuple[str, bool], ...]

    @property
    def elements(self) -> tuple[int, int, int, int, int]:
        return (self.p, self.q, self.u, self.v, self.w)


def _m3_properties(L: FiniteLattice, val: dict[str, int]) -> tuple[tuple[str, bool], ...]:
    M, J = L.meet, L.join
    p, q, u, v, w = (val[k] for k in "pquvw")
    mids = (u, v, w)
    pairs = ((u, v), (v, w), (w, u))
    return (
        ("p < q", L.lt(p, q)),
        ("p <= u, v, w <= q", all(L.le(p, x) and L.le(x, q) for x in mids)),
        ("pairwise meets equal p", all(M[x, y] == p for x, y in pairs)),
        ("pairwise joins equal q", all(J[x, y] == q for x, y in pairs)),
        ("five distinct elements", len({p, q, u, v, w}) == 5),
    )


def construct_m3_witness(L: FiniteLattice) -> M3Witness:
    """Build a diamond inside a modular, non-distributive lattice."""
    if not is_modular(L):
        raise PreconditionError("lattice is not modular")
    if is_distributive(L):
        raise PreconditionError("lattice is distributive; no diamond to construct")
    M, J = L.meet, L.join
    diamond = _diamond_order()
    for d, e, f in product(range(L.n), repeat=3):
        if not L.lt(int(J[M[d, e], M[d, f]]), int(M[d, J[e, f]])):
            continue
        val = m3_values(L, d, e, f)
        props = _m3_properties(L, val)
        elems = tuple(val[k] for k in "pquvw")
        if all(ok for _, ok in props) and is_sublattice(L, elems) and _iso_to(L, elems, diamond):
            return M3Witness((d, e, f), *elems, props)
    raise AssertionError("modular non-distributive lattice without a diamond witness")


@dataclass(frozen=True)
class IdentityReport:
    lattice: FiniteLattice
    triples: int
    counterexample: tuple[int, int, int] | None

    @property
    def holds(self) -> bool:
        return self.counterexample is None

    def format(self) -> str:
        if self.holds:
            return f"u /\\ v = p holds for all {self.triples} triples"
        d, e, f = (self.lattice.labels[i] for i in self.counterexample)
        return f"u /\\ v = p fails at (d, e, f) = ({d}, {e}, {f})"


def check_identity_uvp(L: FiniteLattice) -> IdentityReport:
    return IdentityReport(L, L.n ** 3, kernels.uvp_failure(L.meet, L.join))


LEMMA_NAMES = (
    "connecting lemma",
    "half-way lemma, part 1",
    "half-way lemma, part 2",
    "strict sharpening, modular form",
    "strict sharpening, distributive form",
)


@dataclass(frozen=True)
class LemmaReport:
    failures: tuple[int, ...]

    @property
    def holds(self) -> bool:
        return not any(self.failures)

    def format(self) -> str:
        return "\n".join(f"{name}: {'ok' if n == 0 else f'{n} failures'}"
                         for name, n in zip(LEMMA_NAMES, self.failures))


def check_lemmas(L: FiniteLattice) -> LemmaReport:
    return LemmaReport(tuple(int(x) for x in kernels.lemma_failures(L.leq, L.meet, L.join)))


@dataclass
class SizeSummary:
    size: int
    lattices: int = 0
    non_modular: int = 0
    non_distributive: int = 0
    consistent: int = 0
    n5_witnesses: int = 0
    m3_witnesses: int = 0
    identity_modular: int = 0


@dataclass
class TheoremReport:
    sizes: list[SizeSummary] = field(default_factory=list)
    inconsistent: list[tuple[int, int]] = field(default_factory=list)
    witness_failures: list[tuple[int, int, str]] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.inconsistent and not self.witness_failures

    def format(self) -> str:
        head = "size  lattices  non-modular  non-distributive  consistent  N5 built  M3 built"
        rows = [head]
        for s in self.sizes:
            rows.append(f"{s.size:>4}  {s.lattices:>8}  {s.non_modular:>11}  {s.non_distributive:>16}"
                        f"  {s.consistent:>10}  {s.n5_witnesses:>8}  {s.m3_witnesses:>8}")
        rows.append("both biconditionals consistent" if self.consistent else "INCONSISTENT")
        return "\n".join(rows)


def verify_m3n5(max_n: int) -> TheoremReport:
    """Check both parts of the theorem on every lattice with at most ``max_n`` elements.

    Alongside the biconditionals, the explicit constructions are run on every
    lattice they apply to.
    """
    if not 1 <= max_n <= MAX_SIZE:
        raise SizeOutOfRangeError(f"size must be between 1 and {MAX_SIZE}, got {max_n}")
    report = TheoremReport()
    n5, m3 = bundled_lattice("n5"), bundled_lattice("m3")
    for n in range(1, max_n + 1):
        summary = SizeSummary(n)
        for k, L in enumerate(enumerate_lattices(n)):
            summary.lattices += 1
            modular, distributive = is_modular(L), is_distributive(L)
            has_n5 = find_sublattice(L, n5) is not None
            has_m3 = find_sublattice(L, m3) is not None
            summary.non_modular += not modular
            summary.non_distributive += not distributive
            if (not modular) == has_n5 and (not distributive) == (has_n5 or has_m3):
                summary.consistent += 1
            else:
                report.inconsistent.append((n, k))
            try:
                if not modular:
                    construct_n5_witness(L)
                    summary.n5_witnesses += 1
                elif not distributive:
                    construct_m3_witness(L)
                    summary.m3_witnesses += 1
            except AssertionError as exc:
                report.witness_failures.append((n, k, str(exc)))
            if modular and check_identity_uvp(L).holds:
                summary.identity_modular += 1
        report.sizes.append(summary)
    return report
