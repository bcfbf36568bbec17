"""Finite lattices given by explicit order relations and operation tables."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .terms import MEET, Term, Var


class LatticeError(ValueError):
    pass


class NotAPosetError(LatticeError):
    pass


class NotALatticeError(LatticeError):
    def __init__(self, message: str, pair: tuple[str, str]):
        super().__init__(message)
        self.pair = pair


class UnboundVariableError(KeyError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteLattice:
    """A lattice on ``range(n)`` with a validated order and operation tables.

    Build one with :meth:`from_leq`, :meth:`from_covers` or :func:`parse_lattice`.
    """

    labels: tuple[str, ...]
    leq: np.ndarray
    meet: np.ndarray
    join: np.ndarray

    @property
    def n(self) -> int:
        return len(self.labels)

    @classmethod
    def from_leq(cls, leq, labels: Sequence[str] | None = None) -> "FiniteLattice":
        leq = np.array(leq, dtype=np.uint8)
        n = leq.shape[0]
        labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        _check_partial_order(leq, labels)
        meet, join, status, i, j = kernels.tables_from_leq(np.ascontiguousarray(leq))
        if status:
            what = "meet" if status == 1 else "join"
            raise NotALatticeError(
                f"not a lattice: {labels[i]} and {labels[j]} have no {what}",
                (labels[i], labels[j]),
            )
        for arr in (leq, meet, join):
            arr.setflags(write=False)
        return cls(labels, leq, meet, join)

    @classmethod
    def from_covers(cls, labels: Sequence[str], covers) -> "FiniteLattice":
        """``covers`` is an iterable of ``(lower, upper)`` label pairs."""
        index = {lab: i for i, lab in enumerate(labels)}
        n = len(labels)
        leq = np.eye(n, dtype=bool)
        for lo, hi in covers:
            leq[index[lo], index[hi]] = True
        for k in range(n):  # Warshall
            leq |= leq[:, [k]] & leq[[k], :]
        for i in range(n):
            for j in range(i + 1, n):
                if leq[i, j] and leq[j, i]:
                    raise NotAPosetError(
                        f"not a poset: {labels[i]} and {labels[j]} lie on a cycle"
                    )
        return cls.from_leq(leq, labels)

    def lt(self, a: int, b: int) -> bool:
        return a != b and bool(self.leq[a, b])

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    @cached_property
    def bottom(self) -> int:
        return int(np.flatnonzero(self.leq.all(axis=1))[0])

    @cached_property
    def top(self) -> int:
        return int(np.flatnonzero(self.leq.all(axis=0))[0])

    @cached_property
    def covers(self) -> list[tuple[int, int]]:
        out = []
        for i in range(self.n):
            for j in range(self.n):
                if self.lt(i, j) and not any(
                    self.lt(i, k) and self.lt(k, j) for k in range(self.n)
                ):
                    out.append((i, j))
        return out

    def dual(self) -> "FiniteLattice":
        return FiniteLattice.from_leq(self.leq.T.copy(), self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def format(self) -> str:
        """Serialize in the lattice file format."""
        lines = ["elements: " + " ".join(self.labels), "covers:"]
        lines += [f"{self.labels[i]} < {self.labels[j]}" for i, j in self.covers]
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"FiniteLattice(n={self.n}, labels={self.labels})"


def _check_partial_order(leq: np.ndarray, labels) -> None:
    n = leq.shape[0]
    if leq.shape != (n, n) or len(labels) != n:
        raise NotAPosetError("order matrix shape does not match the element count")
    if not leq.diagonal().all():
        raise NotAPosetError("order relation is not reflexive")
    both = leq.astype(bool) & leq.T.astype(bool)
    np.fill_diagonal(both, False)
    if both.any():
        i, j = map(int, np.argwhere(both)[0])
        raise NotAPosetError(f"not a poset: {labels[i]} and {labels[j]} lie on a cycle")
    closure = (leq.astype(np.int32) @ leq.astype(np.int32)) > 0
    if (closure & ~leq.astype(bool)).any():
        raise NotAPosetError("order relation is not transitive")


def parse_lattice(text: str) -> FiniteLattice:
    """Parse ``elements: ...`` followed by ``covers:`` and ``x < y`` lines."""
    labels: list[str] | None = None
    covers = []
    in_covers = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("elements:"):
            labels = line[len("elements:"):].split()
            if len(set(labels)) != len(labels):
                raise LatticeError(f"line {lineno}: duplicate element label")
            continue
        if line == "covers:":
            in_covers = True
            continue
        if in_covers:
            parts = line.split()
            if len(parts) != 3 or parts[1] != "<":
                raise LatticeError(f"line {lineno}: expected '<label> < <label>'")
            covers.append((parts[0], parts[2]))
            continue
        raise LatticeError(f"line {lineno}: unexpected {line!r}")
    if not labels:
        raise LatticeError("missing 'elements:' line")
    for lo, hi in covers:
        for lab in (lo, hi):
            if lab not in labels:
                raise LatticeError(f"unknown element {lab!r}")
    return FiniteLattice.from_covers(labels, covers)


def eval_term(L: FiniteLattice, t: Term, assignment: Mapping[str, int]) -> int:
    if type(t) is Var:
        try:
            return assignment[t.name]
        except KeyError:
            raise UnboundVariableError(t.name) from None
    a = eval_term(L, t.left, assignment)
    b = eval_term(L, t.right, assignment)
    return int(L.meet[a, b] if t.kind == MEET else L.join[a, b])


def modular_counterexample(L: FiniteLattice) -> tuple[int, int, int] | None:
    """A triple ``(a, b, c)`` with ``c <= a`` violating the modular law."""
    return kernels.modular_failure(L.leq, L.meet, L.join)


def distributive_counterexample(L: FiniteLattice) -> tuple[int, int, int] | None:
    return kernels.distributive_failure(L.meet, L.join)


def is_modular(L: FiniteLattice) -> bool:
    return modular_counterexample(L) is None


def is_distributive(L: FiniteLattice) -> bool:
    return distributive_counterexample(L) is None


def is_sublattice(L: FiniteLattice, elements: Sequence[int]) -> bool:
    return kernels.sublattice_closed(L.meet, L.join, list(elements))


def find_sublattice(L: FiniteLattice, pattern: FiniteLattice | str):
    """First embedding of ``pattern`` as a sublattice of ``L``, or ``None``.

    The result lists, for each element of the pattern in its own order, the
    index of its image in ``L``.  Subsets are tried in lexicographic order and,
    within a subset, bijections in lexicographic order.
    """
    if isinstance(pattern, str):
        pattern = bundled_lattice(pattern)
    k = pattern.n
    P = pattern.leq.astype(bool)
    for subset in combinations(range(L.n), k):
        if not is_sublattice(L, subset):
            continue
        sub = L.leq[np.ix_(subset, subset)].astype(bool)
        for perm in permutations(range(k)):
            # pattern element i is sent to subset[perm[i]]
            if (sub[np.ix_(perm, perm)] == P).all():
                return tuple(subset[perm[i]] for i in range(k))
    return None


_BUNDLED = {
    "m3": ("0 a b c 1", [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")]),
    "n5": ("0 v u w 1", [("0", "v"), ("v", "u"), ("u", "1"), ("0", "w"), ("w", "1")]),
    "chain2": ("0 1", [("0", "1")]),
    "chain3": ("0 m 1", [("0", "m"), ("m", "1")]),
}


def bundled_lattice(name: str) -> FiniteLattice:
    """``m3``, ``n5``, ``chain2`` or ``chain3`` (matching the corpus files)."""
    key = name.lower().removesuffix(".lat")
    labels, covers = _BUNDLED[key]
    return FiniteLattice.from_covers(labels.split(), covers)


def m3() -> FiniteLattice:
    return bundled_lattice("m3")


def n5() -> FiniteLattice:
    return bundled_lattice("n5")
