"""Enumeration of finite lattices up to isomorphism.

The main generator builds every lattice from a naturally labelled poset on the
``n - 2`` elements strictly between bottom and top, adding one element at a
time as a new maximal element over a down-closed set.  Isomorphic copies are
rejected by a canonical form: the lexicographically least order matrix over
all relabellings of the inner elements.

:func:`naive_lattices` is an independent brute-force oracle: it tries every
assignment of ``<``, ``>`` or incomparable to every pair of labelled elements.
"""

from __future__ import annotations

from itertools import permutations, product

import numpy as np

from . import kernels
from .lattice import FiniteLattice

MAX_SIZE = 7


class SizeOutOfRangeError(ValueError):
    pass


def _check_size(n: int, high: int = MAX_SIZE) -> None:
    if not 1 <= n <= high:
        raise SizeOutOfRangeError(f"size must be between 1 and {high}, got {n}")


def _natural_posets(m: int):
    """Strict orders on range(m) in which i < j implies i < j as integers."""
    if m == 0:
        yield []
        return
    for below in _natural_posets(m - 1):
        k = m - 1
        for bits in range(1 << k):
            down = {i for i in range(k) if bits >> i & 1}
            if all(below[j] <= down for j in down):
                yield below + [frozenset(down)]


def _bounded_leq(inner: list[frozenset]) -> np.ndarray:
    m = len(inner)
    n = m + 2
    leq = np.eye(n, dtype=np.uint8)
    leq[0, :] = 1
    leq[:, n - 1] = 1
    for j, down in enumerate(inner):
        for i in down:
            leq[i + 1, j + 1] = 1
    return leq


def _canonical_code(leq: np.ndarray, fixed_ends: bool) -> bytes:
    n = leq.shape[0]
    if fixed_ends:
        inner = range(1, n - 1)
        perms = ((0, *p, n - 1) for p in permutations(inner))
    else:
        perms = permutations(range(n))
    return min(leq[np.ix_(p, p)].tobytes() for p in perms)


def _from_code(code: bytes, n: int) -> FiniteLattice:
    leq = np.frombuffer(code, dtype=np.uint8).reshape(n, n).copy()
    return FiniteLattice.from_leq(leq)


def _is_lattice(leq: np.ndarray) -> bool:
    return kernels.tables_from_leq(np.ascontiguousarray(leq))[2] == 0


def enumerate_lattices(n: int) -> list[FiniteLattice]:
    """All lattices with ``n`` elements up to isomorphism, in canonical order.

    Elements are labelled ``0..n-1``; in every returned lattice ``0`` is the
    bottom and ``n - 1`` the top.
    """
    _check_size(n)
    if n <= 2:
        leq = np.triu(np.ones((n, n), dtype=np.uint8))
        return [FiniteLattice.from_leq(leq)]
    codes = set()
    for inner in _natural_posets(n - 2):
        leq = _bounded_leq(inner)
        if _is_lattice(leq):
            codes.add(_canonical_code(leq, fixed_ends=True))
    return [_from_code(c, n) for c in sorted(codes)]


def count_lattices(max_n: int) -> dict[int, int]:
    return {n: len(enumerate_lattices(n)) for n in range(1, max_n + 1)}


def naive_lattices(n: int) -> list[FiniteLattice]:
    """Brute force over all labelled posets on ``n`` elements (use n <= 5)."""
    _check_size(n, 5)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    codes = set()
    for choice in product((0, 1, 2), repeat=len(pairs)):
        leq = np.eye(n, dtype=np.uint8)
        for (i, j), c in zip(pairs, choice):
            if c == 1:
                leq[i, j] = 1
            elif c == 2:
                leq[j, i] = 1
        if ((leq.astype(np.int32) @ leq.astype(np.int32) > 0) != leq.astype(bool)).any():
            continue
        if _is_lattice(leq):
            codes.add(_canonical_code(leq, fixed_ends=False))
    return [_from_code(c, n) for c in sorted(codes)]


def isomorphic(a: FiniteLattice, b: FiniteLattice) -> bool:
    if a.n != b.n:
        return False
    return _canonical_code(np.asarray(a.leq), False) == _canonical_code(np.asarray(b.leq), False)
