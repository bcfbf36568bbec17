"""Bounded syntactic derivation of order facts ``s <= t``.

Used to discharge the side condition of the modular-law rules and the premise
of the order (Connecting Lemma) rewrites.  A derivation is a small proof tree
built from these rules:

* ``Reflexivity``  -- ``s`` and ``t`` agree modulo associativity/commutativity;
* ``MeetLower``    -- ``s`` is ``t /\\ u`` modulo AC;
* ``JoinUpper``    -- ``t`` is ``s \\/ u`` modulo AC;
* ``Hypothesis``   -- a hypothesis of the context;
* ``DefExpand``    -- one side is replaced by its definition (or folded back);
* ``Monotonicity`` -- ``x o u <= y o u`` from ``x <= y``;
* ``Transitivity`` -- through a midpoint taken from the subterms of ``s``,
  ``t`` and the definition bodies.

The search is exhaustive up to the depth budget.  Candidate steps that are
false in the pentagon or the diamond under some assignment satisfying the
hypotheses are skipped: no sound derivation can reach them, so this prunes
without changing what is derivable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from .context import Context, OrderFact
from .terms import JOIN, MEET, Term, flatten, make_flat, unflatten

DEFAULT_DEPTH = 6

M_FAMILY = ("M", "M1", "M2", "M3", "M4")


@dataclass(frozen=True)
class Derivation:
    conclusion: OrderFact
    rule: str
    premises: tuple["Derivation", ...] = ()

    @property
    def depth(self) -> int:
        return 1 + max((p.depth for p in self.premises), default=0)

    def rules_used(self) -> list[str]:
        out = [self.rule]
        for p in self.premises:
            out += p.rules_used()
        return out

    def format(self, indent: int = 0) -> str:
        lines = ["  " * indent + f"{self.conclusion}  [{self.rule}]"]
        lines += [p.format(indent + 1) for p in self.premises]
        return "\n".join(lines)


def _fact(fs: tuple, ft: tuple) -> OrderFact:
    return OrderFact(unflatten(fs), unflatten(ft))


def _sub_multiset(small: tuple, big: tuple) -> bool:
    """Both are sorted tuples."""
    i = 0
    for x in big:
        if i < len(small) and small[i] == x:
            i += 1
    return i == len(small)


def _multiset_split(a: tuple, b: tuple):
    """Return (common, a - common, b - common) for sorted tuples."""
    common, ra, rb = [], [], []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            common.append(a[i])
            i += 1
            j += 1
        elif a[i] < b[j]:
            ra.append(a[i])
            i += 1
        else:
            rb.append(b[j])
            j += 1
    ra.extend(a[i:])
    rb.extend(b[j:])
    return common, ra, rb


def _flat_subterms(f: tuple, out: set) -> None:
    out.add(f)
    if f[0] == 1:
        for a in f[2]:
            _flat_subterms(a, out)


class _Models:
    """Values of flat terms under every admissible assignment in N5 and M3."""

    def __init__(self, ctx: Context, names: tuple[str, ...]):
        from .lattice import m3, n5

        self.ctx = ctx
        self.names = names
        self.worlds = []
        for L in (n5(), m3()):
            cols = np.array(list(product(range(L.n), repeat=len(names))), dtype=np.intp)
            cols = cols.reshape(-1, max(len(names), 1))
            world = (L, {name: cols[:, i] for i, name in enumerate(names)}, {})
            self.worlds.append(world)
        # keep only assignments satisfying the hypotheses
        kept = []
        for L, env, _ in self.worlds:
            mask = np.ones(len(next(iter(env.values()))) if env else 1, dtype=bool)
            for h in ctx.hypotheses:
                a = self._value(L, env, {}, flatten(h.lhs))
                b = self._value(L, env, {}, flatten(h.rhs))
                mask &= L.leq[a, b].astype(bool)
                if h.strict:
                    mask &= a != b
            env = {k: v[mask] for k, v in env.items()}
            kept.append((L, env, {}))
        self.worlds = kept

    def _value(self, L, env, memo, f):
        hit = memo.get(f)
        if hit is not None:
            return hit
        if f[0] == 0:
            name = f[1]
            if name in self.ctx.defs:
                val = self._value(L, env, memo, flatten(self.ctx.defs[name]))
            else:
                val = env[name]
        else:
            table = L.meet if f[1] == MEET else L.join
            args = f[2]
            val = self._value(L, env, memo, args[0])
            for a in args[1:]:
                val = table[val, self._value(L, env, memo, a)]
        memo[f] = val
        return val

    def plausible(self, fs: tuple, ft: tuple) -> bool:
        for L, env, memo in self.worlds:
            a = self._value(L, env, memo, fs)
            b = self._value(L, env, memo, ft)
            if not L.leq[a, b].all():
                return False
        return True


class _Prover:
    def __init__(self, ctx: Context, names: tuple[str, ...]):
        self.ctx = ctx
        self.models = _Models(ctx, names)
        self.memo: dict = {}
        self.def_flats = {name: flatten(body) for name, body in ctx.definitions}
        self.folds = {f: name for name, f in self.def_flats.items()}
        base: set = set()
        for f in self.def_flats.values():
            _flat_subterms(f, base)
        base |= {(0, name) for name in self.def_flats}
        self.base_midpoints = base
        self.hyps = [(flatten(h.lhs), flatten(h.rhs), h) for h in ctx.hypotheses]

    def derive(self, fs: tuple, ft: tuple, depth: int) -> Derivation | None:
        for k in range(1, depth + 1):
            d = self._at(fs, ft, k)
            if d is not None:
                return d
        return None

    def _at(self, fs, ft, k):
        key = (fs, ft, k)
        if key in self.memo:
            return self.memo[key]
        result = None
        if self.models.plausible(fs, ft):
            result = self._leaf(fs, ft)
            if result is None and k > 1:
                result = self._composite(fs, ft, k - 1)
        self.memo[key] = result
        return result

    def _leaf(self, fs, ft):
        if fs == ft:
            return Derivation(_fact(fs, ft), "Reflexivity")
        if fs[0] == 1 and fs[1] == MEET:
            if ft in fs[2] or (ft[0] == 1 and ft[1] == MEET and _sub_multiset(ft[2], fs[2])):
                return Derivation(_fact(fs, ft), "MeetLower")
        if ft[0] == 1 and ft[1] == JOIN:
            if fs in ft[2] or (fs[0] == 1 and fs[1] == JOIN and _sub_multiset(fs[2], ft[2])):
                return Derivation(_fact(fs, ft), "JoinUpper")
        for hl, hr, h in self.hyps:
            if hl == fs and hr == ft:
                return Derivation(OrderFact(h.lhs, h.rhs), "Hypothesis")
        return None

    def _composite(self, fs, ft, k):
        for a, b in self._def_variants(fs, ft):
            d = self.derive(a, b, k)
            if d is not None:
                return Derivation(_fact(fs, ft), "DefExpand", (d,))
        if fs[0] == 1 and ft[0] == 1 and fs[1] == ft[1]:
            common, rs, rt = _multiset_split(fs[2], ft[2])
            if common and rs and rt:
                d = self.derive(make_flat(fs[1], rs), make_flat(ft[1], rt), k)
                if d is not None:
                    return Derivation(_fact(fs, ft), "Monotonicity", (d,))
        mids = set(self.base_midpoints)
        _flat_subterms(fs, mids)
        _flat_subterms(ft, mids)
        mids.discard(fs)
        mids.discard(ft)
        plausible = self.models.plausible
        for m in sorted(mids):
            if not (plausible(fs, m) and plausible(m, ft)):
                continue
            left = self.derive(fs, m, k)
            if left is None:
                continue
            right = self.derive(m, ft, k)
            if right is not None:
                return Derivation(_fact(fs, ft), "Transitivity", (left, right))
        return None

    def _def_variants(self, fs, ft):
        out = []
        for side in (0, 1):
            f = (fs, ft)[side]
            alts = []
            if f[0] == 0 and f[1] in self.def_flats:
                alts.append(self.def_flats[f[1]])
            if f in self.folds:
                alts.append((0, self.folds[f]))
            for alt in alts:
                out.append((alt, ft) if side == 0 else (fs, alt))
        return out


@lru_cache(maxsize=64)
def _prover_for(ctx: Context, names: tuple[str, ...]) -> _Prover:
    return _Prover(ctx, names)


def _prover(ctx: Context, *terms: Term) -> _Prover:
    names = set(ctx.free_variables(*terms))
    for _, body in ctx.definitions:
        names |= set(ctx.free_variables(body))
    return _prover_for(ctx, tuple(sorted(names)))


def derive_leq(ctx: Context, s: Term, t: Term, depth: int = DEFAULT_DEPTH) -> Derivation | None:
    """A derivation of ``s <= t`` of depth at most ``depth``, or ``None``."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    d = _prover(ctx, s, t).derive(flatten(s), flatten(t), depth)
    if d is None:
        return None
    return Derivation(OrderFact(s, t), d.rule, d.premises)


def side_condition(inst) -> tuple[Term, Term]:
    """The ``(smaller, larger)`` pair a rule instance needs, as terms."""
    b = dict(inst.bindings)
    if inst.rule in M_FAMILY:
        if inst.variant == "dual":
            return b["a"], b["c"]
        return b["c"], b["a"]
    if inst.rule == "Order":
        return b["x"], b["y"]
    raise ValueError(f"{inst.rule} has no side condition")


def check_side_condition(ctx: Context, inst, depth: int = DEFAULT_DEPTH) -> Derivation | None:
    """Derive ``c <= a`` (primal modular law), ``a <= c`` (dual) or ``x <= y`` (Order)."""
    small, large = side_condition(inst)
    return derive_leq(ctx, small, large, depth)
