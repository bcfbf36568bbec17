"""Decomposition of compound proof steps into single-rule chains.

Every edge of a decomposed chain is one node-exact rule application, so
associativity (L1) and commutativity (L2) moves are counted like any other
rule.  The non-AC rules cited by a step's justification become ground
rewrite "anchors"; each anchor may fire at most once, anywhere in the term.

Search proceeds in two tiers:

* an exact bidirectional breadth-first search over ``(term, used anchors)``,
  which returns a shortest chain whenever it fits in :data:`EXACT_NODE_LIMIT`
  expanded states;
* otherwise a best-first search guided by the number of anchors still needed
  (computed modulo AC) plus a structural mismatch count, followed by exact
  re-search of every short window of the chain to remove detours.
"""

from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .context import Context
from .order import DEFAULT_DEPTH, M_FAMILY, Derivation, check_side_condition
from .rules import (
    AC_RULES,
    FORWARD,
    REVERSE,
    RULE_IDS,
    RuleError,
    RuleInstance,
    enumerate_rewrites,
    ground_rewrites,
)
from .script import Compound, ProofScript, Step, _ac_rewrite, verify_script
from .terms import (
    Op,
    Term,
    Var,
    flatten,
    format_term,
    size,
    subterms,
    variables,
)

DEFAULT_BUDGET = 8
EXACT_NODE_LIMIT = 60_000
WINDOW = 7


class DecompositionError(RuntimeError):
    """A step could not be decomposed within the budget."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


@dataclass(frozen=True)
class _Anchor:
    inst: RuleInstance
    lhs: Term
    rhs: Term
    derivation: Derivation | None


def _anchors_for(justification: Sequence, ctx: Context, depth: int) -> list[_Anchor] | None:
    """Ground rewrites for the non-AC instances, or None for a bare compound."""
    out = []
    for inst in justification:
        if isinstance(inst, Compound):
            return None
        if inst.rule in AC_RULES:
            continue
        usable = []
        for schema, lhs, rhs in ground_rewrites(inst, ctx):
            d = None
            if schema is not None and schema.side:
                probe = RuleInstance(inst.rule, inst.direction, None, inst.bindings, schema.variant)
                d = check_side_condition(ctx, probe, depth)
                if d is None:
                    continue
            variant = schema.variant if schema is not None else "def"
            template = RuleInstance(inst.rule, inst.direction, None,
                                    _full_bindings(schema, inst), variant, inst.name)
            usable.append(_Anchor(template, lhs, rhs, d))
        if not usable:
            raise RuleError(f"side condition of {inst.format()} not derivable")
        # an instance with several usable variants contributes one anchor per
        # distinct ground rewrite; they share a slot below
        out.append(usable)
    return out


def _full_bindings(schema, inst):
    if schema is None:
        return ()
    b = inst.binding
    names = variables(schema.lhs) | variables(schema.rhs)
    return tuple(sorted((k, b[k]) for k in names))


# ---------------------------------------------------------------------------
# move generation


class _Space:
    """Single-rule moves for one step.

    ``slots`` holds, per cited instance, its alternative ground rewrites; a
    mask bit per slot records use.  With ``kind_rules`` set the non-AC moves
    come from :func:`enumerate_rewrites` instead and there is no mask.
    """

    def __init__(self, slots, ac_kinds: Iterable[str] = ("L1", "L2"),
                 ctx: Context | None = None, kind_rules=(), pool=(), depth=DEFAULT_DEPTH):
        self.slots = slots
        self.ac = set(ac_kinds)
        self.ctx = ctx
        self.kind_rules = tuple(r for r in RULE_IDS if r in set(kind_rules) - AC_RULES)
        self.pool = tuple(pool)
        self.depth = depth
        self.bidirectional = not self.kind_rules
        self._fwd: dict = {}
        self._bwd: dict = {}
        self.full = (1 << len(slots)) - 1
        self.grow = True
        self.fold_names = frozenset()

    def _expansion_ok(self, inst):
        if inst.rule == "Def":
            return inst.name in self.fold_names
        if inst.rule in ("L3", "L4", "Order"):
            return self.grow
        return True

    # local moves -------------------------------------------------------------
    def _ac_local(self, n, backward):
        out = []
        if type(n) is not Op:
            return out
        k, l, r = n
        if "L2" in self.ac:
            a, b = (r, l) if backward else (l, r)
            out.append((-1, RuleInstance("L2", FORWARD, None, (("a", a), ("b", b)), k), Op(k, r, l)))
        if "L1" in self.ac:
            if type(r) is Op and r.kind == k:
                new = Op(k, Op(k, l, r.left), r.right)
                d = REVERSE if backward else FORWARD
                out.append((-1, RuleInstance("L1", d, None, (("a", l), ("b", r.left), ("c", r.right)), k), new))
            if type(l) is Op and l.kind == k:
                new = Op(k, l.left, Op(k, l.right, r))
                d = FORWARD if backward else REVERSE
                out.append((-1, RuleInstance("L1", d, None, (("a", l.left), ("b", l.right), ("c", r)), k), new))
        return out

    def _local(self, n, backward):
        out = self._ac_local(n, backward)
        for i, alts in enumerate(self.slots):
            for a in alts:
                if backward and n == a.rhs:
                    out.append((i, a.inst, a.lhs))
                elif not backward and n == a.lhs:
                    out.append((i, a.inst, a.rhs))
        return out

    def _moves(self, t, backward):
        memo = self._bwd if backward else self._fwd
        hit = memo.get(t)
        if hit is not None:
            return hit
        out = [((), i, inst, new) for i, inst, new in self._local(t, backward)]
        if type(t) is Op:
            k, l, r = t
            for pos, i, inst, new in self._moves(l, backward):
                out.append(((1,) + pos, i, inst, Op(k, new, r)))
            for pos, i, inst, new in self._moves(r, backward):
                out.append(((2,) + pos, i, inst, Op(k, l, new)))
        memo[t] = out
        return out

    def successors(self, t, mask=0, backward=False):
        """(slot, move, next term) triples; see :func:`_materialize` for moves."""
        out = []
        for pos, i, inst, new in self._moves(t, backward):
            if i >= 0 and mask >> i & 1:
                continue
            out.append((i, (inst, pos), new))
        if self.kind_rules and not backward:
            for inst, new in enumerate_rewrites(t, self.ctx, self.kind_rules, self.pool, self.depth):
                if inst.direction == REVERSE and not self._expansion_ok(inst):
                    continue
                out.append((-1, (inst, None), new))
        return out


# ---------------------------------------------------------------------------
# exact search
#
# Internal chains are lists of (instance, term, slot bit) triples.


class _Exceeded(Exception):
    pass


def _materialize(move) -> RuleInstance:
    inst, pos = move
    return inst if pos is None else inst.at(pos)


def _trace(parents, key):
    """(instance, reached term, previous term, slot bit) from the root to ``key``."""
    edges = []
    while parents[key] is not None:
        prev, move = parents[key]
        edges.append((_materialize(move), key[0], prev[0], key[1] ^ prev[1]))
        key = prev
    edges.reverse()
    return edges


def _exact(space: _Space, src, dst, cap: int, avail: int, limit: int):
    """Shortest chain src -> dst of length <= cap using only slots in ``avail``."""
    start = space.full & ~avail
    if src == dst:
        return []
    if not space.bidirectional:
        return _exact_forward(space, src, dst, cap, start, limit)
    sides = [
        {"seen": {(src, start): None}, "front": [(src, start)], "by": {src: [(start, 0)]}, "d": 0},
        {"seen": {(dst, start): None}, "front": [(dst, start)], "by": {dst: [(start, 0)]}, "d": 0},
    ]
    expanded = 0
    while all(sd["front"] for sd in sides) and sides[0]["d"] + sides[1]["d"] < cap:
        backward = len(sides[1]["front"]) < len(sides[0]["front"])
        me, other = sides[backward], sides[not backward]
        depth = me["d"] + 1
        nxt, best = [], None
        for key in me["front"]:
            t, m = key
            expanded += 1
            if expanded > limit:
                raise _Exceeded
            for i, inst, new in space.successors(t, m, backward):
                m2 = m | (1 << i) if i >= 0 else m
                k2 = (new, m2)
                if k2 in me["seen"]:
                    continue
                me["seen"][k2] = (key, inst)
                nxt.append(k2)
                me["by"].setdefault(new, []).append((m2, depth))
                for om, od in other["by"].get(new, ()):
                    if (m2 & om) & ~start == 0 and (best is None or od < best[0]):
                        best = (od, k2, (new, om))
        me["front"], me["d"] = nxt, depth
        if best is not None and depth + best[0] <= cap:
            _, k_mine, k_other = best
            fk, bk = (k_other, k_mine) if backward else (k_mine, k_other)
            chain = [(inst, a, bit) for inst, a, _, bit in _trace(sides[0]["seen"], fk)]
            for inst, _, prev, bit in reversed(_trace(sides[1]["seen"], bk)):
                chain.append((inst, prev, bit))
            return chain
    return None


def _exact_forward(space, src, dst, cap, start, limit):
    parents = {(src, start): None}
    front = [(src, start)]
    expanded = 0
    for _ in range(cap):
        nxt = []
        for key in front:
            expanded += 1
            if expanded > limit:
                raise _Exceeded
            for i, inst, new in space.successors(key[0], key[1]):
                k2 = (new, key[1])
                if k2 in parents:
                    continue
                parents[k2] = (key, inst)
                if new == dst:
                    return [(inst, a, 0) for inst, a, _, _ in _trace(parents, k2)]
                nxt.append(k2)
        front = nxt
    return None


# ---------------------------------------------------------------------------
# guided search for steps too long for exact search


def _node_flats(t) -> Counter:
    c = Counter()
    for _, s in subterms(t):
        if type(s) is Op:
            c[flatten(s)] += 1
    return c


class _AnchorDistance:
    """Fewest anchor firings, modulo AC, from ``(flat, mask)`` to ``dst``."""

    def __init__(self, space: _Space, src, dst, avail: int):
        goal = flatten(dst)
        flats = [[(flatten(a.lhs), flatten(a.rhs)) for a in alts] for alts in space.slots]
        self.start = (flatten(src), space.full & ~avail)
        graph = {self.start: []}
        todo = [self.start]
        while todo:
            f, m = key = todo.pop()
            for i, alts in enumerate(flats):
                if m >> i & 1:
                    continue
                for lhs, rhs in alts:
                    for g in _ac_rewrite(f, lhs, rhs):
                        k = (g, m | 1 << i)
                        graph[key].append(k)
                        if k not in graph:
                            graph[k] = []
                            todo.append(k)
        rev: dict = {}
        for k, outs in graph.items():
            for o in outs:
                rev.setdefault(o, []).append(k)
        self.dist = {k: 0 for k in graph if k[0] == goal}
        frontier = list(self.dist)
        while frontier:
            nxt = []
            for k in frontier:
                for p in rev.get(k, ()):
                    if p not in self.dist:
                        self.dist[p] = self.dist[k] + 1
                        nxt.append(p)
            frontier = nxt

    @property
    def reachable(self) -> bool:
        return self.start in self.dist

    def __call__(self, t, mask):
        return self.dist.get((flatten(t), mask))


def _best_first(space: _Space, src, dst, cap: int, avail: int, limit: int):
    hd = _AnchorDistance(space, src, dst, avail)
    if not hd.reachable:
        return None
    target = _node_flats(dst)

    def h(t, m):
        a = hd(t, m)
        if a is None:
            return None
        return a + sum((_node_flats(t) - target).values())

    start = (src, space.full & ~avail)
    counter = 0
    heap = [(h(*start), 0, counter, start)]
    parents = {start: None}
    best_g = {start: 0}
    expanded = 0
    while heap:
        _, g, _, key = heapq.heappop(heap)
        if best_g[key] < g:
            continue
        t, m = key
        if t == dst:
            return [(inst, a, bit) for inst, a, _, bit in _trace(parents, key)]
        expanded += 1
        if expanded > limit:
            return None
        if g >= cap:
            continue
        for i, inst, new in space.successors(t, m):
            k2 = (new, m | (1 << i) if i >= 0 else m)
            if best_g.get(k2, cap + 1) <= g + 1:
                continue
            hv = h(*k2)
            if hv is None:
                continue
            best_g[k2] = g + 1
            parents[k2] = (key, inst)
            counter += 1
            heapq.heappush(heap, (g + 1 + hv, g + 1, counter, k2))
    return None


def _wrap(chain, side, kind, other):
    """Lift a chain on one child to the parent term."""
    out = []
    for inst, t, bit in chain:
        term = Op(kind, t, other) if side == 1 else Op(kind, other, t)
        out.append((inst.at((side,) + inst.position), term, bit))
    return out


def _bits(chain) -> int:
    used = 0
    for _, _, bit in chain:
        used |= bit
    return used


class _Solver:
    """Divide and conquer: exact search when small, otherwise solve the two
    children independently, possibly after one AC move at the root."""

    SMALL = 15_000

    def __init__(self, space: _Space, cap: int):
        self.space = space
        self.cap = cap
        self.memo: dict = {}

    def reachable(self, src, dst, avail) -> bool:
        return _AnchorDistance(self.space, src, dst, avail).reachable

    def solve(self, src, dst, avail, level=0):
        key = (src, dst, avail)
        if key not in self.memo:
            self.memo[key] = self._solve(src, dst, avail, level)
        return self.memo[key]

    def _solve(self, src, dst, avail, level):
        if src == dst:
            return []
        if not self.reachable(src, dst, avail):
            return None
        try:
            return _exact(self.space, src, dst, self.cap, avail, self.SMALL)
        except _Exceeded:
            pass
        best = None
        if type(src) is Op and type(dst) is Op and level < 8:
            starts = [([], src)]
            for _, inst, new in self.space._ac_local(src, False):
                starts.append(([(inst.at(()), new, 0)], new))
            for prefix, s in starts:
                if s.kind != dst.kind:
                    continue
                rest = self._split(s, dst, avail, level)
                if rest is not None and (best is None or len(prefix) + len(rest) < len(best)):
                    best = prefix + rest
        if best is None:
            best = _best_first(self.space, src, dst, self.cap, avail, 300_000)
        return best

    def _split(self, s, d, avail, level):
        out = None
        for order in ((1, 2), (2, 1)):
            chains, left = {}, avail
            for side in order:
                a, b = (s.left, d.left) if side == 1 else (s.right, d.right)
                ch = self.solve(a, b, left, level + 1)
                if ch is None:
                    break
                chains[side] = ch
                left &= ~_bits(ch)
            else:
                full = _wrap(chains[1], 1, s.kind, s.right) + _wrap(chains[2], 2, s.kind, d.left)
                if out is None or len(full) < len(out):
                    out = full
        return out


def _shorten(space: _Space, src, chain, limit: int):
    """Replace short windows of the chain by shortest sub-chains until stable."""
    changed = True
    while changed:
        changed = False
        terms = [src] + [t for _, t, _ in chain]
        for width in range(min(WINDOW, len(chain)), 1, -1):
            for i in range(len(chain) - width + 1):
                seg = chain[i:i + width]
                try:
                    sub = _exact(space, terms[i], terms[i + width], width - 1, _bits(seg), limit)
                except _Exceeded:
                    continue
                if sub is not None:
                    chain = chain[:i] + sub + chain[i + width:]
                    changed = True
                    break
            if changed:
                break
    return chain


# ---------------------------------------------------------------------------
# public API


@dataclass(frozen=True)
class Edge:
    """One covering edge: the rule instance and the term it produces."""

    instance: RuleInstance
    term: Term
    derivation: Derivation | None = None

    def __iter__(self):
        return iter((self.instance, self.term))


def _edges(chain, ctx, depth):
    out = []
    for inst, t, *_ in chain:
        d = None
        if inst.rule in M_FAMILY or inst.rule == "Order":
            d = check_side_condition(ctx, inst, depth)
        out.append(Edge(inst, t, d))
    return out


def _pool(src, dst):
    seen, out = set(), []
    for t in (src, dst):
        for _, s in subterms(t):
            if s not in seen:
                seen.add(s)
                out.append(s)
    return out


def decompose_step(src: Term, dst: Term, allowed: Iterable[str] | None, ctx: Context,
                   budget: int = DEFAULT_BUDGET, depth: int = DEFAULT_DEPTH) -> list[Edge] | None:
    """Shortest single-rule chain ``src -> dst`` over the rule ids in ``allowed``.

    ``None`` when no chain of at most ``budget`` rewrites exists.  Expansion
    rules (reverse L3, L4 and Order) are only tried when ``dst`` is larger than
    ``src`` and take their new material from subterms of both ends; Def fold
    only for names occurring in ``dst``.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    rules = set(RULE_IDS if allowed is None else allowed)
    unknown = rules - set(RULE_IDS)
    if unknown:
        raise RuleError(f"unknown rule(s): {', '.join(sorted(unknown))}")
    grow = size(dst) > size(src)
    space = _Space([], rules & AC_RULES, ctx, rules - AC_RULES, _pool(src, dst) if grow else (), depth)
    space.grow = grow
    space.fold_names = variables(dst)
    try:
        chain = _exact(space, src, dst, budget, 0, EXACT_NODE_LIMIT)
    except _Exceeded:
        chain = None
    return None if chain is None else _edges(chain, ctx, depth)


def decompose_justified(src: Term, dst: Term, justification: Sequence, ctx: Context,
                        budget: int = DEFAULT_BUDGET, depth: int = DEFAULT_DEPTH) -> list[Edge] | None:
    """Chain for one displayed step, anchored to the instances it cites.

    Each cited non-AC instance fires at most once; L1 and L2 moves are free
    to use.  The length cap is ``budget`` per cited non-AC instance (at least
    one), since every such instance may need a few AC moves to be exposed.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    slots = _anchors_for(justification, ctx, depth)
    if slots is None:
        comp = justification[0]
        return decompose_step(src, dst, set(comp.rules) | AC_RULES, ctx, budget, depth)
    cap = budget * max(1, len(slots))
    space = _Space(slots)
    chain = _Solver(space, cap).solve(src, dst, space.full)
    if chain is None:
        return None
    chain = _shorten(space, src, chain, EXACT_NODE_LIMIT)
    if len(chain) > cap:
        return None
    return _edges(chain, ctx, depth)


# ---------------------------------------------------------------------------
# whole proofs


@dataclass
class DecomposedProof:
    """A proof as a chain of single-rule edges from ``start`` to ``rhs``.

    ``origins[i]`` is the displayed step that edge ``i`` came from; the final
    closure onto the goal's right side carries ``len(steps) + 1``.
    """

    name: str
    context: Context
    lhs_text: str
    start: Term
    rhs: Term
    edges: list[Edge]
    origins: list[int]

    @property
    def terms(self) -> list[Term]:
        return [self.start] + [e.term for e in self.edges]

    def to_script(self) -> ProofScript:
        steps = tuple(
            Step(e.term, format_term(e.term), (e.instance,), i + 1) for i, e in enumerate(self.edges)
        )
        return ProofScript(f"{self.name}_decomposed", self.context,
                           (self.start, self.rhs), (format_term(self.start), format_term(self.rhs)), steps,
                           (f"single-rule decomposition of {self.name}",))

    def emit(self) -> str:
        return self.to_script().format()


def _closure_split(src, target, justification, ctx, depth):
    """Index of the first instance belonging to the closure onto the goal's right side."""
    from .script import _StepFailure, _ac_fire

    goal = flatten(target)
    states = {flatten(src)}
    for k, inst in enumerate(justification):
        if goal in states:
            return k
        try:
            states, _ = _ac_fire(states, inst, ctx, depth)
        except _StepFailure:
            return k
    return len(justification)


def _starts_with_unfolding(script: ProofScript) -> bool:
    first = script.steps[0] if script.steps else None
    return first is not None and all(
        not isinstance(j, Compound) and j.rule == "Def" and j.direction == FORWARD
        for j in first.justification
    )


def decompose_proof(script: ProofScript, budget: int = DEFAULT_BUDGET,
                    depth: int = DEFAULT_DEPTH) -> DecomposedProof:
    """Decompose every displayed step and the closing equality.

    When the first displayed step only unfolds definitions in the goal's left
    side, the chain starts at that unfolded statement.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    ctx = script.context
    lhs, rhs = script.goal
    steps = list(script.steps)
    first = 0
    start = lhs
    if _starts_with_unfolding(script):
        start, first = steps[0].term, 1
    edges: list[Edge] = []
    origins: list[int] = []
    prev = start
    for idx in range(first, len(steps)):
        step = steps[idx]
        just = list(step.justification)
        closure = []
        if idx == len(steps) - 1 and step.term != rhs:
            k = _closure_split(prev, step.term, just, ctx, depth)
            just, closure = just[:k], just[k:]
        segments = [(prev, step.term, just, idx + 1)]
        if idx == len(steps) - 1 and step.term != rhs:
            segments.append((step.term, rhs, closure, len(steps) + 1))
        for src, dst, js, origin in segments:
            chain = _cached_chain(src, dst, tuple(js), ctx, budget, depth)
            if chain is None:
                where = "closure" if origin > len(steps) else f"step {origin}"
                raise DecompositionError(
                    f"{script.name}: {where} cannot be decomposed within budget {budget}", origin
                )
            edges += chain
            origins += [origin] * len(chain)
        prev = step.term
    if not steps and lhs != rhs:
        raise DecompositionError(f"{script.name}: no steps to decompose", 0)
    return DecomposedProof(script.name, ctx, script.goal_text[0], start, rhs, edges, origins)


_CHAIN_CACHE: dict = {}


def _cached_chain(src, dst, just, ctx, budget, depth):
    key = (src, dst, just, ctx, budget, depth)
    if key not in _CHAIN_CACHE:
        _CHAIN_CACHE[key] = decompose_justified(src, dst, just, ctx, budget, depth)
    return _CHAIN_CACHE[key]


# ---------------------------------------------------------------------------
# posets

POSET_RULES = ("L1", "L2", "L3", "L4", "M", "M1", "M2", "M3", "M4", "Def", "Other")


def poset_label(rule: str) -> str:
    """Column of the rule histogram a rule id falls under."""
    return rule if rule in POSET_RULES else "Other"


@dataclass(frozen=True)
class ProofPoset:
    """A chain: ``vertices[0] > vertices[1] > ...``, edge ``i`` labelled ``labels[i]``."""

    name: str
    vertices: tuple[str, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.vertices) != len(self.labels) + 1:
            raise ValueError("a chain has one more vertex than it has edges")

    @property
    def length(self) -> int:
        return len(self.vertices)

    @property
    def top(self) -> str:
        return self.vertices[0]

    @property
    def bottom(self) -> str:
        return self.vertices[-1]

    def covers(self) -> list[tuple[int, int, str]]:
        return [(i, i + 1, lab) for i, lab in enumerate(self.labels)]

    def export(self) -> str:
        """Vertex list followed by the cover list ``v_i > v_j : RULE``."""
        lines = [f"# proof poset of {self.name}: {self.length} vertices"]
        lines += [f"v{i} = {v}" for i, v in enumerate(self.vertices)]
        lines += [f"v{i} > v{j} : {lab}" for i, j, lab in self.covers()]
        return "\n".join(lines) + "\n"


def build_poset(d: DecomposedProof) -> ProofPoset:
    """One vertex per statement ``lhs = term``; the last vertex is the goal's right side."""
    vertices = [f"{d.lhs_text} = {format_term(t)}" for t in d.terms]
    return ProofPoset(d.name, tuple(vertices), tuple(poset_label(e.instance.rule) for e in d.edges))
