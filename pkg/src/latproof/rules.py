"""The basic rewrite rules and their application to terms.

Rule identifiers, as used in proof scripts and reports::

    L1 associativity    L2 commutativity    L3 idempotency    L4 absorption
    M, M1..M4           modular law and its commuted forms (and their duals)
    Def                 replace a defined name by its body, or back
    Order               s \\/ t -> t and s /\\ t -> s when s <= t

Every rule has a forward and a reverse direction.  Reverse instances of
L3, L4 and Order introduce material that is not in the source term, so their
bindings must be supplied by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .context import Context, OrderFact
from .order import DEFAULT_DEPTH, M_FAMILY, Derivation, check_side_condition
from .terms import (
    DUAL,
    JOIN,
    MEET,
    Op,
    Position,
    Term,
    Var,
    format_position,
    format_term,
    parse_term,
    positions,
    replace_at,
    subterm_at,
    substitute,
    variables,
)

RULE_IDS = ("L1", "L2", "L3", "L4", "M", "M1", "M2", "M3", "M4", "Def", "Order")
AC_RULES = frozenset({"L1", "L2"})

FORWARD = "forward"
REVERSE = "reverse"


class RuleError(ValueError):
    pass


class NoMatchError(RuleError):
    pass


class SideConditionError(RuleError):
    pass


class UnknownDefinitionError(RuleError):
    pass


@dataclass(frozen=True)
class RuleSchema:
    rule: str
    variant: str
    direction: str
    lhs: Term
    rhs: Term
    side: tuple[str, str] | None = None  # (smaller, larger) schema variables

    @cached_property
    def lhs_vars(self) -> frozenset[str]:
        return variables(self.lhs)

    @cached_property
    def introduced(self) -> tuple[str, ...]:
        """Variables of the right side that the left side does not bind."""
        return tuple(sorted(variables(self.rhs) - self.lhs_vars))

    def describe(self) -> str:
        text = f"{self.rule} ({self.variant}, {self.direction}): {format_term(self.lhs)} ~> {format_term(self.rhs)}"
        if self.side:
            text += f"  if {self.side[0]} <= {self.side[1]}"
        return text


def dual_term(t: Term) -> Term:
    if type(t) is Var:
        return t
    return Op(DUAL[t.kind], dual_term(t.left), dual_term(t.right))


_M_PRIMAL = {
    "M": ("a /\\ (b \\/ c)", "(a /\\ b) \\/ c"),
    "M1": ("a /\\ (c \\/ b)", "(a /\\ b) \\/ c"),
    "M2": ("(b \\/ c) /\\ a", "(a /\\ b) \\/ c"),
    "M3": ("(b /\\ a) \\/ c", "a /\\ (b \\/ c)"),
    "M4": ("c \\/ (a /\\ b)", "a /\\ (b \\/ c)"),
}


def _both_ways(rule, variant, lhs, rhs, side=None, symmetric=False):
    lhs, rhs = parse_term(lhs) if isinstance(lhs, str) else lhs, parse_term(rhs) if isinstance(rhs, str) else rhs
    out = [RuleSchema(rule, variant, FORWARD, lhs, rhs, side)]
    if not symmetric:
        out.append(RuleSchema(rule, variant, REVERSE, rhs, lhs, side))
    return out


def _build_catalog() -> tuple[RuleSchema, ...]:
    out: list[RuleSchema] = []
    for kind in (MEET, JOIN):
        o = "/\\" if kind == MEET else "\\/"
        out += _both_ways("L1", kind, f"a {o} (b {o} c)", f"(a {o} b) {o} c")
    for kind in (MEET, JOIN):
        o = "/\\" if kind == MEET else "\\/"
        out += _both_ways("L2", kind, f"a {o} b", f"b {o} a", symmetric=True)
    for kind in (MEET, JOIN):
        o = "/\\" if kind == MEET else "\\/"
        out += _both_ways("L3", kind, f"x {o} x", "x")
    out += _both_ways("L4", MEET, "x /\\ (x \\/ y)", "x")
    out += _both_ways("L4", JOIN, "x \\/ (x /\\ y)", "x")
    for rule, (lhs, rhs) in _M_PRIMAL.items():
        out += _both_ways(rule, "primal", lhs, rhs, ("c", "a"))
        out += _both_ways(
            rule, "dual", dual_term(parse_term(lhs)), dual_term(parse_term(rhs)), ("a", "c")
        )
    out += _both_ways("Def", "def", "n", "n_body")
    out += _both_ways("Order", JOIN, "x \\/ y", "y", ("x", "y"))
    out += _both_ways("Order", MEET, "x /\\ y", "x", ("x", "y"))
    return tuple(out)


CATALOG = _build_catalog()
_BY_RULE: dict[str, list[RuleSchema]] = {}
for _s in CATALOG:
    _BY_RULE.setdefault(_s.rule, []).append(_s)


def rule_schemas() -> list[RuleSchema]:
    """The static rule catalog.

    ``Def`` appears with placeholder schemas ``n ~> n_body``; its real content
    comes from the definitions of a :class:`Context`.
    """
    return list(CATALOG)


def schemas_for(rule: str, variant: str | None = None, direction: str | None = None):
    if rule not in _BY_RULE:
        raise RuleError(f"unknown rule {rule!r}")
    return [
        s
        for s in _BY_RULE[rule]
        if (variant is None or s.variant == variant) and (direction is None or s.direction == direction)
    ]


@dataclass(frozen=True)
class RuleInstance:
    """One rule with a direction, a position and bindings for its schema variables.

    ``position=None`` means "anywhere" (the first match in preorder is used);
    ``variant=None`` lets the matcher pick the operator kind / primal or dual
    form.  ``name`` is the defined symbol for ``Def``.
    """

    rule: str
    direction: str = FORWARD
    position: Position | None = ()
    bindings: tuple[tuple[str, Term], ...] = ()
    variant: str | None = None
    name: str | None = None

    @classmethod
    def make(cls, rule: str, position: Position | None = (), direction: str = FORWARD,
             variant: str | None = None, name: str | None = None, **bindings: Term) -> "RuleInstance":
        if rule not in RULE_IDS:
            raise RuleError(f"unknown rule {rule!r}")
        return cls(rule, direction, position, tuple(sorted(bindings.items())), variant, name)

    @property
    def binding(self) -> dict[str, Term]:
        return dict(self.bindings)

    @property
    def fact(self) -> OrderFact | None:
        if self.rule != "Order":
            return None
        b = self.binding
        return OrderFact(b["x"], b["y"]) if "x" in b and "y" in b else None

    @property
    def is_modular(self) -> bool:
        return self.rule in M_FAMILY

    def at(self, position: Position | None) -> "RuleInstance":
        return replace(self, position=position)

    def inverse(self) -> "RuleInstance":
        if self.rule == "L2":
            b = self.binding
            swapped = {"a": b["b"], "b": b["a"]} if "a" in b and "b" in b else b
            return replace(self, bindings=tuple(sorted(swapped.items())))
        flipped = REVERSE if self.direction == FORWARD else FORWARD
        return replace(self, direction=flipped)

    def format(self) -> str:
        """Justification syntax for proof scripts."""
        pos = "" if self.position is None else f" at {format_position(self.position)}"
        rev = " rev" if self.direction == REVERSE and self.rule != "L2" else ""
        if self.rule == "Def":
            way = "fold" if self.direction == REVERSE else "unfold"
            return f"Def {self.name}{pos} {way}"
        if self.rule == "Order":
            b = self.binding
            return f"Order {format_term(b['x'])} <= {format_term(b['y'])}{rev}{pos}"
        text = f"{self.rule}{rev}{pos}"
        if self.bindings:
            text += " with " + ", ".join(f"{k} := {format_term(v)}" for k, v in self.bindings)
        return text

    def __str__(self) -> str:
        return self.format()


def match(pattern: Term, t: Term, bindings: dict | None = None) -> dict | None:
    """Node-exact first-order matching of a schema against a term."""
    b = dict(bindings) if bindings else {}
    stack = [(pattern, t)]
    while stack:
        p, s = stack.pop()
        if type(p) is Var:
            bound = b.get(p.name)
            if bound is None:
                b[p.name] = s
            elif bound != s:
                return None
        elif type(s) is not Op or s.kind != p.kind:
            return None
        else:
            stack.append((p.right, s.right))
            stack.append((p.left, s.left))
    return b


@dataclass(frozen=True)
class Firing:
    """A fully determined rule application: the instance, its result, and the
    derivation of its side condition when it has one."""

    instance: RuleInstance
    result: Term
    derivation: Derivation | None = None


def _def_firings(t, sub, pos, inst, ctx):
    names = [inst.name] if inst.name else [n for n, _ in ctx.definitions]
    for name in names:
        if name not in ctx.defs:
            continue
        body = ctx.defs[name]
        if inst.direction == FORWARD and sub == Var(name):
            out = body
        elif inst.direction == REVERSE and sub == body:
            out = Var(name)
        else:
            continue
        yield Firing(RuleInstance("Def", inst.direction, pos, (), "def", name), replace_at(t, pos, out))


def fire(t: Term, inst: RuleInstance, ctx: Context, pool: Sequence[Term] = (),
         depth: int = DEFAULT_DEPTH, check_side: bool = True) -> Iterator[Firing]:
    """All ways ``inst`` applies to ``t``.

    Bindings already present in ``inst`` constrain the match.  Variables that
    only occur on the right-hand side are taken from ``inst`` or, failing
    that, from ``pool``.
    """
    where = positions(t) if inst.position is None else [inst.position]
    for pos in where:
        sub = subterm_at(t, pos)
        if inst.rule == "Def":
            yield from _def_firings(t, sub, pos, inst, ctx)
            continue
        for schema in schemas_for(inst.rule, inst.variant, inst.direction):
            b = match(schema.lhs, sub, inst.binding)
            if b is None:
                continue
            for full in _complete(b, schema.introduced, pool):
                deriv = None
                fired = RuleInstance(inst.rule, schema.direction, pos,
                                     tuple(sorted((k, full[k]) for k in variables(schema.lhs) | variables(schema.rhs))),
                                     schema.variant)
                if schema.side and check_side:
                    deriv = check_side_condition(ctx, fired, depth)
                    if deriv is None:
                        continue
                yield Firing(fired, replace_at(t, pos, substitute(schema.rhs, full)), deriv)


def _complete(b: dict, introduced: tuple[str, ...], pool: Sequence[Term]):
    missing = [v for v in introduced if v not in b]
    if not missing:
        yield b
        return
    if len(missing) > 1:
        return
    for candidate in pool:
        yield {**b, missing[0]: candidate}


def apply_rule(t: Term, inst: RuleInstance, ctx: Context, depth: int = DEFAULT_DEPTH) -> Term:
    """Apply ``inst`` at its position; errors say why it does not fire."""
    if inst.rule == "Def" and inst.name and inst.name not in ctx.defs:
        raise UnknownDefinitionError(f"{inst.name} is not defined")
    for firing in fire(t, inst, ctx, depth=depth):
        return firing.result
    unchecked = next(fire(t, inst, ctx, check_side=False), None)
    if unchecked is not None:
        raise SideConditionError(
            f"side condition of {inst.rule} not derivable for {unchecked.instance.format()}"
        )
    where = "anywhere" if inst.position is None else f"at {format_position(inst.position)}"
    raise NoMatchError(f"{inst.rule} does not match {where} in {format_term(t)}")


def enumerate_rewrites(t: Term, ctx: Context, rules: Iterable[str] = RULE_IDS,
                       pool: Sequence[Term] = (), depth: int = DEFAULT_DEPTH) -> list[tuple[RuleInstance, Term]]:
    """Every single-rule successor of ``t``, position-major then rule-id order.

    Reverse L4 and Order instances need a term from ``pool`` for the material
    they introduce; with an empty pool they are not generated.
    """
    allowed = set(rules)
    unknown = allowed - set(RULE_IDS)
    if unknown:
        raise RuleError(f"unknown rule(s): {', '.join(sorted(unknown))}")
    seen: set = set()
    out = []
    for pos in positions(t):
        for rule in RULE_IDS:
            if rule not in allowed:
                continue
            for direction in (FORWARD, REVERSE):
                if rule == "L2" and direction == REVERSE:
                    continue
                inst = RuleInstance(rule, direction, pos)
                for firing in fire(t, inst, ctx, pool, depth):
                    if firing.result not in seen:
                        seen.add(firing.result)
                        out.append((firing.instance, firing.result))
    return out


def ground_rewrites(inst: RuleInstance, ctx: Context) -> list[tuple[RuleSchema | None, Term, Term]]:
    """Instantiate both sides of every schema ``inst`` can denote.

    Used by the modulo-AC (lenient) checker: the instance must bind every
    schema variable.  Returns ``(schema, lhs, rhs)`` triples.
    """
    if inst.rule == "Def":
        if inst.name not in ctx.defs:
            raise UnknownDefinitionError(f"{inst.name} is not defined")
        name, body = Var(inst.name), ctx.defs[inst.name]
        pair = (name, body) if inst.direction == FORWARD else (body, name)
        return [(None, *pair)]
    out = []
    b = inst.binding
    for schema in schemas_for(inst.rule, inst.variant, inst.direction):
        needed = variables(schema.lhs) | variables(schema.rhs)
        if not needed <= b.keys():
            continue
        out.append((schema, substitute(schema.lhs, b), substitute(schema.rhs, b)))
    if not out:
        raise RuleError(f"{inst.rule} needs bindings for all of its schema variables")
    return out
