"""Definitions and standing order hypotheses shared by a proof."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .terms import Term, Var, format_term, parse_term, variables


@dataclass(frozen=True)
class OrderFact:
    """``lhs <= rhs`` (or ``lhs < rhs`` when ``strict``)."""

    lhs: Term
    rhs: Term
    strict: bool = False

    def weaken(self) -> "OrderFact":
        return OrderFact(self.lhs, self.rhs, False)

    def __str__(self) -> str:
        rel = "<" if self.strict else "<="
        return f"{format_term(self.lhs)} {rel} {format_term(self.rhs)}"


class ContextError(ValueError):
    pass


@dataclass(frozen=True)
class Context:
    """Ordered definitions ``name := body`` plus hypotheses.

    A body may only mention plain variables and names defined before it.
    """

    definitions: tuple[tuple[str, Term], ...] = ()
    hypotheses: tuple[OrderFact, ...] = ()

    def __post_init__(self):
        seen: set[str] = set()
        for name, body in self.definitions:
            if name in seen:
                raise ContextError(f"{name} defined twice")
            later = {n for n, _ in self.definitions} - seen
            bad = variables(body) & (later | {name})
            if bad:
                raise ContextError(
                    f"definition of {name} refers to {', '.join(sorted(bad))} "
                    "which is not defined before it"
                )
            seen.add(name)

    @classmethod
    def build(cls, definitions: Mapping[str, Term] | Iterable[tuple[str, Term]] = (),
              hypotheses: Iterable[OrderFact] = ()) -> "Context":
        items = definitions.items() if isinstance(definitions, Mapping) else definitions
        return cls(tuple(items), tuple(hypotheses))

    @cached_property
    def defs(self) -> dict[str, Term]:
        return dict(self.definitions)

    def body(self, name: str) -> Term:
        return self.defs[name]

    def is_defined(self, name: str) -> bool:
        return name in self.defs

    def expand(self, t: Term) -> Term:
        """Unfold every defined name, recursively, down to plain variables."""
        if type(t) is Var:
            if t.name in self.defs:
                return self.expand(self.defs[t.name])
            return t
        return type(t)(t.kind, self.expand(t.left), self.expand(t.right))

    def free_variables(self, *terms: Term) -> list[str]:
        names: set[str] = set()
        for t in terms:
            names |= variables(self.expand(t))
        return sorted(names)


# p, q, u, v, w of the M3 construction, over the witness triple d, e, f.
M3_DEFINITIONS = (
    ("p", "(d /\\ e) \\/ (e /\\ f) \\/ (f /\\ d)"),
    ("q", "(d \\/ e) /\\ (e \\/ f) /\\ (f \\/ d)"),
    ("u", "(d /\\ q) \\/ p"),
    ("v", "(e /\\ q) \\/ p"),
    ("w", "(f /\\ q) \\/ p"),
)


def m3_context() -> Context:
    """The five definitions over ``d, e, f`` and the hypothesis ``p < q``."""
    return Context(
        tuple((name, parse_term(text)) for name, text in M3_DEFINITIONS),
        (OrderFact(Var("p"), Var("q"), strict=True),),
    )
