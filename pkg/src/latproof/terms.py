"""Lattice terms: representation, concrete syntax, positions and AC normal forms.

A term is either a variable ``Var(name)`` or a binary node ``Op(kind, left, right)``
where ``kind`` is :data:`MEET` or :data:`JOIN`.  Terms are plain named tuples, so
they are immutable, hashable and cheap to compare.

Concrete syntax uses ``/\\`` for meet and ``\\/`` for join (the Unicode symbols
``∧`` and ``∨`` are accepted too).  Mixing the two operators at one grouping
level is rejected; a chain of a single operator is read left-associatively.
"""

from __future__ import annotations

import re
from functools import lru_cache, reduce
from typing import Iterator, NamedTuple, Union

MEET = "meet"
JOIN = "join"

SYMBOL = {MEET: "/\\", JOIN: "\\/"}
DUAL = {MEET: JOIN, JOIN: MEET}

IDENT_RE = re.compile(r"[a-z][a-z0-9_]*\Z")

Position = tuple  # of 1 (left) / 2 (right); () is the root


class Var(NamedTuple):
    name: str


class Op(NamedTuple):
    kind: str
    left: "Term"
    right: "Term"


Term = Union[Var, Op]


class TermSyntaxError(ValueError):
    """Raised by :func:`parse_term` with a 1-based line and column."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class PositionError(IndexError):
    pass


def meet(a: Term, b: Term) -> Op:
    return Op(MEET, a, b)


def join(a: Term, b: Term) -> Op:
    return Op(JOIN, a, b)


def is_var(t: Term) -> bool:
    return type(t) is Var


# ---------------------------------------------------------------------------
# parsing

_OPEN = {"(": ")", "[": "]", "{": "}"}
_CLOSE = set(_OPEN.values())
_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<ident>[a-z][a-z0-9_]*)|(?P<meet>/\\|∧)|(?P<join>\\/|∨)"
    r"|(?P<open>[(\[{])|(?P<close>[)\]}])"
)


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    tokens = []
    line, line_start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise TermSyntaxError(f"unexpected character {text[i]!r}", line, i - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            for j, ch in enumerate(m.group(), start=i):
                if ch == "\n":
                    line, line_start = line + 1, j + 1
        else:
            tokens.append((kind, m.group(), line, i - line_start + 1))
        i = m.end()
    tokens.append(("end", "", line, i - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def term(self) -> Term:
        result = self.atom()
        kind = None
        while self.peek()[0] in (MEET, JOIN):
            tok_kind, _, line, col = self.take()
            if kind is not None and tok_kind != kind:
                raise TermSyntaxError(
                    "ambiguous mixed operators without grouping", line, col
                )
            kind = tok_kind
            result = Op(kind, result, self.atom())
        return result

    def atom(self) -> Term:
        kind, text, line, col = self.take()
        if kind == "ident":
            return Var(text)
        if kind == "open":
            inner = self.term()
            close_kind, close_text, cl, cc = self.take()
            if close_kind != "close":
                if close_kind == "end":
                    raise TermSyntaxError(f"unbalanced {text!r}: missing {_OPEN[text]!r}", line, col)
                raise TermSyntaxError(f"expected {_OPEN[text]!r}", cl, cc)
            if close_text != _OPEN[text]:
                raise TermSyntaxError(
                    f"mismatched grouping: {text!r} closed by {close_text!r}", cl, cc
                )
            return inner
        if kind == "end":
            if self.i == 1:
                raise TermSyntaxError("empty input", line, col)
            raise TermSyntaxError("unexpected end of input", line, col)
        if kind == "close":
            raise TermSyntaxError(f"unbalanced {text!r}", line, col)
        raise TermSyntaxError(f"expected a variable or group, got {text!r}", line, col)


def parse_term(text: str) -> Term:
    """Parse concrete syntax into a term.

    >>> parse_term("(d /\\\\ e) \\\\/ f")
    Op(kind='join', left=Op(kind='meet', left=Var(name='d'), right=Var(name='e')), right=Var(name='f'))
    """
    parser = _Parser(text)
    t = parser.term()
    kind, tok, line, col = parser.peek()
    if kind != "end":
        if kind == "close":
            raise TermSyntaxError(f"unbalanced {tok!r}", line, col)
        raise TermSyntaxError(f"unexpected {tok!r}", line, col)
    return t


# ---------------------------------------------------------------------------
# printing


def format_term(t: Term) -> str:
    if type(t) is Var:
        return t.name
    return f"{_format_child(t.left)} {SYMBOL[t.kind]} {_format_child(t.right)}"


def _format_child(t: Term) -> str:
    return t.name if type(t) is Var else f"({format_term(t)})"


# ---------------------------------------------------------------------------
# structure


def size(t: Term) -> int:
    """Number of nodes."""
    if type(t) is Var:
        return 1
    return 1 + size(t.left) + size(t.right)


def depth(t: Term) -> int:
    if type(t) is Var:
        return 0
    return 1 + max(depth(t.left), depth(t.right))


def variables(t: Term) -> frozenset[str]:
    if type(t) is Var:
        return frozenset((t.name,))
    return variables(t.left) | variables(t.right)


def positions(t: Term, prefix: Position = ()) -> Iterator[Position]:
    """All positions of ``t`` in preorder (root first, then left, then right)."""
    yield prefix
    if type(t) is Op:
        yield from positions(t.left, prefix + (1,))
        yield from positions(t.right, prefix + (2,))


def subterms(t: Term) -> Iterator[tuple[Position, Term]]:
    stack = [((), t)]
    while stack:
        pos, s = stack.pop()
        yield pos, s
        if type(s) is Op:
            stack.append((pos + (2,), s.right))
            stack.append((pos + (1,), s.left))


def subterm_at(t: Term, pos: Position) -> Term:
    for step in pos:
        if type(t) is not Op or step not in (1, 2):
            raise PositionError(f"position {format_position(pos)} out of range")
        t = t.left if step == 1 else t.right
    return t


def replace_at(t: Term, pos: Position, s: Term) -> Term:
    if not pos:
        return s
    if type(t) is not Op or pos[0] not in (1, 2):
        raise PositionError(f"position {format_position(pos)} out of range")
    if pos[0] == 1:
        return Op(t.kind, replace_at(t.left, pos[1:], s), t.right)
    return Op(t.kind, t.left, replace_at(t.right, pos[1:], s))


def format_position(pos: Position) -> str:
    return "[" + ".".join(str(i) for i in pos) + "]"


def parse_position(text: str) -> Position:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"malformed position {text!r}")
    body = text[1:-1].strip()
    if not body:
        return ()
    parts = body.split(".")
    if any(p.strip() not in ("1", "2") for p in parts):
        raise ValueError(f"malformed position {text!r}")
    return tuple(int(p) for p in parts)


def substitute(t: Term, bindings: dict) -> Term:
    """Replace variables by terms (simultaneously)."""
    if type(t) is Var:
        return bindings.get(t.name, t)
    return Op(t.kind, substitute(t.left, bindings), substitute(t.right, bindings))


# ---------------------------------------------------------------------------
# associativity / commutativity


def chain_args(t: Term, kind: str) -> list[Term]:
    """Arguments of the maximal ``kind``-chain rooted at ``t``, left to right."""
    if type(t) is Op and t.kind == kind:
        return chain_args(t.left, kind) + chain_args(t.right, kind)
    return [t]


@lru_cache(maxsize=1 << 16)
def ac_canonical(t: Term) -> Term:
    """Normal form modulo associativity and commutativity only.

    Maximal same-operator chains are flattened, their arguments normalized and
    sorted by printed form, then re-associated to the left.  Idempotency and
    absorption are deliberately not applied.
    """
    if type(t) is Var:
        return t
    args = sorted((ac_canonical(a) for a in chain_args(t, t.kind)), key=format_term)
    return reduce(lambda acc, a: Op(t.kind, acc, a), args)


def equal_mod_ac(s: Term, t: Term) -> bool:
    return s == t or ac_canonical(s) == ac_canonical(t)


# Flat forms: (0, name) for a variable, (1, kind, args) for an AC chain whose
# sorted args tuple has at least two entries and none of the same kind.


@lru_cache(maxsize=1 << 16)
def flatten(t: Term) -> tuple:
    if type(t) is Var:
        return (0, t.name)
    return make_flat(t.kind, [flatten(a) for a in chain_args(t, t.kind)])


def make_flat(kind: str, args) -> tuple:
    """Build a normalized flat node from possibly nested flat arguments."""
    out = []
    for a in args:
        if a[0] == 1 and a[1] == kind:
            out.extend(a[2])
        else:
            out.append(a)
    if len(out) == 1:
        return out[0]
    out.sort()
    return (1, kind, tuple(out))


def unflatten(f: tuple) -> Term:
    if f[0] == 0:
        return Var(f[1])
    return reduce(lambda acc, a: Op(f[1], acc, unflatten(a)), f[2][1:], unflatten(f[2][0]))


def flat_size(f: tuple) -> int:
    if f[0] == 0:
        return 1
    return len(f[2]) - 1 + sum(flat_size(a) for a in f[2])
