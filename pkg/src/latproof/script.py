"""Proof scripts: file format, parser, printer and step-by-step verifier.

A script is line oriented; ``#`` starts a comment::

    proof proof1
    def p := (d /\\ e) \\/ (e /\\ f) \\/ (f /\\ d)
    hyp p < q
    goal u /\\ v = p
    step ((d /\\ q) \\/ p) /\\ ((e /\\ q) \\/ p) by Def u unfold; Def v unfold
    step ... by M2 with a := (e /\\ q) \\/ p, b := d /\\ q, c := p
    qed

Justifications (separated by ``;``)::

    RULE [rev] [at [1.2]] [with a := <term>, b := <term>, ...]
    Def NAME [at [1.2]] [fold|unfold]
    Order <term> <= <term> [rev] [at [1.2]]
    compound RULE RULE ...

``at``, ``with``, ``by`` and ``rev`` are keywords and cannot be variable names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

from .context import Context, ContextError, OrderFact
from .order import DEFAULT_DEPTH, M_FAMILY, Derivation, check_side_condition
from .rules import (
    AC_RULES,
    FORWARD,
    REVERSE,
    RULE_IDS,
    Firing,
    RuleError,
    RuleInstance,
    fire,
    ground_rewrites,
    schemas_for,
)
from .terms import (
    Term,
    TermSyntaxError,
    flatten,
    format_term,
    make_flat,
    parse_position,
    parse_term,
    variables,
)

LENIENT = "lenient"
STRICT = "strict"


class ScriptSyntaxError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass(frozen=True)
class Compound:
    """A justification that only names the rules involved."""

    rules: tuple[str, ...]

    rule = "compound"

    def format(self) -> str:
        return "compound " + " ".join(self.rules)


@dataclass(frozen=True)
class Step:
    term: Term
    text: str
    justification: tuple[RuleInstance | Compound, ...]
    line: int = 0


@dataclass(frozen=True)
class ProofScript:
    name: str
    context: Context
    goal: tuple[Term, Term]
    goal_text: tuple[str, str]
    steps: tuple[Step, ...]
    comments: tuple[str, ...] = ()

    def display_rows(self) -> list[str]:
        """The proof as displayed: one row per step, the goal's left side on the
        first row and the closing ``= rhs`` merged onto the last row."""
        lhs, rhs = self.goal_text
        if not self.steps:
            return [f"{lhs} = {rhs}"]
        rows = [f"{lhs} = {self.steps[0].text}"] + [f"= {s.text}" for s in self.steps[1:]]
        if self.steps[-1].term != self.goal[1]:
            rows[-1] += f" = {rhs}"
        return rows

    def format(self) -> str:
        lines = [f"# {c}" for c in self.comments]
        lines.append(f"proof {self.name}")
        for name, body in self.context.definitions:
            lines.append(f"def {name} := {format_term(body)}")
        for h in self.context.hypotheses:
            lines.append(f"hyp {h}")
        lines.append(f"goal {self.goal_text[0]} = {self.goal_text[1]}")
        for s in self.steps:
            just = "; ".join(j.format() for j in s.justification)
            lines.append(f"step {s.text} by {just}")
        lines.append("qed")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parsing

_IDENT = re.compile(r"[a-z][a-z0-9_]*\Z")
_POS = r"\[[0-9.\s]*\]"
_RULE_RE = re.compile(
    rf"(?P<rule>[A-Za-z][A-Za-z0-9]*)(?P<rev>\s+rev)?(?:\s+at\s+(?P<pos>{_POS}))?(?:\s+with\s+(?P<with>.+))?\Z"
)
_DEF_RE = re.compile(
    rf"Def\s+(?P<name>[a-z][a-z0-9_]*)(?:\s+at\s+(?P<pos>{_POS}))?(?:\s+(?P<way>fold|unfold))?\Z"
)
_ORDER_RE = re.compile(rf"Order\s+(?P<body>.+?)(?P<rev>\s+rev)?(?:\s+at\s+(?P<pos>{_POS}))?\Z")


def _term(text: str, line: int) -> Term:
    try:
        return parse_term(text)
    except TermSyntaxError as exc:
        raise ScriptSyntaxError(f"{exc.message} in {text.strip()!r}", line) from None


def _position(text: str | None, line: int):
    if text is None:
        return None
    try:
        return parse_position(text)
    except ValueError as exc:
        raise ScriptSyntaxError(str(exc), line) from None


def parse_justification(text: str, line: int = 0) -> RuleInstance | Compound:
    text = " ".join(text.split())
    if not text:
        raise ScriptSyntaxError("empty justification", line)
    head = text.split()[0]
    if head == "compound":
        rules = tuple(text.split()[1:])
        for r in rules:
            if r not in RULE_IDS:
                raise ScriptSyntaxError(f"unknown rule id {r!r}", line)
        if not rules:
            raise ScriptSyntaxError("compound needs at least one rule id", line)
        return Compound(rules)
    if head == "Def":
        m = _DEF_RE.match(text)
        if not m:
            raise ScriptSyntaxError(f"malformed Def justification {text!r}", line)
        direction = REVERSE if m["way"] == "fold" else FORWARD
        return RuleInstance("Def", direction, _position(m["pos"], line), (), None, m["name"])
    if head == "Order":
        m = _ORDER_RE.match(text)
        if not m or "<=" not in m["body"]:
            raise ScriptSyntaxError(f"malformed Order justification {text!r}", line)
        small, large = m["body"].split("<=", 1)
        direction = REVERSE if m["rev"] else FORWARD
        return RuleInstance.make("Order", _position(m["pos"], line), direction,
                                 x=_term(small, line), y=_term(large, line))
    m = _RULE_RE.match(text)
    if not m:
        raise ScriptSyntaxError(f"malformed justification {text!r}", line)
    rule = m["rule"]
    if rule not in RULE_IDS:
        raise ScriptSyntaxError(f"unknown rule id {rule!r}", line)
    bindings = {}
    if m["with"]:
        allowed = set()
        for s in schemas_for(rule):
            allowed |= variables(s.lhs) | variables(s.rhs)
        for part in m["with"].split(","):
            if ":=" not in part:
                raise ScriptSyntaxError(f"malformed binding {part.strip()!r}", line)
            var, value = (x.strip() for x in part.split(":=", 1))
            if var not in allowed:
                raise ScriptSyntaxError(
                    f"malformed binding: {rule} has no schema variable {var!r}", line
                )
            if var in bindings:
                raise ScriptSyntaxError(f"malformed binding: {var} bound twice", line)
            bindings[var] = _term(value, line)
    direction = REVERSE if m["rev"] and rule != "L2" else FORWARD
    return RuleInstance.make(rule, _position(m["pos"], line), direction, **bindings)


def parse_script(text: str) -> ProofScript:
    name = None
    defs: list[tuple[str, Term]] = []
    hyps: list[OrderFact] = []
    goal = goal_text = None
    steps: list[Step] = []
    comments: list[str] = []
    closed = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if raw.strip().startswith("#") and name is None:
            comments.append(raw.strip()[1:].strip())
        if not line:
            continue
        if closed:
            raise ScriptSyntaxError("content after qed", lineno)
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "proof":
            if name is not None:
                raise ScriptSyntaxError("second proof header", lineno)
            if not _IDENT.match(rest):
                raise ScriptSyntaxError(f"malformed proof name {rest!r}", lineno)
            name = rest
        elif keyword == "def":
            dname, sep, body = rest.partition(":=")
            dname = dname.strip()
            if not sep or not _IDENT.match(dname):
                raise ScriptSyntaxError("expected 'def <name> := <term>'", lineno)
            defs.append((dname, _term(body, lineno)))
        elif keyword == "hyp":
            m = re.match(r"(?P<l>.+?)\s*(?P<rel><=|<)\s*(?P<r>[^<=]+)\Z", rest)
            if not m:
                raise ScriptSyntaxError("expected 'hyp <term> <= <term>'", lineno)
            hyps.append(OrderFact(_term(m["l"], lineno), _term(m["r"], lineno), m["rel"] == "<"))
        elif keyword == "goal":
            if goal is not None:
                raise ScriptSyntaxError("second goal", lineno)
            lhs, sep, rhs = rest.partition("=")
            if not sep:
                raise ScriptSyntaxError("expected 'goal <term> = <term>'", lineno)
            goal_text = (lhs.strip(), rhs.strip())
            goal = (_term(lhs, lineno), _term(rhs, lineno))
        elif keyword == "step":
            if goal is None:
                raise ScriptSyntaxError("step before goal", lineno)
            term_text, sep, just = rest.partition(" by ")
            if not sep:
                raise ScriptSyntaxError("expected 'step <term> by <justification>'", lineno)
            justs = tuple(parse_justification(j, lineno) for j in just.split(";"))
            steps.append(Step(_term(term_text, lineno), term_text.strip(), justs, lineno))
        elif keyword == "qed":
            closed = True
        else:
            raise ScriptSyntaxError(f"unknown keyword {keyword!r}", lineno)
    if name is None:
        raise ScriptSyntaxError("missing 'proof' line")
    if goal is None:
        raise ScriptSyntaxError("missing 'goal' line")
    try:
        ctx = Context(tuple(defs), tuple(hyps))
    except ContextError as exc:
        raise ScriptSyntaxError(str(exc)) from None
    return ProofScript(name, ctx, goal, goal_text, tuple(steps), tuple(comments))


# ---------------------------------------------------------------------------
# verification

RULE_MISMATCH = "rule-mismatch"
SIDE_CONDITION = "side-condition-unproven"
RESIDUAL = "residual-difference"


@dataclass
class StepRecord:
    index: int
    status: str
    fired: list[tuple[RuleInstance, Derivation | None]] = field(default_factory=list)
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass
class VerificationReport:
    name: str
    mode: str
    steps: list[StepRecord]

    @property
    def accepted(self) -> bool:
        return all(s.ok for s in self.steps)

    @property
    def verdict(self) -> str:
        return "accepted" if self.accepted else "rejected"

    @property
    def failures(self) -> list[StepRecord]:
        return [s for s in self.steps if not s.ok]

    def modular_firings(self) -> int:
        return sum(1 for s in self.steps for inst, _ in s.fired if inst.rule in M_FAMILY)

    def format(self) -> str:
        lines = [f"{self.name}: {self.verdict} ({self.mode})"]
        for s in self.steps:
            rules = ", ".join(i.rule for i, _ in s.fired) or "-"
            line = f"  step {s.index}: {s.status} [{rules}]"
            if s.message:
                line += f" {s.message}"
            lines.append(line)
        return "\n".join(lines)


class _StepFailure(Exception):
    def __init__(self, status: str, message: str):
        super().__init__(message)
        self.status = status


def _strict_pair(src: Term, dst: Term, inst, ctx: Context, depth: int):
    if isinstance(inst, Compound):
        raise _StepFailure(RULE_MISMATCH, "compound justification in strict mode")
    for firing in fire(src, inst, ctx, depth=depth):
        if firing.result == dst:
            return firing
    raise _StepFailure(
        RULE_MISMATCH, f"{inst.format()} does not rewrite {format_term(src)} to {format_term(dst)}"
    )


def _strict_step(src, dst, rhs, just, final, ctx, depth):
    need_close = final and dst != rhs
    if len(just) != (2 if need_close else 1):
        raise _StepFailure(RULE_MISMATCH, "strict steps carry exactly one rule")
    fired = [_strict_pair(src, dst, just[0], ctx, depth)]
    if need_close:
        fired.append(_strict_pair(dst, rhs, just[1], ctx, depth))
    return [(f.instance, f.derivation) for f in fired]


def _ac_rewrite(f: tuple, lhs: tuple, rhs: tuple) -> list[tuple]:
    """All results of rewriting one occurrence of ``lhs`` in ``f`` modulo AC."""
    out = []
    if f == lhs:
        out.append(rhs)
    if f[0] == 1:
        kind, args = f[1], f[2]
        if lhs[0] == 1 and lhs[1] == kind and len(lhs[2]) < len(args):
            rest = list(args)
            for a in lhs[2]:
                if a in rest:
                    rest.remove(a)
                else:
                    rest = None
                    break
            if rest is not None:
                out.append(make_flat(kind, rest + [rhs]))
        for i, a in enumerate(args):
            if i and args[i - 1] == a:
                continue
            for a2 in _ac_rewrite(a, lhs, rhs):
                out.append(make_flat(kind, list(args[:i]) + [a2] + list(args[i + 1:])))
    return out


def _ac_fire(states: set, inst, ctx: Context, depth: int):
    """Apply one cited instance modulo AC to every state."""
    if isinstance(inst, Compound) or inst.rule in AC_RULES:
        return states, None
    try:
        pairs = ground_rewrites(inst, ctx)
    except RuleError as exc:
        raise _StepFailure(RULE_MISMATCH, str(exc)) from None
    usable, derivation, side_failed = [], None, False
    for schema, lhs, rhs in pairs:
        if schema is not None and schema.side:
            d = check_side_condition(ctx, RuleInstance(inst.rule, inst.direction, None,
                                                       inst.bindings, schema.variant), depth)
            if d is None:
                side_failed = True
                continue
            derivation = derivation or d
        usable.append((flatten(lhs), flatten(rhs)))
    if not usable and side_failed:
        raise _StepFailure(SIDE_CONDITION, f"side condition of {inst.format()} not derivable")
    out = set()
    for st in states:
        for lhs, rhs in usable:
            out.update(_ac_rewrite(st, lhs, rhs))
    if not out:
        raise _StepFailure(RULE_MISMATCH, f"{inst.format()} does not apply (modulo AC)")
    return out, derivation


def _compound_ok(src: Term, dst: Term, comp: Compound, ctx: Context) -> bool:
    from .decompose import DEFAULT_BUDGET, decompose_step

    allowed = set(comp.rules) | AC_RULES
    return decompose_step(src, dst, allowed, ctx, DEFAULT_BUDGET) is not None


def _lenient_step(src, dst, rhs, just, final, ctx, depth):
    need_close = final and flatten(dst) != flatten(rhs)
    target = flatten(dst)
    states = {flatten(src)}
    fired = []
    if any(isinstance(j, Compound) for j in just):
        if len(just) != 1 or need_close:
            raise _StepFailure(RULE_MISMATCH, "compound must be the only justification")
        if not _compound_ok(src, dst, just[0], ctx):
            raise _StepFailure(RESIDUAL, "no chain of the declared rules found")
        return []
    split = 0 if target in states else None
    for k, inst in enumerate(just):
        if need_close and split is not None:
            break
        states, d = _ac_fire(states, inst, ctx, depth)
        fired.append((inst, d))
        if target in states and split is None:
            split = k + 1
    if split is None or (not need_close and target not in states):
        raise _StepFailure(
            RESIDUAL, f"cited rules do not reach {format_term(dst)} modulo AC"
        )
    if need_close:
        states = {target}
        for inst in just[split:]:
            states, d = _ac_fire(states, inst, ctx, depth)
            fired.append((inst, d))
        if flatten(rhs) not in states:
            raise _StepFailure(RESIDUAL, f"final line does not close onto {format_term(rhs)}")
    return fired


def verify_script(script: ProofScript, mode: str = LENIENT, depth: int = DEFAULT_DEPTH) -> VerificationReport:
    """Check every step of ``script``; failures become report entries."""
    if mode not in (LENIENT, STRICT):
        raise ValueError(f"unknown mode {mode!r}")
    ctx = script.context
    lhs, rhs = script.goal
    records = []
    prev = lhs
    n = len(script.steps)
    if n == 0:
        ok = (lhs == rhs) if mode == STRICT else flatten(lhs) == flatten(rhs)
        status = "ok" if ok else RESIDUAL
        return VerificationReport(script.name, mode, [StepRecord(0, status)])
    for i, step in enumerate(script.steps, start=1):
        final = i == n
        try:
            try:
                fired = _strict_step(prev, step.term, rhs, step.justification, final, ctx, depth)
            except _StepFailure:
                if mode == STRICT:
                    raise
                fired = _lenient_step(prev, step.term, rhs, step.justification, final, ctx, depth)
            records.append(StepRecord(i, "ok", fired))
        except _StepFailure as exc:
            records.append(StepRecord(i, exc.status, [], str(exc)))
        prev = step.term
    return VerificationReport(script.name, mode, records)
