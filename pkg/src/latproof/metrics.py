"""Proof length measures: symbol counts of the displayed proof and proof-poset size."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .decompose import POSET_RULES, ProofPoset
from .order import M_FAMILY
from .script import ProofScript

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_OPERATION = re.compile(r"/\\|\\/|[∧∨]")
_GROUPING = re.compile(r"[()\[\]{}]")


@dataclass(frozen=True)
class CountReport:
    lines: int
    variables: int
    operations: int
    grouping: int
    equals: int

    @property
    def total(self) -> int:
        return self.variables + self.operations + self.grouping + self.equals

    def as_tuple(self) -> tuple[int, ...]:
        return (self.lines, self.variables, self.operations, self.grouping, self.equals, self.total)


def count_rows(rows: Sequence[str]) -> CountReport:
    text = "\n".join(rows)
    return CountReport(
        lines=len(rows),
        variables=len(_IDENT.findall(text)),
        operations=len(_OPERATION.findall(text)),
        grouping=len(_GROUPING.findall(text)),
        equals=text.count("="),
    )


def count_symbols(s: ProofScript) -> CountReport:
    """Count the proof as displayed: one row per step, starting ``lhs = ...``."""
    return count_rows(s.display_rows())


@dataclass(frozen=True)
class PosetReport:
    length: int
    histogram: dict[str, int]

    @property
    def modular_edges(self) -> int:
        return sum(self.histogram[r] for r in M_FAMILY)


def poset_metrics(p: ProofPoset) -> PosetReport:
    hist = Counter(p.labels)
    return PosetReport(p.length, {r: hist.get(r, 0) for r in POSET_RULES})


@dataclass(frozen=True)
class ComparisonTable:
    rows: tuple[tuple[str, CountReport, PosetReport | None], ...]

    def ranking(self, method: str) -> list[list[str]]:
        """Names grouped by rank, shortest first; ties share a group."""
        if method == "count":
            key = {name: c.total for name, c, _ in self.rows}
        elif method == "poset":
            key = {name: p.length for name, _, p in self.rows if p is not None}
        else:
            raise ValueError(f"unknown method {method!r}")
        groups: list[list[str]] = []
        last = None
        for name in sorted(key, key=lambda n: (key[n], n)):
            if groups and key[name] == last:
                groups[-1].append(name)
            else:
                groups.append([name])
            last = key[name]
        return groups

    def shortest(self, method: str) -> list[str]:
        ranks = self.ranking(method)
        return ranks[0] if ranks else []

    def format_tsv(self) -> str:
        head = ["name", "lines", "variables", "operations", "grouping", "equals", "total", "poset_length"]
        lines = ["\t".join(head + list(POSET_RULES))]
        for name, c, p in self.rows:
            cells = [name, *map(str, c.as_tuple())]
            if p is None:
                cells += [""] * (1 + len(POSET_RULES))
            else:
                cells += [str(p.length)] + [str(p.histogram[r]) for r in POSET_RULES]
            lines.append("\t".join(cells))
        return "\n".join(lines) + "\n"

    def format_table(self) -> str:
        head = f"{'proof':<10}{'lines':>6}{'vars':>6}{'ops':>6}{'group':>7}{'eq':>5}{'total':>7}{'poset':>7}"
        out = [head]
        for name, c, p in self.rows:
            plen = "-" if p is None else str(p.length)
            out.append(f"{name:<10}{c.lines:>6}{c.variables:>6}{c.operations:>6}{c.grouping:>7}"
                       f"{c.equals:>5}{c.total:>7}{plen:>7}")
        if any(p is not None for _, _, p in self.rows):
            out.append("")
            out.append(f"{'rules':<10}" + "".join(f"{r:>6}" for r in POSET_RULES))
            for name, _, p in self.rows:
                if p is not None:
                    out.append(f"{name:<10}" + "".join(f"{p.histogram[r]:>6}" for r in POSET_RULES))
        out.append("")
        for method, label in (("count", "proof count"), ("poset", "poset length")):
            ranks = self.ranking(method)
            if not ranks:
                continue
            first = ranks[0]
            verdict = f"tie between {', '.join(first)}" if len(first) > 1 else first[0]
            order = " < ".join(" = ".join(g) for g in ranks)
            out.append(f"shortest by {label}: {verdict}  ({order})")
        return "\n".join(out) + "\n"


def compare(reports: Sequence[tuple[str, CountReport, PosetReport | None]]) -> ComparisonTable:
    if len(reports) < 2:
        raise ValueError("compare needs at least two proofs")
    return ComparisonTable(tuple(reports))
