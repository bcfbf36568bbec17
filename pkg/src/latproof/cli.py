"""Command-line interface: ``latproof <command> ...``.

Exit status is 0 when the verdict is fully positive, 1 when a verification or
check fails, and 2 for usage, parse and file errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import corpus
from .decompose import DEFAULT_BUDGET, DecompositionError, build_poset, decompose_proof
from .enumerate import MAX_SIZE, SizeOutOfRangeError, enumerate_lattices
from .lattice import (
    LatticeError,
    distributive_counterexample,
    find_sublattice,
    is_modular,
    modular_counterexample,
    parse_lattice,
)
from .metrics import ComparisonTable, compare, count_symbols, poset_metrics
from .order import DEFAULT_DEPTH
from .script import LENIENT, STRICT, ScriptSyntaxError, parse_script, verify_script
from .terms import TermSyntaxError
from .theorem import check_identity_uvp, verify_m3n5

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str, suffix: str) -> tuple[str, str]:
    """Text of ``path``; a missing path falls back to the bundled file of that name."""
    p = Path(path)
    if p.is_file():
        return p.stem, p.read_text(encoding="utf-8")
    name = p.name if p.name.endswith(suffix) else p.name + suffix
    try:
        return Path(name).stem, corpus.read_text(name)
    except FileNotFoundError:
        raise UsageError(f"file not found: {path}") from None


def _script(path):
    name, text = _read(path, ".lproof")
    return parse_script(text)


def _lattice(path):
    _, text = _read(path, ".lat")
    return parse_lattice(text)


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
# proof commands


def cmd_check(args) -> int:
    s = _script(args.script)
    report = verify_script(s, STRICT if args.strict else LENIENT, args.depth)
    _emit(report.format())
    if args.verbose:
        for rec in report.steps:
            for inst, d in rec.fired:
                if d is not None:
                    _emit(f"step {rec.index} {inst.rule} side condition:\n{d.format(1)}")
    return OK if report.accepted else FAILED


def cmd_decompose(args) -> int:
    s = _script(args.script)
    try:
        d = decompose_proof(s, args.budget)
    except DecompositionError as exc:
        _emit(f"{exc}")
        return FAILED
    emitted = d.to_script()
    check = verify_script(emitted, STRICT)
    _emit(f"{s.name}: {len(d.edges)} single-rule edges, {len(d.edges) + 1} vertices; "
          f"strict re-check {check.verdict}")
    if args.emit:
        Path(args.emit).write_text(emitted.format(), encoding="utf-8")
    else:
        _emit(emitted.format())
    return OK if check.accepted else FAILED


def _rows(paths, with_poset, budget):
    rows = []
    for path in paths:
        s = _script(path)
        pr = poset_metrics(build_poset(decompose_proof(s, budget))) if with_poset else None
        rows.append((s.name, count_symbols(s), pr))
    return rows


def _render(table: ComparisonTable, fmt: str) -> str:
    return table.format_tsv() if fmt == "tsv" else table.format_table()


def cmd_count(args) -> int:
    _emit(_render(ComparisonTable(tuple(_rows(args.scripts, False, 0))), args.format))
    return OK


def cmd_poset(args) -> int:
    s = _script(args.script)
    try:
        poset = build_poset(decompose_proof(s, args.budget))
    except DecompositionError as exc:
        _emit(str(exc))
        return FAILED
    if args.export:
        _emit(poset.export())
        return OK
    table = ComparisonTable(((s.name, count_symbols(s), poset_metrics(poset)),))
    _emit(_render(table, args.format))
    return OK


def cmd_compare(args) -> int:
    if len(args.scripts) < 2:
        raise UsageError("compare needs at least two scripts")
    try:
        table = compare(_rows(args.scripts, not args.count_only, args.budget))
    except DecompositionError as exc:
        _emit(str(exc))
        return FAILED
    _emit(_render(table, args.format))
    return OK


# ---------------------------------------------------------------------------
# lattice commands


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def cmd_lattice_check(args) -> int:
    try:
        L = _lattice(args.latfile)
    except LatticeError as exc:
        _emit(f"invalid: {exc}")
        return FAILED
    mod, dist = modular_counterexample(L), distributive_counterexample(L)
    _emit(f"elements: {L.n}\nmodular: {_yes(mod is None)}, distributive: {_yes(dist is None)}")
    for label, cex in (("modular law", mod), ("distributive law", dist)):
        if cex is not None:
            _emit(f"{label} fails at (a, b, c) = ({', '.join(L.labels[i] for i in cex)})")
    return OK


def cmd_lattice_find(args) -> int:
    L = _lattice(args.latfile)
    hit = find_sublattice(L, args.pattern)
    if hit is None:
        _emit(f"no {args.pattern.upper()} sublattice")
        return FAILED
    _emit(f"{args.pattern.upper()} sublattice: {' '.join(L.labels[i] for i in hit)}")
    return OK


def cmd_lattice_enumerate(args) -> int:
    lattices = enumerate_lattices(args.n)
    if args.format == "tsv":
        _emit(f"size\tlattices\tmodular\n{args.n}\t{len(lattices)}\t{sum(map(is_modular, lattices))}")
    else:
        _emit(f"{len(lattices)} lattices with {args.n} elements")
    if args.dump:
        for i, L in enumerate(lattices):
            _emit(f"# lattice {i}\n{L.format()}")
    return OK


def cmd_theorem(args) -> int:
    report = verify_m3n5(args.max_size)
    if args.format == "tsv":
        lines = ["size\tlattices\tnon_modular\tnon_distributive\tconsistent\tn5_built\tm3_built"]
        lines += [f"{s.size}\t{s.lattices}\t{s.non_modular}\t{s.non_distributive}\t{s.consistent}"
                  f"\t{s.n5_witnesses}\t{s.m3_witnesses}" for s in report.sizes]
        _emit("\n".join(lines))
    else:
        _emit(report.format())
    return OK if report.consistent else FAILED


def cmd_identity(args) -> int:
    if args.lattice:
        L = _lattice(args.lattice)
        r = check_identity_uvp(L)
        _emit(f"modular: {_yes(is_modular(L))}\n{r.format()}")
        return OK if r.holds else FAILED
    ok = True
    for n in range(1, args.max_size + 1):
        for k, L in enumerate(enumerate_lattices(n)):
            r = check_identity_uvp(L)
            modular = is_modular(L)
            if modular and not r.holds:
                ok = False
            if not r.holds or args.verbose:
                tag = "modular" if modular else "non-modular"
                _emit(f"size {n} #{k} ({tag}): {r.format()}")
    n5 = check_identity_uvp(corpus.load_lattice("n5"))
    _emit(f"N5: {n5.format()}")
    _emit("identity holds on every modular lattice" if ok else "identity FAILS on a modular lattice")
    return OK if ok else FAILED


def cmd_corpus(args) -> int:
    if args.extract:
        out = Path(args.extract)
        out.mkdir(parents=True, exist_ok=True)
        for name in corpus.corpus_files():
            (out / name).write_text(corpus.read_text(name), encoding="utf-8")
        _emit(f"wrote {len(corpus.corpus_files())} files to {out}")
    elif args.name:
        name = args.name
        if "." not in name:
            name += ".lproof" if name.startswith("proof") else ".lat"
        try:
            _emit(corpus.read_text(name))
        except FileNotFoundError as exc:
            raise UsageError(str(exc)) from None
    else:
        for name in corpus.corpus_files():
            _emit(name)
    return OK


# ---------------------------------------------------------------------------


def _size(text: str) -> int:
    n = int(text)
    if not 1 <= n <= MAX_SIZE:
        raise argparse.ArgumentTypeError(f"size must be between 1 and {MAX_SIZE}")
    return n


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latproof", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=("table", "tsv"), default="table")

    p = sub.add_parser("check", help="verify a proof script")
    p.add_argument("script")
    p.add_argument("--strict", action="store_true", help="one node-exact rule per step")
    p.add_argument("--depth", type=_positive, default=DEFAULT_DEPTH, help="side-condition depth")
    p.add_argument("-v", "--verbose", action="store_true", help="print side-condition derivations")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("decompose", help="expand every step into single-rule edges")
    p.add_argument("script")
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    p.add_argument("--emit", metavar="OUT", help="write the decomposed script here")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("count", help="proof count metrics")
    p.add_argument("scripts", nargs="+")
    fmt(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("poset", help="proof poset metrics")
    p.add_argument("script")
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    p.add_argument("--export", action="store_true", help="print the cover list instead")
    fmt(p)
    p.set_defaults(func=cmd_poset)

    p = sub.add_parser("compare", help="compare proofs under both methods")
    p.add_argument("scripts", nargs="+")
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    p.add_argument("--count-only", action="store_true", help="skip decomposition")
    fmt(p)
    p.set_defaults(func=cmd_compare)

    lat = sub.add_parser("lattice", help="finite lattice tools").add_subparsers(dest="action", required=True)
    p = lat.add_parser("check", help="validate and test modularity/distributivity")
    p.add_argument("latfile")
    p.set_defaults(func=cmd_lattice_check)
    p = lat.add_parser("find", help="search for an M3 or N5 sublattice")
    p.add_argument("latfile")
    p.add_argument("--pattern", choices=("m3", "n5"), required=True)
    p.set_defaults(func=cmd_lattice_find)
    p = lat.add_parser("enumerate", help="lattices of a given size up to isomorphism")
    p.add_argument("n", type=_size)
    p.add_argument("--dump", action="store_true")
    fmt(p)
    p.set_defaults(func=cmd_lattice_enumerate)

    thm = sub.add_parser("theorem", help="exhaustive theorem checks").add_subparsers(dest="which", required=True)
    p = thm.add_parser("m3n5", help="the M3-N5 characterization on all small lattices")
    p.add_argument("--max-size", type=_size, required=True)
    fmt(p)
    p.set_defaults(func=cmd_theorem)

    ident = sub.add_parser("identity", help="exhaustive identity checks").add_subparsers(dest="which", required=True)
    p = ident.add_parser("uvp", help="u /\\ v = p on small lattices")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--max-size", type=_size)
    g.add_argument("--lattice", metavar="LATFILE")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_identity)

    p = sub.add_parser("corpus", help="list or extract the bundled proofs and lattices")
    p.add_argument("name", nargs="?")
    p.add_argument("--extract", metavar="DIR")
    p.set_defaults(func=cmd_corpus)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"latproof: error: {exc}", file=sys.stderr)
        return USAGE
    except (ScriptSyntaxError, TermSyntaxError, LatticeError, SizeOutOfRangeError) as exc:
        print(f"latproof: error: {exc}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(run())
