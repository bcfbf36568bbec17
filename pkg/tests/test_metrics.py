import pytest

from latproof.decompose import build_poset
from latproof.metrics import CountReport, PosetReport, compare, count_rows, count_symbols, poset_metrics
from latproof.script import parse_script

EXPECTED_COUNTS = {
    "proof1": (9, 57, 46, 72, 10, 185),
    "proof2": (6, 40, 32, 50, 7, 129),
    "proof3": (7, 48, 39, 60, 8, 155),
}


def test_count_goal_row():
    assert count_rows(["u ∧ v = p"]).as_tuple() == (1, 3, 1, 0, 1, 5)
    assert count_rows(["u /\\ v = p"]).as_tuple() == (1, 3, 1, 0, 1, 5)


def test_count_brackets_of_every_shape():
    r = count_rows(["= [d /\\ {e \\/ (f)}]"])
    assert (r.variables, r.operations, r.grouping, r.equals) == (3, 2, 6, 1)


def test_count_multi_letter_identifiers():
    assert count_rows(["x1 /\\ abc = x1"]).variables == 3


def test_corpus_counts(corpus_proofs):
    for s in corpus_proofs:
        assert count_symbols(s).as_tuple() == EXPECTED_COUNTS[s.name]


def test_count_independent_of_justification(corpus_proofs):
    s = corpus_proofs[1]
    stripped = parse_script(s.format().replace("by M2 with a := (e /\\ q) \\/ p, b := d /\\ q, c := p",
                                               "by compound M2"))
    assert count_symbols(stripped) == count_symbols(s)


def _row(name, total, plen):
    c = CountReport(1, total, 0, 0, 0)
    hist = {r: 0 for r in ("L1", "L2", "L3", "L4", "M", "M1", "M2", "M3", "M4", "Def", "Other")}
    return name, c, PosetReport(plen, hist)


def test_ranking_ties():
    t = compare([_row("a", 10, 5), _row("b", 10, 4), _row("c", 12, 4)])
    assert t.ranking("count") == [["a", "b"], ["c"]]
    assert t.shortest("poset") == ["b", "c"]
    assert "tie between a, b" in t.format_table()


def test_ranking_unknown_method():
    t = compare([_row("a", 1, 1), _row("b", 2, 2)])
    with pytest.raises(ValueError):
        t.ranking("words")


def test_compare_needs_two():
    with pytest.raises(ValueError):
        compare([_row("a", 1, 1)])


def test_tsv_columns(corpus_proofs, decomposed):
    rows = [(s.name, count_symbols(s), poset_metrics(build_poset(d))) for s, d in zip(corpus_proofs, decomposed)]
    tsv = compare(rows).format_tsv()
    lines = tsv.splitlines()
    assert lines[0].split("\t")[:8] == ["name", "lines", "variables", "operations", "grouping", "equals",
                                        "total", "poset_length"]
    assert all(len(ln.split("\t")) == len(lines[0].split("\t")) for ln in lines)
    assert lines[1].split("\t")[1:7] == [str(x) for x in EXPECTED_COUNTS["proof1"]]
    assert compare(rows).format_tsv() == tsv


def test_poset_metrics(decomposed):
    reports = [poset_metrics(build_poset(d)) for d in decomposed]
    assert [r.modular_edges for r in reports] == [4, 3, 4]
    for r, d in zip(reports, decomposed):
        assert sum(r.histogram.values()) == r.length - 1 == len(d.edges)


def test_both_methods_rank_proof2_first(corpus_proofs, decomposed):
    rows = [(s.name, count_symbols(s), poset_metrics(build_poset(d))) for s, d in zip(corpus_proofs, decomposed)]
    t = compare(rows)
    assert t.shortest("count") == ["proof2"]
    assert t.shortest("poset") == ["proof2"]
