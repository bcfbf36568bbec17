import dataclasses

import pytest

from latproof import corpus
from latproof.corpus import CorpusIntegrityError, load_corpus, load_proof
from latproof.script import (
    LENIENT,
    RESIDUAL,
    RULE_MISMATCH,
    SIDE_CONDITION,
    STRICT,
    Compound,
    ScriptSyntaxError,
    parse_justification,
    parse_script,
    verify_script,
)
from latproof.terms import TermSyntaxError, Var, parse_term

PROOFS = load_corpus()

MINI = """\
proof mini
def p := d /\\ e
goal p \\/ d = d
step (d /\\ e) \\/ d by Def p unfold
step d \\/ (d /\\ e) by L2
step d by L4 with x := d, y := e
qed
"""


def _with_step(script, i, text, justification=None):
    steps = list(script.steps)
    old = steps[i]
    steps[i] = dataclasses.replace(
        old, term=parse_term(text), text=text,
        justification=old.justification if justification is None else justification)
    return dataclasses.replace(script, steps=tuple(steps))


def test_corpus_shapes():
    assert [len(s.steps) for s in PROOFS] == [9, 6, 7]
    assert all(s.goal == (parse_term("u /\\ v"), Var("p")) for s in PROOFS)
    assert all(s.context == PROOFS[0].context for s in PROOFS)


def test_corpus_accepted_lenient():
    reports = [verify_script(s) for s in PROOFS]
    assert [r.verdict for r in reports] == ["accepted"] * 3
    assert tuple(r.modular_firings() for r in reports) == (4, 3, 4)


def test_corpus_rejected_strict():
    # displayed steps bundle several rules; strict mode needs the decomposed form
    for s in PROOFS:
        r = verify_script(s, STRICT)
        assert r.verdict == "rejected"
        assert r.failures[0].status == RULE_MISMATCH


def test_mini_strict_and_lenient():
    s = parse_script(MINI)
    assert verify_script(s, STRICT).accepted
    assert verify_script(s, LENIENT).accepted


def test_tampered_step_three_residual():
    s = PROOFS[0]
    bad = s.steps[2].text.replace("e", "f", 1)
    r = verify_script(_with_step(s, 2, bad))
    assert r.verdict == "rejected"
    assert r.failures[0].index == 3
    assert r.failures[0].status == RESIDUAL


def test_side_condition_failure():
    text = "proof sc\ngoal e /\\ (d \\/ f) = (e /\\ d) \\/ f\nstep (e /\\ d) \\/ f by M with a := e, b := d, c := f\n"
    r = verify_script(parse_script(text))
    assert r.failures[0].status == SIDE_CONDITION


def test_wrong_rule_rejected():
    s = parse_script(MINI.replace("by L2", "by L3 with x := d"))
    assert not verify_script(s).accepted
    assert not verify_script(s, STRICT).accepted


def test_missing_goal():
    with pytest.raises(ScriptSyntaxError, match="goal"):
        parse_script("step d by L2\n")


def test_syntax_error_line_numbers():
    with pytest.raises(ScriptSyntaxError) as info:
        parse_script(MINI.replace("by L2", "by Lx"))
    assert info.value.line == 5
    with pytest.raises((ScriptSyntaxError, TermSyntaxError)):
        parse_script(MINI.replace("step d by", "step d /\\ by"))


def test_justification_forms():
    inst = parse_justification("L4 with x := d, y := e")
    assert inst.rule == "L4" and inst.binding == {"x": Var("d"), "y": Var("e")}
    assert parse_justification("Def u fold").direction == "reverse"
    assert parse_justification("Order f /\\ d <= e \\/ f").fact.rhs == parse_term("e \\/ f")
    assert isinstance(parse_justification("compound L1 L2 L4"), Compound)


def test_format_round_trip():
    for s in PROOFS:
        again = parse_script(s.format())
        assert again.steps == s.steps or [x.term for x in again.steps] == [x.term for x in s.steps]
        assert verify_script(again).accepted


def test_strict_implies_lenient():
    scripts = [parse_script(MINI)] + list(PROOFS)
    for s in scripts:
        for i in range(len(s.steps)):
            for j in range(len(s.steps)):
                cand = _with_step(s, i, s.steps[i].text, s.steps[j].justification)
                if verify_script(cand, STRICT).accepted:
                    assert verify_script(cand, LENIENT).accepted


def _mutations(text):
    alphabet = "defpquvw()/\\ "
    for k, ch in enumerate(text):
        for rep in alphabet:
            if rep != ch:
                yield text[:k] + rep + text[k + 1:]


def test_single_character_mutations_rejected():
    tried = 0
    for s in PROOFS:
        for i, step in enumerate(s.steps):
            for text in _mutations(step.text):
                try:
                    term = parse_term(text)
                except TermSyntaxError:
                    continue
                if term == step.term:
                    continue
                tried += 1
                r = verify_script(_with_step(s, i, text))
                assert r.verdict == "rejected", (s.name, i + 1, text)
    assert tried > 500


def test_corpus_checksums(tmp_path, monkeypatch):
    for name in corpus.corpus_files():
        (tmp_path / name).write_text(corpus.read_text(name), encoding="utf-8")
    (tmp_path / corpus.MANIFEST).write_text(
        (corpus._root() / corpus.MANIFEST).read_text(), encoding="utf-8")
    monkeypatch.setattr(corpus, "_root", lambda: tmp_path)
    assert load_proof("proof1").name == "proof1"
    f = tmp_path / "proof2.lproof"
    f.write_text(f.read_text().replace("M2", "M3", 1), encoding="utf-8")
    with pytest.raises(CorpusIntegrityError):
        load_proof("proof2")
    assert "M3" in corpus.read_text("proof2.lproof", verify=False)


def test_unknown_corpus_file():
    with pytest.raises(FileNotFoundError):
        corpus.read_text("proof9.lproof")
