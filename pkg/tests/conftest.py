import pytest


@pytest.fixture(scope="session")
def corpus_proofs():
    from latproof.corpus import load_corpus
    return load_corpus()


@pytest.fixture(scope="session")
def decomposed(corpus_proofs):
    from latproof.decompose import decompose_proof
    return [decompose_proof(s) for s in corpus_proofs]


_VERDICTS: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance line; returns the verdict so the test can assert it."""

    def record(label: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        print(line)
        _VERDICTS.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
