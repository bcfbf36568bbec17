"""Bundled proof scripts and lattices, checked against a sha256 manifest."""

from __future__ import annotations

import hashlib
from importlib import resources

from .lattice import FiniteLattice, parse_lattice
from .script import ProofScript, parse_script

MANIFEST = "SHA256SUMS"
PROOFS = ("proof1", "proof2", "proof3")
LATTICES = ("m3", "n5", "chain2", "chain3")


class CorpusIntegrityError(RuntimeError):
    pass


def _root():
    return resources.files(__package__) / "corpus"


def _manifest() -> dict[str, str]:
    out = {}
    for line in (_root() / MANIFEST).read_text().splitlines():
        if line.strip():
            digest, name = line.split()
            out[name] = digest
    return out


def corpus_files() -> list[str]:
    return sorted(_manifest())


def read_text(filename: str, verify: bool = True) -> str:
    """Contents of a bundled file, after checking its digest."""
    manifest = _manifest()
    if filename not in manifest:
        raise FileNotFoundError(f"no bundled file {filename!r}")
    data = (_root() / filename).read_bytes()
    if verify and hashlib.sha256(data).hexdigest() != manifest[filename]:
        raise CorpusIntegrityError(f"{filename} does not match its recorded sha256")
    return data.decode("utf-8")


def load_proof(name: str) -> ProofScript:
    return parse_script(read_text(f"{name.removesuffix('.lproof')}.lproof"))


def load_lattice(name: str) -> FiniteLattice:
    return parse_lattice(read_text(f"{name.removesuffix('.lat')}.lat"))


def load_corpus() -> list[ProofScript]:
    """The three bundled proofs, in order."""
    return [load_proof(name) for name in PROOFS]
