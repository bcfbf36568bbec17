"""Verifier, decomposer and length metrics for equational lattice proofs,
with a finite-lattice oracle for checking identities exhaustively."""

from .context import Context, OrderFact, m3_context
from .corpus import load_corpus, load_lattice, load_proof
from .decompose import (
    DecomposedProof,
    DecompositionError,
    ProofPoset,
    build_poset,
    decompose_justified,
    decompose_proof,
    decompose_step,
)
from .enumerate import enumerate_lattices, naive_lattices
from .lattice import (
    FiniteLattice,
    eval_term,
    find_sublattice,
    is_distributive,
    is_modular,
    parse_lattice,
)
from .metrics import CountReport, PosetReport, compare, count_symbols, poset_metrics
from .order import Derivation, derive_leq
from .rules import RuleInstance, apply_rule, enumerate_rewrites, rule_schemas
from .script import ProofScript, VerificationReport, parse_script, verify_script
from .terms import Op, Term, Var, format_term, parse_term
from .theorem import (
    check_identity_uvp,
    check_lemmas,
    construct_m3_witness,
    construct_n5_witness,
    verify_m3n5,
)

__version__ = "0.1.0"
