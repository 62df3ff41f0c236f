"""Hilbert-style first-order proof kernel with deduction-theorem transformations,
Goedel numbering, bounded proof search and finite-model checking."""
from .syntax import (
    Signature, Variable, Constant, FuncApp, Atom, Not, Implies, ForAll,
    parse_formula, print_formula, free_vars, substitute, is_free_for,
)
from .kernel import (
    Theory, Deduction, DeductionLine, AxiomInstance, InTheory, Hypothesis,
    ModusPonens, Generalization, VerificationReport, ProofError,
    is_axiom_instance, apply_mp, apply_gen, verify_deduction,
)
from .dedthm import (
    prove_self_implication, eliminate_hypothesis, concat_deductions, weaken,
)

__all__ = [
    "Signature",
    "Variable",
    "Constant",
    "FuncApp",
    "Atom",
    "Not",
    "Implies",
    "ForAll",
    "parse_formula",
    "print_formula",
    "free_vars",
    "substitute",
    "is_free_for",
    "Theory",
    "Deduction",
    "DeductionLine",
    "AxiomInstance",
    "InTheory",
    "Hypothesis",
    "ModusPonens",
    "Generalization",
    "VerificationReport",
    "ProofError",
    "is_axiom_instance",
    "apply_mp",
    "apply_gen",
    "verify_deduction",
    "prove_self_implication",
    "eliminate_hypothesis",
    "concat_deductions",
    "weaken",
]

__version__ = "0.1.0"
