"""The trusted proof checker.

Axioms are instances of five schemas::

    A1  B -> (C -> B)
    A2  (B -> (C -> D)) -> ((B -> C) -> (B -> D))
    A3  (~C -> ~B) -> ((~C -> B) -> C)
    A4  (forall x. B) -> B[x:=t]          t free for x in B
    A5  (forall x. (B -> C)) -> (B -> forall x. C)   x not free in B

and the rules are modus ponens and generalization.  Every line names its
justification; the checker never searches.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .syntax import (
    Atom, Formula, ForAll, FuncApp, Implies, Not, Signature, Term, Variable,
    free_vars, is_closed, is_free_for, print_formula,
)

SCHEMAS = ("A1", "A2", "A3", "A4", "A5")


class ProofError(ValueError):
    """A deduction failed to check or a transformation precondition failed.

    ``code`` is one of the reason codes used in verification reports.
    """

    def __init__(self, code: str, message: str, line: Optional[int] = None):
        self.code = code
        self.line = line
        super().__init__(f"{code}: {message}")


@dataclass(frozen=True)
class Theory:
    formulas: tuple = ()
    name: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "formulas", tuple(self.formulas))

    def __len__(self):
        return len(self.formulas)

    def __getitem__(self, i):
        return self.formulas[i]

    def duplicates(self) -> list[int]:
        """Indices of formulas that repeat an earlier entry."""
        seen = set()
        dups = []
        for i, f in enumerate(self.formulas):
            if f in seen:
                dups.append(i)
            seen.add(f)
        return dups

    def index(self, f: Formula) -> Optional[int]:
        try:
            return self.formulas.index(f)
        except ValueError:
            return None


# ----------------------------------------------------------- justifications

@dataclass(frozen=True)
class AxiomInstance:
    schema: str


@dataclass(frozen=True)
class InTheory:
    index: int


@dataclass(frozen=True)
class Hypothesis:
    pass


@dataclass(frozen=True)
class ModusPonens:
    minor: int
    major: int


@dataclass(frozen=True)
class Generalization:
    line: int
    var: str


Justification = Union[AxiomInstance, InTheory, Hypothesis, ModusPonens, Generalization]


@dataclass(frozen=True)
class DeductionLine:
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class Deduction:
    theory: Theory
    lines: tuple
    hypothesis: Optional[Formula] = None
    signature: Optional[Signature] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))

    def __len__(self):
        return len(self.lines)

    @property
    def conclusion(self) -> Formula:
        return self.lines[-1].formula

    def formulas(self) -> list[Formula]:
        return [ln.formula for ln in self.lines]


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    conclusion: Optional[Formula] = None
    failure: Optional[tuple] = None  # (line index, reason code, message)

    @property
    def first_failure(self):
        return self.failure

    def raise_for_failure(self) -> None:
        if not self.ok:
            line, code, msg = self.failure
            raise ProofError(code, f"line {line}: {msg}", line)


# ---------------------------------------------------------- schema matching

def _match_a4_terms(b: Formula, c: Formula, x: str, bound: frozenset, found: dict) -> bool:
    """Walk ``b`` and ``c`` in parallel; free ``x`` in ``b`` must align with one term in ``c``."""
    if isinstance(b, Atom):
        if not isinstance(c, Atom) or b.rel != c.rel or len(b.args) != len(c.args):
            return False
        return all(_match_term(s, t, x, bound, found) for s, t in zip(b.args, c.args))
    if isinstance(b, Not):
        return isinstance(c, Not) and _match_a4_terms(b.body, c.body, x, bound, found)
    if isinstance(b, Implies):
        return (isinstance(c, Implies)
                and _match_a4_terms(b.left, c.left, x, bound, found)
                and _match_a4_terms(b.right, c.right, x, bound, found))
    if not isinstance(c, ForAll) or c.var != b.var:
        return False
    if b.var == x:
        return b.body == c.body
    return _match_a4_terms(b.body, c.body, x, bound | {b.var}, found)


def _match_term(s: Term, t: Term, x: str, bound: frozenset, found: dict) -> bool:
    if isinstance(s, Variable) and s.name == x and x not in bound:
        if "t" in found:
            return found["t"] == t
        found["t"] = t
        return True
    if isinstance(s, FuncApp):
        return (isinstance(t, FuncApp) and s.name == t.name and len(s.args) == len(t.args)
                and all(_match_term(a, b, x, bound, found) for a, b in zip(s.args, t.args)))
    return s == t


def a4_term(f: Formula) -> Optional[Term]:
    """The instantiating term if ``f`` is an A4 instance, else None."""
    if not (isinstance(f, Implies) and isinstance(f.left, ForAll)):
        return None
    x, b, c = f.left.var, f.left.body, f.right
    found: dict = {}
    if not _match_a4_terms(b, c, x, frozenset(), found):
        return None
    t = found.get("t", Variable(x))
    return t if is_free_for(t, x, b) else None


def is_axiom_instance(f: Formula, schema: str) -> bool:
    if schema == "A1":
        return (isinstance(f, Implies) and isinstance(f.right, Implies)
                and f.right.right == f.left)
    if schema == "A2":
        if not (isinstance(f, Implies) and isinstance(f.left, Implies)
                and isinstance(f.right, Implies)):
            return False
        l, r = f.left, f.right
        if not (isinstance(l.right, Implies) and isinstance(r.left, Implies)
                and isinstance(r.right, Implies)):
            return False
        b, c, d = l.left, l.right.left, l.right.right
        return r.left == Implies(b, c) and r.right == Implies(b, d)
    if schema == "A3":
        if not (isinstance(f, Implies) and isinstance(f.left, Implies)
                and isinstance(f.right, Implies) and isinstance(f.right.left, Implies)):
            return False
        l = f.left
        if not (isinstance(l.left, Not) and isinstance(l.right, Not)):
            return False
        c, b = l.left.body, l.right.body
        return f.right.left == Implies(Not(c), b) and f.right.right == c
    if schema == "A4":
        return a4_term(f) is not None
    if schema == "A5":
        if not (isinstance(f, Implies) and isinstance(f.left, ForAll)
                and isinstance(f.left.body, Implies)):
            return False
        x, b, c = f.left.var, f.left.body.left, f.left.body.right
        return f.right == Implies(b, ForAll(x, c)) and x not in free_vars(b)
    return False


def matching_schemas(f: Formula) -> list[str]:
    return [s for s in SCHEMAS if is_axiom_instance(f, s)]


# ------------------------------------------------------------------ rules

def apply_mp(minor: Formula, major: Formula) -> Formula:
    if not isinstance(major, Implies):
        raise ProofError("MP_MISMATCH", f"{print_formula(major)} is not an implication")
    if major.left != minor:
        raise ProofError("MP_MISMATCH",
                         f"antecedent of {print_formula(major)} is not {print_formula(minor)}")
    return major.right


def apply_gen(f: Formula, v: str) -> Formula:
    return ForAll(v, f)


# ------------------------------------------------------------ verification

def _check_line(d: Deduction, k: int) -> Optional[tuple]:
    line = d.lines[k]
    f, j = line.formula, line.justification
    if isinstance(j, AxiomInstance):
        if j.schema not in SCHEMAS:
            return ("BAD_AXIOM", f"unknown schema {j.schema!r}")
        if not is_axiom_instance(f, j.schema):
            return ("BAD_AXIOM", f"not an instance of {j.schema}")
    elif isinstance(j, InTheory):
        if not (0 <= j.index < len(d.theory)):
            return ("BAD_INDEX", f"theory index {j.index} out of range")
        if d.theory[j.index] != f:
            return ("BAD_INDEX", f"theory formula {j.index} differs from the line")
    elif isinstance(j, Hypothesis):
        if d.hypothesis is None:
            return ("HYP_ABSENT", "no hypothesis declared")
        if f != d.hypothesis:
            return ("HYP_ABSENT", "line differs from the hypothesis")
    elif isinstance(j, ModusPonens):
        if not (0 <= j.minor < k and 0 <= j.major < k):
            return ("BAD_INDEX", f"mp cites {j.minor},{j.major} not before line {k}")
        try:
            out = apply_mp(d.lines[j.minor].formula, d.lines[j.major].formula)
        except ProofError as e:
            return ("MP_MISMATCH", str(e))
        if out != f:
            return ("MP_MISMATCH", "consequent differs from the line")
    elif isinstance(j, Generalization):
        if not (0 <= j.line < k):
            return ("BAD_INDEX", f"gen cites {j.line} not before line {k}")
        if apply_gen(d.lines[j.line].formula, j.var) != f:
            return ("GEN_MISMATCH", f"line is not forall {j.var} of line {j.line}")
    else:
        return ("BAD_INDEX", f"unknown justification {j!r}")
    return None


def verify_deduction(d: Deduction) -> VerificationReport:
    if not d.lines:
        return VerificationReport(False, None, (0, "BAD_INDEX", "empty deduction"))
    # closedness of the hypothesis is a global requirement whenever one is given
    if d.hypothesis is not None and not is_closed(d.hypothesis):
        return VerificationReport(False, None, (0, "HYP_OPEN", "hypothesis has free variables "
                                                 + ",".join(free_vars(d.hypothesis))))
    for k in range(len(d.lines)):
        bad = _check_line(d, k)
        if bad is not None:
            return VerificationReport(False, None, (k, bad[0], bad[1]))
    return VerificationReport(True, d.conclusion, None)


def require_verified(d: Deduction) -> None:
    verify_deduction(d).raise_for_failure()
