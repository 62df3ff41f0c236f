"""Proof transformations: hypothesis elimination, concatenation, weakening."""
from __future__ import annotations

import json
from dataclasses import dataclass

from .kernel import (
    AxiomInstance, Deduction, DeductionLine, Generalization, Hypothesis, InTheory,
    ModusPonens, ProofError, Theory, require_verified,
)
from .syntax import ForAll, Formula, Implies, free_vars, is_closed, print_formula

CASE_LENGTHS = {"i-axiom": 3, "i-theory": 3, "ii-hypothesis": 5, "iii-mp": 3, "iv-gen": 3}


@dataclass(frozen=True)
class TraceRecord:
    line: int
    case: str
    start: int  # first emitted output line
    stop: int   # one past the last emitted line


@dataclass(frozen=True)
class TransformTrace:
    records: tuple

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    def to_json(self) -> list[dict]:
        return [{"line": r.line, "case": r.case, "output": [r.start, r.stop]} for r in self.records]

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def self_implication_lines(a: Formula, offset: int = 0) -> list[DeductionLine]:
    aa = Implies(a, a)
    l0 = Implies(a, Implies(aa, a))
    l1 = Implies(l0, Implies(Implies(a, aa), aa))
    return [
        DeductionLine(l0, AxiomInstance("A1")),
        DeductionLine(l1, AxiomInstance("A2")),
        DeductionLine(Implies(Implies(a, aa), aa), ModusPonens(offset + 0, offset + 1)),
        DeductionLine(Implies(a, aa), AxiomInstance("A1")),
        DeductionLine(aa, ModusPonens(offset + 3, offset + 2)),
    ]


def prove_self_implication(a: Formula, theory: Theory = Theory()) -> Deduction:
    """The fixed five-line deduction of ``a -> a``."""
    return Deduction(theory, tuple(self_implication_lines(a)))


def eliminate_hypothesis(d: Deduction) -> tuple[Deduction, TransformTrace]:
    """Turn a deduction of B from (T, A) into one of A -> B from T.

    Each input line i is replaced by a block whose last line is
    ``A -> B_i``; the trace records which case fired and where the block
    landed.
    """
    if d.hypothesis is None:
        raise ProofError("HYP_ABSENT", "deduction has no hypothesis to eliminate")
    require_verified(d)
    a = d.hypothesis
    out: list[DeductionLine] = []
    last: list[int] = []  # last[i] = index of "a -> B_i" in out
    records = []
    for i, line in enumerate(d.lines):
        b, j = line.formula, line.justification
        start = len(out)
        a_b = Implies(a, b)
        if isinstance(j, (AxiomInstance, InTheory)):
            case = "i-axiom" if isinstance(j, AxiomInstance) else "i-theory"
            out.append(DeductionLine(b, j))
            out.append(DeductionLine(Implies(b, a_b), AxiomInstance("A1")))
            out.append(DeductionLine(a_b, ModusPonens(start, start + 1)))
        elif isinstance(j, Hypothesis):
            case = "ii-hypothesis"
            out.extend(self_implication_lines(a, offset=start))
        elif isinstance(j, ModusPonens):
            case = "iii-mp"
            bj = d.lines[j.minor].formula
            a_bj = last[j.minor]
            a_bjbi = last[j.major]  # a -> (bj -> b)
            a2 = Implies(Implies(a, Implies(bj, b)), Implies(Implies(a, bj), a_b))
            out.append(DeductionLine(a2, AxiomInstance("A2")))
            out.append(DeductionLine(Implies(Implies(a, bj), a_b), ModusPonens(a_bjbi, start)))
            out.append(DeductionLine(a_b, ModusPonens(a_bj, start + 1)))
        elif isinstance(j, Generalization):
            case = "iv-gen"
            bj = d.lines[j.line].formula
            gen = ForAll(j.var, Implies(a, bj))
            out.append(DeductionLine(gen, Generalization(last[j.line], j.var)))
            a5 = Implies(gen, Implies(a, ForAll(j.var, bj)))
            out.append(DeductionLine(a5, AxiomInstance("A5")))
            out.append(DeductionLine(a_b, ModusPonens(start, start + 1)))
        else:
            raise ProofError("BAD_INDEX", f"unknown justification on line {i}", i)
        last.append(len(out) - 1)
        records.append(TraceRecord(i, case, start, len(out)))
    return Deduction(d.theory, tuple(out), None, d.signature), TransformTrace(tuple(records))


def _shift(j, by: int):
    if isinstance(j, ModusPonens):
        return ModusPonens(j.minor + by, j.major + by)
    if isinstance(j, Generalization):
        return Generalization(j.line + by, j.var)
    return j


def concat_deductions(da: Deduction, db: Deduction) -> Deduction:
    """Deduction of db's conclusion from T alone, given da proving db's hypothesis.

    The output is da's lines followed by db's lines.  A hypothesis line of
    db is re-justified by repeating the justification of da's last line,
    whose cited premises all precede it, so the result stays within the
    axioms and the two rules.
    """
    require_verified(da)
    require_verified(db)
    if da.hypothesis is not None:
        raise ProofError("HYP_MISMATCH", "first deduction must be hypothesis-free")
    if da.theory.formulas != db.theory.formulas:
        raise ProofError("THEORY_MISMATCH", "deductions are over different theories")
    if db.hypothesis != da.conclusion:
        shown = "none" if db.hypothesis is None else print_formula(db.hypothesis)
        raise ProofError("HYP_MISMATCH",
                         f"hypothesis {shown} is not the conclusion {print_formula(da.conclusion)}")
    m = len(da.lines)
    repeat = da.lines[-1].justification
    out = list(da.lines)
    for line in db.lines:
        j = line.justification
        if isinstance(j, Hypothesis):
            out.append(DeductionLine(line.formula, repeat))
        else:
            out.append(DeductionLine(line.formula, _shift(j, m)))
    return Deduction(da.theory, tuple(out), None, da.signature or db.signature)


def weaken(d: Deduction, a: Formula) -> Deduction:
    """The same lines, now read as a deduction from (T, a)."""
    if d.hypothesis is not None:
        raise ProofError("HYP_MISMATCH", "deduction already has a hypothesis")
    if not is_closed(a):
        raise ProofError("HYP_OPEN", "hypothesis has free variables " + ",".join(free_vars(a)))
    require_verified(d)
    return Deduction(d.theory, d.lines, a, d.signature)


def deduction_closure(db: Deduction, a: Formula) -> Deduction:
    """From a hypothesis-free deduction of B, a deduction of a -> B (weaken, then eliminate)."""
    return eliminate_hypothesis(weaken(db, a))[0]


def trace_is_complete(d: Deduction, trace: TransformTrace) -> bool:
    """Every input line appears once, in order, with the case its justification demands."""
    expected = {
        AxiomInstance: "i-axiom", InTheory: "i-theory", Hypothesis: "ii-hypothesis",
        ModusPonens: "iii-mp", Generalization: "iv-gen",
    }
    if [r.line for r in trace] != list(range(len(d.lines))):
        return False
    pos = 0
    for r, line in zip(trace, d.lines):
        if r.case != expected[type(line.justification)] or r.start != pos:
            return False
        if r.stop - r.start != CASE_LENGTHS[r.case]:
            return False
        pos = r.stop
    return True
