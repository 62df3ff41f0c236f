import pytest

from folproof.dedthm import (
    CASE_LENGTHS, concat_deductions, deduction_closure, eliminate_hypothesis,
    prove_self_implication, trace_is_complete, weaken,
)
from folproof.kernel import (
    AxiomInstance, Deduction, DeductionLine, Generalization, Hypothesis, InTheory,
    ModusPonens, ProofError, Theory, verify_deduction,
)
from folproof.syntax import Atom, ForAll, Implies, Variable

x = Variable("x")
P, Q, A = Atom("P"), Atom("Q"), Atom("A")
Qx = Atom("Q", (x,))


def test_self_implication_shape():
    for a in (P, ForAll("x", Atom("R", (x,)))):
        d = prove_self_implication(a)
        r = verify_deduction(d)
        assert r.ok and r.conclusion == Implies(a, a)
        assert len(d) == 5 and d.hypothesis is None and len(d.theory) == 0
        assert [type(l.justification) for l in d.lines] == \
            [AxiomInstance, AxiomInstance, ModusPonens, AxiomInstance, ModusPonens]


def test_eliminate_lone_hypothesis():
    d = Deduction(Theory(), (DeductionLine(A, Hypothesis()),), A)
    out, trace = eliminate_hypothesis(d)
    assert out.lines == prove_self_implication(A).lines
    assert [(r.line, r.case, r.start, r.stop) for r in trace] == [(0, "ii-hypothesis", 0, 5)]


def test_eliminate_theory_line():
    d = Deduction(Theory((Q,)), (DeductionLine(Q, InTheory(0)),), A)
    out, trace = eliminate_hypothesis(d)
    assert out.formulas() == [Q, Implies(Q, Implies(A, Q)), Implies(A, Q)]
    assert verify_deduction(out).ok and out.hypothesis is None
    assert trace.records[0].case == "i-theory"


def test_eliminate_generalization():
    d = Deduction(Theory((Qx,)), (DeductionLine(Qx, InTheory(0)),
                                  DeductionLine(ForAll("x", Qx), Generalization(0, "x"))), P)
    out, trace = eliminate_hypothesis(d)
    assert len(out) == 6
    assert verify_deduction(out).conclusion == Implies(P, ForAll("x", Qx))
    assert [r.case for r in trace] == ["i-theory", "iv-gen"]


def test_eliminate_mp_length():
    T = Theory((Implies(A, Q),))
    d = Deduction(T, (DeductionLine(A, Hypothesis()), DeductionLine(Implies(A, Q), InTheory(0)),
                      DeductionLine(Q, ModusPonens(0, 1))), A)
    out, trace = eliminate_hypothesis(d)
    assert len(out) == 11 == 5 + 3 + 3
    assert verify_deduction(out).conclusion == Implies(A, Q)
    assert out.theory == T


def test_eliminate_errors():
    with pytest.raises(ProofError) as e:
        eliminate_hypothesis(prove_self_implication(P))
    assert e.value.code == "HYP_ABSENT"
    bad = Deduction(Theory(), (DeductionLine(Q, Hypothesis()),), A)
    with pytest.raises(ProofError) as e:
        eliminate_hypothesis(bad)
    assert e.value.code == "HYP_ABSENT"


def test_eliminate_corpus(dgen):
    for _ in range(300):
        d = dgen.deduction()
        out, trace = eliminate_hypothesis(d)
        r = verify_deduction(out)
        assert r.ok and r.conclusion == Implies(d.hypothesis, d.conclusion)
        assert trace_is_complete(d, trace)
        assert len(out) == sum(CASE_LENGTHS[t.case] for t in trace) <= 5 * len(d)
        assert trace.dumps() == trace.dumps()


# ---------------------------------------------------------------- concat

def test_concat_example():
    T = Theory((P, Implies(P, Q)))
    da = Deduction(T, (DeductionLine(P, InTheory(0)),))
    db = Deduction(T, (DeductionLine(P, Hypothesis()), DeductionLine(Implies(P, Q), InTheory(1)),
                       DeductionLine(Q, ModusPonens(0, 1))), P)
    out = concat_deductions(da, db)
    r = verify_deduction(out)
    assert r.ok and r.conclusion == Q and len(out) == 4 and out.hypothesis is None


def test_concat_with_self_implication():
    da = prove_self_implication(P)
    pp = Implies(P, P)
    db = Deduction(Theory(), (DeductionLine(pp, Hypothesis()),), pp)
    out = concat_deductions(da, db)
    assert len(out) == 6 and verify_deduction(out).conclusion == pp


def test_concat_mismatches():
    T = Theory((P, Q))
    da = Deduction(T, (DeductionLine(P, InTheory(0)),))
    db = Deduction(T, (DeductionLine(Q, Hypothesis()),), Q)
    with pytest.raises(ProofError) as e:
        concat_deductions(da, db)
    assert e.value.code == "HYP_MISMATCH"
    db2 = Deduction(Theory((Q, P)), (DeductionLine(P, Hypothesis()),), P)
    with pytest.raises(ProofError) as e:
        concat_deductions(da, db2)
    assert e.value.code == "THEORY_MISMATCH"


def test_concat_corpus(dgen):
    for _ in range(200):
        da = dgen.closed_conclusion()
        db = dgen.deduction(theory=da.theory, hypothesis=da.conclusion)
        out = concat_deductions(da, db)
        r = verify_deduction(out)
        assert r.ok and r.conclusion == db.conclusion
        assert len(out) == len(da) + len(db)


# ---------------------------------------------------------------- weaken

def test_weaken():
    d = Deduction(Theory((P,)), (DeductionLine(P, InTheory(0)),))
    w = weaken(d, Q)
    assert w.lines == d.lines and w.hypothesis == Q and verify_deduction(w).ok
    with pytest.raises(ProofError) as e:
        weaken(d, Atom("R", (x,)))
    assert e.value.code == "HYP_OPEN"


def test_weaken_then_eliminate(dgen):
    for _ in range(200):
        d = dgen.deduction(use_hypothesis=False)
        a = dgen.fg.closed(2)
        out = deduction_closure(d, a)
        assert verify_deduction(out).conclusion == Implies(a, d.conclusion)
