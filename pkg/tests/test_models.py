import itertools

import numpy as np
import pytest

from folproof.dedthm import eliminate_hypothesis
from folproof.kernel import Deduction, DeductionLine, InTheory, Theory, verify_deduction
from folproof.models import (
    EnumerationBudgetError, Structure, StructureBatch, UnassignedVariable, assignments,
    count_structures, enumerate_structures, evaluate, make_batches, satisfies_theory,
    soundness_counterexamples, soundness_sweep, valid_in, deduction_variables,
)
from folproof.syntax import Atom, ForAll, Implies, Signature, Variable

x = Variable("x")
P, Q = Atom("P"), Atom("Q")
Rx = Atom("R", (x,))
UNARY = Signature(relations=(("R", 1),))


def test_tautology_and_quantifier():
    m = Structure(3, relations={"P": frozenset(), "R": frozenset({(0,), (1,), (2,)})})
    assert evaluate(Implies(P, P), m, {})
    assert evaluate(ForAll("x", Rx), m, {})
    m2 = Structure(3, relations={"R": frozenset({(0,), (2,)})})
    assert not evaluate(ForAll("x", Rx), m2, {})
    with pytest.raises(UnassignedVariable):
        evaluate(Rx, m2, {})


def _qf_oracle(f, rels, s):
    """Truth-table reading of a quantifier-free formula, written out separately."""
    kind = type(f).__name__
    if kind == "Atom":
        key = (f.rel,) + tuple(s[a.name] for a in f.args)
        return rels[key]
    if kind == "Not":
        return not _qf_oracle(f.body, rels, s)
    return (not _qf_oracle(f.left, rels, s)) or _qf_oracle(f.right, rels, s)


def _qf(fgen, d):
    f = fgen.formula(d)
    while any(isinstance(g, ForAll) for g in _walk(f)):
        f = fgen.formula(d)
    return f


def _walk(f):
    yield f
    for child in (getattr(f, "body", None), getattr(f, "left", None), getattr(f, "right", None)):
        if child is not None:
            yield from _walk(child)


def test_truth_table_oracle(rng):
    from folproof.corpus import FormulaGen
    sig = Signature(relations=(("P", 0), ("Q", 0), ("R", 1)))
    fg = FormulaGen(rng, sig, ("x", "y"))
    formulas = [_qf(fg, 3) for _ in range(40)]
    keys = [("P",), ("Q",), ("R", 0), ("R", 1)]
    for bits in itertools.product((False, True), repeat=len(keys)):
        rels = dict(zip(keys, bits))
        m = Structure(2, relations={
            "P": frozenset({()}) if rels[("P",)] else frozenset(),
            "Q": frozenset({()}) if rels[("Q",)] else frozenset(),
            "R": frozenset((e,) for e in (0, 1) if rels[("R", e)]),
        })
        for f in formulas:
            for s in ({"x": a, "y": b} for a in (0, 1) for b in (0, 1)):
                assert evaluate(f, m, s) == _qf_oracle(f, rels, s)


def test_satisfies_theory():
    total = Structure(2, relations={"R": frozenset({(0,), (1,)})})
    partial = Structure(2, relations={"R": frozenset({(0,)})})
    assert satisfies_theory(partial, Theory())
    assert satisfies_theory(total, Theory((Rx,)))
    assert not satisfies_theory(partial, Theory((Rx,)))


def test_satisfies_theory_random(rng, fgen):
    sig = Signature(constants=("c",), functions=(("f", 1),), relations=(("P", 0), ("Q", 0), ("R", 1)))
    structs = list(enumerate_structures(sig, 2))
    for _ in range(200):
        m = rng.choice(structs)
        t = Theory(tuple(fgen.formula(2) for _ in range(rng.randint(0, 3))))
        direct = all(evaluate(f, m, dict(zip(("x", "y"), vals)))
                     for f in t.formulas for vals in itertools.product(range(m.size), repeat=2))
        assert satisfies_theory(m, t) == direct


def test_enumeration_counts():
    assert len(list(enumerate_structures(Signature(relations=(("P", 0),)), 1))) == 2
    ms = list(enumerate_structures(UNARY, 2))
    assert len(ms) == 6 == count_structures(UNARY, 1) + count_structures(UNARY, 2)
    assert len({m.dumps() for m in ms}) == len(ms)
    assert [m.dumps() for m in ms] == [m.dumps() for m in enumerate_structures(UNARY, 2)]


def test_enumeration_no_duplicates_with_functions(corpus_sig):
    ms = list(enumerate_structures(corpus_sig, 2))
    assert len({m.dumps() for m in ms}) == len(ms) == sum(
        count_structures(corpus_sig, n) for n in (1, 2))
    for m in ms:
        m.check(corpus_sig)


def test_enumeration_limits():
    with pytest.raises(EnumerationBudgetError):
        enumerate_structures(UNARY, 5)
    with pytest.raises(EnumerationBudgetError):
        enumerate_structures(Signature(functions=(("g", 2),), relations=(("P", 0),)), 2)
    with pytest.raises(EnumerationBudgetError):
        enumerate_structures(UNARY, 4, cap=10)
    assert len(list(enumerate_structures(UNARY, 5, allow_large=True))) == 2 + 4 + 8 + 16 + 32


def test_structure_json_round_trip(corpus_sig):
    for m in enumerate_structures(corpus_sig, 2):
        assert Structure.from_json(m.to_json()) == m


def test_batch_matches_scalar(fgen, corpus_sig):
    formulas = [fgen.formula(3) for _ in range(60)]
    for n in (1, 2, 3):
        ms = [m for m in enumerate_structures(corpus_sig, n) if m.size == n][:200]
        batch = StructureBatch(ms, corpus_sig, ("x", "y"))
        for f in formulas:
            got = batch.valid(f)
            want = np.array([valid_in(f, m) for m in ms])
            assert (got == want).all()


def test_sound_corpus_small(dgen, corpus_sig):
    for _ in range(100):
        d = dgen.deduction()
        assert soundness_sweep(d, corpus_sig, 2) == []


def test_eliminated_conclusion_true_in_models(dgen, corpus_sig):
    batches = make_batches(corpus_sig, 2, ("x", "y"))
    for _ in range(100):
        d, _ = eliminate_hypothesis(dgen.deduction())
        assert soundness_counterexamples(d, batches) == []


def test_bogus_line_is_caught():
    # Q listed as a theory line against a theory that does not contain it
    d = Deduction(Theory((P,)), (DeductionLine(Q, InTheory(0)),))
    assert not verify_deduction(d).ok
    bad = soundness_sweep(d, Signature(relations=(("P", 0), ("Q", 0))), 1)
    assert bad and bad[0].line == 0
    m = bad[0].structure
    assert evaluate(P, m, {}) and not evaluate(Q, m, {})


def test_deduction_variables():
    d = Deduction(Theory((ForAll("y", Rx),)), (DeductionLine(ForAll("y", Rx), InTheory(0)),))
    assert deduction_variables(d) == ["x", "y"]
    assert list(assignments([], 3)) == [{}]
