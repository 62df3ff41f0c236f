import re

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from folproof.corpus import SIGNATURE, mutations
from folproof.dedthm import prove_self_implication
from folproof.goedel import (
    Codec, DecodeError, EncodeError, ProofPredicateInstance, decode_deduction, decode_formula,
    encode_deduction, encode_formula, explain_predicate, from_decimal, holds, to_decimal,
    transport_1_1, transport_2_2,
)
from folproof.kernel import (
    Deduction, DeductionLine, Hypothesis, InTheory, ModusPonens, ProofError, Theory,
    verify_deduction,
)
from folproof.syntax import Atom, Implies, Not, Signature, Variable, print_formula

from oracles import GOLDEN, render_golden

P, Q = Atom("P"), Atom("Q")
ONLY_P = Signature(relations=(("P", 0),))
KINDS = ("prime-power", "compact")


def codec(kind, sig=SIGNATURE):
    return Codec(kind, sig, ("x", "y", "z", "u", "v", "w"))


def test_examples():
    c = codec("prime-power", ONLY_P)
    assert c.code("P") == 9
    assert encode_formula(P, c) == 512
    assert encode_formula(Not(P), c) == 2 * 3 ** 9 == 39366
    assert decode_formula(512, c) == P
    with pytest.raises(DecodeError) as e:
        decode_formula(7, c)
    assert e.value.code == "NOT_A_FORMULA"


def test_table_layout():
    c = codec("compact")
    assert [c.code(s) for s in ("~", "->", "forall", "(", ")", ",", ".")] == list(range(1, 8))
    assert [c.code(v) for v in ("x", "y", "z")] == [8, 10, 12]
    assert [c.code(s) for s in ("c", "f", "P", "Q", "R")] == [9, 11, 13, 15, 17]
    assert len(set(c.table.values())) == len(c.table)
    with pytest.raises(EncodeError):
        encode_formula(Atom("S"), c)


@pytest.mark.parametrize("kind", KINDS)
def test_formula_round_trip(kind, fgen):
    c = codec(kind)
    for _ in range(500):
        f = fgen.formula(3)
        assert decode_formula(encode_formula(f, c), c) == f


@pytest.mark.parametrize("kind", KINDS)
def test_deduction_round_trip(kind, dgen):
    c = codec(kind)
    for _ in range(500 if kind == "compact" else 150):
        d = dgen.deduction()
        back = decode_deduction(encode_deduction(d, c), c, d.theory, d.hypothesis)
        assert back.lines == d.lines


def test_injective(dgen):
    c = codec("compact")
    seen = {}
    for _ in range(1000):
        d = dgen.deduction()
        n = encode_deduction(d, c)
        assert seen.setdefault(n, d.lines) == d.lines


def test_justification_changes_number():
    T = Theory((P, P))
    c = codec("compact")
    a = Deduction(T, (DeductionLine(P, InTheory(0)),))
    b = Deduction(T, (DeductionLine(P, InTheory(1)),))
    assert encode_deduction(a, c) != encode_deduction(b, c)


@settings(max_examples=300, deadline=None)
@given(n=st.integers(min_value=-5, max_value=10 ** 40))
def test_decode_garbage_is_total(n):
    for kind in KINDS:
        c = codec(kind)
        try:
            decode_formula(n, c)
        except DecodeError:
            pass
        assert explain_predicate(ProofPredicateInstance(n, 3, Theory(), c))[0] in (True, False)


# ------------------------------------------------------------- predicate

def test_predicate_examples():
    c = codec("compact")
    T = Theory((P, Implies(P, Q)))
    d = Deduction(T, (DeductionLine(P, InTheory(0)), DeductionLine(Implies(P, Q), InTheory(1)),
                      DeductionLine(Q, ModusPonens(0, 1))))
    x = encode_deduction(d, c)
    assert holds(x, encode_formula(Q, c), T, c)
    ok, why = explain_predicate(ProofPredicateInstance(x, encode_formula(P, c), T, c))
    assert (ok, why) == (False, "CONCLUSION_MISMATCH")
    assert explain_predicate(ProofPredicateInstance(1, encode_formula(Q, c), T, c)) == \
        (False, "NOT_A_DEDUCTION")
    # the same number read against a theory that lacks the cited formula
    ok, why = explain_predicate(ProofPredicateInstance(x, encode_formula(Q, c), Theory((P,)), c))
    assert not ok and why == "BAD_INDEX"


@pytest.mark.parametrize("kind", KINDS)
def test_predicate_faithful(kind, dgen):
    c = codec(kind)
    for _ in range(300 if kind == "compact" else 60):
        d = dgen.deduction()
        inst = ProofPredicateInstance(encode_deduction(d, c), encode_formula(d.conclusion, c),
                                      d.theory, c, d.hypothesis)
        assert explain_predicate(inst) == (True, "OK")


def test_mutation_soundness(dgen, rng):
    c = codec("compact")
    broken = flipped = 0
    for _ in range(200):
        d = dgen.deduction()
        y = encode_formula(d.conclusion, c)
        for m in mutations(d, rng):
            ok = verify_deduction(m).ok
            pred = holds(encode_deduction(m, c, check=False), y, m.theory, c, m.hypothesis)
            if pred:
                decoded = decode_deduction(encode_deduction(m, c, check=False), c, m.theory,
                                           m.hypothesis)
                assert verify_deduction(decoded).ok
            if not ok:
                broken += 1
                flipped += not pred
    assert broken > 500 and flipped == broken


# ------------------------------------------------------------- transport

def test_transport_examples():
    c = codec("compact")
    z = transport_1_1(Deduction(Theory(), (DeductionLine(P, Hypothesis()),), P), c)
    assert verify_deduction(z).conclusion == Implies(P, P)

    T = Theory((Q,))
    z = transport_1_1(Deduction(T, (DeductionLine(Q, InTheory(0)),), P), c)
    assert len(z) == 3 and holds(encode_deduction(z, c), encode_formula(Implies(P, Q), c), T, c)

    z = transport_2_2(Deduction(T, (DeductionLine(Q, InTheory(0)),)), P, c)
    assert verify_deduction(z).conclusion == Implies(P, Q)
    z = transport_2_2(prove_self_implication(P), Q, c)
    assert verify_deduction(z).conclusion == Implies(Q, Implies(P, P))
    with pytest.raises(ProofError) as e:
        transport_2_2(prove_self_implication(P), Atom("R", (Variable("x"),)), c)
    assert e.value.code == "HYP_OPEN"


def test_transport_rejects_corrupt_witness():
    bad = Deduction(Theory(), (DeductionLine(Q, InTheory(0)),), P)
    with pytest.raises(ProofError):
        transport_1_1(bad, codec("compact"))


# --------------------------------------------------------------- golden

_TOKEN = re.compile(r"forall|->|[~().,]|[A-Za-z_][A-Za-z0-9_]*")
_ORACLE_CODES = {"~": 1, "->": 2, "forall": 3, "(": 4, ")": 5, ",": 6, ".": 7,
                 "x": 8, "y": 10, "z": 12, "c": 9, "f": 11, "P": 13, "Q": 15, "R": 17}


def _oracle_number(text):
    n = 1
    for i, tok in enumerate(_TOKEN.findall(text), 1):
        n *= sympy.prime(i) ** _ORACLE_CODES[tok]
    return n


def test_golden_prime_power():
    raw = GOLDEN.read_bytes()
    rows = [ln.split("\t") for ln in raw.decode().splitlines()]
    assert len(rows) >= 10
    texts = [t for _, t in rows]
    assert render_golden(texts) == raw == render_golden(texts)
    for number, text in rows:
        assert from_decimal(number) == _oracle_number(text)
        assert print_formula(decode_formula(int(number), codec("prime-power"))) == text


def test_decimal_helpers():
    n = 7 ** 20000
    assert from_decimal(to_decimal(n)) == n
    with pytest.raises(ValueError):
        from_decimal("12a")
