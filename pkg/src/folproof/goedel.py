"""Goedel numbering of formulas and deductions, and the proof predicate.

Symbols get fixed positive codes::

    ~ 1   -> 2   forall 3   ( 4   ) 5   , 6   . 7
    k-th variable           2k + 8
    signature symbols       9, 11, 13, ... in declaration order
    deduction punctuation   the odd codes after the signature symbols

A formula is the code string of its canonical printed form.  A deduction
is the concatenation, line by line, of the formula's code string followed
by ``[ tag args ]``.  Code strings become numbers in one of two ways:

``prime-power``
    ``2**s1 * 3**s2 * 5**s3 * ...`` (the classical construction).
``compact``
    base-B digits, B = max code + 1: the string length written in
    bijective base B-1, a 0 separator, then the codes.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import gmpy2

from .dedthm import eliminate_hypothesis, weaken
from .kernel import (
    SCHEMAS, AxiomInstance, Deduction, DeductionLine, Generalization, Hypothesis,
    InTheory, ModusPonens, ProofError, Theory, require_verified, verify_deduction,
)
from .syntax import (
    Formula, Implies, Signature, SyntaxErrorFOL, Token, formula_tokens, is_closed,
    parse_tokens, all_vars,
)

KINDS = ("prime-power", "compact")
LOGICAL = {"~": 1, "->": 2, "forall": 3, "(": 4, ")": 5, ",": 6, ".": 7}
DEDUCTION_SYMBOLS = ("[", "]", "ax", "th", "hyp", "mp", "gen") + tuple("0123456789")
DEFAULT_VARIABLES = ("x", "y", "z", "u", "v", "w")


class EncodeError(ValueError):
    pass


class DecodeError(ValueError):
    """The number does not encode an object of the requested kind (NOT_A_FORMULA etc.)."""

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(f"{code}: {message}")


def default_kind() -> str:
    kind = os.environ.get("GOEDEL_CODEC", "compact")
    if kind not in KINDS:
        raise ValueError(f"GOEDEL_CODEC must be one of {KINDS}, got {kind!r}")
    return kind


@dataclass(frozen=True)
class Codec:
    kind: str
    signature: Signature
    variables: tuple = DEFAULT_VARIABLES
    table: dict = field(init=False, compare=False, hash=False, repr=False)
    symbols: dict = field(init=False, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown codec kind {self.kind!r}")
        variables = tuple(v for v in dict.fromkeys(self.variables)
                          if self.signature.is_variable_name(v))
        object.__setattr__(self, "variables", variables)
        table = dict(LOGICAL)
        for k, v in enumerate(variables):
            table[v] = 2 * k + 8
        code = 9
        for name in list(self.signature.symbols()) + list(DEDUCTION_SYMBOLS):
            table[name] = code
            code += 2
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "symbols", {c: s for s, c in table.items()})

    @classmethod
    def for_signature(cls, sig: Signature, kind: Optional[str] = None,
                      extra_variables: Iterable[str] = ()) -> "Codec":
        return cls(kind or default_kind(), sig, DEFAULT_VARIABLES + tuple(extra_variables))

    @property
    def base(self) -> int:
        return max(self.table.values()) + 1

    def code(self, symbol: str) -> int:
        try:
            return self.table[symbol]
        except KeyError:
            raise EncodeError(f"symbol {symbol!r} is not in the codec table") from None

    # -- packing code strings into numbers

    def pack(self, codes: Sequence[int]) -> int:
        if self.kind == "prime-power":
            return _pack_prime_power(codes)
        return _pack_compact(codes, self.base)

    def unpack(self, n: int) -> list[int]:
        if not isinstance(n, int) or n < 1:
            raise DecodeError("NOT_A_SEQUENCE", "Goedel numbers are positive integers")
        if self.kind == "prime-power":
            codes = _unpack_prime_power(n)
        else:
            codes = _unpack_compact(n, self.base)
        for c in codes:
            if c not in self.symbols:
                raise DecodeError("NOT_A_SEQUENCE", f"code {c} names no symbol")
        return codes


# ------------------------------------------------------------- primes

_PRIMES: list[int] = [2]


def primes_upto_count(n: int) -> list[int]:
    p = _PRIMES[-1]
    while len(_PRIMES) < n:
        p = int(gmpy2.next_prime(p))
        _PRIMES.append(p)
    return _PRIMES[:n]


def _pack_prime_power(codes: Sequence[int]) -> int:
    ps = primes_upto_count(len(codes))
    # balanced product keeps the big multiplications cheap
    factors = [gmpy2.mpz(p) ** c for p, c in zip(ps, codes)]
    if not factors:
        return 1
    while len(factors) > 1:
        factors = [factors[i] * factors[i + 1] if i + 1 < len(factors) else factors[i]
                   for i in range(0, len(factors), 2)]
    return int(factors[0])


def _unpack_prime_power(n: int) -> list[int]:
    m = gmpy2.mpz(n)
    codes = []
    i = 0
    while m > 1:
        p = primes_upto_count(i + 1)[i]
        m, e = gmpy2.remove(m, p)
        if e == 0:
            raise DecodeError("NOT_A_SEQUENCE",
                              f"prime {p} is skipped, or a foreign factor remains")
        codes.append(int(e))
        i += 1
    return codes


def _bijective(n: int, b: int) -> list[int]:
    digits = []
    while n > 0:
        n, r = divmod(n - 1, b)
        digits.append(r + 1)
    return digits[::-1]


def _pack_compact(codes: Sequence[int], base: int) -> int:
    digits = _bijective(len(codes), base - 1) + [0] + list(codes)
    n = 0
    for d in digits:
        n = n * base + d
    return n


def _unpack_compact(n: int, base: int) -> list[int]:
    digits = []
    while n:
        n, r = divmod(n, base)
        digits.append(r)
    digits.reverse()
    if 0 not in digits:
        raise DecodeError("NOT_A_SEQUENCE", "missing length separator")
    cut = digits.index(0)
    prefix, payload = digits[:cut], digits[cut + 1:]
    length = 0
    for d in prefix:
        length = length * (base - 1) + d
    if not prefix or length != len(payload) or 0 in payload:
        raise DecodeError("NOT_A_SEQUENCE", "length prefix does not match the payload")
    return payload


# ------------------------------------------------------------- formulas

def formula_codes(f: Formula, codec: Codec) -> list[int]:
    return [codec.code(tok) for tok in formula_tokens(f)]


def encode_formula(f: Formula, codec: Codec) -> int:
    return codec.pack(formula_codes(f, codec))


def _tokens_to_formula(toks: list[str], codec: Codec) -> Formula:
    try:
        f = parse_tokens([Token(t, 1, i + 1) for i, t in enumerate(toks)], codec.signature)
    except SyntaxErrorFOL as e:
        raise DecodeError("NOT_A_FORMULA", str(e)) from None
    if formula_tokens(f) != toks:
        raise DecodeError("NOT_A_FORMULA", "symbol string is not in canonical form")
    for v in all_vars(f):
        if v not in codec.table:
            raise DecodeError("NOT_A_FORMULA", f"variable {v!r} has no code")
    return f


def decode_formula(n: int, codec: Codec) -> Formula:
    try:
        codes = codec.unpack(n)
    except DecodeError as e:
        raise DecodeError("NOT_A_FORMULA", str(e)) from None
    toks = [codec.symbols[c] for c in codes]
    if any(t in DEDUCTION_SYMBOLS for t in toks):
        raise DecodeError("NOT_A_FORMULA", "deduction punctuation inside a formula")
    return _tokens_to_formula(toks, codec)


# ----------------------------------------------------------- deductions

def _numeral(k: int) -> list[str]:
    return list(str(k))


def justification_tokens(j, codec: Codec) -> list[str]:
    if isinstance(j, AxiomInstance):
        return ["ax", j.schema[1:]]
    if isinstance(j, InTheory):
        return ["th"] + _numeral(j.index)
    if isinstance(j, Hypothesis):
        return ["hyp"]
    if isinstance(j, ModusPonens):
        return ["mp"] + _numeral(j.minor) + [","] + _numeral(j.major)
    if isinstance(j, Generalization):
        return ["gen"] + _numeral(j.line) + [",", j.var]
    raise EncodeError(f"unknown justification {j!r}")


def deduction_codes(d: Deduction, codec: Codec) -> list[int]:
    toks: list[str] = []
    for line in d.lines:
        toks += formula_tokens(line.formula)
        toks += ["["] + justification_tokens(line.justification, codec) + ["]"]
    return [codec.code(t) for t in toks]


def encode_deduction(d: Deduction, codec: Codec, check: bool = True) -> int:
    """Goedel number of ``d``.  With ``check`` the deduction must verify first."""
    if check:
        require_verified(d)
    return codec.pack(deduction_codes(d, codec))


def _read_numeral(toks: list[str]) -> int:
    if not toks or not all(t.isdigit() and len(t) == 1 for t in toks):
        raise DecodeError("NOT_A_DEDUCTION", "bad numeral")
    if len(toks) > 1 and toks[0] == "0":
        raise DecodeError("NOT_A_DEDUCTION", "numeral with a leading zero")
    return int("".join(toks))


def _read_justification(toks: list[str], codec: Codec):
    if not toks:
        raise DecodeError("NOT_A_DEDUCTION", "empty justification")
    head, rest = toks[0], toks[1:]
    if head == "ax" and len(rest) == 1 and ("A" + rest[0]) in SCHEMAS:
        return AxiomInstance("A" + rest[0])
    if head == "th":
        return InTheory(_read_numeral(rest))
    if head == "hyp" and not rest:
        return Hypothesis()
    if head == "mp" and rest.count(",") == 1:
        k = rest.index(",")
        return ModusPonens(_read_numeral(rest[:k]), _read_numeral(rest[k + 1:]))
    if head == "gen" and len(rest) >= 3 and rest[-2] == "," and rest[-1] in codec.variables:
        return Generalization(_read_numeral(rest[:-2]), rest[-1])
    raise DecodeError("NOT_A_DEDUCTION", f"bad justification {' '.join(toks)}")


def decode_deduction(n: int, codec: Codec, theory: Theory = Theory(),
                     hypothesis: Optional[Formula] = None) -> Deduction:
    """Inverse of :func:`encode_deduction`; the result is not verified."""
    try:
        codes = codec.unpack(n)
    except DecodeError as e:
        raise DecodeError("NOT_A_DEDUCTION", str(e)) from None
    toks = [codec.symbols[c] for c in codes]
    lines = []
    i = 0
    while i < len(toks):
        try:
            open_ = toks.index("[", i)
            close = toks.index("]", open_)
        except ValueError:
            raise DecodeError("NOT_A_DEDUCTION", "unterminated line") from None
        try:
            f = _tokens_to_formula(toks[i:open_], codec)
        except DecodeError as e:
            raise DecodeError("NOT_A_DEDUCTION", str(e)) from None
        lines.append(DeductionLine(f, _read_justification(toks[open_ + 1:close], codec)))
        i = close + 1
    if not lines:
        raise DecodeError("NOT_A_DEDUCTION", "no lines")
    return Deduction(theory, tuple(lines), hypothesis, codec.signature)


# ------------------------------------------------------- proof predicate

@dataclass(frozen=True)
class ProofPredicateInstance:
    x: int
    y: int
    theory: Theory
    codec: Codec
    hypothesis: Optional[Formula] = None


def explain_predicate(inst: ProofPredicateInstance) -> tuple[bool, str]:
    """Decide ``x B y`` and say why: OK, NOT_A_DEDUCTION, a kernel reason code,
    or CONCLUSION_MISMATCH."""
    try:
        d = decode_deduction(inst.x, inst.codec, inst.theory, inst.hypothesis)
    except DecodeError:
        return False, "NOT_A_DEDUCTION"
    report = verify_deduction(d)
    if not report.ok:
        return False, report.failure[1]
    try:
        if encode_formula(d.conclusion, inst.codec) != inst.y:
            return False, "CONCLUSION_MISMATCH"
    except EncodeError:
        return False, "CONCLUSION_MISMATCH"
    return True, "OK"


def proof_check_predicate(inst: ProofPredicateInstance) -> bool:
    return explain_predicate(inst)[0]


def holds(x: int, y: int, theory: Theory, codec: Codec,
          hypothesis: Optional[Formula] = None) -> bool:
    return proof_check_predicate(ProofPredicateInstance(x, y, theory, codec, hypothesis))


# ------------------------------------------------------- witness transport

def transport_1_1(witness: Deduction, codec: Optional[Codec] = None) -> Deduction:
    """Map a witness x of ``x B_(T,A) b`` to a witness z of ``z B_T c``, c = code of A -> B."""
    z, _ = eliminate_hypothesis(witness)
    if codec is not None:
        _check_transport(z, Implies(witness.hypothesis, witness.conclusion), codec)
    return z


def transport_2_2(u_witness: Deduction, a: Formula, codec: Optional[Codec] = None) -> Deduction:
    """From a witness u of ``u B_T b`` and closed A, a witness z of ``z B_T c``."""
    if not is_closed(a):
        raise ProofError("HYP_OPEN", "transported hypothesis must be closed")
    z, _ = eliminate_hypothesis(weaken(u_witness, a))
    if codec is not None:
        _check_transport(z, Implies(a, u_witness.conclusion), codec)
    return z


def _check_transport(z: Deduction, c: Formula, codec: Codec) -> None:
    inst = ProofPredicateInstance(encode_deduction(z, codec, check=False),
                                  encode_formula(c, codec), z.theory, codec)
    ok, reason = explain_predicate(inst)
    if not ok:
        raise ProofError(reason, "transported witness fails the proof predicate")


def to_decimal(n: int) -> str:
    """Full decimal text of ``n``; not subject to the interpreter's digit limit."""
    return gmpy2.mpz(n).digits(10)


def from_decimal(text: str) -> int:
    text = text.strip()
    if not text.isdigit():
        raise ValueError(f"not a decimal natural number: {text[:40]!r}")
    return int(gmpy2.mpz(text, 10))
