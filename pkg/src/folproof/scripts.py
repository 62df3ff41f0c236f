"""Proof scripts: the text interchange format and its JSON mirror.

Text form::

    # comments and blank lines are ignored
    constants: c
    functions: f/1
    relations: P/0, Q/0, R/1
    variables: x y
    theory: P
    theory: (P -> Q)
    hypothesis: A
    0. P [theory 0]
    1. (P -> Q) [theory 1]
    2. Q [mp 0 1]

Justifications are ``axiom A1`` .. ``axiom A5``, ``theory k``, ``hyp``,
``mp i j`` (i the minor premise, j the implication) and ``gen i var``.
When ``relations:`` and ``functions:`` are both absent the signature is
inferred from the formulas; constants must always be declared.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Optional

from .kernel import (
    SCHEMAS, AxiomInstance, Deduction, DeductionLine, Generalization, Hypothesis,
    InTheory, ModusPonens, Theory,
)
from .syntax import (
    Formula, Signature, SignatureError, SyntaxErrorFOL, infer_signature, parse_formula,
    print_formula,
)

SCHEMA_VERSION = 1
_LINE_RE = re.compile(r"\s*(\d+)\s*\.\s*(.*?)\s*\[([^\]]*)\]\s*\Z")
_HEADERS = ("constants", "functions", "relations", "variables", "theory", "hypothesis", "name")


class ScriptError(ValueError):
    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


@dataclass
class Script:
    signature: Signature
    theory: Theory
    hypothesis: Optional[Formula] = None
    lines: tuple = ()
    variables: tuple = ()

    @property
    def deduction(self) -> Deduction:
        if not self.lines:
            raise ScriptError("script has no numbered lines")
        return Deduction(self.theory, self.lines, self.hypothesis, self.signature)

    @classmethod
    def of(cls, d: Deduction, signature: Optional[Signature] = None,
           variables: tuple = ()) -> "Script":
        sig = signature or d.signature
        if sig is None:
            from .syntax import signature_of
            roots = d.formulas() + list(d.theory.formulas)
            sig = signature_of(roots + ([d.hypothesis] if d.hypothesis is not None else []))
        return cls(sig, d.theory, d.hypothesis, d.lines, tuple(variables))


def _parse_arities(text: str, lineno: int) -> list[tuple[str, int]]:
    out = []
    for item in re.split(r"[\s,]+", text.strip()):
        if not item:
            continue
        name, _, arity = item.partition("/")
        if not arity.isdigit():
            raise ScriptError(f"expected name/arity, got {item!r}", lineno)
        out.append((name, int(arity)))
    return out


def _names(text: str) -> list[str]:
    return [t for t in re.split(r"[\s,]+", text.strip()) if t]


def parse_justification(text: str, lineno: int = 0):
    parts = text.split()
    if not parts:
        raise ScriptError("empty justification", lineno)
    head, args = parts[0], parts[1:]
    try:
        if head == "axiom" and len(args) == 1 and args[0] in SCHEMAS:
            return AxiomInstance(args[0])
        if head == "theory" and len(args) == 1:
            return InTheory(int(args[0]))
        if head == "hyp" and not args:
            return Hypothesis()
        if head == "mp" and len(args) == 2:
            return ModusPonens(int(args[0]), int(args[1]))
        if head == "gen" and len(args) == 2:
            return Generalization(int(args[0]), args[1])
    except ValueError:
        pass
    raise ScriptError(f"bad justification [{text}]", lineno)


def format_justification(j) -> str:
    if isinstance(j, AxiomInstance):
        return f"axiom {j.schema}"
    if isinstance(j, InTheory):
        return f"theory {j.index}"
    if isinstance(j, Hypothesis):
        return "hyp"
    if isinstance(j, ModusPonens):
        return f"mp {j.minor} {j.major}"
    return f"gen {j.line} {j.var}"


def parse_script(text: str) -> Script:
    headers: dict[str, list] = {h: [] for h in _HEADERS}
    numbered = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE_RE.match(line)
        if m:
            numbered.append((lineno, int(m.group(1)), m.group(2), m.group(3)))
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in _HEADERS:
            raise ScriptError(f"cannot read {raw.strip()!r}", lineno)
        if numbered:
            raise ScriptError("header after numbered lines", lineno)
        headers[key].append((lineno, rest.strip()))

    constants = [n for _, t in headers["constants"] for n in _names(t)]
    variables = tuple(n for _, t in headers["variables"] for n in _names(t))
    try:
        if headers["relations"] or headers["functions"]:
            sig = Signature(
                tuple(constants),
                tuple(a for ln, t in headers["functions"] for a in _parse_arities(t, ln)),
                tuple(a for ln, t in headers["relations"] for a in _parse_arities(t, ln)),
            )
        else:
            texts = [t for _, t in headers["theory"] + headers["hypothesis"]]
            texts += [f for _, _, f, _ in numbered]
            sig = infer_signature(texts, constants)
    except SignatureError as e:
        raise ScriptError(f"signature: {e}") from None

    def formula(text: str, lineno: int) -> Formula:
        try:
            return parse_formula(text, sig)
        except SyntaxErrorFOL as e:
            raise ScriptError(f"{e}", lineno) from None

    theory = Theory(tuple(formula(t, ln) for ln, t in headers["theory"]),
                    headers["name"][0][1] if headers["name"] else None)
    if len(headers["hypothesis"]) > 1:
        raise ScriptError("at most one hypothesis", headers["hypothesis"][1][0])
    hyp = formula(headers["hypothesis"][0][1], headers["hypothesis"][0][0]) if headers["hypothesis"] else None
    lines = []
    for expected, (lineno, n, ftext, jtext) in enumerate(numbered):
        if n != expected:
            raise ScriptError(f"line number {n}, expected {expected}", lineno)
        lines.append(DeductionLine(formula(ftext, lineno), parse_justification(jtext, lineno)))
    return Script(sig, theory, hyp, tuple(lines), variables)


def format_script(s: Script) -> str:
    sig = s.signature
    out = []
    if s.theory.name:
        out.append(f"name: {s.theory.name}")
    if sig.constants:
        out.append("constants: " + ", ".join(sig.constants))
    if sig.functions:
        out.append("functions: " + ", ".join(f"{n}/{a}" for n, a in sig.functions))
    out.append("relations: " + ", ".join(f"{n}/{a}" for n, a in sig.relations))
    if s.variables:
        out.append("variables: " + " ".join(s.variables))
    out += [f"theory: {print_formula(f)}" for f in s.theory.formulas]
    if s.hypothesis is not None:
        out.append(f"hypothesis: {print_formula(s.hypothesis)}")
    out += [f"{i}. {print_formula(ln.formula)} [{format_justification(ln.justification)}]"
            for i, ln in enumerate(s.lines)]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- JSON

def justification_json(j) -> dict:
    if isinstance(j, AxiomInstance):
        return {"kind": "axiom", "schema": j.schema}
    if isinstance(j, InTheory):
        return {"kind": "theory", "index": j.index}
    if isinstance(j, Hypothesis):
        return {"kind": "hyp"}
    if isinstance(j, ModusPonens):
        return {"kind": "mp", "minor": j.minor, "major": j.major}
    return {"kind": "gen", "line": j.line, "var": j.var}


def justification_from_json(data: dict):
    kind = data.get("kind")
    if kind == "axiom":
        return AxiomInstance(data["schema"])
    if kind == "theory":
        return InTheory(int(data["index"]))
    if kind == "hyp":
        return Hypothesis()
    if kind == "mp":
        return ModusPonens(int(data["minor"]), int(data["major"]))
    if kind == "gen":
        return Generalization(int(data["line"]), data["var"])
    raise ScriptError(f"bad justification {data!r}")


def script_to_json(s: Script) -> dict:
    sig = s.signature
    return {
        "schema": SCHEMA_VERSION,
        "signature": {
            "constants": list(sig.constants),
            "functions": [[n, a] for n, a in sig.functions],
            "relations": [[n, a] for n, a in sig.relations],
        },
        "variables": list(s.variables),
        "name": s.theory.name,
        "theory": [print_formula(f) for f in s.theory.formulas],
        "hypothesis": None if s.hypothesis is None else print_formula(s.hypothesis),
        "lines": [{"formula": print_formula(ln.formula),
                   "justification": justification_json(ln.justification)} for ln in s.lines],
    }


def script_from_json(data: dict) -> Script:
    if data.get("schema") != SCHEMA_VERSION:
        raise ScriptError(f"unsupported schema {data.get('schema')!r}")
    sg = data["signature"]
    try:
        sig = Signature(tuple(sg.get("constants", ())),
                        tuple((n, a) for n, a in sg.get("functions", ())),
                        tuple((n, a) for n, a in sg.get("relations", ())))
        theory = Theory(tuple(parse_formula(t, sig) for t in data.get("theory", ())),
                        data.get("name"))
        hyp = data.get("hypothesis")
        hyp = None if hyp is None else parse_formula(hyp, sig)
        lines = tuple(DeductionLine(parse_formula(ln["formula"], sig),
                                    justification_from_json(ln["justification"]))
                      for ln in data.get("lines", ()))
    except (SyntaxErrorFOL, SignatureError, KeyError, TypeError) as e:
        raise ScriptError(f"bad JSON script: {e}") from None
    return Script(sig, theory, hyp, lines, tuple(data.get("variables", ())))


def load_script(text: str) -> Script:
    """Read either format; JSON is recognised by a leading ``{``."""
    if text.lstrip().startswith("{"):
        try:
            return script_from_json(json.loads(text))
        except json.JSONDecodeError as e:
            raise ScriptError(f"bad JSON: {e}") from None
    return parse_script(text)


def dumps_json(s: Script) -> str:
    return json.dumps(script_to_json(s), sort_keys=True, indent=2) + "\n"
