"""Command-line front end.

Exit status: 0 success, 1 check failed (verification, predicate, search or
soundness sweep), 2 usage or parse error.  With ``--json`` every command
prints one JSON object carrying ``schema: 1``; keys are sorted so identical
runs give identical bytes.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import goedel
from .dedthm import concat_deductions, eliminate_hypothesis, weaken
from .goedel import Codec, DecodeError, EncodeError, ProofPredicateInstance
from .kernel import ProofError, Theory, verify_deduction
from .models import EnumerationBudgetError, soundness_sweep
from .scripts import SCHEMA_VERSION, Script, ScriptError, dumps_json, format_script, load_script
from .search import BudgetError, SearchBudget, bounded_proof_search
from .syntax import (
    SignatureError, SyntaxErrorFOL, infer_signature, parse_formula, print_formula,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _script(path: str) -> Script:
    return load_script(_read(path))


def _codec(script: Script, kind: Optional[str]) -> Codec:
    return Codec.for_signature(script.signature, kind, script.variables)


def _number(arg: str) -> int:
    text = _read(arg[1:]) if arg.startswith("@") else arg
    try:
        return goedel.from_decimal(text)
    except ValueError as e:
        raise UsageError(str(e)) from None


class Output:
    def __init__(self, as_json: bool, command: str, out=None):
        self.as_json = as_json
        self.command = command
        self.out = out or sys.stdout

    def emit(self, ok: bool, text: str = "", reason: Optional[str] = None, **payload) -> None:
        if self.as_json:
            doc = {"schema": SCHEMA_VERSION, "command": self.command, "ok": ok,
                   "reason": reason, **payload}
            self.out.write(json.dumps(doc, sort_keys=True) + "\n")
        elif text:
            self.out.write(text if text.endswith("\n") else text + "\n")


def _emit_script(out: Output, script: Script, path: Optional[str], **payload) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(format_script(script))
    if out.as_json:
        out.emit(True, reason="OK", script=json.loads(dumps_json(script)), **payload)
    elif not path:
        out.emit(True, format_script(script))


# ---------------------------------------------------------------- commands

def cmd_verify(args, out: Output) -> int:
    s = _script(args.proof)
    report = verify_deduction(s.deduction)
    if report.ok:
        out.emit(True, f"ok: {print_formula(report.conclusion)}", "OK",
                 conclusion=print_formula(report.conclusion), first_failure=None)
        return EXIT_OK
    line, code, msg = report.failure
    out.emit(False, f"FAILED line {line}: {code} {msg}", code, conclusion=None,
             first_failure={"line": line, "code": code, "message": msg})
    return EXIT_FAIL


def cmd_dt(args, out: Output) -> int:
    s = _script(args.proof)
    d, trace = eliminate_hypothesis(s.deduction)
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(trace.dumps() + "\n")
    _emit_script(out, Script.of(d, s.signature, s.variables), args.output, trace=trace.to_json())
    return EXIT_OK


def cmd_concat(args, out: Output) -> int:
    a, b = _script(args.proof_a), _script(args.proof_b)
    d = concat_deductions(a.deduction, b.deduction)
    _emit_script(out, Script.of(d, a.signature, a.variables), args.output)
    return EXIT_OK


def cmd_weaken(args, out: Output) -> int:
    s = _script(args.proof)
    hyp = parse_formula(args.hyp, s.signature)
    d = weaken(s.deduction, hyp)
    _emit_script(out, Script.of(d, s.signature, s.variables), args.output)
    return EXIT_OK


def cmd_goedelize(args, out: Output) -> int:
    if os.path.exists(args.target) or args.target == "-":
        s = _script(args.target)
        codec = _codec(s, args.codec)
        if s.lines:
            n = goedel.encode_deduction(s.deduction, codec)
            what = "deduction"
        else:
            raise UsageError("script has no lines to encode")
    else:
        if args.theory:
            t = _script(args.theory)
            sig, codec = t.signature, _codec(t, args.codec)
        else:
            constants = args.constants.split(",") if args.constants else ()
            sig = infer_signature([args.target], constants)
            codec = Codec.for_signature(sig, args.codec)
        n = goedel.encode_formula(parse_formula(args.target, sig), codec)
        what = "formula"
    digits = goedel.to_decimal(n)
    out.emit(True, digits, "OK", number=digits, kind=codec.kind, object=what)
    return EXIT_OK


def cmd_check_b(args, out: Output) -> int:
    t = _script(args.theory)
    codec = _codec(t, args.codec)
    hyp = t.hypothesis
    if args.hyp:
        hyp = parse_formula(args.hyp, t.signature)
    inst = ProofPredicateInstance(_number(args.x), _number(args.y), t.theory, codec, hyp)
    ok, reason = goedel.explain_predicate(inst)
    out.emit(ok, "true" if ok else f"false: {reason}", reason, holds=ok)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_search(args, out: Output) -> int:
    if args.theory:
        t = _script(args.theory)
        sig, theory, hyp, variables = t.signature, t.theory, t.hypothesis, t.variables
    else:
        sig = infer_signature([args.formula])
        theory, hyp, variables = Theory(), None, ()
    target = parse_formula(args.formula, sig)
    budget = SearchBudget(args.max_len, args.max_size, args.pool, args.raw_cap)
    codec = Codec.for_signature(sig, args.codec, variables)
    result = bounded_proof_search(target, theory, hyp, budget, codec)
    if result.found:
        s = Script(sig, theory, hyp, result.deduction.lines, variables)
        if out.as_json:
            out.emit(True, reason="OK", status=result.status, length=result.length,
                     script=json.loads(dumps_json(s)))
        else:
            out.emit(True, format_script(s))
        return EXIT_OK
    out.emit(False, "absent: bounds exhausted", "BOUNDS_EXHAUSTED", status=result.status)
    return EXIT_FAIL


def cmd_models_check(args, out: Output) -> int:
    s = _script(args.proof)
    d = s.deduction
    report = verify_deduction(d)
    if not report.ok:
        out.emit(False, f"not a verified deduction: {report.failure[1]}", report.failure[1])
        return EXIT_FAIL
    bad = soundness_sweep(d, s.signature, args.max_domain, args.cap)
    if not bad:
        out.emit(True, f"sound: no counterexample up to domain size {args.max_domain}", "OK",
                 counterexamples=[])
        return EXIT_OK
    rows = [{"line": c.line, "structure": c.structure.to_json()} for c in bad]
    out.emit(False, f"{len(bad)} counterexample(s); first at line {bad[0].line}",
             "COUNTEREXAMPLE", counterexamples=rows)
    return EXIT_FAIL


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="folproof", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    def codec_opt(sp):
        sp.add_argument("--codec", choices=goedel.KINDS, default=None,
                        help="numbering (default: $GOEDEL_CODEC or compact)")

    sp = sub.add_parser("verify", help="check a proof script")
    sp.add_argument("proof")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("dt", help="eliminate the hypothesis (deduction theorem)")
    sp.add_argument("proof")
    sp.add_argument("-o", "--output")
    sp.add_argument("--trace", help="write the transform trace as JSON here")
    sp.set_defaults(func=cmd_dt)

    sp = sub.add_parser("concat", help="discharge B's hypothesis with proof A")
    sp.add_argument("proof_a")
    sp.add_argument("proof_b")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_concat)

    sp = sub.add_parser("weaken", help="add a closed hypothesis")
    sp.add_argument("proof")
    sp.add_argument("--hyp", required=True)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_weaken)

    sp = sub.add_parser("goedelize", help="Goedel number of a proof script or a formula")
    sp.add_argument("target", help="script path, or formula text")
    sp.add_argument("--theory", help="number a formula under this script's signature")
    sp.add_argument("--constants", help="comma-separated constants for a formula argument")
    codec_opt(sp)
    sp.set_defaults(func=cmd_goedelize)

    sp = sub.add_parser("check-b", help="decide the proof predicate x B y")
    sp.add_argument("x", help="decimal number, or @file")
    sp.add_argument("y", help="decimal number, or @file")
    sp.add_argument("--theory", required=True, help="script whose headers give T")
    sp.add_argument("--hyp", help="hypothesis formula (overrides the script's)")
    codec_opt(sp)
    sp.set_defaults(func=cmd_check_b)

    sp = sub.add_parser("search", help="bounded proof search")
    sp.add_argument("formula")
    sp.add_argument("--theory", help="script whose headers give T and the signature")
    sp.add_argument("--max-len", type=int, required=True)
    sp.add_argument("--max-size", type=int, default=24)
    sp.add_argument("--pool", choices=("default", "subformulas"), default="default")
    sp.add_argument("--raw-cap", type=int, default=None,
                    help="scan Goedel numbers 1..N with the predicate instead")
    codec_opt(sp)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("models-check", help="finite-model soundness sweep")
    sp.add_argument("proof")
    sp.add_argument("--max-domain", type=int, default=3)
    sp.add_argument("--cap", type=int, default=1_000_000)
    sp.set_defaults(func=cmd_models_check)
    return p


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.json, args.command)
    try:
        return args.func(args, out)
    except ProofError as e:
        out.emit(False, f"error: {e}", e.code)
        return EXIT_FAIL
    except (UsageError, ScriptError, SyntaxErrorFOL, SignatureError, BudgetError,
            EncodeError, DecodeError, EnumerationBudgetError, ValueError) as e:
        if args.json:
            out.emit(False, reason="USAGE", message=str(e))
        else:
            print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
