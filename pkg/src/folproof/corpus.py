"""Random formulas and random verified deductions for property tests."""
from __future__ import annotations

import random
from dataclasses import replace
from typing import Optional

from .kernel import (
    AxiomInstance, Deduction, DeductionLine, Generalization, Hypothesis, InTheory,
    ModusPonens, Theory, verify_deduction,
)
from .syntax import (
    Atom, Constant, ForAll, Formula, FuncApp, Implies, Not, Signature, Variable,
    depth, free_vars, is_free_for, substitute, subformulas,
)

SIGNATURE = Signature(constants=("c",), functions=(("f", 1),),
                      relations=(("P", 0), ("Q", 0), ("R", 1)))
VARIABLES = ("x", "y")


class FormulaGen:
    def __init__(self, rng: random.Random, sig: Signature = SIGNATURE,
                 variables=VARIABLES):
        self.rng = rng
        self.sig = sig
        self.variables = tuple(variables)

    def term(self, d: int = 2):
        rng = self.rng
        options = ["var"] * 3 + (["const"] if self.sig.constants else [])
        if d > 0 and self.sig.functions:
            options.append("func")
        kind = rng.choice(options)
        if kind == "var":
            return Variable(rng.choice(self.variables))
        if kind == "const":
            return Constant(rng.choice(self.sig.constants))
        name, a = rng.choice(self.sig.functions)
        return FuncApp(name, tuple(self.term(d - 1) for _ in range(a)))

    def atom(self):
        name, a = self.rng.choice(self.sig.relations)
        return Atom(name, tuple(self.term() for _ in range(a)))

    def formula(self, d: int = 3) -> Formula:
        rng = self.rng
        if d <= 0 or rng.random() < 0.3:
            return self.atom()
        r = rng.random()
        if r < 0.2:
            return Not(self.formula(d - 1))
        if r < 0.75:
            return Implies(self.formula(d - 1), self.formula(d - 1))
        return ForAll(rng.choice(self.variables), self.formula(d - 1))

    def closed(self, d: int = 3) -> Formula:
        f = self.formula(d)
        for v in free_vars(f):
            f = ForAll(v, f)
        return f


class DeductionGen:
    """Forward proof generator: each step appends one justified line.

    Lines deeper than ``max_depth`` are never emitted, so every formula of a
    generated deduction stays within the AST depth bound.
    """

    def __init__(self, rng: random.Random, max_lines: int = 12, max_depth: int = 6,
                 sig: Signature = SIGNATURE):
        self.rng = rng
        self.fg = FormulaGen(rng, sig)
        self.max_lines = max_lines
        self.max_depth = max_depth
        self.sig = sig

    def theory(self, k: Optional[int] = None) -> Theory:
        k = self.rng.randint(0, 3) if k is None else k
        return Theory(tuple(self.fg.formula(2) for _ in range(k)))

    def small(self, lines) -> Formula:
        """A metavariable filler: often a subformula of an earlier line."""
        rng = self.rng
        if lines and rng.random() < 0.6:
            subs = list(subformulas(rng.choice(lines).formula))
            return rng.choice(subs)
        return self.fg.formula(1)

    def axiom(self, lines) -> tuple[Formula, str]:
        rng = self.rng
        prior = [ln.formula for ln in lines]
        b = rng.choice(prior) if prior and rng.random() < 0.5 else self.small(lines)
        c, d = self.small(lines), self.small(lines)
        schema = rng.choice(("A1", "A1", "A2", "A3", "A4", "A5"))
        if schema == "A1":
            return Implies(b, Implies(c, b)), schema
        if schema == "A2":
            return Implies(Implies(b, Implies(c, d)), Implies(Implies(b, c), Implies(b, d))), schema
        if schema == "A3":
            return Implies(Implies(Not(c), Not(b)), Implies(Implies(Not(c), b), c)), schema
        if schema == "A4":
            x = rng.choice(self.fg.variables)
            body = b if x in free_vars(b) or rng.random() < 0.3 else self.fg.formula(2)
            for _ in range(4):
                t = self.fg.term(1)
                if is_free_for(t, x, body):
                    return Implies(ForAll(x, body), substitute(body, x, t)), schema
            return Implies(ForAll(x, body), body), schema
        x = rng.choice(self.fg.variables)
        if x in free_vars(b):
            b = self.fg.closed(1)
        return Implies(ForAll(x, Implies(b, c)), Implies(b, ForAll(x, c))), "A5"

    def deduction(self, theory: Optional[Theory] = None, hypothesis: Optional[Formula] = None,
                  use_hypothesis: bool = True, length: Optional[int] = None) -> Deduction:
        rng = self.rng
        theory = self.theory() if theory is None else theory
        if hypothesis is None and use_hypothesis:
            hypothesis = self.fg.closed(2)
        n = length or rng.randint(1, self.max_lines)
        lines: list[DeductionLine] = []
        attempts = 0
        while len(lines) < n and attempts < 50 * n:
            attempts += 1
            line = self.step(lines, theory, hypothesis)
            if line is not None and depth(line.formula) <= self.max_depth:
                lines.append(line)
        if not lines:
            lines.append(DeductionLine(*self.axiom_line([])))
        d = Deduction(theory, tuple(lines), hypothesis, self.sig)
        assert verify_deduction(d).ok, verify_deduction(d)
        return d

    def axiom_line(self, lines):
        f, s = self.axiom(lines)
        return f, AxiomInstance(s)

    def step(self, lines, theory: Theory, hypothesis) -> Optional[DeductionLine]:
        rng = self.rng
        r = rng.random()
        k = len(lines)
        if r < 0.12 and len(theory):
            i = rng.randrange(len(theory))
            return DeductionLine(theory[i], InTheory(i))
        if r < 0.22 and hypothesis is not None:
            return DeductionLine(hypothesis, Hypothesis())
        if r < 0.65 and k:
            pairs = [(i, j) for j in range(k) for i in range(k)
                     if isinstance(lines[j].formula, Implies)
                     and lines[j].formula.left == lines[i].formula]
            if pairs:
                i, j = rng.choice(pairs)
                return DeductionLine(lines[j].formula.right, ModusPonens(i, j))
        if r < 0.72 and k:
            i = rng.randrange(k)
            v = rng.choice(self.fg.variables)
            return DeductionLine(ForAll(v, lines[i].formula), Generalization(i, v))
        return DeductionLine(*self.axiom_line(lines))

    def closed_conclusion(self, theory: Optional[Theory] = None) -> Deduction:
        """A hypothesis-free deduction whose last line is closed."""
        d = self.deduction(theory, use_hypothesis=False)
        lines = list(d.lines)
        for v in free_vars(lines[-1].formula):
            lines.append(DeductionLine(ForAll(v, lines[-1].formula),
                                       Generalization(len(lines) - 1, v)))
        return replace(d, lines=tuple(lines))


def mutations(d: Deduction, rng: random.Random, fg: Optional[FormulaGen] = None):
    """Every single-line mutation kind applied once per line: justification swap,
    index perturbation, formula alteration."""
    fg = fg or FormulaGen(rng)
    out = []
    for k, line in enumerate(d.lines):
        j = line.justification
        # swap the justification for one of another kind
        swaps = [AxiomInstance(rng.choice(("A1", "A2", "A3", "A4", "A5"))),
                 InTheory(rng.randrange(max(1, len(d.theory)))), Hypothesis()]
        if k:
            swaps.append(ModusPonens(rng.randrange(k), rng.randrange(k)))
            swaps.append(Generalization(rng.randrange(k), rng.choice(fg.variables)))
        swaps = [s for s in swaps if type(s) is not type(j)]
        out.append(_with_line(d, k, DeductionLine(line.formula, rng.choice(swaps))))
        # perturb a cited index
        if isinstance(j, ModusPonens):
            nj = ModusPonens(j.minor + 1, j.major) if rng.random() < 0.5 else ModusPonens(j.minor, j.major + 1)
        elif isinstance(j, Generalization):
            nj = Generalization(j.line + 1, j.var)
        elif isinstance(j, InTheory):
            nj = InTheory(j.index + 1)
        elif isinstance(j, AxiomInstance):
            nj = AxiomInstance("A%d" % (int(j.schema[1]) % 5 + 1))
        else:
            nj = InTheory(0)
        out.append(_with_line(d, k, DeductionLine(line.formula, nj)))
        # alter the formula
        alt = Not(line.formula) if rng.random() < 0.5 else fg.formula(2)
        out.append(_with_line(d, k, DeductionLine(alt, j)))
    return out


def _with_line(d: Deduction, k: int, line: DeductionLine) -> Deduction:
    lines = list(d.lines)
    lines[k] = line
    return replace(d, lines=tuple(lines))
