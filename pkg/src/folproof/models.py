"""Finite structures and Tarskian truth.

A theory holds in a structure when each of its formulas is true under every
assignment to its free variables (the universal-closure reading), which is
the reading under which generalization is sound.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np

from .kernel import Deduction, Theory
from .syntax import (
    Atom, Constant, ForAll, Formula, Implies, Not, Signature, Term, Variable,
    free_vars, subformulas,
)

MAX_DOMAIN = 4
DEFAULT_STRUCTURE_CAP = 1_000_000


class UnassignedVariable(KeyError):
    pass


class EnumerationBudgetError(ValueError):
    pass


@dataclass(frozen=True)
class Structure:
    size: int
    constants: Mapping[str, int] = field(default_factory=dict)
    functions: Mapping[str, Mapping[tuple, int]] = field(default_factory=dict)
    relations: Mapping[str, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("domain must be nonempty")

    def check(self, sig: Signature) -> None:
        """Raise ValueError unless every table is total and in range for ``sig``."""
        n = self.size
        for c in sig.constants:
            if not 0 <= self.constants.get(c, -1) < n:
                raise ValueError(f"constant {c} uninterpreted")
        for name, a in sig.functions:
            table = self.functions.get(name, {})
            for args in itertools.product(range(n), repeat=a):
                if not 0 <= table.get(args, -1) < n:
                    raise ValueError(f"function {name} not total at {args}")
        for name, a in sig.relations:
            for tup in self.relations.get(name, frozenset()):
                if len(tup) != a or not all(0 <= e < n for e in tup):
                    raise ValueError(f"relation {name} has bad tuple {tup}")

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "constants": dict(sorted(self.constants.items())),
            "functions": {k: [[list(a), v] for a, v in sorted(t.items())]
                          for k, t in sorted(self.functions.items())},
            "relations": {k: sorted(list(t) for t in v) for k, v in sorted(self.relations.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> "Structure":
        return cls(
            int(data["size"]),
            {k: int(v) for k, v in data.get("constants", {}).items()},
            {k: {tuple(a): int(v) for a, v in rows} for k, rows in data.get("functions", {}).items()},
            {k: frozenset(tuple(t) for t in rows) for k, rows in data.get("relations", {}).items()},
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# ----------------------------------------------------------------- truth

def eval_term(t: Term, m: Structure, s: Mapping[str, int]) -> int:
    if isinstance(t, Variable):
        try:
            return s[t.name]
        except KeyError:
            raise UnassignedVariable(t.name) from None
    if isinstance(t, Constant):
        return m.constants[t.name]
    return m.functions[t.name][tuple(eval_term(a, m, s) for a in t.args)]


def evaluate(f: Formula, m: Structure, s: Mapping[str, int]) -> bool:
    if isinstance(f, Atom):
        return tuple(eval_term(a, m, s) for a in f.args) in m.relations.get(f.rel, ())
    if isinstance(f, Not):
        return not evaluate(f.body, m, s)
    if isinstance(f, Implies):
        return (not evaluate(f.left, m, s)) or evaluate(f.right, m, s)
    inner = dict(s)
    for e in range(m.size):
        inner[f.var] = e
        if not evaluate(f.body, m, inner):
            return False
    return True


def assignments(variables, n: int) -> Iterator[dict]:
    variables = list(variables)
    for vals in itertools.product(range(n), repeat=len(variables)):
        yield dict(zip(variables, vals))


def valid_in(f: Formula, m: Structure) -> bool:
    """True under every assignment to the free variables of ``f``."""
    return all(evaluate(f, m, s) for s in assignments(free_vars(f), m.size))


def satisfies_theory(m: Structure, t: Theory) -> bool:
    return all(valid_in(f, m) for f in t.formulas)


# ----------------------------------------------------------- enumeration

def count_structures(sig: Signature, n: int) -> int:
    total = n ** len(sig.constants)
    for _, a in sig.functions:
        total *= n ** (n ** a)
    for _, a in sig.relations:
        total *= 2 ** (n ** a)
    return total


def enumerate_structures(sig: Signature, max_n: int, cap: int = DEFAULT_STRUCTURE_CAP,
                         allow_large: bool = False) -> Iterator[Structure]:
    """Every structure for ``sig`` with domain size 1..max_n, each once, in a fixed order.

    Raises EnumerationBudgetError up front when the stream would exceed
    ``cap`` or leave the default limits (domains up to 4, functions at most
    unary) without ``allow_large``.
    """
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    if not allow_large:
        if max_n > MAX_DOMAIN:
            raise EnumerationBudgetError(f"domain size {max_n} exceeds {MAX_DOMAIN}")
        wide = [n for n, a in sig.functions if a >= 2]
        if wide:
            raise EnumerationBudgetError(f"functions of arity >= 2 not enumerated: {wide}")
    total = sum(count_structures(sig, n) for n in range(1, max_n + 1))
    if total > cap:
        raise EnumerationBudgetError(f"{total} structures exceed the cap {cap}")
    return _enumerate(sig, max_n)


def _enumerate(sig: Signature, max_n: int) -> Iterator[Structure]:
    for n in range(1, max_n + 1):
        dom = range(n)
        const_choices = itertools.product(dom, repeat=len(sig.constants))
        func_spaces = []
        for _, a in sig.functions:
            points = list(itertools.product(dom, repeat=a))
            func_spaces.append([dict(zip(points, vals))
                                for vals in itertools.product(dom, repeat=len(points))])
        rel_spaces = []
        for _, a in sig.relations:
            points = list(itertools.product(dom, repeat=a))
            rel_spaces.append([frozenset(p for p, bit in zip(points, bits) if bit)
                               for bits in itertools.product((0, 1), repeat=len(points))])
        for consts in const_choices:
            for funcs in itertools.product(*func_spaces):
                for rels in itertools.product(*rel_spaces):
                    yield Structure(
                        n,
                        dict(zip(sig.constants, consts)),
                        {name: t for (name, _), t in zip(sig.functions, funcs)},
                        {name: r for (name, _), r in zip(sig.relations, rels)},
                    )


# ------------------------------------------------------- batch evaluation

class StructureBatch:
    """All structures of one domain size, evaluated together with numpy.

    A formula evaluates to a boolean array of shape ``(S, n, ..., n)``: one
    axis for the structure and one per variable in ``variables``.
    """

    def __init__(self, structures: list, sig: Signature, variables):
        self.structures = structures
        self.sig = sig
        self.n = structures[0].size
        assert all(m.size == self.n for m in structures)
        self.variables = list(variables)
        self.axis = {v: i + 1 for i, v in enumerate(self.variables)}
        k = len(self.variables)
        S, n = len(structures), self.n
        self.ndim = k + 1
        self.sidx = np.arange(S).reshape((S,) + (1,) * k)
        self.consts = {c: np.array([m.constants[c] for m in structures]).reshape((S,) + (1,) * k)
                       for c in sig.constants}
        self.funcs = {}
        for name, a in sig.functions:
            tab = np.zeros((S,) + (n,) * a, dtype=np.int64)
            for i, m in enumerate(structures):
                for args, v in m.functions[name].items():
                    tab[(i,) + args] = v
            self.funcs[name] = tab
        self.rels = {}
        for name, a in sig.relations:
            tab = np.zeros((S,) + (n,) * a, dtype=bool)
            for i, m in enumerate(structures):
                for tup in m.relations.get(name, ()):
                    tab[(i,) + tuple(tup)] = True
            self.rels[name] = tab
        self._cache: dict = {}

    def term(self, t: Term) -> np.ndarray:
        if isinstance(t, Variable):
            shape = [1] * self.ndim
            shape[self.axis[t.name]] = self.n
            return np.arange(self.n).reshape(shape)
        if isinstance(t, Constant):
            return self.consts[t.name]
        args = [self.term(a) for a in t.args]
        return self.funcs[t.name][(self.sidx, *args)]

    def formula(self, f: Formula) -> np.ndarray:
        hit = self._cache.get(f)
        if hit is not None:
            return hit
        if isinstance(f, Atom):
            if f.args:
                out = self.rels[f.rel][(self.sidx, *[self.term(a) for a in f.args])]
            else:
                out = self.rels[f.rel].reshape((-1,) + (1,) * (self.ndim - 1))
        elif isinstance(f, Not):
            out = ~self.formula(f.body)
        elif isinstance(f, Implies):
            out = ~self.formula(f.left) | self.formula(f.right)
        else:
            out = np.all(self.formula(f.body), axis=self.axis[f.var], keepdims=True)
        self._cache[f] = out
        return out

    def valid(self, f: Formula) -> np.ndarray:
        """Per structure: is ``f`` true under every assignment?"""
        a = self.formula(f)
        if a.ndim > 1:
            a = a.reshape(a.shape[0], -1).all(axis=1)
        return np.broadcast_to(a, (len(self.structures),))

    def clear(self) -> None:
        self._cache.clear()


@dataclass(frozen=True)
class Counterexample:
    line: int
    structure: Structure


def deduction_variables(d: Deduction) -> list[str]:
    out: set = set()
    roots = list(d.formulas()) + list(d.theory.formulas)
    if d.hypothesis is not None:
        roots.append(d.hypothesis)
    for f in roots:
        for g in subformulas(f):
            if isinstance(g, ForAll):
                out.add(g.var)
        out.update(free_vars(f))
    return sorted(out)


def soundness_counterexamples(d: Deduction, batches: list) -> list[Counterexample]:
    """Lines of ``d`` false somewhere in a structure that validates theory and hypothesis."""
    found = []
    for batch in batches:
        batch.clear()
        mask = np.ones(len(batch.structures), dtype=bool)
        for f in d.theory.formulas:
            mask &= batch.valid(f)
        if d.hypothesis is not None:
            mask &= batch.valid(d.hypothesis)
        if not mask.any():
            continue
        for i, line in enumerate(d.lines):
            bad = mask & ~batch.valid(line.formula)
            if bad.any():
                found.append(Counterexample(i, batch.structures[int(np.argmax(bad))]))
    return found


def make_batches(sig: Signature, max_n: int, variables, cap: int = DEFAULT_STRUCTURE_CAP,
                 allow_large: bool = False) -> list[StructureBatch]:
    by_size: dict = {}
    for m in enumerate_structures(sig, max_n, cap, allow_large):
        by_size.setdefault(m.size, []).append(m)
    return [StructureBatch(ms, sig, variables) for _, ms in sorted(by_size.items())]


def soundness_sweep(d: Deduction, sig: Signature, max_n: int = 3,
                    cap: int = DEFAULT_STRUCTURE_CAP) -> list[Counterexample]:
    return soundness_counterexamples(d, make_batches(sig, max_n, deduction_variables(d), cap))
