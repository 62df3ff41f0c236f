"""Length-bounded proof search.

The search space is fixed by a :class:`SearchBudget`: a finite formula
pool generates the axiom instances, and every line of a candidate
deduction must be reachable from those instances (plus theory and
hypothesis) by at most ``max_len`` rounds of MP and generalization over
pool variables, all within the size bound.

Deductions of minimal length never repeat a formula and never carry an
unused line, so they are exactly the topological orders of small proof
DAGs.  The search builds those DAGs goal-first with iterative deepening,
then returns the deduction that comes first by (length, Goedel number).

:func:`raw_scan` is the literal procedure instead: walk the naturals and
test each against the proof predicate.  Only usable for tiny caps.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .goedel import Codec, ProofPredicateInstance, decode_deduction, encode_deduction, \
    encode_formula, explain_predicate
from .kernel import (
    AxiomInstance, Deduction, DeductionLine, Generalization, Hypothesis, InTheory,
    ModusPonens, Theory, is_axiom_instance, verify_deduction,
)
from .syntax import (
    ForAll, Formula, Implies, Not, Variable, all_vars, formula_terms, free_vars,
    is_free_for, signature_of, size, subformulas, substitute,
)

POOL_POLICIES = ("default", "subformulas")


class BudgetError(ValueError):
    pass


@dataclass(frozen=True)
class SearchBudget:
    max_len: int
    max_size: int = 24
    pool: Union[str, tuple] = "default"
    raw_scan_cap: Optional[int] = None

    def __post_init__(self):
        if self.max_len < 1 or self.max_size < 1:
            raise BudgetError("search bounds must be positive")
        if isinstance(self.pool, str):
            if self.pool not in POOL_POLICIES:
                raise BudgetError(f"unknown pool policy {self.pool!r}")
        else:
            object.__setattr__(self, "pool", tuple(self.pool))
        if self.raw_scan_cap is not None and self.raw_scan_cap < 1:
            raise BudgetError("raw scan cap must be positive")


@dataclass(frozen=True)
class SearchResult:
    deduction: Optional[Deduction]
    status: str  # "found" | "bounds-exhausted"
    length: Optional[int] = None
    candidates: int = 0

    @property
    def found(self) -> bool:
        return self.deduction is not None


# ------------------------------------------------------------ search space

def _base_formulas(target, theory, hypothesis) -> list[Formula]:
    roots = [target, *theory.formulas] + ([hypothesis] if hypothesis is not None else [])
    out: dict = {}
    for r in roots:
        for g in subformulas(r):
            out.setdefault(g)
    return list(out)


def build_pool(target: Formula, theory: Theory, hypothesis: Optional[Formula],
               budget: SearchBudget) -> list[Formula]:
    """Formulas that may instantiate schema metavariables, in a fixed order."""
    if not isinstance(budget.pool, str):
        return list(dict.fromkeys(budget.pool))
    base = _base_formulas(target, theory, hypothesis)
    if budget.pool == "subformulas":
        return base
    variables = sorted({v for f in base for v in all_vars(f)})
    pool = dict.fromkeys(base)
    for a in base:
        for b in base:
            pool.setdefault(Implies(a, b))
    for a in base:
        for v in variables:
            pool.setdefault(ForAll(v, a))
    return [f for f in pool if size(f) <= budget.max_size]


@dataclass
class SearchSpace:
    """Everything a search line may be, for one target/theory/hypothesis/budget."""
    target: Formula
    theory: Theory
    hypothesis: Optional[Formula]
    budget: SearchBudget
    pool: list = field(default_factory=list)
    variables: list = field(default_factory=list)
    terms: list = field(default_factory=list)
    axioms: dict = field(default_factory=dict)  # formula -> schemas, sorted

    @classmethod
    def build(cls, target, theory, hypothesis, budget) -> "SearchSpace":
        sp = cls(target, theory, hypothesis, budget)
        sp.pool = build_pool(target, theory, hypothesis, budget)
        everything = sp.pool + [target, *theory.formulas]
        if hypothesis is not None:
            everything.append(hypothesis)
        sp.variables = sorted({v for f in everything for v in all_vars(f)})
        terms: dict = {Variable(v): None for v in sp.variables}
        for f in sp.pool:
            for t in formula_terms(f):
                terms.setdefault(t)
        sp.terms = list(terms)
        sp._instantiate()
        return sp

    def fits(self, f: Formula) -> bool:
        return size(f) <= self.budget.max_size

    def _add(self, f: Formula, schema: str) -> None:
        if self.fits(f) and is_axiom_instance(f, schema):
            lst = self.axioms.setdefault(f, [])
            if schema not in lst:
                lst.append(schema)
                lst.sort()

    def _instantiate(self) -> None:
        pool = self.pool
        for b in pool:
            for c in pool:
                self._add(Implies(b, Implies(c, b)), "A1")
                self._add(Implies(Implies(Not(c), Not(b)), Implies(Implies(Not(c), b), c)), "A3")
                for d in pool:
                    self._add(Implies(Implies(b, Implies(c, d)),
                                      Implies(Implies(b, c), Implies(b, d))), "A2")
                for x in self.variables:
                    if x not in free_vars(b):
                        self._add(Implies(ForAll(x, Implies(b, c)),
                                          Implies(b, ForAll(x, c))), "A5")
        for f in pool:
            if isinstance(f, ForAll):
                for t in self.terms:
                    if is_free_for(t, f.var, f.body):
                        self._add(Implies(f, substitute(f.body, f.var, t)), "A4")

    def gen_results(self, f: Formula) -> list[Formula]:
        return [g for g in (ForAll(v, f) for v in self.variables) if self.fits(g)]

    def universe(self) -> set:
        """Formulas derivable with derivation height at most ``max_len``.

        A line of a deduction with L lines has height at most L, so L rounds
        of MP and Gen over the leaves cover every line the search can use.
        """
        seen = set(self.axioms) | set(self.theory.formulas)
        if self.hypothesis is not None:
            seen.add(self.hypothesis)
        frontier = set(seen)
        for _ in range(self.budget.max_len - 1):
            new = set()
            for f in seen:
                if isinstance(f, Implies) and f.left in seen and f.right not in seen:
                    new.add(f.right)
            for f in frontier:
                new.update(g for g in self.gen_results(f) if g not in seen)
            if not new:
                break
            seen |= new
            frontier = new
        return seen


# ------------------------------------------------------------- DAG search

class _DagSearch:
    def __init__(self, space: SearchSpace):
        self.sp = space
        self.universe = space.universe()
        self.antecedents: dict = {}
        for f in self.universe:
            if isinstance(f, Implies) and f.left in self.universe:
                self.antecedents.setdefault(f.right, []).append(f.left)
        self.solutions: list[dict] = []
        self.visited = 0

    def options(self, g: Formula) -> list[tuple]:
        sp = self.sp
        opts = [("ax", s) for s in sp.axioms.get(g, ())]
        k = sp.theory.index(g)
        if k is not None:
            opts.append(("th", k))
        if sp.hypothesis is not None and g == sp.hypothesis:
            opts.append(("hyp",))
        for x in self.antecedents.get(g, ()):
            opts.append(("mp", x, Implies(x, g)))
        if isinstance(g, ForAll) and g.var in sp.variables and g.body in self.universe:
            opts.append(("gen", g.body, g.var))
        return opts

    def run(self, limit: int) -> None:
        self.solutions = []
        self._dfs([self.sp.target], {}, {self.sp.target}, limit)

    def _dfs(self, open_: list, plan: dict, nodes: set, limit: int) -> None:
        self.visited += 1
        while open_ and open_[0] in plan:
            open_ = open_[1:]
        if not open_:
            if _acyclic(plan):
                self.solutions.append(dict(plan))
            return
        g, rest = open_[0], open_[1:]
        for opt in self.options(g):
            premises = opt[1:] if opt[0] == "mp" else (opt[1],) if opt[0] == "gen" else ()
            if g in premises:
                continue
            new = [p for p in dict.fromkeys(premises) if p not in nodes]
            if len(nodes) + len(new) > limit:
                continue
            plan[g] = opt
            self._dfs(rest + new, plan, nodes | set(new), limit)
            del plan[g]


def _premises(opt: tuple) -> tuple:
    if opt[0] == "mp":
        return opt[1], opt[2]
    if opt[0] == "gen":
        return (opt[1],)
    return ()


def _acyclic(plan: dict) -> bool:
    state: dict = {}

    def visit(f) -> bool:
        s = state.get(f)
        if s == 1:
            return False
        if s == 2:
            return True
        state[f] = 1
        for p in _premises(plan[f]):
            if not visit(p):
                return False
        state[f] = 2
        return True

    return all(visit(f) for f in plan)


def _linearizations(plan: dict, target: Formula):
    """All topological orders of the plan's DAG, premises first."""
    deps = {f: set(_premises(opt)) for f, opt in plan.items()}
    order: list = []
    placed: set = set()

    def rec():
        if len(order) == len(plan):
            yield list(order)
            return
        for f in plan:
            if f not in placed and deps[f] <= placed:
                order.append(f)
                placed.add(f)
                yield from rec()
                order.pop()
                placed.discard(f)

    for seq in rec():
        if seq[-1] == target:
            yield seq


def _to_deduction(seq: list, plan: dict, space: SearchSpace, signature) -> Deduction:
    pos = {f: i for i, f in enumerate(seq)}
    lines = []
    for f in seq:
        opt = plan[f]
        if opt[0] == "ax":
            j = AxiomInstance(opt[1])
        elif opt[0] == "th":
            j = InTheory(opt[1])
        elif opt[0] == "hyp":
            j = Hypothesis()
        elif opt[0] == "mp":
            j = ModusPonens(pos[opt[1]], pos[opt[2]])
        else:
            j = Generalization(pos[opt[1]], opt[2])
        lines.append(DeductionLine(f, j))
    return Deduction(space.theory, tuple(lines), space.hypothesis, signature)


def default_codec(target: Formula, theory: Theory, hypothesis: Optional[Formula],
                  kind: str = "compact") -> Codec:
    roots = [target, *theory.formulas] + ([hypothesis] if hypothesis is not None else [])
    extra = sorted({v for f in roots for v in all_vars(f)})
    return Codec.for_signature(signature_of(roots), kind, extra)


def bounded_proof_search(target: Formula, theory: Theory = Theory(),
                         hypothesis: Optional[Formula] = None,
                         budget: SearchBudget = SearchBudget(5),
                         codec: Optional[Codec] = None) -> SearchResult:
    """First deduction of ``target`` in (length, Goedel number) order within ``budget``."""
    codec = codec or default_codec(target, theory, hypothesis)
    if budget.raw_scan_cap is not None:
        return raw_scan(target, theory, hypothesis, codec, budget.raw_scan_cap)
    space = SearchSpace.build(target, theory, hypothesis, budget)
    dag = _DagSearch(space)
    for limit in range(1, budget.max_len + 1):
        dag.run(limit)
        if not dag.solutions:
            continue
        best = None
        for plan in dag.solutions:
            for seq in _linearizations(plan, target):
                d = _to_deduction(seq, plan, space, codec.signature)
                key = (len(d), encode_deduction(d, codec, check=False))
                if best is None or key < best[0]:
                    best = (key, d)
        d = best[1]
        assert verify_deduction(d).ok
        return SearchResult(d, "found", len(d), dag.visited)
    return SearchResult(None, "bounds-exhausted", None, dag.visited)


def raw_scan(target: Formula, theory: Theory, hypothesis: Optional[Formula],
             codec: Codec, cap: int) -> SearchResult:
    """Test x = 1, 2, ..., cap against the proof predicate for ``target``."""
    y = encode_formula(target, codec)
    for x in range(1, cap + 1):
        ok, _ = explain_predicate(ProofPredicateInstance(x, y, theory, codec, hypothesis))
        if ok:
            d = decode_deduction(x, codec, theory, hypothesis)
            return SearchResult(d, "found", len(d), x)
    return SearchResult(None, "bounds-exhausted", None, cap)
