"""First-order terms and formulas over a declared signature.

The connectives are ``~``, ``->`` and ``forall``; everything else is
expressed outside the object language.  Formulas are immutable and
compared structurally (no alpha-equivalence).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

NAME_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*\Z")
KEYWORDS = frozenset({"forall"})


class SyntaxErrorFOL(ValueError):
    """Raised for malformed formula text.

    Carries the 1-based ``line`` and ``column`` and the offending ``token``.
    """

    def __init__(self, message: str, line: int = 0, column: int = 0, token: str = ""):
        self.line = line
        self.column = column
        self.token = token
        where = f"{line}:{column}: " if line else ""
        super().__init__(f"{where}{message}")


class SignatureError(ValueError):
    pass


class CaptureError(ValueError):
    """Substitution would capture a variable of the inserted term."""


@dataclass(frozen=True)
class Signature:
    constants: tuple[str, ...] = ()
    functions: tuple[tuple[str, int], ...] = ()
    relations: tuple[tuple[str, int], ...] = ()
    _kinds: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "constants", tuple(self.constants))
        object.__setattr__(self, "functions", tuple((n, int(a)) for n, a in self.functions))
        object.__setattr__(self, "relations", tuple((n, int(a)) for n, a in self.relations))
        kinds: dict[str, tuple[str, int]] = {}
        entries = [(n, "constant", 0) for n in self.constants]
        entries += [(n, "function", a) for n, a in self.functions]
        entries += [(n, "relation", a) for n, a in self.relations]
        for name, kind, arity in entries:
            if not NAME_RE.match(name) or name in KEYWORDS:
                raise SignatureError(f"bad symbol name {name!r}")
            if name in kinds:
                raise SignatureError(f"duplicate symbol {name!r}")
            if kind == "function" and arity < 1:
                raise SignatureError(f"function {name!r} needs arity >= 1")
            if kind == "relation" and arity < 0:
                raise SignatureError(f"relation {name!r} has negative arity")
            kinds[name] = (kind, arity)
        object.__setattr__(self, "_kinds", kinds)

    def kind(self, name: str) -> Optional[tuple[str, int]]:
        """Return ``(kind, arity)`` for a declared symbol, else None."""
        return self._kinds.get(name)

    def symbols(self) -> list[str]:
        """Declared symbols in declaration order: constants, functions, relations."""
        return list(self.constants) + [n for n, _ in self.functions] + [n for n, _ in self.relations]

    def is_variable_name(self, name: str) -> bool:
        return bool(NAME_RE.match(name)) and name not in KEYWORDS and name not in self._kinds


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Constant:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class FuncApp:
    name: str
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __str__(self):
        return f"{self.name}({','.join(str(a) for a in self.args)})"


Term = Union[Variable, Constant, FuncApp]


# ------------------------------------------------------------- formulas

@dataclass(frozen=True)
class Atom:
    rel: str
    args: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True)
class Not:
    body: "Formula"

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True)
class ForAll:
    var: str
    body: "Formula"

    def __str__(self):
        return print_formula(self)


Formula = Union[Atom, Not, Implies, ForAll]


def imp(*parts: Formula) -> Formula:
    """Right-nested implication: ``imp(a, b, c)`` is ``a -> (b -> c)``."""
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Implies(p, out)
    return out


# --------------------------------------------------------------- printing

def term_tokens(t: Term) -> list[str]:
    if isinstance(t, FuncApp):
        out = [t.name, "("]
        for i, a in enumerate(t.args):
            if i:
                out.append(",")
            out.extend(term_tokens(a))
        out.append(")")
        return out
    return [t.name]


def formula_tokens(f: Formula) -> list[str]:
    """Token string of the canonical printed form.

    A quantified formula is parenthesised when it is negated or sits on the
    left of an implication; implications are always parenthesised.
    """
    out: list[str] = []
    _emit(f, out, wrap_forall=False)
    return out


def _emit(f: Formula, out: list[str], wrap_forall: bool) -> None:
    if isinstance(f, Atom):
        out.append(f.rel)
        if f.args:
            out.append("(")
            for i, a in enumerate(f.args):
                if i:
                    out.append(",")
                out.extend(term_tokens(a))
            out.append(")")
    elif isinstance(f, Not):
        out.append("~")
        _emit(f.body, out, wrap_forall=True)
    elif isinstance(f, Implies):
        out.append("(")
        _emit(f.left, out, wrap_forall=True)
        out.append("->")
        _emit(f.right, out, wrap_forall=False)
        out.append(")")
    elif isinstance(f, ForAll):
        if wrap_forall:
            out.append("(")
        out.extend(["forall", f.var, "."])
        _emit(f.body, out, wrap_forall=False)
        if wrap_forall:
            out.append(")")
    else:
        raise TypeError(f"not a formula: {f!r}")


def render_tokens(tokens: Iterable[str]) -> str:
    text = []
    prev = None
    for tok in tokens:
        if tok == "->":
            text.append(" -> ")
        elif tok == "." and prev is not None:
            text.append(". ")
        elif tok == "forall":
            text.append("forall ")
        elif tok == ",":
            text.append(",")
        else:
            text.append(tok)
        prev = tok
    return "".join(text)


def print_formula(f: Formula) -> str:
    return render_tokens(formula_tokens(f))


def print_term(t: Term) -> str:
    return "".join(term_tokens(t))


# ---------------------------------------------------------------- parsing

_TOKEN_RE = re.compile(r"\s*(?:(->)|([~().,])|([a-zA-Z][a-zA-Z0-9_]*))")


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            # trailing whitespace or an unknown character
            rest = text[pos:]
            if not rest.strip():
                break
            skip = len(rest) - len(rest.lstrip())
            bad = pos + skip
            line += text.count("\n", pos, bad)
            if "\n" in text[pos:bad]:
                line_start = text.rindex("\n", pos, bad) + 1
            raise SyntaxErrorFOL(f"unexpected character {text[bad]!r}",
                                 line, bad - line_start + 1, text[bad])
        start = m.start(m.lastindex)
        nl = text.count("\n", pos, start)
        if nl:
            line += nl
            line_start = text.rindex("\n", pos, start) + 1
        tokens.append(Token(m.group(m.lastindex), line, start - line_start + 1))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token], sig: Signature):
        self.toks = tokens
        self.i = 0
        self.sig = sig

    def peek(self) -> Optional[Token]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def fail(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        if tok is None:
            last = self.toks[-1] if self.toks else Token("", 1, 0)
            raise SyntaxErrorFOL(f"{msg} at end of input", last.line,
                                 last.column + len(last.text), "")
        raise SyntaxErrorFOL(f"{msg}, got {tok.text!r}", tok.line, tok.column, tok.text)

    def take(self, text: Optional[str] = None) -> Token:
        tok = self.peek()
        if tok is None or (text is not None and tok.text != text):
            self.fail(f"expected {text!r}" if text else "unexpected end")
        self.i += 1
        return tok

    def formula(self) -> Formula:
        left = self.unary()
        tok = self.peek()
        if tok is not None and tok.text == "->":
            self.i += 1
            return Implies(left, self.formula())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            self.fail("expected a formula")
        if tok.text == "~":
            self.i += 1
            return Not(self.unary())
        if tok.text == "forall":
            self.i += 1
            var = self.take()
            if not self.sig.is_variable_name(var.text):
                self.fail("expected a variable after 'forall'", var)
            self.take(".")
            return ForAll(var.text, self.formula())
        if tok.text == "(":
            self.i += 1
            inner = self.formula()
            self.take(")")
            return inner
        return self.atom()

    def atom(self) -> Formula:
        tok = self.take()
        info = self.sig.kind(tok.text)
        if info is None:
            if NAME_RE.match(tok.text):
                self.fail("unknown relation symbol", tok)
            self.fail("expected a formula", tok)
        kind, arity = info
        if kind != "relation":
            self.fail(f"{kind} symbol used as a formula", tok)
        args = self.arglist(tok)
        if len(args) != arity:
            self.fail(f"arity mismatch: {tok.text} takes {arity}, given {len(args)}", tok)
        return Atom(tok.text, tuple(args))

    def arglist(self, head: Token) -> list:
        nxt = self.peek()
        if nxt is None or nxt.text != "(":
            return []
        # a 0-ary relation followed by a parenthesised formula is not an argument list
        info = self.sig.kind(head.text)
        if info and info[1] == 0:
            return []
        self.i += 1
        args = [self.term()]
        while self.peek() is not None and self.peek().text == ",":
            self.i += 1
            args.append(self.term())
        self.take(")")
        return args

    def term(self) -> Term:
        tok = self.take()
        if not NAME_RE.match(tok.text) or tok.text in KEYWORDS:
            self.fail("expected a term", tok)
        info = self.sig.kind(tok.text)
        if info is None:
            nxt = self.peek()
            if nxt is not None and nxt.text == "(":
                self.fail("unknown function symbol", tok)
            return Variable(tok.text)
        kind, arity = info
        if kind == "constant":
            return Constant(tok.text)
        if kind == "function":
            args = self.arglist(tok)
            if len(args) != arity:
                self.fail(f"arity mismatch: {tok.text} takes {arity}, given {len(args)}", tok)
            return FuncApp(tok.text, tuple(args))
        self.fail("relation symbol used as a term", tok)


def parse_tokens(tokens: list[Token], sig: Signature) -> Formula:
    p = _Parser(tokens, sig)
    f = p.formula()
    if p.peek() is not None:
        p.fail("trailing input")
    return f


def parse_formula(text: str, sig: Signature) -> Formula:
    return parse_tokens(tokenize(text), sig)


# -------------------------------------------------------- variable analysis

def term_vars(t: Term) -> set[str]:
    if isinstance(t, Variable):
        return {t.name}
    if isinstance(t, FuncApp):
        out: set[str] = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    return set()


def _free(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        out: set[str] = set()
        for a in f.args:
            out |= term_vars(a)
        return out
    if isinstance(f, Not):
        return _free(f.body)
    if isinstance(f, Implies):
        return _free(f.left) | _free(f.right)
    return _free(f.body) - {f.var}


def free_vars(f: Formula) -> tuple[str, ...]:
    """Variables with a free occurrence in ``f``, sorted."""
    return tuple(sorted(_free(f)))


def all_vars(f: Formula) -> tuple[str, ...]:
    """Every variable occurring in ``f``, bound or free, sorted."""
    out: set[str] = set()
    for node in subformulas(f):
        if isinstance(node, Atom):
            for a in node.args:
                out |= term_vars(a)
        elif isinstance(node, ForAll):
            out.add(node.var)
    return tuple(sorted(out))


def is_closed(f: Formula) -> bool:
    return not _free(f)


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order walk over all subformula occurrences."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, Not):
            stack.append(g.body)
        elif isinstance(g, Implies):
            stack.append(g.right)
            stack.append(g.left)
        elif isinstance(g, ForAll):
            stack.append(g.body)


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, FuncApp):
        for a in t.args:
            yield from subterms(a)


def formula_terms(f: Formula) -> Iterator[Term]:
    for g in subformulas(f):
        if isinstance(g, Atom):
            for a in g.args:
                yield from subterms(a)


def term_size(t: Term) -> int:
    if isinstance(t, FuncApp):
        return 1 + sum(term_size(a) for a in t.args)
    return 1


def size(f: Formula) -> int:
    """Node count of the syntax tree, terms included."""
    if isinstance(f, Atom):
        return 1 + sum(term_size(a) for a in f.args)
    if isinstance(f, Not):
        return 1 + size(f.body)
    if isinstance(f, Implies):
        return 1 + size(f.left) + size(f.right)
    return 1 + size(f.body)


def depth(f: Formula) -> int:
    if isinstance(f, Atom):
        return 0
    if isinstance(f, Implies):
        return 1 + max(depth(f.left), depth(f.right))
    return 1 + depth(f.body)


# ------------------------------------------------------------ substitution

def subst_term(t: Term, v: str, s: Term) -> Term:
    if isinstance(t, Variable):
        return s if t.name == v else t
    if isinstance(t, FuncApp):
        return FuncApp(t.name, tuple(subst_term(a, v, s) for a in t.args))
    return t


def is_free_for(t: Term, v: str, f: Formula) -> bool:
    """True iff no free ``v`` in ``f`` is in the scope of a binder of a variable of ``t``."""
    return _free_for(term_vars(t), v, f, frozenset())


def _free_for(tv: set[str], v: str, f: Formula, bound: frozenset) -> bool:
    if isinstance(f, Atom):
        if bound & tv and any(v in term_vars(a) for a in f.args):
            return False
        return True
    if isinstance(f, Not):
        return _free_for(tv, v, f.body, bound)
    if isinstance(f, Implies):
        return _free_for(tv, v, f.left, bound) and _free_for(tv, v, f.right, bound)
    if f.var == v:
        return True  # v is not free below this binder
    return _free_for(tv, v, f.body, bound | {f.var})


def substitute(f: Formula, v: str, t: Term) -> Formula:
    """Replace free occurrences of ``v`` by ``t``; raise CaptureError rather than rename."""
    if not is_free_for(t, v, f):
        raise CaptureError(f"{print_term(t)} is not free for {v} in {print_formula(f)}")
    return _subst(f, v, t)


def _subst(f: Formula, v: str, t: Term) -> Formula:
    if isinstance(f, Atom):
        return Atom(f.rel, tuple(subst_term(a, v, t) for a in f.args))
    if isinstance(f, Not):
        return Not(_subst(f.body, v, t))
    if isinstance(f, Implies):
        return Implies(_subst(f.left, v, t), _subst(f.right, v, t))
    if f.var == v:
        return f
    return ForAll(f.var, _subst(f.body, v, t))


def check_formula(f: Formula, sig: Signature) -> None:
    """Raise SignatureError unless every symbol of ``f`` resolves in ``sig`` with the right arity."""
    for g in subformulas(f):
        if isinstance(g, Atom):
            info = sig.kind(g.rel)
            if info is None or info[0] != "relation" or info[1] != len(g.args):
                raise SignatureError(f"bad relation use {g.rel}/{len(g.args)}")
            for a in g.args:
                for s in subterms(a):
                    _check_term(s, sig)
        elif isinstance(g, ForAll):
            if not sig.is_variable_name(g.var):
                raise SignatureError(f"bad bound variable {g.var!r}")


def _check_term(t: Term, sig: Signature) -> None:
    if isinstance(t, Variable):
        if not sig.is_variable_name(t.name):
            raise SignatureError(f"{t.name!r} is not a variable name")
    elif isinstance(t, Constant):
        if sig.kind(t.name) != ("constant", 0):
            raise SignatureError(f"unknown constant {t.name!r}")
    else:
        info = sig.kind(t.name)
        if info is None or info[0] != "function" or info[1] != len(t.args):
            raise SignatureError(f"bad function use {t.name}/{len(t.args)}")


def infer_signature(texts: Iterable[str], constants: Iterable[str] = ()) -> Signature:
    """Guess a signature from formula texts.

    A name applied to arguments in term position is a function, in formula
    position a relation; a bare name in formula position is a 0-ary
    relation.  Bare names in term position are variables unless listed in
    ``constants``.
    """
    consts = list(dict.fromkeys(constants))
    rels: dict[str, int] = {}
    funcs: dict[str, int] = {}
    for text in texts:
        toks = [t.text for t in tokenize(text)]
        _infer(toks, rels, funcs)
    clash = (set(rels) & set(funcs)) | ((set(rels) | set(funcs)) & set(consts))
    if clash:
        raise SignatureError(f"symbols used in two roles: {sorted(clash)}")
    return Signature(tuple(consts), tuple(funcs.items()), tuple(rels.items()))


def _infer(toks: list[str], rels: dict, funcs: dict) -> None:
    # depth > 0 on the stack means "inside the argument list of an atom"
    i = 0
    arg_stack: list[list] = []  # each entry: [name, arg_count, paren_depth]
    in_term = 0
    n = len(toks)

    def record(table, name, arity):
        if table.get(name, arity) != arity:
            raise SignatureError(f"inconsistent arity for {name!r}")
        table[name] = arity

    while i < n:
        tok = toks[i]
        if tok == "forall":
            i += 3
            continue
        if NAME_RE.match(tok):
            applied = i + 1 < n and toks[i + 1] == "("
            if in_term:
                if applied:
                    arg_stack.append([tok, 1, "func"])
                    in_term += 1
                    i += 2
                    continue
            else:
                if applied and _looks_like_args(toks, i + 1):
                    arg_stack.append([tok, 1, "rel"])
                    in_term += 1
                    i += 2
                    continue
                record(rels, tok, 0)
        elif tok == "," and arg_stack:
            arg_stack[-1][1] += 1
        elif tok == ")" and arg_stack and in_term:
            name, count, kind = arg_stack.pop()
            record(funcs if kind == "func" else rels, name, count)
            in_term -= 1
        i += 1


def _looks_like_args(toks: list[str], open_idx: int) -> bool:
    """Whether ``(`` at ``open_idx`` opens term arguments rather than a formula."""
    depth_ = 0
    for tok in toks[open_idx:]:
        if tok == "(":
            depth_ += 1
        elif tok == ")":
            depth_ -= 1
            if depth_ == 0:
                return True
        elif tok in ("->", "~", "forall"):
            return False
    return True


def signature_of(formulas: Iterable[Formula]) -> Signature:
    """The smallest signature covering the symbols used in ``formulas``."""
    consts: dict[str, None] = {}
    funcs: dict[str, int] = {}
    rels: dict[str, int] = {}
    for f in formulas:
        for g in subformulas(f):
            if isinstance(g, Atom):
                rels.setdefault(g.rel, len(g.args))
        for t in formula_terms(f):
            if isinstance(t, Constant):
                consts.setdefault(t.name)
            elif isinstance(t, FuncApp):
                funcs.setdefault(t.name, len(t.args))
    return Signature(tuple(consts), tuple(funcs.items()), tuple(rels.items()))
