"""First-order sentences over {\\/, <=, [=, =} and {\\/, R}: parser, printer, evaluator.

Concrete syntax::

    forall a b . exists c . (a [= b & b <= c) -> a [= c

A sentence is a prefix of quantifier blocks, each ending in ``.``, followed
by a quantifier-free matrix.  Connective precedence, tightest first:
``!``, ``&``, ``|``, ``->`` (right associative), ``<->``.  ``t < u`` is
shorthand for ``t <= u & !t = u`` and is expanded while parsing.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Union

from .errors import ParseError, SignatureMismatch, UnknownBuiltin

# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Join:
    left: "Term"
    right: "Term"


Term = Union[Var, Join]


@dataclass(frozen=True)
class Atom:
    op: str  # "<=", "[=", "=", "R"
    args: tuple


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class Bin:
    op: str  # "&", "|", "->", "<->"
    left: "Formula"
    right: "Formula"


Formula = Union[Atom, Not, Bin]


@dataclass(frozen=True)
class Sentence:
    prefix: tuple  # ((quantifier, variable), ...)
    matrix: Formula

    @property
    def variables(self) -> tuple:
        return tuple(v for _, v in self.prefix)

    def blocks(self) -> list:
        """Maximal runs of equal quantifiers as (quantifier, [vars])."""
        out = []
        for q, v in self.prefix:
            if out and out[-1][0] == q:
                out[-1][1].append(v)
            else:
                out.append((q, [v]))
        return out

    def uses(self, op: str) -> bool:
        return _uses(self.matrix, op)

    def __str__(self):
        return to_text(self)


def _term_uses_join(t) -> bool:
    return isinstance(t, Join)


def _uses(f, op) -> bool:
    if isinstance(f, Atom):
        if op == "\\/":
            return any(_term_uses_join(a) for a in f.args)
        return f.op == op
    if isinstance(f, Not):
        return _uses(f.body, op)
    return _uses(f.left, op) or _uses(f.right, op)


# ---------------------------------------------------------------------------
# tokenizer

KEYWORDS = {"forall", "exists", "R"}
_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<op><->|->|<=|\[=|\\/|[.()!&|=<;,])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # "op", "ident", "kw", "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(line, col, ("token",), text[pos])
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "op":
            tokens.append(Token("op", m.group(), line, col))
        elif kind == "ident":
            word = m.group()
            tokens.append(Token("kw" if word in KEYWORDS else "ident", word, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# ---------------------------------------------------------------------------
# parser

_TERM_START = ("variable", "(")
_ATOM_START = ("!", "(", "R", "variable")
_RELS = ("<=", "[=", "=", "<")


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.bound = {}

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, expected):
        t = self.tok
        raise ParseError(t.line, t.col, expected, t.text)

    def at(self, text) -> bool:
        t = self.tok
        return t.kind in ("op", "kw") and t.text == text

    def expect(self, text):
        if not self.at(text):
            self.fail((text,))
        self.i += 1

    def sentence(self) -> Sentence:
        prefix = []
        if not (self.at("forall") or self.at("exists")):
            self.fail(("forall", "exists"))
        while self.at("forall") or self.at("exists"):
            q = self.tok.text
            self.i += 1
            if self.tok.kind != "ident":
                self.fail(("variable",))
            while self.tok.kind == "ident":
                t = self.tok
                if t.text in self.bound:
                    raise ParseError(t.line, t.col, ("fresh variable",), t.text)
                self.bound[t.text] = len(prefix)
                prefix.append((q, t.text))
                self.i += 1
            self.expect(".")
        body = self.iff()
        if self.tok.kind != "eof":
            self.fail(("end of input",))
        return Sentence(tuple(prefix), body)

    def iff(self):
        left = self.implies()
        while self.at("<->"):
            self.i += 1
            left = Bin("<->", left, self.implies())
        return left

    def implies(self):
        left = self.disj()
        if self.at("->"):
            self.i += 1
            return Bin("->", left, self.implies())
        return left

    def disj(self):
        left = self.conj()
        while self.at("|"):
            self.i += 1
            left = Bin("|", left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.at("&"):
            self.i += 1
            left = Bin("&", left, self.unary())
        return left

    def unary(self):
        if self.at("!"):
            self.i += 1
            return Not(self.unary())
        if self.at("R"):
            self.i += 1
            self.expect("(")
            a = self.term()
            self.expect(";")
            b = self.term()
            self.expect(",")
            c = self.term()
            self.expect(")")
            return Atom("R", (a, b, c))
        if self.at("("):
            # a parenthesised term followed by a relation, or a parenthesised formula
            save = self.i
            try:
                return self.relation()
            except ParseError:
                self.i = save
            self.i += 1
            inner = self.iff()
            self.expect(")")
            return inner
        if self.tok.kind == "ident":
            return self.relation()
        self.fail(_ATOM_START)

    def relation(self):
        left = self.term()
        t = self.tok
        if not (t.kind == "op" and t.text in _RELS):
            self.fail(_RELS + ("\\/",))
        self.i += 1
        right = self.term()
        if t.text == "<":
            return Bin("&", Atom("<=", (left, right)), Not(Atom("=", (left, right))))
        return Atom(t.text, (left, right))

    def term(self):
        left = self.primary()
        while self.at("\\/"):
            self.i += 1
            left = Join(left, self.primary())
        return left

    def primary(self):
        t = self.tok
        if t.kind == "ident":
            if t.text not in self.bound:
                raise ParseError(t.line, t.col, ("bound variable",), t.text)
            self.i += 1
            return Var(t.text)
        if self.at("("):
            self.i += 1
            inner = self.term()
            self.expect(")")
            return inner
        self.fail(_TERM_START)


def parse(text: str) -> Sentence:
    """Parse one sentence; ``#`` starts a comment running to end of line."""
    return _Parser(text).sentence()


# ---------------------------------------------------------------------------
# printer (fewest parentheses that re-parse to the same tree)

_LEVEL = {"<->": 1, "->": 2, "|": 3, "&": 4}


def term_text(t) -> str:
    if isinstance(t, Var):
        return t.name
    right = term_text(t.right)
    if isinstance(t.right, Join):
        right = f"({right})"
    return f"{term_text(t.left)} \\/ {right}"


def formula_text(f, outer: int = 0) -> str:
    if isinstance(f, Atom):
        if f.op == "R":
            a, b, c = (term_text(x) for x in f.args)
            return f"R({a}; {b}, {c})"
        return f"{term_text(f.args[0])} {f.op} {term_text(f.args[1])}"
    if isinstance(f, Not):
        return "!" + formula_text(f.body, 5)
    lv = _LEVEL[f.op]
    if f.op == "->":
        # right associative: a left operand at the same level needs parens
        text = f"{formula_text(f.left, lv + 1)} -> {formula_text(f.right, lv)}"
    else:
        text = f"{formula_text(f.left, lv)} {f.op} {formula_text(f.right, lv + 1)}"
    return f"({text})" if lv < outer else text


def to_text(s: Sentence) -> str:
    head = " ".join(f"{q} {' '.join(vs)} ." for q, vs in s.blocks())
    return f"{head} {formula_text(s.matrix)}"


# ---------------------------------------------------------------------------
# evaluation


@dataclass(frozen=True)
class EvalResult:
    truth: bool
    witness: dict | None  # variable -> element index
    names: dict | None = None  # variable -> element name

    def __bool__(self):
        return self.truth


class _Model:
    """Uniform fast access to a finite model."""

    def __init__(self, m, s: Sentence):
        self.size = m.size
        kind = getattr(m, "kind", "")
        if s.uses("R") and kind != "ternary":
            raise SignatureMismatch("R needs a ternary model")
        if kind == "ternary" and s.uses("[="):
            raise SignatureMismatch("[= is not in the ternary signature; write R(a; b, b)")
        if s.uses("\\/") and not getattr(m, "has_join", False):
            raise SignatureMismatch("\\/ needs a semilattice-bearing model")
        n = m.size
        if hasattr(m, "le") and not callable(m.le):
            self.le = m.le.tolist()
            self.sq = m.sq.tolist()
        else:
            self.le = [[m.is_le(a, b) for b in range(n)] for a in range(n)]
            self.sq = ([[m.is_sq(a, b) for b in range(n)] for a in range(n)]
                       if hasattr(m, "is_sq") else None)
        if getattr(m, "has_join", False):
            self.join = [[m.join_of(a, b) for b in range(n)] for a in range(n)]
        self.r = m.r.tolist() if kind == "ternary" else None


def _compile_term(t, slot):
    if isinstance(t, Var):
        i = slot[t.name]
        return lambda env, m: env[i]
    left, right = _compile_term(t.left, slot), _compile_term(t.right, slot)
    return lambda env, m: m.join[left(env, m)][right(env, m)]


def _compile(f, slot):
    if isinstance(f, Atom):
        args = [_compile_term(t, slot) for t in f.args]
        if f.op == "R":
            a, b, c = args
            return lambda env, m: m.r[a(env, m)][b(env, m)][c(env, m)]
        a, b = args
        if f.op == "=":
            return lambda env, m: a(env, m) == b(env, m)
        if f.op == "<=":
            return lambda env, m: m.le[a(env, m)][b(env, m)]
        return lambda env, m: m.sq[a(env, m)][b(env, m)]
    if isinstance(f, Not):
        body = _compile(f.body, slot)
        return lambda env, m: not body(env, m)
    left, right = _compile(f.left, slot), _compile(f.right, slot)
    if f.op == "&":
        return lambda env, m: left(env, m) and right(env, m)
    if f.op == "|":
        return lambda env, m: left(env, m) or right(env, m)
    if f.op == "->":
        return lambda env, m: (not left(env, m)) or right(env, m)
    return lambda env, m: bool(left(env, m)) == bool(right(env, m))


def _run(blocks, k, env, matrix, m) -> bool:
    if k == len(blocks):
        return bool(matrix(env, m))
    q, slots = blocks[k]
    want = q == "forall"
    for values in product(range(m.size), repeat=len(slots)):
        for s, v in zip(slots, values):
            env[s] = v
        if _run(blocks, k + 1, env, matrix, m) != want:
            return not want
    return want


def evaluate(s: Sentence, model) -> EvalResult:
    """Exhaustive truth value of ``s`` in ``model``.

    The witness fixes the leading quantifier block: the least counterexample
    when a leading universal block fails, or the least satisfying choice when
    a leading existential block succeeds.  Otherwise it is None.
    """
    m = _Model(model, s)
    slot = {v: i for i, v in enumerate(s.variables)}
    matrix = _compile(s.matrix, slot)
    blocks = [(q, [slot[v] for v in vs]) for q, vs in s.blocks()]
    env = [0] * len(slot)
    if not blocks:
        return EvalResult(bool(matrix(env, m)), None)
    q, slots = blocks[0]
    want = q == "forall"
    for values in product(range(m.size), repeat=len(slots)):
        for i, v in zip(slots, values):
            env[i] = v
        if _run(blocks, 1, env, matrix, m) != want:
            w = {s.variables[i]: v for i, v in zip(slots, values)}
            names = getattr(model, "names", None)
            named = {k: names[v] for k, v in w.items()} if names is not None else None
            return EvalResult(not want, w, named)
    return EvalResult(want, None)


def replay(s: Sentence, model, witness: dict) -> bool:
    """Truth of the sentence with its leading block fixed to ``witness``."""
    m = _Model(model, s)
    slot = {v: i for i, v in enumerate(s.variables)}
    matrix = _compile(s.matrix, slot)
    blocks = [(q, [slot[v] for v in vs]) for q, vs in s.blocks()]
    env = [0] * len(slot)
    for v, x in witness.items():
        env[slot[v]] = x
    return _run(blocks, 1, env, matrix, m)


# ---------------------------------------------------------------------------
# builtins

BUILTIN_TEXT = {
    "S1": "forall a b . a <= b -> a [= b",
    "S2": "forall a b c . a [= b & b [= c -> a [= c",
    "S3": "forall a a1 b . a [= b & a1 [= b -> a \\/ a1 [= b",
    "S4": "forall a . a [= a",
    "S5": "forall a b c . a [= b & b <= c -> a [= c",
    "S6": "forall a b c . a <= b & b [= c -> a [= c",
    "S7": "forall a a1 b b1 . a [= b & a1 [= b1 -> a \\/ a1 [= b \\/ b1",
    "S8": "forall a b . a [= b -> a \\/ b [= b",
    "S9": "forall a b a1 . a [= b -> a \\/ a1 [= b \\/ a1",
    # every cone {a | a [= b} has a <=-maximum
    "4.2": "forall b . exists c . forall a . a [= b <-> a <= c",
    # joins of closed elements are closed (prenex form)
    "4.3": ("forall c d . exists a1 a2 . forall a . "
            "!(a1 [= c <-> a1 <= c) | !(a2 [= d <-> a2 <= d) | (a [= c \\/ d <-> a <= c \\/ d)"),
    # union of two closed sets is closed (prenex form)
    "4.5": ("forall x y z . exists w . x \\/ y < z & z [= x \\/ y -> "
            "x < w & w [= x | y < w & w [= y"),
    "6.1": "forall a b c . R(a; b, c) <-> R(a; b \\/ c, b \\/ c)",
    "cech-poset": ("forall a b c . (a <= b -> a [= b) & (a [= b & b <= c -> a [= c) "
                   "& (a <= b & b [= c -> a [= c)"),
    "cech-semilattice": ("forall a b c . (a <= b -> a [= b) & (a [= b & b <= c -> a [= c) "
                         "& (a <= b & b [= c -> a [= c) & (a [= c & b [= c -> a \\/ b [= c)"),
}

# descriptive names for the numbered sentences
ALIASES = {"principal": "4.2", "additive": "4.3", "closed-union": "4.5",
           "ternary-additive": "6.1"}

BUILTINS = tuple(BUILTIN_TEXT) + tuple(ALIASES)


def builtin(name: str) -> Sentence:
    try:
        return parse(BUILTIN_TEXT[ALIASES.get(name, name)])
    except KeyError:
        raise UnknownBuiltin(f"unknown builtin {name!r}; known: {', '.join(BUILTINS)}") from None
