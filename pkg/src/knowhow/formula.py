"""Formulas of the K/Kh language: AST, parser, printer and closures.

The AST has exactly five constructors (``Prop``, ``Not``, ``And``, ``K``,
``Kh``).  Disjunction, implication, equivalence and the two constants are
concrete syntax only and are expanded while parsing::

    a | b    ~(~a & ~b)
    a -> b   ~(a & ~b)
    a <-> b  (a -> b) & (b -> a)
    false    _f & ~_f
    true     ~false

Binding, tightest first: ``~ K Kh`` (prefix), ``&``, ``|``, ``->`` (right
associative), ``<->`` (chains must be parenthesized).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Mapping, Union

from .errors import FormulaSyntaxError, NotSubformulaClosed, ReservedWordError

RESERVED = frozenset({"K", "Kh", "true", "false"})
FALSUM_NAME = "_f"
PROP_PATTERN = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")

_TAGS = {"Prop": 0, "Not": 1, "And": 2, "K": 3, "Kh": 4}


@total_ordering
class _Node:
    __slots__ = ()

    def __lt__(self, other):
        if not isinstance(other, _Node):
            return NotImplemented
        return sort_key(self) < sort_key(other)

    def __str__(self):
        return render(self)


@dataclass(frozen=True, slots=True, eq=True)
class Prop(_Node):
    name: str

    def __post_init__(self):
        check_prop_name(self.name, allow_falsum=True)


@dataclass(frozen=True, slots=True, eq=True)
class Not(_Node):
    arg: "Formula"


@dataclass(frozen=True, slots=True, eq=True)
class And(_Node):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True, eq=True)
class K(_Node):
    arg: "Formula"


@dataclass(frozen=True, slots=True, eq=True)
class Kh(_Node):
    arg: "Formula"


Formula = Union[Prop, Not, And, K, Kh]


def check_prop_name(name: str, allow_falsum: bool = False) -> str:
    if name in RESERVED:
        raise ReservedWordError(name)
    if name == FALSUM_NAME:
        if allow_falsum:
            return name
        raise ReservedWordError(name)
    if not isinstance(name, str) or not PROP_PATTERN.match(name):
        raise ValueError(f"invalid proposition name {name!r}")
    return name


# -- derived connectives ---------------------------------------------------

FALSUM = And(Prop(FALSUM_NAME), Not(Prop(FALSUM_NAME)))
VERUM = Not(FALSUM)


def neg(f):
    return Not(f)


def conj(a, b):
    return And(a, b)


def disj(a, b):
    return Not(And(Not(a), Not(b)))


def implies(a, b):
    return Not(And(a, Not(b)))


def iff(a, b):
    return And(implies(a, b), implies(b, a))


# -- structure ---------------------------------------------------------------

def sort_key(f: Formula) -> tuple:
    """Structural order: constructor tag, then children left to right, then name."""
    if isinstance(f, Prop):
        return (0, f.name)
    if isinstance(f, And):
        return (2, sort_key(f.left), sort_key(f.right))
    return (_TAGS[type(f).__name__], sort_key(f.arg))


def children(f: Formula) -> tuple:
    if isinstance(f, Prop):
        return ()
    if isinstance(f, And):
        return (f.left, f.right)
    return (f.arg,)


def size(f: Formula) -> int:
    """Number of symbols (AST nodes)."""
    return 1 + sum(size(c) for c in children(f))


def props(f: Formula) -> tuple:
    found = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Prop):
            found.add(g.name)
        else:
            stack.extend(children(g))
    return tuple(sorted(found))


def formula_set(items: Iterable[Formula]) -> tuple:
    """Deduplicated formulas in structural order."""
    return tuple(sorted(set(items), key=sort_key))


def subformulas(f: Formula) -> tuple:
    seen = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        stack.extend(children(g))
    return formula_set(seen)


def closure(phi_set: Iterable[Formula]) -> tuple:
    """Add ``K psi`` for every member; input must be subformula-closed."""
    phi = set(phi_set)
    for g in phi:
        for c in children(g):
            if c not in phi:
                raise NotSubformulaClosed(c)
    return formula_set(phi | {K(g) for g in phi})


def substitute(f: Formula, mapping: Mapping[str, Formula]) -> Formula:
    if isinstance(f, Prop):
        return mapping.get(f.name, f)
    if isinstance(f, Not):
        return Not(substitute(f.arg, mapping))
    if isinstance(f, And):
        return And(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, K):
        return K(substitute(f.arg, mapping))
    return Kh(substitute(f.arg, mapping))


# -- printing ----------------------------------------------------------------

def render(f: Formula, sugar: bool = False) -> str:
    """Fully parenthesized text.  ``parse(render(f)) == f`` in both modes.

    With ``sugar`` the derived connectives are reconstructed where the AST
    has exactly their expanded shape.
    """
    if sugar:
        text = _render_sugar(f)
        if text is not None:
            return text
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, And):
        return f"({render(f.left, sugar)} & {render(f.right, sugar)})"
    op = {"Not": "~", "K": "K ", "Kh": "Kh "}[type(f).__name__]
    inner = render(f.arg, sugar)
    if isinstance(f.arg, Prop) or inner.startswith("(") or inner in ("true", "false"):
        return op + inner
    return f"{op}({inner})"


def _render_sugar(f):
    if f == FALSUM:
        return "false"
    if f == VERUM:
        return "true"
    if isinstance(f, And):
        a, b = f.left, f.right
        if _is_impl(a) and _is_impl(b):
            (x, y), (u, v) = _impl_parts(a), _impl_parts(b)
            if x == v and y == u:
                return f"({render(x, True)} <-> {render(y, True)})"
        return None
    if isinstance(f, Not) and isinstance(f.arg, And):
        a, b = f.arg.left, f.arg.right
        if isinstance(a, Not) and isinstance(b, Not):
            return f"({render(a.arg, True)} | {render(b.arg, True)})"
        if isinstance(b, Not):
            return f"({render(a, True)} -> {render(b.arg, True)})"
    return None


def _is_impl(f):
    return isinstance(f, Not) and isinstance(f.arg, And) and isinstance(f.arg.right, Not)


def _impl_parts(f):
    return f.arg.left, f.arg.right.arg


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<iff><->)|(?P<imp>->)|(?P<sym>[~&|()])"
    r"|(?P<upper>[A-Z][A-Za-z0-9_]*)|(?P<ident>[a-z][a-zA-Z0-9_]*)|(?P<falsum>_f\b))"
)
_OPERAND_START = {"~", "(", "K", "Kh", "prop", "true", "false"}


def _tokenize(text):
    tokens = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:]
            if rest.strip() == "":
                break
            start = pos + len(rest) - len(rest.lstrip())
            raise FormulaSyntaxError(start, "a formula token", text)
        kind = m.lastgroup
        value = m.group(kind)
        start = m.start(kind)
        if kind in ("iff", "imp", "sym"):
            tokens.append((value, value, start))
        elif kind == "upper":
            if value not in ("K", "Kh"):
                raise FormulaSyntaxError(start, "'K' or 'Kh' (propositions are lowercase)", text)
            tokens.append((value, value, start))
        elif kind == "falsum":
            tokens.append(("prop", value, start))
        elif value in ("true", "false"):
            tokens.append((value, value, start))
        else:
            tokens.append(("prop", value, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind, what):
        if self.peek() != kind:
            raise FormulaSyntaxError(self.tokens[self.i][2], what, self.text)
        return self.take()

    def parse(self):
        f = self.equiv()
        if self.peek() != "end":
            raise FormulaSyntaxError(self.tokens[self.i][2], "end of input", self.text)
        return f

    def equiv(self):
        left = self.implication()
        if self.peek() == "<->":
            self.take()
            right = self.implication()
            if self.peek() == "<->":
                raise FormulaSyntaxError(
                    self.tokens[self.i][2], "parentheses around chained '<->'", self.text
                )
            return iff(left, right)
        return left

    def implication(self):
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return implies(left, self.implication())
        return left

    def disjunction(self):
        f = self.conjunction()
        while self.peek() == "|":
            self.take()
            f = disj(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        kind, value, pos = self.tokens[self.i]
        if kind == "~":
            self.take()
            return Not(self.unary())
        if kind in ("K", "Kh"):
            self.take()
            if self.peek() not in _OPERAND_START:
                raise ReservedWordError(kind, pos)
            arg = self.unary()
            return K(arg) if kind == "K" else Kh(arg)
        return self.atom()

    def atom(self):
        kind, value, pos = self.tokens[self.i]
        if kind == "prop":
            self.take()
            return Prop(value)
        if kind == "true":
            self.take()
            return VERUM
        if kind == "false":
            self.take()
            return FALSUM
        if kind == "(":
            self.take()
            f = self.equiv()
            self.expect(")", "')'")
            return f
        raise FormulaSyntaxError(pos, "a proposition, '~', 'K', 'Kh', 'true', 'false' or '('", self.text)


def parse(text: str) -> Formula:
    return _Parser(text).parse()
