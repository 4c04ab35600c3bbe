"""Formulas and single-formula sequents of the additive fragment.

ASCII grammar, loosest binding first::

    formula := disj ( "->" formula )?          right associative
    disj    := conj ( "(+)" conj )*            left associative
    conj    := post ( "&" post )*              left associative
    post    := primary "^"*
    primary := ATOM | "_|_" | "(" formula ")"
    sequent := formula? "|-" formula?

Atoms are identifiers starting with an uppercase letter.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int, text: str) -> None:
        super().__init__(f"{message} at position {position} in {text!r}")
        self.position = position
        self.text = text


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Orth:
    body: "Formula"


@dataclass(frozen=True)
class Conj:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Disj:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Falsum:
    pass


Formula = Union[Atom, Orth, Conj, Disj, Implies, Falsum]
FALSUM = Falsum()


def orth(f: Formula) -> Formula:
    """Orthocomplement, normalizing ``(F^)^`` to ``F``."""
    return f.body if isinstance(f, Orth) else Orth(f)


# -- printing ---------------------------------------------------------------

_PREC = {Implies: 1, Disj: 2, Conj: 3}


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), 4)


def show(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Falsum):
        return "_|_"
    if isinstance(f, Orth):
        inner = show(f.body)
        return f"{inner}^" if _prec(f.body) == 4 else f"({inner})^"
    if isinstance(f, Implies):
        left = show(f.left)
        if _prec(f.left) <= 1:
            left = f"({left})"
        return f"{left} -> {show(f.right)}"
    op = " & " if isinstance(f, Conj) else " (+) "
    p = _prec(f)
    left, right = show(f.left), show(f.right)
    if _prec(f.left) < p:
        left = f"({left})"
    if _prec(f.right) <= p:
        right = f"({right})"
    return left + op + right


def show_unicode(f: Formula) -> str:
    text = show(f)
    text = text.replace("_|_", "\0").replace("^", "⊥").replace("\0", "⊥")
    return text.replace("(+)", "⊕").replace("->", "→")


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<atom>[A-Z][A-Za-z0-9_]*)|(?P<op>\(\+\)|->|_\|_|\|-|[&^()]))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"unexpected character {text[col]!r}", col, text)
        tok = m.group("atom") or m.group("op")
        tokens.append((tok, m.start(m.lastgroup)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self, expected: Optional[str] = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            want = repr(expected) if expected else "a token"
            got = "end of input" if tok is None else repr(tok)
            raise FormulaSyntaxError(f"expected {want}, got {got}", self.pos(), self.text)
        self.i += 1
        return tok

    def formula(self) -> Formula:
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.formula())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "(+)":
            self.take()
            f = Disj(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.post()
        while self.peek() == "&":
            self.take()
            f = Conj(f, self.post())
        return f

    def post(self) -> Formula:
        f = self.primary()
        while self.peek() == "^":
            self.take()
            f = orth(f)
        return f

    def primary(self) -> Formula:
        tok = self.peek()
        if tok == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        if tok == "_|_":
            self.take()
            return FALSUM
        if tok is not None and tok[0].isupper():
            self.take()
            return Atom(tok)
        got = "end of input" if tok is None else repr(tok)
        raise FormulaSyntaxError(f"expected a formula, got {got}", self.pos(), self.text)

    def at_end(self) -> bool:
        return self.i == len(self.tokens)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    if not p.at_end():
        raise FormulaSyntaxError(f"unexpected {p.peek()!r}", p.pos(), text)
    return f


# -- sequents ---------------------------------------------------------------


@dataclass(frozen=True)
class Sequent:
    """``antecedents |- succedents`` with at most one formula per side."""

    antecedents: tuple = ()
    succedents: tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "antecedents", tuple(self.antecedents))
        object.__setattr__(self, "succedents", tuple(self.succedents))
        if len(self.antecedents) > 1 or len(self.succedents) > 1:
            raise ValueError("sequents carry at most one formula per side")

    @classmethod
    def of(cls, left: Optional[Formula], right: Optional[Formula]) -> Sequent:
        return cls(() if left is None else (left,), () if right is None else (right,))

    @property
    def left(self) -> Optional[Formula]:
        return self.antecedents[0] if self.antecedents else None

    @property
    def right(self) -> Optional[Formula]:
        return self.succedents[0] if self.succedents else None

    def formulas(self) -> tuple:
        return self.antecedents + self.succedents

    def __str__(self) -> str:
        left = show(self.left) + " " if self.left is not None else ""
        right = " " + show(self.right) if self.right is not None else ""
        return f"{left}|-{right}"


def parse_sequent(text: str) -> Sequent:
    if text.count("|-") != 1:
        raise FormulaSyntaxError("a sequent needs exactly one '|-'", 0, text)
    cut = text.index("|-")
    lhs, rhs = text[:cut], text[cut + 2 :]
    try:
        left = parse_formula(lhs) if lhs.strip() else None
    except FormulaSyntaxError as exc:
        raise FormulaSyntaxError(str(exc).split(" at position")[0], exc.position, text) from None
    try:
        right = parse_formula(rhs) if rhs.strip() else None
    except FormulaSyntaxError as exc:
        msg = str(exc).split(" at position")[0]
        raise FormulaSyntaxError(msg, exc.position + cut + 2, text) from None
    return Sequent.of(left, right)


def symmetric(f: Formula) -> Formula:
    """Mirror image of a formula: ``&`` and ``(+)`` exchanged, operands reversed."""
    if isinstance(f, Conj):
        return Disj(symmetric(f.right), symmetric(f.left))
    if isinstance(f, Disj):
        return Conj(symmetric(f.right), symmetric(f.left))
    if isinstance(f, Orth):
        return orth(symmetric(f.body))
    if isinstance(f, Implies):
        return Implies(symmetric(f.left), symmetric(f.right))
    return f


def symmetric_sequent(s: Sequent) -> Sequent:
    """Swap the two sides and mirror every formula."""
    return Sequent(
        tuple(symmetric(f) for f in s.succedents),
        tuple(symmetric(f) for f in s.antecedents),
    )
