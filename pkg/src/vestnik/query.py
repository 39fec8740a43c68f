"""Query language: regular term queries and the extended boolean grammar.

Extended grammar (operators are case-sensitive uppercase, NOT binds
tightest, then AND, then OR; adjacency means AND):

    query    := or_expr
    or_expr  := and_expr (OR and_expr)*
    and_expr := unary ((AND)? unary)*
    unary    := NOT unary | atom
    atom     := '(' query ')'
              | '"' words '"' ('~' INT)?
              | field ':' value
              | WORD

A quoted pair with ``~N`` is a proximity query, quoted words without it a
phrase, and a single quoted word collapses to a plain term. Fields are
``newspaper``, ``date_from`` and ``date_to``. Parse errors carry 0-based
character positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .analyzer import TokenKind, tokenize
from .index.segment import SearchHit
from .orthography import SpellingConverter


class BlankQuery(ValueError):
    """The query string was blank or contained no searchable terms."""


class ParseError(ValueError):
    def __init__(self, position: int, expectation: str) -> None:
        super().__init__(f"at {position}: expected {expectation}")
        self.position = position
        self.expectation = expectation


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Term:
    word: str

    def __post_init__(self) -> None:
        if not self.word.lower():
            raise ValueError("empty term")


@dataclass(frozen=True)
class Phrase:
    words: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.words) < 2 or any(not w.lower() for w in self.words):
            raise ValueError("phrase needs at least two non-empty words")


@dataclass(frozen=True)
class Proximity:
    first: str
    second: str
    distance: int

    def __post_init__(self) -> None:
        if self.distance < 1:
            raise ValueError("proximity distance must be >= 1")
        if not self.first or not self.second:
            raise ValueError("proximity words must be non-empty")


@dataclass(frozen=True)
class And:
    children: tuple

    def __post_init__(self) -> None:
        if len(self.children) < 2:
            raise ValueError("And needs at least two children")


@dataclass(frozen=True)
class Or:
    children: tuple

    def __post_init__(self) -> None:
        if len(self.children) < 2:
            raise ValueError("Or needs at least two children")


@dataclass(frozen=True)
class Not:
    child: object


FIELD_NAMES = ("newspaper", "date_from", "date_to")


@dataclass(frozen=True)
class FieldFilter:
    field: str
    value: str

    def __post_init__(self) -> None:
        if self.field not in FIELD_NAMES:
            raise ValueError(f"unknown field {self.field!r}")


QueryAST = object  # union of the node classes above


@dataclass(frozen=True)
class DualQuery:
    """The same query in both spellings; trees differ only in words."""

    modern: QueryAST
    historical: QueryAST


# ---------------------------------------------------------------------------
# Lexer

_SPECIAL = set('()"~:')


@dataclass(frozen=True)
class _Lexeme:
    kind: str  # WORD AND OR NOT LPAREN RPAREN QUOTED TILDE COLON EOF
    value: str
    pos: int


def _lex(text: str) -> list[_Lexeme]:
    out: list[_Lexeme] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c == "(":
            out.append(_Lexeme("LPAREN", c, i))
            i += 1
        elif c == ")":
            out.append(_Lexeme("RPAREN", c, i))
            i += 1
        elif c == "~":
            out.append(_Lexeme("TILDE", c, i))
            i += 1
        elif c == ":":
            out.append(_Lexeme("COLON", c, i))
            i += 1
        elif c == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise ParseError(n, 'closing \'"\'')
            out.append(_Lexeme("QUOTED", text[i + 1 : j], i))
            i = j + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in _SPECIAL:
                j += 1
            word = text[i:j]
            kind = word if word in ("AND", "OR", "NOT") else "WORD"
            out.append(_Lexeme(kind, word, i))
            i = j
    out.append(_Lexeme("EOF", "", n))
    return out


# ---------------------------------------------------------------------------
# Parser

_ATOM_STARTERS = ("WORD", "QUOTED", "LPAREN", "NOT")


class _Parser:
    def __init__(self, lexemes: list[_Lexeme]) -> None:
        self.lexemes = lexemes
        self.pos = 0

    def peek(self) -> _Lexeme:
        return self.lexemes[self.pos]

    def advance(self) -> _Lexeme:
        lx = self.lexemes[self.pos]
        self.pos += 1
        return lx

    def parse(self) -> QueryAST:
        node = self.or_expr()
        tail = self.peek()
        if tail.kind != "EOF":
            raise ParseError(tail.pos, "end of query or an operator")
        return node

    def or_expr(self) -> QueryAST:
        children = [self.and_expr()]
        while self.peek().kind == "OR":
            self.advance()
            children.append(self.and_expr())
        return children[0] if len(children) == 1 else Or(tuple(children))

    def and_expr(self) -> QueryAST:
        children = [self.unary()]
        while True:
            nxt = self.peek()
            if nxt.kind == "AND":
                self.advance()
                children.append(self.unary())
            elif nxt.kind in _ATOM_STARTERS:
                children.append(self.unary())  # adjacency means AND
            else:
                break
        return children[0] if len(children) == 1 else And(tuple(children))

    def unary(self) -> QueryAST:
        if self.peek().kind == "NOT":
            self.advance()
            return Not(self.unary())
        return self.atom()

    def atom(self) -> QueryAST:
        lx = self.peek()
        if lx.kind == "LPAREN":
            self.advance()
            node = self.or_expr()
            closing = self.peek()
            if closing.kind != "RPAREN":
                raise ParseError(closing.pos, "')'")
            self.advance()
            return node
        if lx.kind == "QUOTED":
            self.advance()
            words = tuple(w.lower() for w in lx.value.split())
            if not words:
                raise ParseError(lx.pos, "at least one word inside quotes")
            if self.peek().kind == "TILDE":
                self.advance()
                number = self.peek()
                if number.kind != "WORD" or not number.value.isdigit():
                    raise ParseError(number.pos, "an integer after '~'")
                self.advance()
                if len(words) != 2:
                    raise ParseError(lx.pos, "exactly two quoted words before '~'")
                distance = int(number.value)
                if distance < 1:
                    raise ParseError(number.pos, "a distance of at least 1")
                return Proximity(words[0], words[1], distance)
            if len(words) == 1:
                return Term(words[0])
            return Phrase(words)
        if lx.kind == "WORD":
            self.advance()
            if self.peek().kind == "COLON":
                if lx.value not in FIELD_NAMES:
                    raise ParseError(
                        lx.pos, f"a field name ({', '.join(FIELD_NAMES)})"
                    )
                self.advance()
                value = self.peek()
                if value.kind == "WORD":
                    self.advance()
                    return FieldFilter(lx.value, value.value)
                if value.kind == "QUOTED":
                    self.advance()
                    return FieldFilter(lx.value, value.value)
                raise ParseError(value.pos, "a field value")
            return Term(lx.value.lower())
        raise ParseError(lx.pos, "a term, quoted phrase, or '('")


def parse(query: str, mode: str = "regular") -> QueryAST:
    """Parse a query string into an AST.

    Regular mode treats the input as a bag of words (disjunction). Extended
    mode uses the boolean grammar documented at module level.
    """
    if not query.strip():
        raise BlankQuery("query is blank")
    if mode == "regular":
        words = [
            t.surface.lower()
            for t in tokenize(query)
            if t.kind in (TokenKind.WORD, TokenKind.NUMBER)
        ]
        if not words:
            raise BlankQuery("query contains no searchable terms")
        terms = [Term(w) for w in words]
        return terms[0] if len(terms) == 1 else Or(tuple(terms))
    if mode == "extended":
        return _Parser(_lex(query)).parse()
    raise ValueError(f"unknown query mode {mode!r}")


# ---------------------------------------------------------------------------
# Rendering, word mapping, dual expansion


def _needs_parens(child: QueryAST, parent: str) -> bool:
    # same-type nesting keeps parentheses so the rendered text reparses to
    # the identical tree instead of a flattened chain
    if isinstance(child, Or):
        return parent in ("And", "Not", "Or")
    if isinstance(child, And):
        return parent in ("Not", "And")
    return False


def _render(node: QueryAST, parent: str = "") -> str:
    if isinstance(node, Term):
        return node.word
    if isinstance(node, Phrase):
        return '"' + " ".join(node.words) + '"'
    if isinstance(node, Proximity):
        return f'"{node.first} {node.second}"~{node.distance}'
    if isinstance(node, FieldFilter):
        value = node.value
        if any(ch.isspace() for ch in value):
            value = f'"{value}"'
        return f"{node.field}:{value}"
    if isinstance(node, Not):
        inner = _render(node.child, "Not")
        if _needs_parens(node.child, "Not"):
            inner = f"({inner})"
        return f"NOT {inner}"
    if isinstance(node, And):
        parts = []
        for child in node.children:
            inner = _render(child, "And")
            if _needs_parens(child, "And"):
                inner = f"({inner})"
            parts.append(inner)
        return " AND ".join(parts)
    if isinstance(node, Or):
        parts = []
        for child in node.children:
            inner = _render(child, "Or")
            if _needs_parens(child, "Or"):
                inner = f"({inner})"
            parts.append(inner)
        return " OR ".join(parts)
    raise TypeError(f"not a query node: {node!r}")


def pretty(node: QueryAST) -> str:
    """Render an AST back to parseable query text."""
    return _render(node)


def map_words(node: QueryAST, fn: Callable[[str], str]) -> QueryAST:
    """Rewrite every term, phrase and proximity word; filters untouched."""
    if isinstance(node, Term):
        return Term(fn(node.word))
    if isinstance(node, Phrase):
        return Phrase(tuple(fn(w) for w in node.words))
    if isinstance(node, Proximity):
        return Proximity(fn(node.first), fn(node.second), node.distance)
    if isinstance(node, FieldFilter):
        return node
    if isinstance(node, Not):
        return Not(map_words(node.child, fn))
    if isinstance(node, And):
        return And(tuple(map_words(c, fn) for c in node.children))
    if isinstance(node, Or):
        return Or(tuple(map_words(c, fn) for c in node.children))
    raise TypeError(f"not a query node: {node!r}")


def expand_dual(ast: QueryAST, converter: SpellingConverter) -> DualQuery:
    """Produce the modern-normalized and historical-preferred trees."""
    return DualQuery(
        modern=map_words(ast, converter.modern),
        historical=map_words(ast, converter.historical_preferred),
    )


# ---------------------------------------------------------------------------
# Result merging


def _merge_ranges(
    ranges: Iterable[tuple[int, int]]
) -> tuple[tuple[int, int], ...]:
    merged: list[list[int]] = []
    for start, end in sorted(ranges):
        if merged and start <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], end)
        else:
            merged.append([start, end])
    return tuple((s, e) for s, e in merged)


def merge_hits(
    hits_modern: Sequence[SearchHit],
    hits_historical: Sequence[SearchHit],
    top_k: int | None = None,
) -> list[SearchHit]:
    """Union by document, max score, merged highlights, global re-sort."""
    by_doc: dict[int, SearchHit] = {}
    for hit in list(hits_modern) + list(hits_historical):
        seen = by_doc.get(hit.doc_id)
        if seen is None:
            by_doc[hit.doc_id] = hit
        else:
            by_doc[hit.doc_id] = SearchHit(
                hit.doc_id,
                max(seen.score, hit.score),
                _merge_ranges(list(seen.highlights) + list(hit.highlights)),
            )
    ranked = sorted(by_doc.values(), key=lambda h: (-h.score, h.doc_id))
    return ranked[:top_k] if top_k is not None else ranked
