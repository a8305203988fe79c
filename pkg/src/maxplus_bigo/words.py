"""Run-length encoded words.

Counterexample words grow polynomially in their parameter (``(a b a^20 b)^81``
already has 1863 letters), so they are kept as small expression trees and only
expanded on demand.  A plain word is a tuple of letter strings.

Grammar accepted by :func:`parse_word`::

    word   := item*
    item   := atom ('^' INT)?
    atom   := LETTER | '(' word ')'
    LETTER := [A-Za-z0-9_]+ | any single non-space char other than ( ) ^

Letters are separated by whitespace; a run of word characters is read as a
single letter name, so ``ab`` is one letter while ``a b`` is two.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Tuple, Union

Word = Tuple[str, ...]


@dataclass(frozen=True)
class Rep:
    """``body`` repeated ``count`` times."""

    body: "Expr"
    count: int

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("negative repetition count")


@dataclass(frozen=True)
class Seq:
    parts: Tuple["Expr", ...]


Expr = Union[str, Rep, Seq]


def letter(a: str) -> Expr:
    return a


def seq(*parts: Expr) -> Expr:
    flat = []
    for p in parts:
        if isinstance(p, Seq):
            flat.extend(p.parts)
        elif isinstance(p, tuple):
            flat.extend(p)
        else:
            flat.append(p)
    if len(flat) == 1:
        return flat[0]
    return Seq(tuple(flat))


def rep(body: Expr, count: int) -> Expr:
    if count == 1:
        return body
    return Rep(body, count)


def from_word(w: Iterable[str]) -> Expr:
    return seq(*tuple(w))


def length(e: Expr) -> int:
    if isinstance(e, str):
        return 1
    if isinstance(e, Rep):
        return e.count * length(e.body)
    if isinstance(e, tuple):
        return len(e)
    return sum(length(p) for p in e.parts)


def iter_letters(e: Expr) -> Iterator[str]:
    if isinstance(e, str):
        yield e
    elif isinstance(e, tuple):
        yield from e
    elif isinstance(e, Rep):
        body = tuple(iter_letters(e.body))
        for _ in range(e.count):
            yield from body
    else:
        for p in e.parts:
            yield from iter_letters(p)


def expand(e: Expr, limit: int | None = None) -> Word:
    """The plain word denoted by ``e``; raises if longer than ``limit``."""
    if limit is not None and length(e) > limit:
        raise ValueError(f"word of length {length(e)} exceeds limit {limit}")
    return tuple(iter_letters(e))


def map_letters(e: Expr, f) -> Expr:
    if isinstance(e, str):
        return f(e)
    if isinstance(e, tuple):
        return tuple(f(a) for a in e)
    if isinstance(e, Rep):
        return Rep(map_letters(e.body, f), e.count)
    return Seq(tuple(map_letters(p, f) for p in e.parts))


def letters_of(e: Expr) -> set:
    if isinstance(e, str):
        return {e}
    if isinstance(e, tuple):
        return set(e)
    if isinstance(e, Rep):
        return letters_of(e.body)
    out = set()
    for p in e.parts:
        out |= letters_of(p)
    return out


def format_word(e: Expr) -> str:
    """Render in the run-length syntax, e.g. ``(a b a^20 b)^81``."""
    if isinstance(e, str):
        return e
    if isinstance(e, tuple):
        return " ".join(e) if e else ""
    if isinstance(e, Rep):
        body = e.body
        inner = format_word(body)
        if not isinstance(body, str):
            inner = f"({inner})"
        return f"{inner}^{e.count}"
    return " ".join(s for s in (format_word(p) for p in e.parts) if s)


_TOKEN = re.compile(r"\s*(?:(\()|(\))|\^\s*(\d+)|([A-Za-z0-9_]+|[^\s()^]))")


class WordSyntaxError(ValueError):
    pass


def parse_word(text: str) -> Expr:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise WordSyntaxError(f"unexpected character at {pos}: {text[pos:]!r}")
        pos = m.end()
        if m.group(1):
            tokens.append(("(", None))
        elif m.group(2):
            tokens.append((")", None))
        elif m.group(3) is not None:
            tokens.append(("^", int(m.group(3))))
        else:
            tokens.append(("L", m.group(4)))

    def parse_seq(i):
        parts = []
        while i < len(tokens) and tokens[i][0] != ")":
            kind, val = tokens[i]
            if kind == "(":
                atom, i = parse_seq(i + 1)
                if i >= len(tokens) or tokens[i][0] != ")":
                    raise WordSyntaxError("unbalanced parenthesis")
                i += 1
            elif kind == "L":
                atom, i = val, i + 1
            else:
                raise WordSyntaxError("'^' without a preceding letter or group")
            while i < len(tokens) and tokens[i][0] == "^":
                atom = Rep(atom, tokens[i][1])
                i += 1
            parts.append(atom)
        return Seq(tuple(parts)) if len(parts) != 1 else parts[0], i

    expr, i = parse_seq(0)
    if i != len(tokens):
        raise WordSyntaxError("unbalanced parenthesis")
    return expr


class WordMatrixCache:
    """Memoised ``M(e)`` for word expressions over a fixed letter->matrix map."""

    def __init__(self, letter_matrix, identity, mul, power):
        self._letter = letter_matrix
        self._identity = identity
        self._mul = mul
        self._power = power
        self._memo = {}

    def __call__(self, e: Expr):
        if isinstance(e, str):
            return self._letter(e)
        if isinstance(e, tuple):
            acc = self._identity
            for a in e:
                acc = self._mul(acc, self._letter(a))
            return acc
        key = e
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if isinstance(e, Rep):
            acc = self._power(self(e.body), e.count)
        else:
            acc = self._identity
            for p in e.parts:
                acc = self._mul(acc, self(p))
        self._memo[key] = acc
        return acc
