"""Brute-force checks that do not rely on the decision procedure."""
from __future__ import annotations

from collections import deque
from itertools import product
from typing import Iterator, Optional, Sequence

from .automata import MaxPlusAutomaton, _vec_dot
from .semigroups import BOT, Element, elem_mul
from .semiring import MINUS_INF, bar, mat_bar


def enumerate_words(sigma: Sequence[str], max_len: int) -> Iterator[tuple]:
    """All words of length 0..max_len, shortest first, then in alphabet order."""
    if max_len < 0:
        return
    for n in range(max_len + 1):
        yield from product(sigma, repeat=n)


def _step(vec, M, n):
    return tuple(_vec_dot(vec, [M[p][q] for p in range(n)]) for q in range(n))


def refute_bigo(A: MaxPlusAutomaton, B: MaxPlusAutomaton, c: int, max_len: int = 12) -> Optional[tuple]:
    """Shortest (then alphabet-first) word with ``f_A(w) > c f_B(w) + c``."""
    if set(A.alphabet) != set(B.alphabet):
        raise ValueError("automata have different alphabets")
    level = [((), A.initial, B.initial)]
    for n in range(max_len + 1):
        for w, va, vb in level:
            fa = _vec_dot(va, A.final)
            if fa is MINUS_INF:
                continue
            fb = _vec_dot(vb, B.final)
            if fb is MINUS_INF or fa > c * fb + c:
                return w
        if n == max_len:
            break
        level = [
            (w + (a,), _step(va, A.trans[a], A.n), _step(vb, B.trans[a], B.n))
            for w, va, vb in level
            for a in A.alphabet
        ]
    return None


def check_path_element(e, A: MaxPlusAutomaton, B: MaxPlusAutomaton, max_len: int = 12) -> Optional[tuple]:
    """A shortest word whose product of transition labels equals ``e``.

    Labels are ``(p, bar x, q, bar M_B(a))`` for each transition
    ``p -a:x-> q`` of A; the search is breadth-first over products.
    """
    if e is BOT:
        return None
    letters = []
    for a in A.alphabet:
        Mb = mat_bar(B.trans[a])
        for p, row in enumerate(A.trans[a]):
            for q, x in enumerate(row):
                if x is not MINUS_INF:
                    letters.append((a, Element(p, bar(x), q, Mb)))
    seen = {}
    todo = deque()
    for a, g in letters:
        if g not in seen:
            seen[g] = (a,)
            todo.append(g)
    while todo:
        g = todo.popleft()
        w = seen[g]
        if g == e:
            return w
        if len(w) >= max_len:
            continue
        for a, h in letters:
            k = elem_mul(g, h)
            if k is not BOT and k not in seen:
                seen[k] = w + (a,)
                todo.append(k)
    return None
