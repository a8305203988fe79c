"""Turning a witness derivation into words on which f_A outgrows f_B.

:func:`realize` follows the derivation bottom-up and returns, for a
parameter ``s``, a run-length word ``w_s`` together with the weight ``x_s``
of the run of A on it.  When the derived element has ``x = inf`` the family
satisfies ``x_s >= s * M_B(w_s)[i][j] + s`` on every entry where the element's
matrix is at most 1, which is what makes f_A escape every affine bound.
"""
from __future__ import annotations

import os
import sys
from dataclasses import dataclass
from typing import List, Optional

from . import words as W
from .automata import MaxPlusAutomaton, evaluate, run_weight
from .reductions import pull_back_word
from .semigroups import (
    Derivation,
    Flatten,
    Generator,
    Product,
    ResourceLimitError,
    Stabilise,
    replay,
)
from .semiring import INF, MINUS_INF, ONE, bar, mat_bar, max_finite_entry

DEFAULT_LENGTH_CAP = 10**18


def length_cap() -> int:
    return int(os.environ.get("MAXPLUS_CAP_WORDLEN", DEFAULT_LENGTH_CAP))


class DerivationMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Realization:
    word: W.Expr
    weight: int
    p: int
    q: int


def realize(d: Derivation, s: int, A: MaxPlusAutomaton, B: MaxPlusAutomaton, cap: Optional[int] = None) -> Realization:
    """The word ``w_s`` for derivation ``d`` and the A-weight ``x_s`` of its run.

    ``A`` must be deterministic; the word runs in A from ``p`` to ``q``
    where ``(p, x, q, M)`` is the element derived by ``d``.
    """
    if s < 0:
        raise ValueError("s must be nonnegative")
    cap = length_cap() if cap is None else cap
    if replay(d, A, B) != d.element:
        raise DerivationMismatchError("derivation does not produce its recorded element")
    nb = B.n
    memo = {}

    def theta(w):
        return max_finite_entry(B.word_matrix(w))

    def go(node, s):
        key = (id(node), s)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(node, Generator):
            w = node.letter
        elif isinstance(node, Product):
            y_inf = node.left.element.x == INF
            z_inf = node.right.element.x == INF
            if y_inf == z_inf:
                w = W.seq(go(node.left, s), go(node.right, s))
            elif y_inf:
                v0 = go(node.right, 0)
                w = W.seq(go(node.left, s * (theta(v0) + 1)), v0)
            else:
                u0 = go(node.left, 0)
                w = W.seq(u0, go(node.right, s * (theta(u0) + 1)))
        elif isinstance(node, Stabilise):
            if node.child.element.x == ONE:
                u0 = go(node.child, 0)
                # max(s, 1): at s = 0 the empty word would not realise the element
                w = W.rep(u0, max(s, 1) * (theta(u0) * nb + 1))
            else:
                w = go(node.child, s)
        elif isinstance(node, Flatten):
            u = go(node.child, s)
            if node.element.x == INF:
                w = W.rep(u, nb * theta(u) + 1)
            else:
                w = u
        else:
            raise TypeError(f"not a derivation: {node!r}")
        if W.length(w) > cap:
            raise ResourceLimitError("counterexample word length", cap)
        memo[key] = w
        return w

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20000))
    try:
        w = go(d, s)
    finally:
        sys.setrecursionlimit(old)
    e = d.element
    res = run_weight(A, w, e.p)
    if res is None or res[0] != e.q:
        raise DerivationMismatchError("the word does not lead from p to q in A")
    return Realization(w, res[1], e.p, e.q)


def verify_realization(e, w, x_s, s: int, A: MaxPlusAutomaton, B: MaxPlusAutomaton) -> bool:
    """Check the three properties of a realisation of ``e = (p, x, q, M)``.

    1. the run of A from p on ``w`` ends in q with weight ``x_s`` and
       ``bar(x_s) = bar(x)``;
    2. ``bar(M_B(w)) = bar(M)``;
    3. if ``x = inf``: ``x_s >= s * M_B(w)[i][j] + s`` whenever ``M[i][j] <= 1``.
    """
    res = run_weight(A, w, e.p)
    if res is None or res[0] != e.q or res[1] != x_s:
        return False
    if bar(x_s) != bar(e.x):
        return False
    MB = B.word_matrix(w)
    if mat_bar(MB) != mat_bar(e.M):
        return False
    if e.x == INF:
        for i, row in enumerate(e.M):
            for j, m in enumerate(row):
                v = MB[i][j]
                if m != INF and v is not MINUS_INF and x_s < s * v + s:
                    return False
    return True


@dataclass(frozen=True)
class Violation:
    s: int
    word: W.Expr
    f_a: object
    f_b: object
    parameter: int

    @property
    def length(self) -> int:
        return W.length(self.word)


def violation_family(verdict, s_list, max_doublings: int = 40, cap: Optional[int] = None) -> List[Violation]:
    """Words ``w`` over the original alphabet with ``f_A(w) > s f_B(w) + s``.

    Values are computed by evaluating both automata on the word.  When
    initial or final weights spoil the inequality for the realisation
    parameter ``s``, the parameter is doubled until it holds.
    """
    if getattr(verdict, "bigo", True):
        raise TypeError("violation families exist only for negative verdicts")
    out = []
    A0, B0 = verdict.original
    if verdict.immediate is not None:
        # f_B(w) = -inf, so the word works for every s
        word = W.from_word(verdict.immediate.word)
        fa, fb = evaluate(A0, word), evaluate(B0, word)
        return [Violation(s, word, fa, fb, s) for s in s_list]
    inst = verdict.instance
    for s in s_list:
        t = s
        for _ in range(max_doublings + 1):
            r = realize(verdict.derivation, t, inst.a, inst.b, cap)
            word = pull_back_word(inst.letter_map, r.word)
            fa, fb = evaluate(A0, word), evaluate(B0, word)
            if fa is not MINUS_INF and (fb is MINUS_INF or fa > s * fb + s):
                out.append(Violation(s, word, fa, fb, t))
                break
            t = max(1, 2 * t)
        else:
            raise RuntimeError(f"no violation found for s={s} after {max_doublings} doublings")
    return out
