"""Reduce an arbitrary big-O instance to one with A deterministic and f_B total.

The reduction has two steps: a language-inclusion pre-check (if some word is
accepted by A but not by B, A cannot be big-O of B), then B is totalised with
a zero-weight sink and A is made deterministic by annotating every letter
with the target state of the transition it labels.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from typing import Dict, Optional, Tuple, Union

from . import words as W
from .automata import (
    NFA,
    MaxPlusAutomaton,
    boolean_projection,
    is_deterministic,
    trim,
)
from .semigroups import ResourceLimitError
from .semiring import MINUS_INF, constant

DEFAULT_SUBSET_CAP = 2**20


def subset_cap() -> int:
    return int(os.environ.get("MAXPLUS_CAP_SUBSET", DEFAULT_SUBSET_CAP))


class AlphabetMismatchError(ValueError):
    pass


def _check_alphabets(sigma1, sigma2):
    if set(sigma1) != set(sigma2):
        raise AlphabetMismatchError(f"alphabets differ: {sorted(sigma1)} vs {sorted(sigma2)}")


def separating_word(A: NFA, B: NFA, cap: Optional[int] = None) -> Optional[W.Word]:
    """A shortest word in L(A) minus L(B), or ``None`` if L(A) is included in L(B).

    Breadth-first search over pairs (state of A, subset of B).  Among words of
    equal length the one first reached in alphabet order is returned.
    """
    _check_alphabets(A.alphabet, B.alphabet)
    cap = subset_cap() if cap is None else cap
    start_b = B.initial
    parent: Dict[Tuple[int, frozenset], Optional[Tuple]] = {}
    todo = deque()
    subsets = set()
    for qa in sorted(A.initial):
        node = (qa, start_b)
        if node not in parent:
            parent[node] = None
            todo.append(node)
    subsets.add(start_b)
    while todo:
        node = todo.popleft()
        qa, sb = node
        if qa in A.final and not (sb & B.final):
            word = []
            while parent[node] is not None:
                node, a = parent[node]
                word.append(a)
            return tuple(reversed(word))
        for a in A.alphabet:
            nb = B.step(sb, a)
            for qa2 in sorted(A.delta.get((qa, a), ())):
                nxt = (qa2, nb)
                if nxt in parent:
                    continue
                if nb not in subsets:
                    subsets.add(nb)
                    if len(subsets) > cap:
                        raise ResourceLimitError("subset construction", cap)
                parent[nxt] = (node, a)
                todo.append(nxt)
    return None


def nfa_inclusion(A: NFA, B: NFA, cap: Optional[int] = None) -> bool:
    """True iff L(A) is included in L(B)."""
    return separating_word(A, B, cap) is None


def _fresh(name: str, taken) -> str:
    while name in taken:
        name += "'"
    return name


def totalize_b(B: MaxPlusAutomaton) -> MaxPlusAutomaton:
    """Add an initial and final state with 0-weight loops: f_B' = max(f_B, 0)."""
    n = B.n
    top = _fresh("top", B.states)
    trans = {}
    for a, M in B.trans.items():
        rows = [tuple(row) + (MINUS_INF,) for row in M]
        rows.append((MINUS_INF,) * n + (0,))
        trans[a] = tuple(rows)
    return MaxPlusAutomaton(
        B.states + (top,), B.alphabet, trans, B.initial + (0,), B.final + (0,)
    )


def determinize_pair(A: MaxPlusAutomaton, B: MaxPlusAutomaton):
    """Annotate letters with target states of A.

    Returns ``(A', B', letter_map)`` over the alphabet ``{a_q}``: A' is
    deterministic with a fresh initial state ``r``, B' copies each transition
    of B once per annotation, and ``letter_map`` erases the annotation.
    """
    _check_alphabets(A.alphabet, B.alphabet)
    taken = set(A.alphabet)
    letter_map: Dict[str, str] = {}
    annotated: Dict[Tuple[str, int], str] = {}
    for a in A.alphabet:
        for qi, q in enumerate(A.states):
            name = _fresh(f"{a}_{q}", taken)
            taken.add(name)
            letter_map[name] = a
            annotated[(a, qi)] = name
    sigma = tuple(letter_map)

    r = _fresh("r", A.states)
    states = A.states + (r,)
    ri = len(A.states)
    transitions = []
    for p, a, x, q in A.transitions():
        aq = annotated[(a, q)]
        transitions.append((A.states[p], aq, x, A.states[q]))
        if A.initial[p] is not MINUS_INF:
            transitions.append((r, aq, x + A.initial[p], A.states[q]))
    init_finals = [A.final[p] for p in A.initial_states() if A.final[p] is not MINUS_INF]
    final = {A.states[p]: A.final[p] for p in A.final_states()}
    if init_finals:
        final[r] = max(init_finals)
    A2 = MaxPlusAutomaton.from_transitions(states, sigma, transitions, {r: 0}, final)
    assert A2.states[ri] == r

    B2 = MaxPlusAutomaton(
        B.states,
        sigma,
        {aq: B.trans[letter_map[aq]] for aq in sigma},
        B.initial,
        B.final,
    )
    return A2, B2, letter_map


def pull_back_word(letter_map: Dict[str, str], w):
    """Erase annotations from a plain word or a run-length expression."""
    def erase(a):
        try:
            return letter_map[a]
        except KeyError:
            raise W.WordSyntaxError(f"letter {a!r} is not an annotated letter") from None

    if isinstance(w, (tuple, list)):
        return tuple(erase(a) for a in w)
    return W.map_letters(w, erase)


@dataclass(frozen=True)
class SimplifiedInstance:
    """A simplified instance equivalent, for big-O, to the original pair."""

    a: MaxPlusAutomaton
    b: MaxPlusAutomaton
    letter_map: Dict[str, str]
    original_a: MaxPlusAutomaton
    original_b: MaxPlusAutomaton


@dataclass(frozen=True)
class ImmediateAnswer:
    """L(A) is not included in L(B): ``word`` has f_A finite and f_B = -inf."""

    word: W.Word
    bigo: bool = False


def simplify(A: MaxPlusAutomaton, B: MaxPlusAutomaton, cap: Optional[int] = None) -> Union[SimplifiedInstance, ImmediateAnswer]:
    _check_alphabets(A.alphabet, B.alphabet)
    if A.alphabet != B.alphabet:
        B = MaxPlusAutomaton(B.states, A.alphabet, B.trans, B.initial, B.final)
    At, Bt = trim(A), trim(B)
    w = separating_word(boolean_projection(At), boolean_projection(Bt), cap)
    if w is not None:
        return ImmediateAnswer(w)
    A2, B2, letter_map = determinize_pair(At, totalize_b(Bt))
    A2 = trim(A2)
    assert is_deterministic(A2)
    return SimplifiedInstance(A2, trim(B2), letter_map, A, B)


def identity_instance(A: MaxPlusAutomaton, B: MaxPlusAutomaton) -> SimplifiedInstance:
    """Wrap a pair that already is simplified (A deterministic, f_B total).

    Totality of f_B is the caller's responsibility.
    """
    if not is_deterministic(A):
        raise ValueError("A must be deterministic")
    _check_alphabets(A.alphabet, B.alphabet)
    return SimplifiedInstance(A, B, {a: a for a in A.alphabet}, A, B)


def zero_function(alphabet) -> MaxPlusAutomaton:
    return MaxPlusAutomaton(("z",), tuple(alphabet), {a: constant(1, 1, 0) for a in alphabet}, (0,), (0,))


def is_total(B: MaxPlusAutomaton, cap: Optional[int] = None) -> bool:
    """True iff f_B(w) is finite for every word."""
    n = len(B.alphabet)
    universal = NFA(1, B.alphabet, {(0, a): frozenset({0}) for a in B.alphabet}, frozenset({0}), frozenset({0}))
    return n == 0 or separating_word(universal, boolean_projection(trim(B)), cap) is None


def prepare_instance(A: MaxPlusAutomaton, B: MaxPlusAutomaton, cap: Optional[int] = None):
    """Use the pair as is when it is already simplified, otherwise :func:`simplify` it."""
    At = trim(A)
    if At.n and is_deterministic(At) and is_total(B, cap):
        return SimplifiedInstance(At, trim(B), {a: a for a in A.alphabet}, A, B)
    return simplify(A, B, cap)


def lift_word(inst: SimplifiedInstance, w) -> Optional[W.Word]:
    """Annotate ``w`` along a maximal-weight accepting run of the simplified A.

    Returns ``None`` if A rejects ``w``.
    """
    A = inst.a
    by_letter: Dict[str, list] = {}
    for b in A.alphabet:
        by_letter.setdefault(inst.letter_map[b], []).append(b)
    best = {q: (x, None) for q, x in enumerate(A.initial) if x is not MINUS_INF}
    history = []
    for a in w:
        nxt: Dict[int, Tuple] = {}
        for p, (x, _) in best.items():
            for b in by_letter.get(a, ()):
                for q, y in enumerate(A.trans[b][p]):
                    if y is MINUS_INF:
                        continue
                    if q not in nxt or x + y > nxt[q][0]:
                        nxt[q] = (x + y, (p, b))
        history.append(nxt)
        best = nxt
    ends = [(x + A.final[q], q) for q, (x, _) in best.items() if A.final[q] is not MINUS_INF]
    if not ends:
        return None
    _, q = max(ends)
    out = []
    for step in reversed(history):
        p, b = step[q][1]
        out.append(b)
        q = p
    return tuple(reversed(out))
