"""Max-plus automata over N_max, their evaluation, trimming and Boolean shadow."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Sequence, Tuple

from . import words as W
from .semiring import (
    MINUS_INF,
    NMAX,
    Matrix,
    constant,
    identity,
    mat_mul,
    mat_power,
    max_finite_entry,
    nmax,
)


class UnknownLetterError(ValueError):
    pass


@dataclass(frozen=True, eq=True)
class MaxPlusAutomaton:
    """``<Q, Sigma, M, I, F>`` with N_max weights.

    ``initial`` and ``final`` are tuples indexed like ``states``; ``trans``
    maps every letter of ``alphabet`` to a ``|Q| x |Q|`` matrix.
    """

    states: Tuple[str, ...]
    alphabet: Tuple[str, ...]
    trans: Mapping[str, Matrix]
    initial: Tuple
    final: Tuple
    max_weight: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        n = len(self.states)
        if len(set(self.states)) != n:
            raise ValueError("duplicate state names")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate letters")
        if set(self.trans) != set(self.alphabet):
            raise ValueError("transition matrices must be given for exactly the alphabet")
        if len(self.initial) != n or len(self.final) != n:
            raise ValueError("initial/final vectors must have one entry per state")
        trans = {}
        for a in self.alphabet:
            M = self.trans[a]
            if len(M) != n or any(len(row) != n for row in M):
                raise ValueError(f"matrix for {a!r} is not {n}x{n}")
            trans[a] = tuple(tuple(nmax(x) for x in row) for row in M)
        object.__setattr__(self, "trans", trans)
        object.__setattr__(self, "initial", tuple(nmax(x) for x in self.initial))
        object.__setattr__(self, "final", tuple(nmax(x) for x in self.final))
        lam = max_finite_entry((self.initial, self.final, *[row for M in trans.values() for row in M]))
        object.__setattr__(self, "max_weight", lam)

    @classmethod
    def from_transitions(
        cls,
        states: Sequence[str],
        alphabet: Sequence[str],
        transitions: Iterable[Tuple[str, str, int, str]],
        initial: Mapping[str, int],
        final: Mapping[str, int],
    ) -> "MaxPlusAutomaton":
        """Build from ``(source, letter, weight, target)`` tuples.

        Repeated ``(source, letter, target)`` triples keep the largest weight.
        """
        states = tuple(states)
        alphabet = tuple(alphabet)
        idx = {q: i for i, q in enumerate(states)}
        n = len(states)
        mats = {a: [[MINUS_INF] * n for _ in range(n)] for a in alphabet}
        for p, a, x, q in transitions:
            if a not in mats:
                raise UnknownLetterError(f"letter {a!r} not in alphabet")
            if p not in idx or q not in idx:
                raise ValueError(f"unknown state in transition {(p, a, x, q)!r}")
            x = nmax(x)
            cur = mats[a][idx[p]][idx[q]]
            mats[a][idx[p]][idx[q]] = x if x > cur else cur
        for vec in (initial, final):
            for q in vec:
                if q not in idx:
                    raise ValueError(f"unknown state {q!r}")
        I = tuple(nmax(initial.get(q)) for q in states)
        F = tuple(nmax(final.get(q)) for q in states)
        return cls(states, alphabet, {a: tuple(map(tuple, m)) for a, m in mats.items()}, I, F)

    # -- views -------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.states)

    def transitions(self):
        """Yield ``(p, a, x, q)`` index-based transitions with finite weight."""
        for a in self.alphabet:
            for p, row in enumerate(self.trans[a]):
                for q, x in enumerate(row):
                    if x is not MINUS_INF:
                        yield p, a, x, q

    def initial_states(self):
        return [q for q, x in enumerate(self.initial) if x is not MINUS_INF]

    def final_states(self):
        return [q for q, x in enumerate(self.final) if x is not MINUS_INF]

    def matrix(self, a: str) -> Matrix:
        try:
            return self.trans[a]
        except KeyError:
            raise UnknownLetterError(f"letter {a!r} not in alphabet {self.alphabet}") from None

    def word_matrix(self, w) -> Matrix:
        """``M(w)`` for a plain word or a run-length expression."""
        cache = self.__dict__.get("_wm_cache")
        if cache is None:
            cache = W.WordMatrixCache(
                self.matrix,
                identity(self.n, NMAX),
                lambda A, B: mat_mul(A, B, NMAX),
                lambda A, k: mat_power(A, k, NMAX),
            )
            object.__setattr__(self, "_wm_cache", cache)
        if isinstance(w, (list,)):
            w = tuple(w)
        return cache(w)

    def __str__(self):
        return f"MaxPlusAutomaton({self.n} states, alphabet {list(self.alphabet)})"


def evaluate(aut: MaxPlusAutomaton, w) -> object:
    """``I (x) M(w_1) (x) ... (x) M(w_k) (x) F``.

    ``w`` is a sequence of letters or a :mod:`words` expression.
    """
    if aut.n == 0:
        for a in (w if isinstance(w, (tuple, list)) else W.letters_of(w)):
            aut.matrix(a)
        return MINUS_INF
    if isinstance(w, (tuple, list)):
        vec = aut.initial
        for a in w:
            M = aut.matrix(a)
            vec = tuple(
                _vec_dot(vec, [M[p][q] for p in range(aut.n)]) for q in range(aut.n)
            )
    else:
        vec = mat_mul((aut.initial,), aut.word_matrix(w), NMAX)[0]
    return _vec_dot(vec, aut.final)


def _vec_dot(u, v):
    best = MINUS_INF
    for a, b in zip(u, v):
        if a is MINUS_INF or b is MINUS_INF:
            continue
        s = a + b
        if best is MINUS_INF or s > best:
            best = s
    return best


def is_deterministic(aut: MaxPlusAutomaton) -> bool:
    if sum(1 for x in aut.initial if x is not MINUS_INF) > 1:
        return False
    for M in aut.trans.values():
        for row in M:
            if sum(1 for x in row if x is not MINUS_INF) > 1:
                return False
    return True


def run(aut: MaxPlusAutomaton, w: Sequence[str], start: Optional[int] = None):
    """Follow the unique run of a deterministic automaton on a plain word.

    Returns ``(states, weight)`` where ``states`` has ``len(w) + 1`` entries
    and ``weight`` sums the transition weights (initial and final weights
    excluded), or ``None`` if the run blocks.
    """
    if start is None:
        inits = aut.initial_states()
        if len(inits) != 1:
            return None
        start = inits[0]
    states = [start]
    weight = 0
    p = start
    for a in w:
        row = aut.matrix(a)[p]
        nxt = [q for q, x in enumerate(row) if x is not MINUS_INF]
        if not nxt:
            return None
        if len(nxt) > 1:
            raise ValueError("automaton is not deterministic")
        p = nxt[0]
        weight += row[p]
        states.append(p)
    return states, weight


def run_weight(aut: MaxPlusAutomaton, w, start: int):
    """Target state and weight of the deterministic run from ``start`` on ``w``.

    Works on run-length expressions via ``M(w)``; returns ``None`` if blocked.
    """
    row = aut.word_matrix(w)[start] if aut.n else ()
    fin = [(q, x) for q, x in enumerate(row) if x is not MINUS_INF]
    if not fin:
        return None
    if len(fin) > 1:
        raise ValueError("automaton is not deterministic")
    return fin[0]


def _reach(n, succ, sources):
    seen = set(sources)
    todo = deque(sources)
    while todo:
        p = todo.popleft()
        for q in succ[p]:
            if q not in seen:
                seen.add(q)
                todo.append(q)
    return seen


def trim(aut: MaxPlusAutomaton) -> MaxPlusAutomaton:
    """Restrict to states that are both accessible and co-accessible.

    The result may have no states at all when the language is empty.
    """
    n = aut.n
    succ = [set() for _ in range(n)]
    pred = [set() for _ in range(n)]
    for p, _, _, q in aut.transitions():
        succ[p].add(q)
        pred[q].add(p)
    keep = _reach(n, succ, aut.initial_states()) & _reach(n, pred, aut.final_states())
    order = sorted(keep)
    return MaxPlusAutomaton(
        tuple(aut.states[i] for i in order),
        aut.alphabet,
        {a: tuple(tuple(M[i][j] for j in order) for i in order) for a, M in aut.trans.items()},
        tuple(aut.initial[i] for i in order),
        tuple(aut.final[i] for i in order),
    )


def empty_automaton(alphabet: Sequence[str]) -> MaxPlusAutomaton:
    return MaxPlusAutomaton((), tuple(alphabet), {a: () for a in alphabet}, (), ())


def constant_automaton(alphabet: Sequence[str], value: int = 0, per_letter: int = 0) -> MaxPlusAutomaton:
    """One state, initial/final weight ``value``, self-loops weighing ``per_letter``."""
    return MaxPlusAutomaton(
        ("s",),
        tuple(alphabet),
        {a: constant(1, 1, per_letter) for a in alphabet},
        (value,),
        (0,),
    )


@dataclass(frozen=True)
class NFA:
    """Nondeterministic finite automaton over states ``0..n-1``."""

    n: int
    alphabet: Tuple[str, ...]
    delta: Mapping[Tuple[int, str], FrozenSet[int]]
    initial: FrozenSet[int]
    final: FrozenSet[int]

    def step(self, S: FrozenSet[int], a: str) -> FrozenSet[int]:
        if a not in self.alphabet:
            raise UnknownLetterError(f"letter {a!r} not in alphabet")
        out = set()
        for p in S:
            out |= self.delta.get((p, a), frozenset())
        return frozenset(out)

    def accepts(self, w: Sequence[str]) -> bool:
        S = self.initial
        for a in w:
            S = self.step(S, a)
            if not S:
                return False
        return bool(S & self.final)


def boolean_projection(aut: MaxPlusAutomaton) -> NFA:
    """The NFA accepting ``{w : f(w) != -inf}``."""
    delta: Dict[Tuple[int, str], set] = {}
    for p, a, _, q in aut.transitions():
        delta.setdefault((p, a), set()).add(q)
    return NFA(
        aut.n,
        aut.alphabet,
        {k: frozenset(v) for k, v in delta.items()},
        frozenset(aut.initial_states()),
        frozenset(aut.final_states()),
    )
