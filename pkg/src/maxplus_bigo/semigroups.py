"""Semigroup of paths and semigroup of asymptotic behaviours.

Elements are ``(p, x, q, M)`` with ``p, q`` states of the deterministic
automaton A, ``x`` in Omega and ``M`` a ``|Q_B| x |Q_B|`` Omega matrix, plus the
absorbing ``BOT``.  Every closure element carries a :class:`Derivation`
recording one way of building it from the generators.
"""
from __future__ import annotations

import os
from collections import defaultdict, deque
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Tuple

from .automata import MaxPlusAutomaton
from .semiring import (
    Matrix,
    Omega,
    bar,
    bar_off_diagonal,
    format_matrix,
    mat_bar,
    mat_mul,
    omega_mul,
    omega_stab,
    stab_diagonal,
)

DEFAULT_SEMIGROUP_CAP = 10**6


class ResourceLimitError(RuntimeError):
    """A configured size cap was exceeded."""

    def __init__(self, what: str, cap: int):
        super().__init__(f"{what} exceeded the cap of {cap}")
        self.what = what
        self.cap = cap


class NotPathIdempotentError(ValueError):
    pass


def semigroup_cap() -> int:
    return int(os.environ.get("MAXPLUS_CAP_SEMIGROUP", DEFAULT_SEMIGROUP_CAP))


# -- elements ----------------------------------------------------------------

class Element(NamedTuple):
    p: int
    x: Omega
    q: int
    M: Matrix

    def __str__(self):
        rows = "; ".join(" ".join(str(v) for v in row) for row in self.M)
        return f"({self.p}, {self.x}, {self.q}, [{rows}])"

    def pretty(self, state_names=None) -> str:
        p = state_names[self.p] if state_names else self.p
        q = state_names[self.q] if state_names else self.q
        return f"({p}, {self.x}, {q},\n{format_matrix(self.M)})"


class _Bot:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "BOT"

    __str__ = __repr__

    def __reduce__(self):
        return (_Bot, ())


BOT = _Bot()


def elem_mul(e, f):
    if e is BOT or f is BOT or e.q != f.p:
        return BOT
    return Element(e.p, omega_mul(e.x, f.x), f.q, mat_mul(e.M, f.M))


def bar_element(e):
    if e is BOT:
        return BOT
    return Element(e.p, bar(e.x), e.q, mat_bar(e.M))


def is_path_idempotent(e) -> bool:
    if e is BOT:
        raise ValueError("BOT has no path-idempotence")
    if e.p != e.q:
        return False
    Mb = mat_bar(e.M)
    return mat_mul(Mb, Mb) == Mb


def _check_path_idempotent(e):
    if e is BOT or not is_path_idempotent(e):
        raise NotPathIdempotentError(f"{e} is not path-idempotent")


def stabilise_matrix(M: Matrix) -> Matrix:
    return mat_mul(mat_mul(M, stab_diagonal(M)), M)


def flatten_matrix(M: Matrix) -> Matrix:
    Mb = mat_bar(M)
    cube = mat_mul(mat_mul(M, M), M)
    return mat_mul(mat_mul(Mb, bar_off_diagonal(cube)), Mb)


def stabilise(e: Element) -> Element:
    _check_path_idempotent(e)
    return Element(e.p, omega_stab(e.x), e.p, stabilise_matrix(e.M))


def flatten(e: Element) -> Element:
    _check_path_idempotent(e)
    return Element(e.p, e.x, e.p, flatten_matrix(e.M))


# -- derivations -------------------------------------------------------------

class Derivation:
    """How a closure element was obtained.  Compared by identity."""

    __slots__ = ("element",)
    kind = "?"

    def children(self) -> Tuple["Derivation", ...]:
        return ()

    def depth(self) -> int:
        memo = {}
        stack = [(self, False)]
        while stack:
            d, done = stack.pop()
            if id(d) in memo:
                continue
            kids = d.children()
            if done or not kids:
                memo[id(d)] = 1 + max((memo[id(c)] for c in kids), default=0)
            else:
                stack.append((d, True))
                stack.extend((c, False) for c in kids if id(c) not in memo)
        return memo[id(self)]

    def flatten_count(self) -> int:
        """Nesting depth of flattening operations along any branch."""
        memo = {}

        def go(d):
            if id(d) not in memo:
                inner = max((go(c) for c in d.children()), default=0)
                memo[id(d)] = inner + (1 if isinstance(d, Flatten) else 0)
            return memo[id(d)]

        return go(self)


class Generator(Derivation):
    __slots__ = ("letter", "p", "q")
    kind = "generator"

    def __init__(self, letter: str, p: int, q: int, element: Element):
        self.letter, self.p, self.q, self.element = letter, p, q, element

    def __repr__(self):
        return f"Generator({self.letter!r}, {self.p}, {self.q})"


class Product(Derivation):
    __slots__ = ("left", "right")
    kind = "product"

    def __init__(self, left: Derivation, right: Derivation, element=None):
        self.left, self.right = left, right
        self.element = element if element is not None else elem_mul(left.element, right.element)

    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"Product({self.left!r}, {self.right!r})"


class Stabilise(Derivation):
    __slots__ = ("child",)
    kind = "stabilise"

    def __init__(self, child: Derivation, element=None):
        self.child = child
        self.element = element if element is not None else stabilise(child.element)

    def children(self):
        return (self.child,)

    def __repr__(self):
        return f"Stabilise({self.child!r})"


class Flatten(Derivation):
    __slots__ = ("child",)
    kind = "flatten"

    def __init__(self, child: Derivation, element=None):
        self.child = child
        self.element = element if element is not None else flatten(child.element)

    def children(self):
        return (self.child,)

    def __repr__(self):
        return f"Flatten({self.child!r})"


def product_of(derivations: Iterable[Derivation]) -> Derivation:
    """Left-nested product of one or more derivations."""
    it = iter(derivations)
    acc = next(it)
    for d in it:
        acc = Product(acc, d)
    return acc


def replay(d: Derivation, A: MaxPlusAutomaton, B: MaxPlusAutomaton):
    """Recompute the element derived by ``d`` from the automata alone."""
    memo: Dict[int, object] = {}

    def go(node):
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Generator):
            x = A.trans[node.letter][node.p][node.q]
            if not (x >= 0):
                raise ValueError(f"no transition {node.p} -{node.letter}-> {node.q} in A")
            out = Element(node.p, bar(x), node.q, mat_bar(B.trans[node.letter]))
        elif isinstance(node, Product):
            out = elem_mul(go(node.left), go(node.right))
        elif isinstance(node, Stabilise):
            out = stabilise(go(node.child))
        elif isinstance(node, Flatten):
            out = flatten(go(node.child))
        else:
            raise TypeError(node)
        memo[key] = out
        return out

    return go(d)


def format_derivation(d: Derivation, letter_names=None) -> str:
    """Compact algebraic notation, e.g. ``(e_a e_b e_a# e_b)b``."""
    if isinstance(d, Generator):
        a = letter_names(d.letter) if letter_names else d.letter
        return f"e_{a}"
    if isinstance(d, Product):
        return f"{format_derivation(d.left, letter_names)} {format_derivation(d.right, letter_names)}"
    inner = format_derivation(d.child, letter_names)
    if not isinstance(d.child, Generator):
        inner = f"({inner})"
    return inner + ("^#" if isinstance(d, Stabilise) else "^b")


# -- closures ----------------------------------------------------------------

class MatrixPool:
    """Interned Omega matrices with memoised products and unary operations."""

    def __init__(self):
        self.mats: List[Matrix] = []
        self.ids: Dict[Matrix, int] = {}
        self._mul: Dict[Tuple[int, int], int] = {}
        self._stab: Dict[int, int] = {}
        self._flat: Dict[int, int] = {}
        self._idem: Dict[int, bool] = {}

    def intern(self, M: Matrix) -> int:
        i = self.ids.get(M)
        if i is None:
            i = len(self.mats)
            self.ids[M] = i
            self.mats.append(M)
        return i

    def mul(self, i: int, j: int) -> int:
        k = self._mul.get((i, j))
        if k is None:
            k = self.intern(mat_mul(self.mats[i], self.mats[j]))
            self._mul[(i, j)] = k
        return k

    def path_idempotent(self, i: int) -> bool:
        r = self._idem.get(i)
        if r is None:
            Mb = mat_bar(self.mats[i])
            r = mat_mul(Mb, Mb) == Mb
            self._idem[i] = r
        return r

    def stab(self, i: int) -> int:
        k = self._stab.get(i)
        if k is None:
            k = self.intern(stabilise_matrix(self.mats[i]))
            self._stab[i] = k
        return k

    def flat(self, i: int) -> int:
        k = self._flat.get(i)
        if k is None:
            k = self.intern(flatten_matrix(self.mats[i]))
            self._flat[i] = k
        return k


Key = Tuple[int, Omega, int, int]


class Closure:
    """A closed finite set of elements with one derivation each.

    Iteration follows insertion order, which is deterministic for a given
    generator list.  ``BOT`` is stored at most once.
    """

    def __init__(self, pool: MatrixPool, keys: List, derivations: Dict, asymptotic: bool):
        self.pool = pool
        self.asymptotic = asymptotic
        self._keys = keys
        self._deriv = derivations
        self._elements = [BOT if k is BOT else Element(k[0], k[1], k[2], pool.mats[k[3]]) for k in keys]
        self._index = {e: i for i, e in enumerate(self._elements)}

    def __len__(self):
        return len(self._elements)

    def __iter__(self) -> Iterator:
        return iter(self._elements)

    def __contains__(self, e) -> bool:
        return e in self._index

    def elements(self) -> List:
        return list(self._elements)

    def keys(self) -> List:
        return list(self._keys)

    def derivation(self, e) -> Derivation:
        return self._deriv[self._keys[self._index[e]]]

    def key_derivation(self, k) -> Derivation:
        return self._deriv[k]

    def index(self, e) -> int:
        return self._index[e]

    def non_bot(self) -> List[Element]:
        return [e for e in self._elements if e is not BOT]


def _key(pool: MatrixPool, e: Element) -> Key:
    return (e.p, e.x, e.q, pool.intern(e.M))


def generators(A: MaxPlusAutomaton, B: MaxPlusAutomaton) -> List[Tuple[Element, Derivation]]:
    """One element ``(p, bar x, q, bar M_B(a))`` per transition of A.

    Duplicates are merged, keeping the first transition in (letter, p, q) order.
    """
    if A.alphabet != B.alphabet and set(A.alphabet) != set(B.alphabet):
        raise ValueError("automata have different alphabets")
    out: Dict[Element, Derivation] = {}
    for a in A.alphabet:
        MBa = mat_bar(B.trans[a])
        for p, row in enumerate(A.trans[a]):
            for q, x in enumerate(row):
                if x is None or not (x >= 0):
                    continue
                e = Element(p, bar(x), q, MBa)
                if e not in out:
                    out[e] = Generator(a, p, q, e)
    return list(out.items())


def _close(gens, asymptotic: bool, cap: Optional[int], pool: Optional[MatrixPool] = None) -> Closure:
    cap = semigroup_cap() if cap is None else cap
    pool = pool or MatrixPool()
    deriv: Dict = {}
    keys: List = []
    queue = deque()

    def add(k, make_derivation):
        if k in deriv:
            return
        if len(keys) >= cap:
            raise ResourceLimitError("semigroup size", cap)
        d = make_derivation()
        deriv[k] = d
        keys.append(k)
        if k is not BOT:
            queue.append(k)

    for e, d in gens:
        add(_key(pool, e), lambda d=d: d)

    by_p = defaultdict(list)
    by_q = defaultdict(list)
    processed = []
    bot_found = False
    mul = pool.mul
    while queue:
        k = queue.popleft()
        p, x, q, m = k
        processed.append(k)
        by_p[p].append(k)
        by_q[q].append(k)
        dk = deriv[k]
        for y in by_p[q]:
            r = (p, omega_mul(x, y[1]), y[2], mul(m, y[3]))
            if r not in deriv:
                add(r, lambda y=y, r=r: Product(dk, deriv[y], _elem(pool, r)))
        for y in by_q[p]:
            if y is k:
                continue
            r = (y[0], omega_mul(y[1], x), q, mul(y[3], m))
            if r not in deriv:
                add(r, lambda y=y, r=r: Product(deriv[y], dk, _elem(pool, r)))
        if not bot_found and (len(by_p) > 1 or len(by_q) > 1 or set(by_p) != set(by_q)):
            left, right = _mismatched_pair(processed)
            add(BOT, lambda: Product(deriv[left], deriv[right], BOT))
            bot_found = True
        if asymptotic and p == q and pool.path_idempotent(m):
            rs = (p, omega_stab(x), p, pool.stab(m))
            if rs not in deriv:
                add(rs, lambda rs=rs: Stabilise(dk, _elem(pool, rs)))
            rf = (p, x, p, pool.flat(m))
            if rf not in deriv:
                add(rf, lambda rf=rf: Flatten(dk, _elem(pool, rf)))
    return Closure(pool, keys, deriv, asymptotic)


def _elem(pool: MatrixPool, k) -> Element:
    return Element(k[0], k[1], k[2], pool.mats[k[3]])


def _mismatched_pair(processed):
    for a in processed:
        for b in processed:
            if a[2] != b[0]:
                return a, b
    raise AssertionError("no mismatched pair")


def paths_closure(gens, cap: Optional[int] = None, pool: Optional[MatrixPool] = None) -> Closure:
    """Least set containing ``gens`` closed under the product."""
    return _close(gens, False, cap, pool)


def asymptotic_closure(gens, cap: Optional[int] = None, pool: Optional[MatrixPool] = None) -> Closure:
    """Least set containing ``gens`` closed under product, stabilisation and flattening."""
    return _close(gens, True, cap, pool)


def size_bound(A: MaxPlusAutomaton, B: MaxPlusAutomaton) -> int:
    """Crude upper bound on the size of the semigroup of paths."""
    return A.n * A.n * 3 * 3 ** (B.n * B.n) + 1
