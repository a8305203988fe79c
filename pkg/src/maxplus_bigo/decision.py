"""Deciding whether f_A is big-O of f_B.

Two procedures on a simplified instance:

* ``exhaustive``: compute the whole asymptotic semigroup and look for a
  witness;
* ``tractable``: explore only the elements of the shape
  ``g0 (g1 (... (gk)# g'k ...)b g'1)b g'0`` with every ``gi`` in the
  semigroup of paths (or the identity), layer by layer in the number of
  flattenings.

Both return a :class:`Verdict`; a negative verdict carries a witness and a
derivation, from which :mod:`counterexample` builds words.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

from .automata import MaxPlusAutomaton
from .factorisation import HeightConstant, c_h
from .reductions import ImmediateAnswer, SimplifiedInstance, identity_instance, prepare_instance
from .semigroups import (
    BOT,
    Closure,
    Derivation,
    Element,
    Flatten,
    Product,
    Stabilise,
    asymptotic_closure,
    generators,
    paths_closure,
)
from .semiring import INF, MINUS_INF, OMEGA, bar, mat_mul, omega_mul, omega_stab

METHODS = ("exhaustive", "tractable")


def is_witness(e, A: MaxPlusAutomaton, B: MaxPlusAutomaton) -> bool:
    """``e = (p, inf, q, M)`` with p initial, q final and
    ``bar(I_B) M bar(F_B) < inf``."""
    if e is BOT or e.x != INF:
        return False
    if A.initial[e.p] is MINUS_INF or A.final[e.q] is MINUS_INF:
        return False
    for i in B.initial_states():
        row = e.M[i]
        for j in B.final_states():
            if row[j] == INF:
                return False
    return True


def find_witness_exhaustive(closure: Closure, A, B):
    """First witness of ``closure`` in insertion order, with its derivation."""
    for e in closure:
        if is_witness(e, A, B):
            return e, closure.derivation(e)
    return None


def find_tractable_witness(paths: Closure, A, B, k_max: Optional[int] = None):
    """Search the tractable elements for a witness.

    ``R_0`` holds the stabilised path-idempotents of ``paths``; candidates at
    layer d are ``g e g'`` for ``e`` in ``R_d`` and ``g, g'`` in
    ``paths`` or the identity; ``R_{d+1}`` holds the flattenings of the new
    path-idempotent candidates.  Stops at a fixpoint or after ``k_max``
    flattenings (default ``3 |paths|``).
    """
    pool = paths.pool
    gkeys = [k for k in paths.keys() if k is not BOT]
    if k_max is None:
        k_max = 3 * len(paths)
    by_p: Dict[int, List] = {}
    by_q: Dict[int, List] = {}
    for k in gkeys:
        by_p.setdefault(k[0], []).append(k)
        by_q.setdefault(k[2], []).append(k)
    gder = paths.key_derivation

    def elem(k):
        return Element(k[0], k[1], k[2], pool.mats[k[3]])

    def lmul(g, e):
        return (g[0], omega_mul(g[1], e[1]), e[2], pool.mul(g[3], e[3]))

    def rmul(e, g):
        return (e[0], omega_mul(e[1], g[1]), g[2], pool.mul(e[3], g[3]))

    layer: Dict = {}
    for k in gkeys:
        if k[0] == k[2] and pool.path_idempotent(k[3]):
            s = (k[0], omega_stab(k[1]), k[0], pool.stab(k[3]))
            if s not in layer:
                layer[s] = Stabilise(gder(k), elem(s))
    seen_r = set(layer)
    seen_left: Dict = {}
    seen_mid: Dict = {}
    stats = {"layers": 0, "candidates": 0}
    for depth in range(k_max + 1):
        stats["layers"] = depth + 1
        left_new = []
        for e, de in layer.items():
            if e not in seen_left:
                seen_left[e] = de
                left_new.append(e)
            for g in by_q.get(e[0], ()):
                k = lmul(g, e)
                if k not in seen_left:
                    seen_left[k] = Product(gder(g), de, elem(k))
                    left_new.append(k)
        mids = []
        for k in left_new:
            dl = seen_left[k]
            if k not in seen_mid:
                seen_mid[k] = dl
                mids.append(k)
            for g in by_p.get(k[2], ()):
                m = rmul(k, g)
                if m not in seen_mid:
                    seen_mid[m] = Product(dl, gder(g), elem(m))
                    mids.append(m)
        stats["candidates"] = len(seen_mid)
        for m in mids:
            e = elem(m)
            if is_witness(e, A, B):
                return e, seen_mid[m], stats
        nxt = {}
        for m in mids:
            if m[0] == m[2] and pool.path_idempotent(m[3]):
                f = (m[0], m[1], m[0], pool.flat(m[3]))
                if f not in seen_r and f not in nxt:
                    nxt[f] = Flatten(seen_mid[m], elem(f))
        if not nxt:
            break
        seen_r.update(nxt)
        layer = nxt
    return None, None, stats


# -- verdicts ------------------------------------------------------------------

@dataclass
class BigO:
    """f_A <= c f_B + c with ``c = certificate.value``."""

    certificate: HeightConstant
    instance: Optional[SimplifiedInstance] = None
    method: str = "exhaustive"
    semigroup_size: int = 0
    stats: dict = field(default_factory=dict)

    bigo = True

    @property
    def constant(self) -> int:
        return self.certificate.value


@dataclass
class NotBigO:
    """Either a word accepted by A only, or a witness of unboundedness."""

    witness: Optional[Element] = None
    derivation: Optional[Derivation] = None
    instance: Optional[SimplifiedInstance] = None
    immediate: Optional[ImmediateAnswer] = None
    original: Optional[tuple] = None
    method: str = "exhaustive"
    semigroup_size: int = 0
    stats: dict = field(default_factory=dict)

    bigo = False


Verdict = Union[BigO, NotBigO]


def decide_bigo(
    A: MaxPlusAutomaton,
    B: MaxPlusAutomaton,
    method: str = "exhaustive",
    simplified: bool = False,
    cap: Optional[int] = None,
    subset_cap: Optional[int] = None,
) -> Verdict:
    """Decide whether there is c with ``f_A <= c f_B + c``.

    With ``simplified=True`` the pair is trusted to be simplified (A
    deterministic, f_B total).  Otherwise a pair that already has these
    properties is used as is and any other pair goes through
    :func:`reductions.simplify`.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    if simplified:
        inst = identity_instance(A, B)
    else:
        inst = prepare_instance(A, B, subset_cap)
        if isinstance(inst, ImmediateAnswer):
            return NotBigO(immediate=inst, original=(A, B), method=method)
    A2, B2 = inst.a, inst.b
    gens = generators(A2, B2)
    paths = paths_closure(gens, cap)
    if method == "exhaustive":
        closure = asymptotic_closure(gens, cap)
        found = find_witness_exhaustive(closure, A2, B2)
        size = len(closure)
        stats = {"paths": len(paths), "asymptotic": len(closure)}
        if found is not None:
            return NotBigO(found[0], found[1], inst, original=(A, B), method=method, semigroup_size=size, stats=stats)
    else:
        e, d, stats = find_tractable_witness(paths, A2, B2)
        size = len(paths)
        stats = dict(stats, paths=len(paths))
        if e is not None:
            return NotBigO(e, d, inst, original=(A, B), method=method, semigroup_size=size, stats=stats)
    # H >= 1 so that f_A on the empty word (initial plus final weight, at most
    # 2 Lambda) is covered even when the semigroup of paths is empty
    cert = c_h(A2, B2, max(3 * len(paths), 1))
    return BigO(cert, inst, method=method, semigroup_size=size, stats=stats)


def witness_value(e: Element, B: MaxPlusAutomaton):
    """``bar(I_B) M bar(F_B)`` in Omega."""
    I = (tuple(bar(x) for x in B.initial),)
    F = tuple((bar(x),) for x in B.final)
    return mat_mul(mat_mul(I, e.M, OMEGA), F, OMEGA)[0][0]
