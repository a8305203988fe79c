"""Simon factorisation trees over the semigroup of paths.

Trees are built by recursion on Green's relations:

* cut the word greedily into blocks whose value first falls into the J-class
  of the whole product (the prefix of each block lives strictly higher and is
  handled recursively);
* the sequence of blocks is *smooth* (all infixes in one J-class); cut it at
  every boundary of a fixed (L-class, R-class) type, so that the segments in
  between take values in a single H-class, which is then a group;
* words over a group are split at the positions where the prefix product
  takes a chosen value; the pieces between two such positions multiply to the
  group identity and become the children of an idempotent node.

Contributors, faults, the beta-labelling that turns a fault into a witness,
and the height constants ``c_h`` live here too.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from .automata import MaxPlusAutomaton, run
from .semigroups import (
    Closure,
    Derivation,
    Element,
    Flatten,
    Generator,
    Product,
    Stabilise,
    elem_mul,
    generators,
    paths_closure,
    product_of,
)
from .semiring import MINUS_INF, NEG_INF, ONE, ZERO, bar, mat_bar


class WordRejectedError(ValueError):
    pass


# -- Green's relations ---------------------------------------------------------

class PathSemigroup:
    """The semigroup of paths of (A, B) with its multiplication table and
    R-, L-, J- and H-classes."""

    def __init__(self, A: MaxPlusAutomaton, B: MaxPlusAutomaton, closure: Optional[Closure] = None):
        self.A, self.B = A, B
        gens = generators(A, B)
        self.closure = closure if closure is not None else paths_closure(gens)
        self.elements = self.closure.elements()
        self.index = {e: i for i, e in enumerate(self.elements)}
        self._mul: Dict[Tuple[int, int], int] = {}
        self.gen_ids = [self.index[e] for e, _ in gens]
        self._green()

    def __len__(self):
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        k = self._mul.get((i, j))
        if k is None:
            k = self.index[elem_mul(self.elements[i], self.elements[j])]
            self._mul[(i, j)] = k
        return k

    def _green(self):
        n = len(self.elements)
        right, left = nx.DiGraph(), nx.DiGraph()
        right.add_nodes_from(range(n))
        left.add_nodes_from(range(n))
        for i in range(n):
            for g in self.gen_ids:
                right.add_edge(i, self.mul(i, g))
                left.add_edge(i, self.mul(g, i))
        both = nx.compose(right, left)
        self.R = _component_ids(right, n)
        self.L = _component_ids(left, n)
        self.J = _component_ids(both, n)

    def is_idempotent(self, i: int) -> bool:
        return self.mul(i, i) == i

    def idempotent_power(self, i: int) -> int:
        """The unique idempotent among the powers of ``i``."""
        seen = set()
        x = i
        while x not in seen:
            if self.is_idempotent(x):
                return x
            seen.add(x)
            x = self.mul(x, i)
        # Powers cycle without hitting an idempotent only in infinite semigroups.
        raise AssertionError("no idempotent power")


def _component_ids(g: nx.DiGraph, n: int) -> List[int]:
    ids = [0] * n
    for c, comp in enumerate(nx.strongly_connected_components(g)):
        for v in comp:
            ids[v] = c
    return ids


# -- trees -------------------------------------------------------------------

LEAF, PRODUCT, IDEMPOTENT = "leaf", "product", "idempotent"


class Node:
    __slots__ = ("start", "end", "value", "alpha", "kind", "children", "contributors", "_height")

    def __init__(self, start, end, value, alpha, kind, children=()):
        self.start, self.end = start, end
        self.value = value
        self.alpha = alpha
        self.kind = kind
        self.children = list(children)
        self.contributors: Optional[FrozenSet[Tuple[int, int]]] = None
        self._height = None

    @property
    def height(self) -> int:
        if self._height is None:
            self._height = 1 + max(c.height for c in self.children) if self.children else 0
        return self._height

    def __repr__(self):
        return f"Node({self.kind}, [{self.start},{self.end}), h={self.height})"


class FactTree:
    """A factorisation tree on ``word`` together with the run of A on it."""

    def __init__(self, root: Node, word: Tuple[str, ...], run_states: List[int], weights: List[int], sg: PathSemigroup):
        self.root = root
        self.word = word
        self.run_states = run_states
        self.weights = weights
        self.semigroup = sg
        self._prefix = [0]
        for x in weights:
            self._prefix.append(self._prefix[-1] + x)

    @property
    def height(self) -> int:
        return self.root.height

    def nodes(self) -> Iterator[Node]:
        stack = [self.root]
        while stack:
            n = stack.pop()
            yield n
            stack.extend(reversed(n.children))

    def parents(self) -> Dict[int, Tuple[Node, int]]:
        out = {}
        for n in self.nodes():
            for i, c in enumerate(n.children):
                out[id(c)] = (n, i)
        return out

    def factor(self, node: Node) -> Tuple[str, ...]:
        return self.word[node.start:node.end]

    def aval(self, node: Node) -> int:
        return self._prefix[node.end] - self._prefix[node.start]


class TreeBuilder:
    """Builds factorisation trees for words over a fixed simplified instance."""

    def __init__(self, A: MaxPlusAutomaton, B: MaxPlusAutomaton, semigroup: Optional[PathSemigroup] = None):
        self.A, self.B = A, B
        self.sg = semigroup or PathSemigroup(A, B)
        self._bar_b = {a: mat_bar(B.trans[a]) for a in A.alphabet}

    def leaves(self, w: Sequence[str]):
        res = run(self.A, w)
        if res is None:
            raise WordRejectedError("A has no run on the word")
        states, _ = res
        if not w:
            raise WordRejectedError("factorisation trees need a nonempty word")
        if self.A.final[states[-1]] is MINUS_INF:
            raise WordRejectedError("the run of A on the word is not accepting")
        weights = []
        nodes = []
        for i, a in enumerate(w):
            p, q = states[i], states[i + 1]
            x = self.A.trans[a][p][q]
            weights.append(x)
            e = Element(p, bar(x), q, self._bar_b[a])
            nodes.append(Node(i, i + 1, self.sg.index[e], e, LEAF))
        return nodes, states, weights

    def build(self, w: Sequence[str]) -> FactTree:
        w = tuple(w)
        leaves, states, weights = self.leaves(w)
        root = self._build(leaves)
        return FactTree(root, w, states, weights, self.sg)

    def from_shape(self, w: Sequence[str], shape) -> FactTree:
        """Tree of a prescribed shape: ``"."`` is a leaf, a list is an inner
        node (two entries: product node, more: idempotent node).

        The result is not validated; use :func:`check_tree`.
        """
        w = tuple(w)
        leaves, states, weights = self.leaves(w)
        pos = iter(leaves)

        def go(sh):
            if sh == ".":
                return next(pos)
            kids = [go(s) for s in sh]
            if len(kids) < 2:
                raise ValueError("inner nodes need at least two children")
            v = self._value(kids)
            kind = PRODUCT if len(kids) == 2 else IDEMPOTENT
            return Node(kids[0].start, kids[-1].end, v, self.sg.elements[v], kind, kids)

        root = go(shape)
        if next(pos, None) is not None:
            raise ValueError("shape has fewer leaves than the word has letters")
        return FactTree(root, w, states, weights, self.sg)

    # node constructors

    def _product(self, left: Node, right: Node) -> Node:
        v = self.sg.mul(left.value, right.value)
        return Node(left.start, right.end, v, self.sg.elements[v], PRODUCT, (left, right))

    def _chain(self, parts: List[Node]) -> Node:
        """Right-nested binary products of the given parts."""
        acc = parts[-1]
        for p in reversed(parts[:-1]):
            acc = self._product(p, acc)
        return acc

    def _idempotent(self, parts: List[Node]) -> Node:
        if len(parts) == 1:
            return parts[0]
        if len(parts) == 2:
            return self._product(parts[0], parts[1])
        v = parts[0].value
        return Node(parts[0].start, parts[-1].end, v, self.sg.elements[v], IDEMPOTENT, parts)

    # recursion

    def _value(self, items: List[Node]) -> int:
        v = items[0].value
        for it in items[1:]:
            v = self.sg.mul(v, it.value)
        return v

    def _build(self, items: List[Node]) -> Node:
        if len(items) == 1:
            return items[0]
        J = self.sg.J
        target = J[self._value(items)]
        blocks = []
        start, acc = 0, None
        for i, it in enumerate(items):
            acc = it.value if acc is None else self.sg.mul(acc, it.value)
            if J[acc] == target:
                prefix = items[start:i]
                blocks.append(self._product(self._build(prefix), it) if prefix else it)
                start, acc = i + 1, None
        body = self._smooth(blocks)
        rest = items[start:]
        return self._product(body, self._build(rest)) if rest else body

    def _smooth(self, blocks: List[Node]) -> Node:
        if len(blocks) == 1:
            return blocks[0]
        R, L = self.sg.R, self.sg.L
        types = [(L[blocks[i].value], R[blocks[i + 1].value]) for i in range(len(blocks) - 1)]
        tau = Counter(types).most_common(1)[0][0]
        cuts = [i for i, t in enumerate(types) if t == tau]
        bounds = [0] + [c + 1 for c in cuts] + [len(blocks)]
        segs = [self._smooth(blocks[a:b]) for a, b in zip(bounds, bounds[1:])]
        ell, r = tau
        lo, hi = 1, len(segs) - 1
        if R[segs[0].value] == r:
            lo = 0
        if L[segs[-1].value] == ell:
            hi = len(segs)
        parts = segs[:lo]
        if hi > lo:
            parts.append(self._group(segs[lo:hi]))
        parts.extend(segs[hi:])
        return self._chain(parts)

    def _group(self, items: List[Node]) -> Node:
        """Tree over a word whose letters lie in one group H-class."""
        if len(items) == 1:
            return items[0]
        mul = self.sg.mul
        e = self.sg.idempotent_power(items[0].value)
        prefix = [items[0].value]
        for it in items[1:]:
            prefix.append(mul(prefix[-1], it.value))
        interior = prefix[:-1]
        h = e if e in interior else Counter(interior).most_common(1)[0][0]
        cuts = [i + 1 for i, v in enumerate(interior) if v == h]
        bounds = [0] + cuts + [len(items)]
        segs = [self._group(items[a:b]) for a, b in zip(bounds, bounds[1:])]
        parts: List[Node] = []
        run_e: List[Node] = []
        for s in segs:
            if s.value == e:
                run_e.append(s)
                continue
            if run_e:
                parts.append(self._idempotent(run_e))
                run_e = []
            parts.append(s)
        if run_e:
            parts.append(self._idempotent(run_e))
        return self._chain(parts)


def build_tree(w: Sequence[str], A: MaxPlusAutomaton, B: MaxPlusAutomaton, builder: Optional[TreeBuilder] = None) -> FactTree:
    builder = builder or TreeBuilder(A, B)
    return builder.build(w)


def check_tree(t: FactTree) -> List[str]:
    """Problems with the labelling laws of ``t`` (empty list when valid)."""
    problems = []
    for n in t.nodes():
        if n.kind == LEAF:
            if n.end - n.start != 1 or n.children:
                problems.append(f"bad leaf {n}")
            continue
        if len(n.children) < 2:
            problems.append(f"internal node with {len(n.children)} children")
        if any(a.end != b.start for a, b in zip(n.children, n.children[1:])):
            problems.append(f"children of {n} are not contiguous")
        if n.children[0].start != n.start or n.children[-1].end != n.end:
            problems.append(f"span of {n} does not match its children")
        v = n.children[0].alpha
        for c in n.children[1:]:
            v = elem_mul(v, c.alpha)
        if v != n.alpha:
            problems.append(f"label of {n} is not the product of its children")
        if len(n.children) >= 3:
            if n.kind != IDEMPOTENT:
                problems.append(f"{n} has >= 3 children but is not idempotent")
            if any(c.alpha != n.alpha for c in n.children):
                problems.append(f"children of idempotent {n} differ in label")
            if elem_mul(n.alpha, n.alpha) != n.alpha:
                problems.append(f"label of {n} is not idempotent")
        elif n.kind != PRODUCT:
            problems.append(f"{n} has two children but is not a product node")
    return problems


# -- contributors and faults -------------------------------------------------

def _fin(x) -> bool:
    return x is not NEG_INF


def compute_contributors(t: FactTree, B: MaxPlusAutomaton) -> FactTree:
    """Top-down contributor sets, stored on each node."""
    rng = range(B.n)
    M = t.root.alpha.M
    t.root.contributors = frozenset(
        (i, j) for i in B.initial_states() for j in B.final_states() if _fin(M[i][j])
    )
    stack = [t.root]
    while stack:
        node = stack.pop()
        C = node.contributors
        kids = node.children
        if node.kind == PRODUCT:
            M, P = kids[0].alpha.M, kids[1].alpha.M
            kids[0].contributors = frozenset(
                (i, l) for (i, j) in C for l in rng if _fin(P[l][j]) and _fin(M[i][l])
            )
            kids[1].contributors = frozenset(
                (l, j) for (i, j) in C for l in rng if _fin(M[i][l]) and _fin(P[l][j])
            )
        elif node.kind == IDEMPOTENT:
            M = node.alpha.M
            kids[0].contributors = frozenset(
                (i, l) for (i, j) in C for l in rng if _fin(M[l][j]) and _fin(M[i][l])
            )
            kids[-1].contributors = frozenset(
                (l, j) for (i, j) in C for l in rng if _fin(M[i][l]) and _fin(M[l][j])
            )
            middle = frozenset(
                (l, k)
                for (i, j) in C
                for l in rng
                if _fin(M[i][l])
                for k in rng
                if _fin(M[k][j]) and _fin(M[l][k]) and _fin(M[k][l])
            )
            for c in kids[1:-1]:
                c.contributors = middle
        stack.extend(kids)
    return t


def find_faults(t: FactTree) -> List[Node]:
    """Middle children of idempotent nodes with x = 1 whose contributor
    entries are all 0, in pre-order."""
    faults = []
    for n in t.nodes():
        if n.kind != IDEMPOTENT:
            continue
        for c in n.children[1:-1]:
            if c.contributors is None:
                raise ValueError("contributors have not been computed")
            if c.alpha.x == ONE and all(c.alpha.M[i][j] == ZERO for i, j in c.contributors):
                faults.append(c)
    return faults


def select_fault(t: FactTree) -> Optional[Node]:
    """A fault of maximal height, left-most among ties."""
    best = None
    for f in find_faults(t):
        if best is None or f.height > best.height or (f.height == best.height and f.start < best.start):
            best = f
    return best


def node_derivation(t: FactTree, node: Node) -> Derivation:
    """A derivation of ``alpha(node)`` following the shape of the subtree."""
    memo = {}

    def go(n):
        if id(n) in memo:
            return memo[id(n)]
        if n.kind == LEAF:
            a = t.word[n.start]
            d = Generator(a, n.alpha.p, n.alpha.q, n.alpha)
        else:
            d = product_of(go(c) for c in n.children)
        memo[id(n)] = d
        return d

    return go(node)


@dataclass
class BetaLabel:
    node: Node
    element: Element
    derivation: Derivation


def beta_labels(t: FactTree, fault: Node) -> List[BetaLabel]:
    """beta(nu_2), ..., beta(nu_m) along the path from ``fault`` to the root."""
    parents = t.parents()
    if id(fault) not in parents:
        raise ValueError("the root cannot be a fault")
    parent, idx = parents[id(fault)]
    if (
        parent.kind != IDEMPOTENT
        or idx in (0, len(parent.children) - 1)
        or fault.alpha.x != ONE
        or fault.contributors is None
        or any(fault.alpha.M[i][j] != ZERO for i, j in fault.contributors)
    ):
        raise ValueError("node is not a fault")
    d = Stabilise(node_derivation(t, fault))
    labels = [BetaLabel(parent, d.element, d)]
    child = parent
    while id(child) in parents:
        node, idx = parents[id(child)]
        if node.kind == PRODUCT:
            if idx == 0:
                d = Product(d, node_derivation(t, node.children[1]))
            else:
                d = Product(node_derivation(t, node.children[0]), d)
        elif idx == 0:
            d = Product(d, node_derivation(t, child))
        elif idx == len(node.children) - 1:
            d = Product(node_derivation(t, child), d)
        else:
            d = Flatten(d)
        labels.append(BetaLabel(node, d.element, d))
        child = node
    return labels


def witness_from_fault(t: FactTree, fault: Optional[Node] = None):
    """``(beta(root), derivation)`` for ``fault`` (default: :func:`select_fault`)."""
    if fault is None:
        fault = select_fault(t)
        if fault is None:
            raise ValueError("tree has no fault")
    last = beta_labels(t, fault)[-1]
    return last.element, last.derivation


# -- values and constants ------------------------------------------------------

def node_values(t: FactTree, node: Node, B: MaxPlusAutomaton):
    """``(aval, bval)``: A-weight of the node's factor and ``M_B(factor)``."""
    return t.aval(node), B.word_matrix(t.factor(node))


@dataclass(frozen=True)
class HeightConstant:
    lam: int
    h: int
    base: int
    value: int


def c_h(A: MaxPlusAutomaton, B: MaxPlusAutomaton, h: int) -> HeightConstant:
    """``(4|Q_B| + 4)^h * Lambda`` with Lambda the largest weight of A (at least 1)."""
    if h < 0:
        raise ValueError("height must be nonnegative")
    lam = max(A.max_weight, 1)
    base = 4 * B.n + 4
    return HeightConstant(lam, h, base, base**h * lam)


# -- rendering ---------------------------------------------------------------

def render_text(t: FactTree, B_states: Sequence[str] = (), max_word: int = 40) -> str:
    faults = {id(f) for f in find_faults(t)} if t.root.contributors is not None else set()
    lines = []

    def word_str(n):
        f = t.factor(n)
        s = " ".join(f)
        return s if len(f) <= max_word else " ".join(f[:max_word]) + f" ... ({len(f)} letters)"

    def go(n, depth):
        mark = "  FAULT" if id(n) in faults else ""
        contrib = ""
        if n.contributors is not None:
            names = lambda i: B_states[i] if B_states else str(i)
            contrib = " C={" + ", ".join(f"({names(i)},{names(j)})" for i, j in sorted(n.contributors)) + "}"
        lines.append(f"{'  ' * depth}{n.kind} [{word_str(n)}] {n.alpha}{contrib}{mark}")
        for c in n.children:
            go(c, depth + 1)

    go(t.root, 0)
    return "\n".join(lines)


def to_dot(t: FactTree, B_states: Sequence[str] = ()) -> str:
    faults = {id(f) for f in find_faults(t)} if t.root.contributors is not None else set()
    ids = {}
    out = ["digraph facttree {", "  node [shape=box, fontname=monospace];"]
    for k, n in enumerate(t.nodes()):
        ids[id(n)] = f"n{k}"
    for n in t.nodes():
        factor = " ".join(t.factor(n))
        if len(factor) > 30:
            factor = factor[:30] + "..."
        rows = []
        for i, row in enumerate(n.alpha.M):
            cells = []
            for j, v in enumerate(row):
                s = "." if v == NEG_INF else str(v)
                if n.contributors and (i, j) in n.contributors:
                    s = f"[{s}]"
                cells.append(s)
            rows.append(" ".join(cells))
        label = f"{n.kind} {factor}\\nx={n.alpha.x}\\n" + "\\n".join(rows)
        attrs = f'label="{label}"'
        if id(n) in faults:
            attrs += ", color=red, penwidth=2"
        out.append(f"  {ids[id(n)]} [{attrs}];")
        for c in n.children:
            out.append(f"  {ids[id(n)]} -> {ids[id(c)]};")
    out.append("}")
    return "\n".join(out)
