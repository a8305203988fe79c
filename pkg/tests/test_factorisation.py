import random

import pytest

from fixtures import BETA_2, BETA_3, BETA_4_DERIVED, BETA_4_REFERENCE, BETA_5
from helpers import random_automaton, random_deterministic
from maxplus_bigo.decision import decide_bigo, is_witness
from maxplus_bigo.factorisation import (
    IDEMPOTENT,
    LEAF,
    TreeBuilder,
    WordRejectedError,
    beta_labels,
    build_tree,
    c_h,
    check_tree,
    compute_contributors,
    find_faults,
    node_values,
    select_fault,
    to_dot,
    witness_from_fault,
)
from maxplus_bigo.reductions import ImmediateAnswer, lift_word, prepare_instance
from maxplus_bigo.semigroups import replay
from maxplus_bigo.semiring import INF, mat_bar


def blocks(n):
    return (("a",) * n + ("b",) + ("a",) * n + ("b",)) * n


def reference_shape(n):
    half = [["."] * n, "."]
    return [[half, half] for _ in range(n)]


@pytest.fixture(scope="module")
def builder():
    from maxplus_bigo.samples import running_pair

    A, B = running_pair()
    return TreeBuilder(A, B)


def test_random_trees_are_valid(builder):
    rng = random.Random(0)
    bound = 3 * len(builder.sg)
    for _ in range(60):
        w = tuple(rng.choice("ab") for _ in range(rng.randint(1, 500)))
        t = compute_contributors(builder.build(w), builder.B)
        assert check_tree(t) == []
        assert t.height <= bound
        assert all(n.contributors for n in t.nodes())
        assert t.root.start == 0 and t.root.end == len(w)


def test_power_of_a_single_letter(builder):
    t = builder.build(("a",) * 7)
    assert t.root.kind == IDEMPOTENT and len(t.root.children) == 7
    assert t.height == 1


def test_single_letter_is_a_leaf(builder):
    t = builder.build(("b",))
    assert t.root.kind == LEAF and t.height == 0


def test_rejected_word():
    from maxplus_bigo.automata import MaxPlusAutomaton

    A = MaxPlusAutomaton.from_transitions(["p"], ["a", "b"], [("p", "a", 1, "p")], {"p": 0}, {"p": 0})
    with pytest.raises(WordRejectedError):
        build_tree(("b",), A, A)


def test_reference_tree_and_beta_labels(builder):
    t = compute_contributors(builder.from_shape(blocks(3), reference_shape(3)), builder.B)
    assert check_tree(t) == []
    assert t.height == 4
    faults = find_faults(t)
    # the middle a of each a^3 block in the middle copy of a^3 b a^3 b
    assert [f.start for f in faults] == [9, 13]
    assert select_fault(t).start == 9
    labels = beta_labels(t, faults[1])
    mats = [bl.element.M for bl in labels]
    assert mats[0] == BETA_2
    assert mats[1] == BETA_3
    assert mats[2] == BETA_4_DERIVED
    assert mats[2] != BETA_4_REFERENCE
    assert mats[3] == BETA_5
    assert all(bl.element.x == INF for bl in labels)
    for bl in labels:
        assert mat_bar(bl.element.M) == bl.node.alpha.M
        assert all(bl.element.M[i][j] <= 1 for i, j in bl.node.contributors)
        assert replay(bl.derivation, builder.A, builder.B) == bl.element
    e, d = witness_from_fault(t, faults[1])
    assert is_witness(e, builder.A, builder.B)


def test_fault_free_prefix_tree(builder):
    # a^3 b on its own: the middle a sees a 1 among its contributors
    t = compute_contributors(builder.from_shape(("a", "a", "a", "b"), [[".", ".", "."], "."]), builder.B)
    assert check_tree(t) == []
    assert find_faults(t) == []


def test_built_trees_find_faults(builder):
    for n, expected in [(2, 0), (3, 1), (4, 6)]:
        t = compute_contributors(builder.build(blocks(n)), builder.B)
        faults = find_faults(t)
        assert len(faults) == expected
        if faults:
            e, _ = witness_from_fault(t)
            assert is_witness(e, builder.A, builder.B)


def test_not_a_fault(builder):
    t = compute_contributors(builder.build(blocks(3)), builder.B)
    with pytest.raises(ValueError):
        beta_labels(t, t.root.children[0])


def test_height_constants(running):
    A, B = running
    assert c_h(A, B, 0).value == A.max_weight == 1
    assert c_h(A, B, 1).value == 20
    for h in range(1, 10):
        assert c_h(A, B, h).value > 2 * c_h(A, B, h - 1).value
    with pytest.raises(ValueError):
        c_h(A, B, -1)


def test_node_values(builder):
    w = tuple("abab")
    t = builder.build(w)
    aval, bval = node_values(t, t.root, builder.B)
    assert aval == 4
    assert bval == builder.B.word_matrix(w)
    leaf = next(n for n in t.nodes() if n.kind == LEAF)
    assert node_values(t, leaf, builder.B)[0] == 1


def no_fault_bound_holds(inst, w):
    tb = TreeBuilder(inst.a, inst.b)
    t = compute_contributors(tb.build(w), inst.b)
    if find_faults(t):
        return False
    for n in t.nodes():
        aval, bval = node_values(t, n, inst.b)
        best = max(bval[i][j] for i, j in n.contributors)
        c = c_h(inst.a, inst.b, n.height).value
        if aval > c * best + c:
            return False
    return True


def test_no_fault_bound_on_reverse_pair(running):
    A, B = running
    inst = prepare_instance(B, A)
    rng = random.Random(2)
    for _ in range(30):
        w = tuple(rng.choice("ab") for _ in range(rng.randint(1, 80)))
        lifted = lift_word(inst, w)
        assert lifted is not None
        assert no_fault_bound_holds(inst, lifted)


def test_no_fault_bound_on_random_bigo_instances():
    rng = random.Random(4)
    checked = 0
    while checked < 15:
        A, B = random_deterministic(rng), random_automaton(rng)
        inst = prepare_instance(A, B)
        if isinstance(inst, ImmediateAnswer) or not decide_bigo(A, B).bigo:
            continue
        for _ in range(5):
            w = tuple(rng.choice("ab") for _ in range(rng.randint(1, 40)))
            lifted = lift_word(inst, w)
            if lifted:
                assert no_fault_bound_holds(inst, lifted)
        checked += 1


def test_dot_export(builder):
    t = compute_contributors(builder.build(blocks(3)), builder.B)
    dot = to_dot(t, builder.B.states)
    assert dot.startswith("digraph") and "color=red" in dot
    assert dot.count("->") == sum(len(n.children) for n in t.nodes())


def idempotent_splits(w, A, B):
    """Spans of ``w`` that split into at least three factors sharing one
    idempotent label equal to the label of the span.

    Such a split is exactly what an idempotent node needs, and every factor
    carries some tree, so an empty result means no factorisation tree on
    ``w`` has an idempotent node (hence no fault).  Labels are computed as
    plain products of letter labels, independently of the tree builder.
    """
    from maxplus_bigo.automata import run
    from maxplus_bigo.semigroups import Element, elem_mul
    from maxplus_bigo.semiring import bar, mat_bar

    states, _ = run(A, w)
    letters = [
        Element(states[i], bar(A.trans[a][states[i]][states[i + 1]]), states[i + 1], mat_bar(B.trans[a]))
        for i, a in enumerate(w)
    ]
    n = len(w)
    label = {}
    for i in range(n):
        acc = letters[i]
        label[(i, i + 1)] = acc
        for j in range(i + 1, n):
            acc = elem_mul(acc, letters[j])
            label[(i, j + 1)] = acc
    found = []
    for (i, j), e in label.items():
        if elem_mul(e, e) != e:
            continue
        # fewest/most factors with label e covering [i, k)
        reach = {i: {0}}
        for k in range(i + 1, j + 1):
            counts = set()
            for m in range(i, k):
                if m in reach and label[(m, k)] == e:
                    counts |= {c + 1 for c in reach[m]}
            if counts:
                reach[k] = {min(counts), min(max(counts), 3)}
        if j in reach and max(reach[j]) >= 3:
            found.append((i, j))
    return found


def test_short_word_has_no_idempotent_node(running):
    A, B = running
    assert idempotent_splits(tuple("aabaab") * 2, A, B) == []
    # a^3 already splits into three copies of the idempotent e_a
    assert (0, 3) in idempotent_splits(tuple("aaab"), A, B)
    assert idempotent_splits(tuple("aaabaaab") * 3, A, B)
