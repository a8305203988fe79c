import pytest

from maxplus_bigo import words as W
from maxplus_bigo.automata import (
    MaxPlusAutomaton,
    UnknownLetterError,
    boolean_projection,
    empty_automaton,
    evaluate,
    is_deterministic,
    run,
    trim,
)
from maxplus_bigo.oracle import enumerate_words
from maxplus_bigo.semiring import MINUS_INF


def brute_force_value(aut, w):
    """Max over all runs, enumerated explicitly."""
    best = MINUS_INF
    paths = [(q, aut.initial[q]) for q in range(aut.n) if aut.initial[q] is not MINUS_INF]
    for a in w:
        nxt = []
        for p, x in paths:
            for q, y in enumerate(aut.trans[a][p]):
                if y is not MINUS_INF:
                    nxt.append((q, x + y))
        paths = nxt
    for q, x in paths:
        if aut.final[q] is not MINUS_INF:
            v = x + aut.final[q]
            best = v if best is MINUS_INF or v > best else best
    return best


def longest_block_or_b(w):
    blocks = "".join(w).split("b")
    return max(max(len(x) for x in blocks), w.count("b"))


def test_running_values_on_all_short_words(running):
    A, B = running
    for w in enumerate_words(A.alphabet, 8):
        assert evaluate(A, w) == len(w)
        assert evaluate(B, w) == longest_block_or_b(w)
        assert evaluate(B, w) == brute_force_value(B, w)


def test_running_values_on_long_word(running):
    A, B = running
    w = W.parse_word("(a b a^20 b)^81")
    # 23 letters per block, 81 blocks; two b's per block
    assert evaluate(A, w) == 1863
    assert evaluate(B, w) == 162
    w2 = W.parse_word("(a b a^40 b)^161")
    assert evaluate(A, w2) == 43 * 161
    assert evaluate(B, w2) == 322


def test_empty_word(running):
    A, B = running
    assert evaluate(A, ()) == 0
    assert evaluate(B, ()) == 0


def test_unknown_letter(running):
    A, _ = running
    with pytest.raises(UnknownLetterError):
        evaluate(A, ("c",))


def test_duplicate_transitions_keep_max():
    A = MaxPlusAutomaton.from_transitions(
        ["p"], ["a"], [("p", "a", 1, "p"), ("p", "a", 4, "p")], {"p": 0}, {"p": 0}
    )
    assert A.trans["a"][0][0] == 4
    assert A.max_weight == 4


def test_run_and_determinism(running):
    A, B = running
    assert is_deterministic(A)
    assert not is_deterministic(B)
    states, weight = run(A, ("a", "b", "a"))
    assert states == [0, 0, 0, 0] and weight == 3


def test_trim_removes_useless_states():
    A = MaxPlusAutomaton.from_transitions(
        ["p", "dead", "unreached"],
        ["a"],
        [("p", "a", 1, "p"), ("p", "a", 0, "dead"), ("unreached", "a", 0, "p")],
        {"p": 0},
        {"p": 0},
    )
    T = trim(A)
    assert T.states == ("p",)
    for w in enumerate_words(("a",), 5):
        assert evaluate(T, w) == evaluate(A, w)


def test_empty_language():
    E = empty_automaton(("a",))
    assert evaluate(E, ("a",)) is MINUS_INF
    A = MaxPlusAutomaton.from_transitions(["p"], ["a"], [], {"p": 0}, {})
    assert trim(A).n == 0


def test_boolean_projection(running):
    _, B = running
    N = boolean_projection(B)
    for w in enumerate_words(B.alphabet, 5):
        assert N.accepts(w) == (evaluate(B, w) is not MINUS_INF)


def test_validation():
    with pytest.raises(ValueError):
        MaxPlusAutomaton(("p",), ("a",), {"a": ((0, 0),)}, (0,), (0,))
    with pytest.raises(ValueError):
        MaxPlusAutomaton(("p",), ("a",), {"a": ((-1,),)}, (0,), (0,))
