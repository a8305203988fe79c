import itertools
import random

import pytest

from helpers import random_automaton
from maxplus_bigo.automata import MaxPlusAutomaton, evaluate, is_deterministic
from maxplus_bigo.oracle import enumerate_words
from maxplus_bigo.reductions import (
    AlphabetMismatchError,
    ImmediateAnswer,
    SimplifiedInstance,
    determinize_pair,
    is_total,
    lift_word,
    prepare_instance,
    pull_back_word,
    separating_word,
    simplify,
    totalize_b,
)
from maxplus_bigo.automata import boolean_projection
from maxplus_bigo.semigroups import ResourceLimitError
from maxplus_bigo.semiring import MINUS_INF
from maxplus_bigo import words as W


def annotations(w, sigma2, letter_map):
    choices = [[b for b in sigma2 if letter_map[b] == a] for a in w]
    return itertools.product(*choices)


def test_separating_word_is_shortest():
    rng = random.Random(3)
    for _ in range(60):
        A, B = random_automaton(rng), random_automaton(rng)
        w = separating_word(boolean_projection(A), boolean_projection(B))
        brute = next(
            (u for u in enumerate_words(A.alphabet, 6)
             if evaluate(A, u) is not MINUS_INF and evaluate(B, u) is MINUS_INF),
            None,
        )
        if w is None:
            assert brute is None
        else:
            assert evaluate(A, w) is not MINUS_INF and evaluate(B, w) is MINUS_INF
            assert brute is not None and len(w) == len(brute)


def test_totalize(running):
    _, B = running
    T = totalize_b(B)
    assert T.states[-1] == "top"
    for w in enumerate_words(B.alphabet, 5):
        assert evaluate(T, w) == max(evaluate(B, w), 0)
    assert is_total(T)


def test_determinize_preserves_values():
    rng = random.Random(11)
    for _ in range(40):
        A, B = random_automaton(rng), random_automaton(rng)
        A2, B2, lm = determinize_pair(A, B)
        assert is_deterministic(A2)
        for w in enumerate_words(A.alphabet, 4):
            vals = [evaluate(A2, u) for u in annotations(w, A2.alphabet, lm)]
            if w:
                assert max(vals) == evaluate(A, w)
            for u in annotations(w, A2.alphabet, lm):
                assert evaluate(B2, u) == evaluate(B, w)


def test_empty_word_uses_final_weight_of_initial_states():
    A = MaxPlusAutomaton.from_transitions(["p"], ["a"], [("p", "a", 1, "p")], {"p": 3}, {"p": 2})
    A2, _, _ = determinize_pair(A, A)
    assert evaluate(A, ()) == 5
    assert evaluate(A2, ()) == 2


def test_simplify_running(running):
    A, B = running
    inst = simplify(A, B)
    assert isinstance(inst, SimplifiedInstance)
    assert inst.a.states == ("p", "r")
    assert inst.b.states == ("q1", "q2", "q3", "q4", "top")
    w = W.parse_word("(a b a^3 b)^2")
    lifted = lift_word(inst, W.expand(w))
    assert pull_back_word(inst.letter_map, lifted) == W.expand(w)
    assert evaluate(inst.a, lifted) == evaluate(A, w)
    assert evaluate(inst.b, lifted) == evaluate(B, w)


def test_simplify_immediate_answer(running):
    A, B = running
    rest = MaxPlusAutomaton.from_transitions(["q"], ["a", "b"], [("q", "a", 0, "q")], {"q": 0}, {"q": 0})
    ans = simplify(A, rest)
    assert isinstance(ans, ImmediateAnswer) and not ans.bigo
    assert ans.word == ("b",)


def test_prepare_keeps_simplified_pair(running):
    A, B = running
    inst = prepare_instance(A, B)
    assert inst.a.states == ("p",)
    assert inst.letter_map == {"a": "a", "b": "b"}
    assert isinstance(prepare_instance(B, A), SimplifiedInstance)
    assert prepare_instance(B, A).a.states[-1] == "r"


def test_lift_rejected_word():
    A = MaxPlusAutomaton.from_transitions(["p"], ["a", "b"], [("p", "a", 1, "p")], {"p": 0}, {"p": 0})
    inst = prepare_instance(A, totalize_b(A))
    assert lift_word(inst, ("b",)) is None


def test_alphabet_mismatch(running):
    A, _ = running
    C = MaxPlusAutomaton.from_transitions(["q"], ["c"], [], {"q": 0}, {"q": 0})
    with pytest.raises(AlphabetMismatchError):
        simplify(A, C)


def test_subset_cap(running):
    A, B = running
    rest = MaxPlusAutomaton.from_transitions(["q"], ["a", "b"], [("q", "a", 0, "q")], {"q": 0}, {"q": 0})
    with pytest.raises(ResourceLimitError):
        separating_word(boolean_projection(A), boolean_projection(rest), cap=0)
