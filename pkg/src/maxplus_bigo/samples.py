"""Small reference automata used in docs, tests and the CLI demo."""
from __future__ import annotations

from .automata import MaxPlusAutomaton

_ = None  # -inf in the matrix literals below


def word_length() -> MaxPlusAutomaton:
    """One state over {a, b}; computes the length of the word."""
    return MaxPlusAutomaton(
        ("p",),
        ("a", "b"),
        {"a": ((1,),), "b": ((1,),)},
        (0,),
        (0,),
    )


def longest_block_or_b_count() -> MaxPlusAutomaton:
    """Four states over {a, b}: max(longest block of a's, number of b's)."""
    return MaxPlusAutomaton(
        ("q1", "q2", "q3", "q4"),
        ("a", "b"),
        {
            "a": (
                (0, _, _, _),
                (_, 1, _, _),
                (_, _, 0, _),
                (_, _, _, 0),
            ),
            "b": (
                (0, 0, _, _),
                (_, _, 0, _),
                (_, _, 0, _),
                (_, _, _, 1),
            ),
        },
        (0, 0, _, 0),
        (_, 0, 0, 0),
    )


def running_pair():
    return word_length(), longest_block_or_b_count()
