"""Random instances shared by the test modules."""
import random

from maxplus_bigo.automata import MaxPlusAutomaton

SIGMA = ("a", "b")


def random_deterministic(rng: random.Random, max_states=2, sigma=SIGMA, weights=(0, 1), p_edge=0.85):
    n = rng.randint(1, max_states)
    states = [f"p{i}" for i in range(n)]
    trans = []
    for i in range(n):
        for a in sigma:
            if rng.random() < p_edge:
                trans.append((states[i], a, rng.choice(weights), states[rng.randrange(n)]))
    final = {q: rng.choice(weights) for q in states if rng.random() < 0.6}
    if not final:
        final = {states[rng.randrange(n)]: rng.choice(weights)}
    return MaxPlusAutomaton.from_transitions(states, sigma, trans, {states[0]: rng.choice(weights)}, final)


def random_automaton(rng: random.Random, max_states=3, sigma=SIGMA, weights=(0, 1), p_edge=0.4):
    n = rng.randint(1, max_states)
    states = [f"q{i}" for i in range(n)]
    trans = [
        (states[i], a, rng.choice(weights), states[j])
        for i in range(n)
        for a in sigma
        for j in range(n)
        if rng.random() < p_edge
    ]
    initial = {q: rng.choice(weights) for q in states if rng.random() < 0.5}
    final = {q: rng.choice(weights) for q in states if rng.random() < 0.6}
    initial = initial or {states[0]: 0}
    final = final or {states[-1]: 0}
    return MaxPlusAutomaton.from_transitions(states, sigma, trans, initial, final)
