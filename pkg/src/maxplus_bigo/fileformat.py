"""JSON automaton files.

Example::

    {
      "alphabet": ["a", "b"],
      "states": ["p"],
      "initial": {"p": 0},
      "final": {"p": 0},
      "transitions": [
        {"from": "p", "letter": "a", "weight": 1, "to": "p"},
        {"from": "p", "letter": "b", "weight": 1, "to": "p"}
      ]
    }

States missing from ``initial`` / ``final`` get weight -inf.  Repeated
``(from, letter, to)`` entries keep the largest weight.
"""
from __future__ import annotations

import json
from typing import Any, Dict

from .automata import MaxPlusAutomaton, UnknownLetterError
from .semiring import MINUS_INF

KEYS = ("alphabet", "states", "initial", "final", "transitions")


class FormatError(ValueError):
    pass


def _weight(x, where):
    if isinstance(x, bool) or not isinstance(x, int) or x < 0:
        raise FormatError(f"{where}: weight must be a nonnegative integer, got {x!r}")
    return x


def from_dict(data: Dict[str, Any]) -> MaxPlusAutomaton:
    if not isinstance(data, dict):
        raise FormatError("automaton must be a JSON object")
    missing = [k for k in KEYS if k not in data]
    if missing:
        raise FormatError(f"missing keys: {', '.join(missing)}")
    alphabet = data["alphabet"]
    states = data["states"]
    for name, seq in (("alphabet", alphabet), ("states", states)):
        if not isinstance(seq, list) or not all(isinstance(x, str) for x in seq):
            raise FormatError(f"{name} must be a list of strings")
    initial = {q: _weight(x, f"initial[{q}]") for q, x in dict(data["initial"]).items()}
    final = {q: _weight(x, f"final[{q}]") for q, x in dict(data["final"]).items()}
    trans = []
    for i, t in enumerate(data["transitions"]):
        try:
            trans.append((t["from"], t["letter"], _weight(t["weight"], f"transition {i}"), t["to"]))
        except (KeyError, TypeError):
            raise FormatError(f"transition {i} needs keys from, letter, weight, to") from None
    try:
        return MaxPlusAutomaton.from_transitions(states, alphabet, trans, initial, final)
    except UnknownLetterError as exc:
        raise FormatError(str(exc)) from None
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def to_dict(aut: MaxPlusAutomaton) -> Dict[str, Any]:
    return {
        "alphabet": list(aut.alphabet),
        "states": list(aut.states),
        "initial": {q: x for q, x in zip(aut.states, aut.initial) if x is not MINUS_INF},
        "final": {q: x for q, x in zip(aut.states, aut.final) if x is not MINUS_INF},
        "transitions": [
            {"from": aut.states[p], "letter": a, "weight": x, "to": aut.states[q]}
            for p, a, x, q in aut.transitions()
        ],
    }


def loads(text: str) -> MaxPlusAutomaton:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return from_dict(data)


def dumps(aut: MaxPlusAutomaton) -> str:
    return json.dumps(to_dict(aut), indent=2)


def load(path) -> MaxPlusAutomaton:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def save(aut: MaxPlusAutomaton, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(aut) + "\n")
