"""Command line: ``maxplus-bigo check|eval|tree|closure|example``.

Exit codes: 0 big-O (or success), 1 not big-O, 2 error, 3 resource cap hit.
Results go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import fileformat
from . import words as W
from .automata import evaluate
from .counterexample import violation_family
from .decision import METHODS, decide_bigo, is_witness
from .factorisation import TreeBuilder, WordRejectedError, compute_contributors, find_faults, render_text, to_dot
from .reductions import ImmediateAnswer, prepare_instance, lift_word
from .samples import running_pair
from .semigroups import ResourceLimitError, asymptotic_closure, format_derivation, generators, paths_closure
from .semiring import MINUS_INF

EXIT_BIGO, EXIT_NOT_BIGO, EXIT_ERROR, EXIT_CAP = 0, 1, 2, 3
PLAIN_LIMIT = 200


def _value(x):
    return None if x is MINUS_INF else x


def _show(x):
    return "-inf" if x is MINUS_INF else str(x)


def _word_json(expr):
    out = {"word": W.format_word(expr), "length": W.length(expr)}
    if out["length"] <= PLAIN_LIMIT:
        out["plain"] = " ".join(W.expand(expr))
    return out


def _element_json(e, inst):
    names = inst.a.states
    return {
        "p": names[e.p],
        "x": str(e.x),
        "q": names[e.q],
        "M": [[str(v) for v in row] for row in e.M],
        "B_states": list(inst.b.states),
    }


def cmd_check(args) -> int:
    A, B = fileformat.load(args.a), fileformat.load(args.b)
    t0 = time.perf_counter()
    v = decide_bigo(A, B, method=args.method)
    elapsed = time.perf_counter() - t0
    report = {"verdict": "BigO" if v.bigo else "NotBigO", "method": v.method, "seconds": round(elapsed, 4)}
    if v.bigo:
        c = v.certificate
        report["certificate"] = {"lambda": c.lam, "height": c.h, "base": c.base, "value": str(c.value)}
    elif v.immediate is not None:
        report["reason"] = "language inclusion fails"
        report["word"] = " ".join(v.immediate.word)
    else:
        inst = v.instance
        report["reason"] = "witness"
        report["witness"] = _element_json(v.witness, inst)
        report["derivation"] = format_derivation(v.derivation)
    if not v.bigo and args.counterexample:
        rows = violation_family(v, range(1, args.counterexample + 1))
        report["counterexamples"] = [
            dict(_word_json(r.word), s=r.s, f_A=_value(r.f_a), f_B=_value(r.f_b)) for r in rows
        ]
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        _print_check(report, v)
    return EXIT_BIGO if v.bigo else EXIT_NOT_BIGO


def _print_check(report, v):
    print(f"verdict: {report['verdict']} (method {report['method']}, {report['seconds']} s)")
    if v.bigo:
        c = v.certificate
        digits = len(str(c.value))
        shown = str(c.value) if digits <= 40 else f"{c.base}^{c.h} * {c.lam} ({digits} digits)"
        print(f"f_A <= c f_B + c with c = {shown}")
    elif v.immediate is not None:
        print(f"A accepts a word that B rejects: {' '.join(v.immediate.word) or '(empty word)'}")
    else:
        inst = v.instance
        print("witness:", v.witness.pretty(inst.a.states))
        print("B states:", " ".join(inst.b.states))
        print("derivation:", report["derivation"])
    for row in report.get("counterexamples", []):
        print(f"s={row['s']}: {row['word']}  (length {row['length']}, f_A={row['f_A']}, f_B={row['f_B']})")


def cmd_eval(args) -> int:
    A = fileformat.load(args.automaton)
    w = W.parse_word(args.word)
    print(_show(evaluate(A, w)))
    return 0


def cmd_tree(args) -> int:
    A, B = fileformat.load(args.a), fileformat.load(args.b)
    inst = prepare_instance(A, B)
    if isinstance(inst, ImmediateAnswer):
        print(f"error: A accepts {' '.join(inst.word)!r}, which B rejects; trees need L(A) within L(B)", file=sys.stderr)
        return EXIT_ERROR
    w = W.expand(W.parse_word(args.word), limit=args.max_length)
    lifted = lift_word(inst, w)
    if lifted is None or not w:
        raise WordRejectedError("A rejects the word" if w else "the word is empty")
    builder = TreeBuilder(inst.a, inst.b)
    t = compute_contributors(builder.build(lifted), inst.b)
    if args.dot:
        print(to_dot(t, inst.b.states))
    else:
        print(render_text(t, inst.b.states))
        faults = find_faults(t)
        print(f"height {t.height}, {len(faults)} fault(s)")
    return 0


def cmd_closure(args) -> int:
    A, B = fileformat.load(args.a), fileformat.load(args.b)
    t0 = time.perf_counter()
    inst = prepare_instance(A, B)
    if isinstance(inst, ImmediateAnswer):
        print(f"language inclusion fails on {' '.join(inst.word) or '(empty word)'}")
        return 0
    gens = generators(inst.a, inst.b)
    paths = paths_closure(gens)
    asym = asymptotic_closure(gens)
    witnesses = sum(1 for e in asym if is_witness(e, inst.a, inst.b))
    stats = {
        "generators": len(gens),
        "paths": len(paths),
        "asymptotic": len(asym),
        "witnesses": witnesses,
        "seconds": round(time.perf_counter() - t0, 4),
    }
    if args.json:
        print(json.dumps(stats, indent=2))
    else:
        for k, v in stats.items():
            print(f"{k}: {v}")
    return 0


def cmd_example(args) -> int:
    out = Path(args.directory)
    out.mkdir(parents=True, exist_ok=True)
    A, B = running_pair()
    fileformat.save(A, out / "A.json")
    fileformat.save(B, out / "B.json")
    print(f"wrote {out / 'A.json'} and {out / 'B.json'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="maxplus-bigo", description="Big-O problem for max-plus automata.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide whether f_A is big-O of f_B")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--method", choices=METHODS, default="exhaustive")
    p.add_argument("--counterexample", type=int, metavar="S", default=0, help="print violating words for s = 1..S")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("eval", help="evaluate an automaton on a word")
    p.add_argument("automaton")
    p.add_argument("word", help='run-length syntax, e.g. "(a b a^20 b)^81"')
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("tree", help="factorisation tree with contributors and faults")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("word")
    p.add_argument("--dot", action="store_true")
    p.add_argument("--max-length", type=int, default=100000)
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("closure", help="semigroup sizes and witness count")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("example", help="write the running example automata as JSON")
    p.add_argument("directory")
    p.set_defaults(func=cmd_example)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
