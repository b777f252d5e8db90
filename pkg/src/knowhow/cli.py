"""Command-line front end.

Exit codes: 0 true/valid/sat/ok/survived, 1 false/invalid/unsat/none/rejected/counterexample,
2 usage, 3 bad input (unreadable file, malformed model, proof or formula, cap exceeded),
4 internal disagreement between the decision procedure and the bounded search.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from fractions import Fraction

from . import checker, decision, proofs, testkit
from .errors import KnowHowError, VerdictDisagreement
from .formula import Kh, Not, parse, render, size
from .model import equiv_class, quotient, read_model

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3, 4

CAP_KEYS = {
    "atoms": int,          # free closure members for sat/valid
    "taut": int,           # opaque atoms in a TAUT step
    "max-states": int,     # fuzz model size
    "max-actions": int,
    "density": Fraction,
    "merge": Fraction,
}


def _cap(text):
    key, sep, value = text.partition("=")
    if not sep or key not in CAP_KEYS:
        raise argparse.ArgumentTypeError(
            f"expected KEY=VALUE with KEY one of {', '.join(sorted(CAP_KEYS))}")
    try:
        return key, CAP_KEYS[key](value)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad value for {key}: {value!r}") from None


def _seed(text):
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _global_flags(p, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--format", choices=("text", "json"), default=d("text"))
    p.add_argument("--seed", type=_seed, default=d(0))
    p.add_argument("--cap", type=_cap, action="append", default=d([]), metavar="KEY=VALUE",
                   help="override a size cap or generator parameter; repeatable")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="knowhow", description="Model checking, synthesis and "
                                 "decision procedures for knowing-that and knowing-how.")
    _global_flags(ap, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="print the canonical form of a formula")
    p.add_argument("formula")

    p = sub.add_parser("check", parents=[common], help="evaluate a formula at a state")
    p.add_argument("model")
    p.add_argument("state")
    p.add_argument("formula")
    p.add_argument("--witness", action="store_true",
                   help="for a true Kh formula, also print a witness strategy")

    p = sub.add_parser("synth", parents=[common], help="witness strategy for Kh FORMULA")
    p.add_argument("model")
    p.add_argument("state")
    p.add_argument("formula")

    p = sub.add_parser("classes", parents=[common], help="print the quotient graph")
    p.add_argument("model")
    p.add_argument("--dot", action="store_true", help="print the model as Graphviz DOT instead")

    for name, text in (("sat", "decide satisfiability"), ("valid", "decide validity")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("formula")

    p = sub.add_parser("prove", parents=[common], help="check a proof file")
    p.add_argument("proof")

    p = sub.add_parser("fuzz", parents=[common], help="hunt for countermodels on random models")
    p.add_argument("formula")
    p.add_argument("--trials", type=_positive, default=1000)
    return ap


def _emit(args, text, data):
    if args.format == "json":
        print(json.dumps(data, separators=(",", ":")))
    elif text:
        print(text)


def _strategy_text(sigma):
    return "\n".join(f"{c}: {a}" for c, a in sigma.items()) or "(empty strategy)"


def cmd_parse(args, caps):
    f = parse(args.formula)
    _emit(args, render(f), {"formula": render(f), "sugared": render(f, sugar=True),
                            "size": size(f)})
    return EXIT_TRUE


def cmd_check(args, caps):
    m = read_model(args.model)
    f = parse(args.formula)
    ok = checker.eval(m, args.state, f)
    data = {"verdict": ok}
    lines = ["true" if ok else "false"]
    if args.witness:
        if not isinstance(f, Kh):
            print("no witness: the formula is not of the form Kh ...", file=sys.stderr)
        elif ok:
            sigma = checker.synthesize(m, args.state, f.arg)
            data["witness"] = dict(sigma)
            lines.append(_strategy_text(sigma))
    _emit(args, "\n".join(lines), data)
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_synth(args, caps):
    m = read_model(args.model)
    sigma = checker.synthesize(m, args.state, parse(args.formula))
    if sigma is None:
        _emit(args, "none", None)
        return EXIT_FALSE
    if args.format == "json":
        print(sigma.to_json())
    else:
        print(_strategy_text(sigma))
    return EXIT_TRUE


def cmd_classes(args, caps):
    m = read_model(args.model)
    if args.dot:
        print(m.to_dot())
        return EXIT_TRUE
    q = quotient(m)
    rows = []
    lines = []
    for c in q.classes:
        succ = {a: sorted(ds) for (c2, a), ds in sorted(q.class_succ.items()) if c2 == c}
        rows.append({"class": c, "members": list(q.members[c]),
                     "uniform": list(q.uniform_actions[c]), "successors": succ})
        lines.append(f"[{', '.join(q.members[c])}] uniform: {', '.join(q.uniform_actions[c]) or '-'}")
        for a, ds in succ.items():
            lines.append(f"  {a} -> {', '.join(f'[{d}]' for d in ds)}")
    _emit(args, "\n".join(lines), {"classes": rows})
    return EXIT_TRUE


def cmd_sat(args, caps):
    f = parse(args.formula)
    res = decision.satisfiable(f, caps.get("atoms", decision.DEFAULT_ATOM_CAP))
    if res.satisfiable:
        _emit(args, f"sat at {res.state}\n{res.model.to_json()}",
              {"verdict": "sat", "state": res.state, "model": res.model.to_dict()})
        return EXIT_TRUE
    note = "confirmed by bounded search" if res.cross_checked else "not cross-checked"
    _emit(args, f"unsat ({note})", {"verdict": "unsat", "cross_checked": res.cross_checked})
    return EXIT_FALSE


def cmd_valid(args, caps):
    f = parse(args.formula)
    res = decision.satisfiable(Not(f), caps.get("atoms", decision.DEFAULT_ATOM_CAP))
    if not res.satisfiable:
        note = "confirmed by bounded search" if res.cross_checked else "not cross-checked"
        _emit(args, f"valid ({note})", {"verdict": "valid", "cross_checked": res.cross_checked})
        return EXIT_TRUE
    _emit(args, f"invalid: false at {res.state}\n{res.model.to_json()}",
          {"verdict": "invalid", "state": res.state, "model": res.model.to_dict()})
    return EXIT_FALSE


def cmd_prove(args, caps):
    ps = proofs.read_proof(args.proof)
    res = proofs.check_proof(ps, caps.get("taut", proofs.TAUT_ATOM_CAP))
    data = {"ok": res.ok, "step": res.step, "reason": res.reason}
    if res.ok and ps.conclusion is not None:
        data["conclusion"] = render(ps.conclusion, sugar=True)
    _emit(args, str(res), data)
    return EXIT_TRUE if res.ok else EXIT_FALSE


def cmd_fuzz(args, caps):
    f = parse(args.formula)
    gp = testkit.GenParams(seed=args.seed)
    overrides = {"max-states": "max_states", "max-actions": "max_actions",
                 "density": "transition_density", "merge": "block_merge_prob"}
    gp = replace(gp, **{overrides[k]: v for k, v in caps.items() if k in overrides})
    rep = testkit.fuzz_validity(f, args.trials, gp)
    if rep.survived:
        _emit(args, f"survived {rep.trials} trials",
              {"survived": True, "trials": rep.trials, "seed": args.seed})
        return EXIT_TRUE
    m, s = rep.counterexample
    _emit(args, f"counterexample in trial {rep.trials - 1} at {s}\n{m.to_json()}",
          {"survived": False, "trials": rep.trials, "seed": args.seed, "state": s,
           "class": equiv_class(m, s), "model": m.to_dict()})
    return EXIT_FALSE


COMMANDS = {
    "parse": cmd_parse, "check": cmd_check, "synth": cmd_synth, "classes": cmd_classes,
    "sat": cmd_sat, "valid": cmd_valid, "prove": cmd_prove, "fuzz": cmd_fuzz,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    caps = dict(args.cap)
    try:
        return COMMANDS[args.command](args, caps)
    except VerdictDisagreement as exc:
        print(f"knowhow: internal disagreement: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (KnowHowError, OSError, ValueError) as exc:
        print(f"knowhow: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
