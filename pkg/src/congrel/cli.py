"""Command-line front end.

Subcommands: corpus list, check-hypothesis, check-modularity, verify,
witness, search, eval.  Algebras are file paths or builtin:<name>;
relations are JSON literals or the principal:a,b shorthand.  Exit codes:
0 all checks hold, 1 a violation or missing chain was found, 2 usage or
input error.

JSON output is byte-identical across runs with the same inputs and seed;
elapsed_ms is reported as 0 unless --timings is given, since wall-clock
time is the one field that cannot be reproducible.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import corpus, dsl, theorems
from .algebra import FiniteAlgebra, load_algebra
from .relations import (
    BinRel,
    Partition,
    cg,
    is_congruence,
    relation_from_json,
)

__all__ = ["main"]


class UsageError(ValueError):
    pass


def _load_algebra_arg(spec: str) -> FiniteAlgebra:
    if spec.startswith("builtin:"):
        name = spec[len("builtin:"):]
        try:
            return corpus.builtin(name)
        except ValueError as e:
            raise UsageError(str(e)) from None
    try:
        with open(spec, "rb") as fh:
            data = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {spec!r}: {e}") from None
    try:
        return load_algebra(data)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _parse_relation(spec: str, size: int) -> BinRel:
    if spec.startswith("principal:"):
        body = spec[len("principal:"):]
        try:
            a, b = (int(x) for x in body.split(","))
        except ValueError:
            raise UsageError(
                f"principal relation spec must be principal:a,b, got {spec!r}"
            ) from None
        if not (0 <= a < size and 0 <= b < size):
            raise UsageError(f"principal pair ({a},{b}) out of range for size {size}")
        return BinRel.from_pairs(size, [(a, b)], reflexive_close=True)
    try:
        obj = json.loads(spec)
    except json.JSONDecodeError as e:
        raise UsageError(f"relation spec is neither principal:a,b nor JSON: {e}") from None
    try:
        rel = relation_from_json(obj)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if rel.n != size:
        raise UsageError(f"relation size {rel.n} does not match algebra size {size}")
    return rel


def _parse_alpha(spec: str, algebra: FiniteAlgebra) -> Partition:
    n = algebra.size
    if spec == "0":
        alpha = Partition.identity(n)
    elif spec == "1":
        alpha = Partition.full(n)
    elif spec.startswith("blocks:"):
        try:
            blocks = [[int(x) for x in blk.split(",")]
                      for blk in spec[len("blocks:"):].split("|")]
            alpha = Partition.from_blocks(n, blocks)
        except ValueError as e:
            raise UsageError(f"bad blocks spec {spec!r}: {e}") from None
    elif spec.startswith("cg:"):
        try:
            a, b = (int(x) for x in spec[len("cg:"):].split(","))
        except ValueError:
            raise UsageError(f"cg spec must be cg:a,b, got {spec!r}") from None
        if not (0 <= a < n and 0 <= b < n):
            raise UsageError(f"cg pair ({a},{b}) out of range for size {n}")
        alpha = cg(BinRel.from_pairs(n, [(a, b)]), algebra)
    else:
        try:
            obj = json.loads(spec)
            alpha = Partition.from_blocks(n, obj["partition"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            raise UsageError(f"bad congruence spec {spec!r}: {e}") from None
    if not is_congruence(alpha, algebra):
        raise UsageError(f"{spec!r} is not a congruence of this algebra")
    return alpha


def _fmt_partition(p: Partition) -> str:
    return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in p.blocks()) + "}"


def _fmt_rel(r: BinRel) -> str:
    return "{" + ",".join(f"({a},{b})" for a, b in sorted(r.pairs())) + "}"


def _fmt_value(v) -> str:
    if isinstance(v, Partition):
        return _fmt_partition(v)
    if isinstance(v, BinRel):
        return _fmt_rel(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt_value(x) for x in v) + "]"
    return str(v)


def _print_violation(v: theorems.Violation) -> None:
    print(f"violation ({v.failed_claim}): pair {tuple(v.missing_pair)} "
          "is on the left side but not the right")
    for key, val in v.binding.items():
        print(f"  {key}: {_fmt_value(val)}")


def _emit_report(rep: theorems.CheckReport, args) -> None:
    if args.json:
        print(json.dumps(rep.to_json_dict(include_elapsed=args.timings),
                         sort_keys=True))
        return
    line = f"{rep.theorem} on {rep.algebra}: {rep.result} ({rep.instances_checked} instances"
    if args.timings:
        line += f", {rep.elapsed * 1000:.1f} ms"
    line += ")"
    print(line)
    for v in rep.violations:
        _print_violation(v)


def _cmd_corpus(args) -> int:
    if args.action != "list":
        raise UsageError(f"unknown corpus action {args.action!r}")
    names = corpus.builtin_names()
    if args.json:
        print(json.dumps(names))
    else:
        for name in names:
            print(name)
    return 0


def _cmd_check(args, checker) -> int:
    algebra = _load_algebra_arg(args.algebra)
    try:
        rep = checker(algebra, seed_limit=args.seed_limit)
    except ValueError as e:
        raise UsageError(str(e)) from None
    _emit_report(rep, args)
    return 0 if rep.holds else 1


def _cmd_verify(args) -> int:
    algebra = _load_algebra_arg(args.algebra)
    names = [args.theorem] if args.theorem else None
    try:
        failed = False
        for _, rep in theorems.sweep_iter(
                algebra, strategy=args.strategy, seed=args.seed,
                samples=args.samples, theorems=names, jobs=args.jobs):
            _emit_report(rep, args)
            failed = failed or not rep.holds
    except ValueError as e:
        raise UsageError(str(e)) from None
    return 1 if failed else 0


def _cmd_witness(args) -> int:
    algebra = _load_algebra_arg(args.algebra)
    try:
        a, b, c = (int(x) for x in args.abc.split(","))
    except ValueError:
        raise UsageError(f"--abc must be three integers a,b,c, got {args.abc!r}") from None
    alpha = _parse_alpha(args.alpha, algebra)
    r = _parse_relation(args.R, algebra.size)
    s = _parse_relation(args.S, algebra.size)
    try:
        result = theorems.witness_chain(algebra, alpha, a, b, c, r, s)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.json:
        print(json.dumps(result.to_json_dict(), sort_keys=True))
        return 0 if isinstance(result, theorems.WitnessChain) else 1
    if isinstance(result, theorems.WitnessChain):
        steps = [f"({result.pairs[0][0]},{result.pairs[0][1]})"]
        for tag, (x, y) in zip(result.tags, result.pairs[1:]):
            steps.append(f"-{tag}- ({x},{y})")
        print(f"chain of {len(result.tags)} links: " + " ".join(steps))
        problems = result.revalidate()
        print("revalidation: " + ("ok" if not problems else "; ".join(problems)))
        return 0
    print(f"no chain: {result.reason}")
    return 1


def _cmd_search(args) -> int:
    algebra = _load_algebra_arg(args.algebra)
    v = theorems.search_counterexample(algebra, budget=args.budget, seed=args.seed)
    if args.json:
        payload = {"algebra": algebra.name, "budget": args.budget,
                   "violation": None if v is None else v.to_json_dict()}
        print(json.dumps(payload, sort_keys=True))
    elif v is None:
        print(f"no counterexample on {algebra.name} within {args.budget} instances")
    else:
        _print_violation(v)
    return 0 if v is None else 1


def _cmd_eval(args) -> int:
    algebra = _load_algebra_arg(args.algebra)
    try:
        stmt = dsl.parse(args.statement)
    except dsl.ParseError as e:
        raise UsageError(str(e)) from None
    try:
        rep = dsl.check_statement(algebra, stmt, strategy=args.strategy,
                                  seed=args.seed, samples=args.samples)
    except ValueError as e:
        raise UsageError(str(e)) from None
    _emit_report(rep, args)
    return 0 if rep.holds else 1


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="emit JSON reports instead of text")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="worker processes for sweeps (default: all cores)")
    common.add_argument("--timings", action="store_true",
                        help="include wall-clock time in reports")

    parser = argparse.ArgumentParser(
        prog="congrel",
        description="Check congruence-relation laws on finite algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("corpus", parents=[common], help="built-in algebras")
    p.add_argument("action", choices=["list"])
    p.set_defaults(func=_cmd_corpus)

    for name, checker in (("check-hypothesis", theorems.check_hypothesis),
                          ("check-modularity", theorems.check_modularity_subsquares)):
        p = sub.add_parser(name, parents=[common],
                           help=f"{name.split('-')[1]} sweep over 4-generated subsquares")
        p.add_argument("algebra", help="file path or builtin:<name>")
        p.add_argument("--seed-limit", type=int, default=None,
                       help="cap on generator multisets to try")
        p.set_defaults(func=_cmd_check, checker=checker)

    p = sub.add_parser("verify", parents=[common],
                       help="sweep the shipped laws over a quantifier grid")
    p.add_argument("algebra", help="file path or builtin:<name>")
    p.add_argument("--theorem", choices=list(theorems.THEOREM_NAMES),
                   help="one law (default: all four, streamed)")
    p.add_argument("--strategy", choices=["exhaust", "principal", "sample"],
                   default="exhaust")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1000,
                   help="random draws for the sample strategy")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("witness", parents=[common],
                       help="extract an alternating chain for one instance")
    p.add_argument("algebra", help="file path or builtin:<name>")
    p.add_argument("--alpha", required=True,
                   help="congruence: 0, 1, blocks:0,2|1,3, cg:a,b, or JSON")
    p.add_argument("--abc", required=True, help="elements a,b,c with aRb, bSc, a alpha c")
    p.add_argument("--R", required=True, help="relation: principal:a,b or JSON")
    p.add_argument("--S", required=True, help="relation: principal:a,b or JSON")
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("search", parents=[common],
                       help="seeded random counterexample search over all laws")
    p.add_argument("algebra", help="file path or builtin:<name>")
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("eval", parents=[common],
                       help="check a quantified statement in the identity language")
    p.add_argument("statement", help="e.g. 'forall a:Cong, T:Tol . a & T* = (a & T)*'")
    p.add_argument("algebra", help="file path or builtin:<name>")
    p.add_argument("--strategy", choices=["exhaust", "principal", "sample"],
                   default="exhaust")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(func=_cmd_eval)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    try:
        if args.func is _cmd_check:
            return _cmd_check(args, args.checker)
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
