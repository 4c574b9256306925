"""Command-line driver: ``combforge verify | moment | certify``.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
usage, configuration, I/O or memory-budget errors.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from .certify import certify, implied_query_bound
from .comb import Comb, is_comb, random_comb
from .haarmoment import moment
from .operators import BudgetError, load_operator, save_operator, set_budget_bytes
from .suites import SUITES, ConfigError, SuiteConfig, comb_seeds, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=1e-8, help="numerical tolerance (default 1e-8)")
    p.add_argument("--seed", type=int, default=None, help="master seed; required for randomized work")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="worker threads (default: all cores)")
    p.add_argument("--budget-bytes", type=int, default=None, help="memory budget (default 2 GiB or $COMBFORGE_BUDGET_BYTES)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="combforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--d", type=int, default=2)
    v.add_argument("--n", type=int, default=1)
    v.add_argument("--k", type=int, default=None)
    v.add_argument("--samples", type=int, default=None, help="Monte Carlo samples (haar) or random combs (cor310, thm36)")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.add_argument("--out", default=None)
    _add_common(v)

    m = sub.add_parser("moment", help="write the Haar moment operator to a file")
    m.add_argument("--d", type=int, required=True)
    m.add_argument("--k", type=int, required=True)
    m.add_argument("--method", choices=("rep", "weingarten", "mc"), default="rep")
    m.add_argument("--samples", type=int, default=100_000)
    m.add_argument("-o", "--out", required=True, help="output path (.json for JSON, otherwise LOP1 binary)")
    _add_common(m)

    c = sub.add_parser("certify", help="score protocol combs or evaluate query bounds")
    c.add_argument("mode", nargs="?", choices=("score", "bound"), default="score")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--n", type=int, default=None)
    c.add_argument("--eps", type=float, default=None, help="error level for 'bound'")
    c.add_argument("--metric", choices=("average", "diamond"), default=None)
    src = c.add_mutually_exclusive_group()
    src.add_argument("--random", type=int, default=None, metavar="N_COMBS")
    src.add_argument("--comb", default=None, metavar="PATH")
    c.add_argument("--ancilla-dim", type=int, default=None)
    c.add_argument("--out", default=None)
    _add_common(c)
    return parser


def cmd_verify(args) -> int:
    cfg = SuiteConfig(
        suite=args.suite,
        d=args.d,
        n=args.n,
        k=args.k,
        tol=args.tol,
        seed=args.seed,
        samples=args.samples,
        threads=args.threads,
        budget_bytes=args.budget_bytes,
        fmt=args.format,
        out=args.out,
    )
    report = run_suite(cfg)
    _emit(report.to_json() if args.format == "json" else report.to_csv(), args.out)
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_moment(args) -> int:
    if args.d < 2 or args.k < 1:
        raise UsageError("need --d >= 2 and --k >= 1")
    if args.method == "mc" and args.seed is None:
        raise UsageError("--method mc needs --seed")
    op = moment(args.d, args.k, args.method, samples=args.samples, seed=args.seed, threads=args.threads)
    save_operator(args.out, op)
    return EXIT_PASS


def _load_comb(path: str) -> Comb:
    op, teeth = load_operator(path)
    return Comb(op, teeth) if teeth is not None else Comb.with_default_teeth(op)


def cmd_certify(args) -> int:
    if args.mode == "bound":
        if args.eps is None:
            raise UsageError("'certify bound' needs --eps")
        metrics = [args.metric] if args.metric else ["average", "diamond"]
        values = {m: implied_query_bound(args.d, args.eps, m) for m in metrics}
        if args.metric:
            _emit(f"{values[args.metric]}\n", args.out)
        else:
            _emit(json.dumps({"d": args.d, "eps": args.eps, **values}, sort_keys=True) + "\n", args.out)
        return EXIT_PASS

    if args.comb is not None:
        raw = Path(args.comb).read_bytes()
        r = _load_comb(args.comb)
        n = r.n_teeth - 1 if args.n is None else args.n
        items = [(r, hashlib.sha256(raw).hexdigest())]
    elif args.random is not None:
        if args.seed is None:
            raise UsageError("--random needs --seed")
        if args.n is None:
            raise UsageError("--random needs --n")
        if args.random < 1:
            raise UsageError("--random must be >= 1")
        n = args.n
        items = [(random_comb(args.d, n + 1, args.ancilla_dim, seed=s), None) for s in comb_seeds(args.seed, args.random)]
    else:
        raise UsageError("certify needs --comb PATH or --random N_COMBS")
    if n < 0:
        raise UsageError("--n must be >= 0")
    certs = []
    for r, digest in items:
        check = is_comb(r)
        if not check.valid:
            raise UsageError(f"input is not a valid comb: {check.reason}")
        certs.append(certify(r, args.d, n, args.tol, input_sha256=digest))
    payload = [c.to_dict() for c in certs]
    _emit(json.dumps(payload if len(payload) > 1 else payload[0], indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_PASS if all(c.passed for c in certs) else EXIT_FAIL


COMMANDS = {"verify": cmd_verify, "moment": cmd_moment, "certify": cmd_certify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    if args.budget_bytes is not None:
        set_budget_bytes(args.budget_bytes)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, UsageError, BudgetError, OSError, ValueError) as exc:
        print(f"combforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if args.budget_bytes is not None:
            set_budget_bytes(None)


if __name__ == "__main__":
    sys.exit(main())
