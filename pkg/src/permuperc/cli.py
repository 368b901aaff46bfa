"""Command line interface: ``permuperc <subcommand> ...``."""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys
from dataclasses import asdict
from math import factorial

from . import experiments as ex
from .faces import full_face
from .iso import (
    harper_bound,
    i_k_bruteforce,
    laplacian_lambda1,
    rank_list_hex,
)
from .oracle import EdgeOracle
from .percolation import (
    CSV_FIELDS,
    EnumerationTooLarge,
    PercolationConfig,
    enumerate_components,
    memory_estimate,
)
from .perm import unrank
from .pfs import PfsConfig, pfs_explore, pfs_prime_explore
from .trees import count_rooted_trees, tree_count_bounds
from .verify import check_isometry, run_checks

ALIASES = {"lam": "lambda", "lam_target": "lambda_target"}


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x.strip())


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base seed")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", default=None, help="output file (default stdout)")
    return common


def _prob(args, config: dict) -> tuple[float, float]:
    """Resolve (c, p) from whichever flag was given and record both."""
    if (args.p is None) == (args.c is None):
        raise SystemExit("give exactly one of --p / --c")
    if args.c is not None:
        c, p = args.c, args.c / args.n
    else:
        c, p = args.p * args.n, args.p
    config["c"], config["p"] = c, p
    return c, p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="permuperc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("percolate", parents=[common], help="one percolation sample")
    p.add_argument("--n", type=int, default=7)
    p.add_argument("--p", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--r", type=int)

    p = sub.add_parser("sweep", parents=[common], help="giant component vs c")
    p.add_argument("--n", type=int, default=7)
    p.add_argument("--c-grid", type=_floats)
    p.add_argument("--p-grid", type=_floats)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--r", type=int)

    p = sub.add_parser("connectivity", parents=[common], help="connectivity at fixed lambda")
    p.add_argument("--n", type=int, default=7)
    p.add_argument("--lambdas", type=_floats, default=(0.0, 0.5, 1.0, 2.0))
    p.add_argument("--trials", type=int, default=400)

    p = sub.add_parser("hitting", parents=[common], help="hitting times of the edge process")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--trials", type=int, default=100)

    p = sub.add_parser("pfs", parents=[common], help="projection-first search from one vertex")
    p.add_argument("--n", type=int, default=7)
    p.add_argument("--p", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--vertex", type=int, default=0, help="rank of the start vertex")
    p.add_argument("--mode", choices=("plain", "two_phase"), default="plain")
    p.add_argument("--K", type=int)
    p.add_argument("--tau1", type=int)
    p.add_argument("--beta", type=float)
    p.add_argument("--max-rounds", type=int)
    p.add_argument("--r", type=int)

    p = sub.add_parser("iso", parents=[common], help="brute-force i_k")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--k-max", type=int, default=12)
    p.add_argument("--witness", action="store_true", help="include a minimising set")

    p = sub.add_parser("spectral", parents=[common], help="Laplacian spectral gap")
    p.add_argument("--n-max", type=int, default=4)

    p = sub.add_parser("trees", parents=[common], help="rooted subtree counts")
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--m-max", type=int, default=6)

    p = sub.add_parser("embed-check", parents=[common], help="inversion-set isometry")
    p.add_argument("--n-max", type=int, default=4)

    p = sub.add_parser("verify", parents=[common], help="run the self-check suites")
    p.add_argument("module", nargs="?", default="all")
    return parser


def _emit_json(out, config: dict, payload) -> None:
    out.write(ex.header_line(config) + "\n")
    out.write(json.dumps(payload, sort_keys=True) + "\n")


def _emit_rows(out, fmt: str, config: dict, rows, columns=None) -> None:
    dicts = [r if isinstance(r, dict) else asdict(r) for r in rows]
    dicts = [{ALIASES.get(k, k): v for k, v in d.items()} for d in dicts]
    if columns is None:
        columns = list(dicts[0]) if dicts else []
    if fmt == "json":
        _emit_json(out, config, dicts)
    else:
        ex.write_csv(out, config, dicts, columns)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = {k: v for k, v in vars(args).items() if k not in ("out", "threads")}
    with contextlib.ExitStack() as stack:
        out = stack.enter_context(open(args.out, "w")) if args.out else sys.stdout
        try:
            return _dispatch(args, config, out)
        except EnumerationTooLarge as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2


def _dispatch(args, config: dict, out) -> int:
    cmd = args.command
    if cmd == "percolate":
        c, p = _prob(args, config)
        if args.n > 9:
            print(f"# memory estimate {memory_estimate(args.n) / 2**20:.0f} MiB", file=sys.stderr)
        rep = enumerate_components(PercolationConfig(args.n, p, args.seed, args.r))
        if args.format == "csv":
            ex.write_csv(out, config, [rep.csv_row()], CSV_FIELDS)
        else:
            _emit_json(out, config, rep.to_dict())
        return 0

    if cmd == "sweep":
        if (args.c_grid is None) == (args.p_grid is None):
            raise SystemExit("give exactly one of --c-grid / --p-grid")
        by = "c" if args.c_grid is not None else "p"
        spec = ex.SweepSpec(args.n, args.c_grid or args.p_grid, args.trials, args.seed, args.r, by)
        _emit_rows(out, args.format or "csv", config, ex.run_sweep(spec, args.threads))
        return 0

    if cmd == "connectivity":
        rows = ex.run_connectivity(args.n, args.lambdas, args.trials, args.seed, args.threads)
        _emit_rows(out, args.format or "csv", config, rows)
        return 0

    if cmd == "hitting":
        rows = ex.run_hitting(args.n, args.trials, args.seed, args.threads)
        summary = ex.hitting_summary(rows)
        if args.format == "json":
            _emit_json(out, config, {"rows": [asdict(r) for r in rows], "summary": summary})
        else:
            _emit_rows(out, "csv", config, rows)
            out.write("# summary " + json.dumps(summary, sort_keys=True) + "\n")
        return 0

    if cmd == "pfs":
        c, p = _prob(args, config)
        host = full_face(args.n)
        v = unrank(args.n, args.vertex)
        cfg = PfsConfig(p=p, mode=args.mode, max_rounds=args.max_rounds, K=args.K,
                        tau1=args.tau1, r=args.r, beta=args.beta)
        run = pfs_explore if args.mode == "plain" else pfs_prime_explore
        state = run(host, v, EdgeOracle(args.seed, args.n), cfg)
        _emit_json(out, config, state.summary())
        return 0

    if cmd == "iso":
        rows = []
        for k in range(1, min(args.k_max, factorial(args.n + 1)) + 1):
            ik, S = i_k_bruteforce(args.n, k)
            row = {"n": args.n, "k": k, "i_k": float(ik), "harper_bound": harper_bound(args.n, k)}
            if args.witness:
                row["witness_set"] = rank_list_hex(S)
            rows.append(row)
        _emit_rows(out, args.format or "csv", config, rows)
        return 0

    if cmd == "spectral":
        rows = []
        for n in range(1, args.n_max + 1):
            lam = laplacian_lambda1(n)
            closed = 2 - 2 * math.cos(math.pi / (n + 1))
            rows.append({"n": n, "lambda1": lam, "closed_form": closed, "abs_error": abs(lam - closed),
                         "cheeger_lower": lam / 2, "halfspace_upper": 2 / (n + 1)})
        _emit_rows(out, args.format or "csv", config, rows)
        return 0

    if cmd == "trees":
        rows = []
        for n in range(1, args.n_max + 1):
            N = factorial(n + 1)
            for m in range(1, args.m_max + 1):
                lo, hi = tree_count_bounds(N, n, n, m)
                rows.append({"operation": "count_rooted_trees", "n": n, "m": m,
                             "estimate": count_rooted_trees(n, m),
                             "lower": float(lo) if n > m else float("nan"), "upper": float(hi),
                             "stderr": 0.0, "trials": 1})
        _emit_rows(out, args.format or "csv", config, rows)
        return 0

    if cmd == "embed-check":
        rows = []
        failed = False
        for n in range(1, args.n_max + 1):
            ok, detail = check_isometry(n)
            failed |= not ok
            rows.append({"n": n, "isometry": ok, "detail": detail})
        _emit_rows(out, args.format or "csv", config, rows)
        return 1 if failed else 0

    if cmd == "verify":
        results = run_checks(args.module)
        width = max(len(r.name) for r in results)
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            out.write(f"{status}  {r.module:<15} {r.name:<{width}}  {r.seconds:7.2f}s  {r.detail}\n")
        return 0 if all(r.passed for r in results) else 1

    raise SystemExit(f"unknown command {cmd}")


if __name__ == "__main__":
    sys.exit(main())
