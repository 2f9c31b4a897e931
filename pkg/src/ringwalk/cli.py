"""Command-line front end: ``ringwalk <command> --k K --n N [--s S] ...``.

Exit status: 0 success, 1 domain error, 2 verification failure, 3 state-space
cap exceeded.
"""

from __future__ import annotations

import argparse
import io
import sys
from typing import Sequence

import numpy as np

from . import digraph as dg
from . import verify as vf
from .errors import DomainError, InvalidStateError, RingWalkError, StateSpaceTooLarge
from .markov import (
    blockage_fraction_closed_form,
    build_transition_matrix,
    closed_form_stationary,
    power_iteration_stationary,
)
from .serialize import csv_text, dumps, states_csv, write_atomic
from .simulator import run
from .state_space import DEFAULT_MAX_STATES, Params, State, check_cap, enumerate_states

EXIT_OK, EXIT_DOMAIN, EXIT_VERIFY, EXIT_CAP = 0, 1, 2, 3


def _common(p: argparse.ArgumentParser, need_s: bool = True) -> None:
    p.add_argument("--k", type=int, required=True, help="number of workers")
    p.add_argument("--n", type=int, required=True, help="number of bins")
    if need_s:
        p.add_argument("--s", type=float, required=True, help="Bernoulli success probability, 0 < s < 1")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="write here (atomically) instead of stdout")
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES, help="state-space size cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ringwalk", description="Exact analysis of k workers on an n-bin ring.")
    sub = parser.add_subparsers(dest="command", required=True)

    _common(sub.add_parser("states", help="enumerate states in canonical order"), need_s=False)
    _common(sub.add_parser("matrix", help="transition matrix"))

    p = sub.add_parser("stationary", help="stationary distribution")
    _common(p)
    p.add_argument("--method", choices=("closed", "power", "both"), default="closed")
    p.add_argument("--tol", type=float, default=1e-15, help="power-iteration tolerance")
    p.add_argument("--max-iter", type=int, default=10**6)

    p = sub.add_parser("blockage", help="long-run blocked fraction of one worker")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=float, help="success probability (or give --r)")
    p.add_argument("--r", type=float, help="failure/success ratio q/s (or give --s)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")

    p = sub.add_parser("simulate", help="Monte Carlo run")
    _common(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=10**6)
    p.add_argument("--burnin", type=int, default=10**4)
    p.add_argument("--f-cap", type=int, default=None, help="at most this many failures per step")
    p.add_argument("--replicas", type=int, default=1)
    p.add_argument("--processes", type=int, default=None)
    p.add_argument("--start", help="start state label, e.g. '1*,2,4' (default: random placement)")
    p.add_argument("--trace", help="CSV file for the per-step trace")

    p = sub.add_parser("verify", help="run every invariant suite")
    _common(p)
    p.add_argument("--tol-exact", type=float, default=vf.EXACT_TOL)
    p.add_argument("--tol-eigen", type=float, default=vf.EIGEN_TOL)
    p.add_argument("--mc-steps", type=int, default=0, help="also run a Monte Carlo check of this length")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("digraph", help="rearrangement digraph summary or DOT export")
    _common(p, need_s=False)
    p.add_argument("--dot", action="store_true", help="emit Graphviz DOT instead of a summary")
    return parser


def _emit(args: argparse.Namespace, text: str) -> None:
    if getattr(args, "out", None):
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _params_json(k: int, n: int, s: float) -> dict:
    return {"k": k, "n": n, "s": s}


def cmd_states(args: argparse.Namespace) -> int:
    states = enumerate_states(args.k, args.n, args.max_states)
    if args.format == "csv":
        _emit(args, states_csv(states, args.k))
    else:
        _emit(args, dumps({
            "k": args.k, "n": args.n, "count": len(states),
            "states": [{"index": i, **st.to_json()} for i, st in enumerate(states)],
        }))
    return EXIT_OK


def cmd_matrix(args: argparse.Namespace) -> int:
    tm = build_transition_matrix(args.k, args.n, args.s, args.max_states)
    labels = [st.label() for st in tm.states]
    if args.format == "csv":
        rows = ([labels[i], *tm.p[i].tolist()] for i in range(tm.order))
        _emit(args, csv_text(["from", *labels], rows))
    else:
        _emit(args, dumps({"params": _params_json(args.k, args.n, args.s), "states": labels, "p": tm.p}))
    return EXIT_OK


def cmd_stationary(args: argparse.Namespace) -> int:
    columns: dict[str, np.ndarray] = {}
    check_cap(args.k, args.n, args.max_states)
    states = enumerate_states(args.k, args.n, args.max_states)
    if args.method in ("closed", "both"):
        columns["closed"] = closed_form_stationary(args.k, args.n, args.s, args.max_states).nu
    iterations = None
    if args.method in ("power", "both"):
        pw = power_iteration_stationary(build_transition_matrix(args.k, args.n, args.s, args.max_states),
                                        tol=args.tol, max_iter=args.max_iter)
        columns["power"] = pw.nu
        iterations = pw.iterations
    labels = [st.label() for st in states]
    if args.format == "csv":
        rows = ([labels[i], *(float(c[i]) for c in columns.values())] for i in range(len(states)))
        _emit(args, csv_text(["state", *columns], rows))
        return EXIT_OK
    doc: dict = {"params": _params_json(args.k, args.n, args.s), "method": args.method, "states": labels}
    doc.update(columns)
    if iterations is not None:
        doc["iterations"] = iterations
    if len(columns) == 2:
        doc["max_abs_diff"] = float(np.max(np.abs(columns["closed"] - columns["power"])))
    _emit(args, dumps(doc))
    return EXIT_OK


def cmd_blockage(args: argparse.Namespace) -> int:
    if (args.s is None) == (args.r is None):
        raise DomainError("give exactly one of --s and --r")
    if args.s is not None:
        r = Params(args.k, args.n, args.s).r
    else:
        r = args.r
    b = blockage_fraction_closed_form(args.k, args.n, r)
    if args.format == "csv":
        _emit(args, csv_text(["k", "n", "s", "r", "B"], [[args.k, args.n, "" if args.s is None else args.s, r, b]]))
    else:
        _emit(args, dumps({"k": args.k, "n": args.n, "s": args.s, "r": r, "B": b}))
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    params = Params(args.k, args.n, args.s)
    check_cap(args.k, args.n, args.max_states)
    start = State.parse(args.start) if args.start else None
    kw = dict(start=start, processes=args.processes, max_states=args.max_states)
    if args.trace:
        buf = io.StringIO()
        stats = run(params, args.steps, args.seed, args.burnin, args.f_cap, args.replicas, trace=buf, **kw)
        write_atomic(args.trace, buf.getvalue())
    else:
        stats = run(params, args.steps, args.seed, args.burnin, args.f_cap, args.replicas, **kw)
    doc = stats.to_json()
    if args.format == "csv":
        scalars = [(k, v) for k, v in doc.items() if not isinstance(v, (dict, list))]
        scalars = [("k", args.k), ("n", args.n), ("s", args.s)] + scalars
        _emit(args, csv_text(["key", "value"], [(k, "" if v is None else v) for k, v in scalars]))
    else:
        _emit(args, dumps(doc))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    checks = vf.run_all(args.k, args.n, args.s, args.tol_exact, args.tol_eigen,
                        mc_steps=args.mc_steps, seed=args.seed, max_states=args.max_states)
    passed = all(c.passed for c in checks)
    if args.format == "csv":
        _emit(args, csv_text(["check", "passed", "detail"], [(c.name, c.passed, c.detail) for c in checks]))
    else:
        _emit(args, dumps({"params": _params_json(args.k, args.n, args.s), "passed": passed,
                           "checks": [c.to_json() for c in checks]}))
    for c in checks:
        print(f"{'pass' if c.passed else 'FAIL'}  {c.name}: {c.detail}", file=sys.stderr)
    return EXIT_OK if passed else EXIT_VERIFY


def cmd_digraph(args: argparse.Namespace) -> int:
    if args.dot and args.format == "csv":
        raise DomainError("--dot and --format csv are mutually exclusive")
    g = dg.build_digraph(args.k, args.n, args.max_states)
    if args.dot:
        _emit(args, dg.to_dot(g))
        return EXIT_OK
    sc = dg.check_self_converse(g)
    doc = {"k": args.k, "n": args.n, "vertices": len(g.vertices), "edges": g.num_edges,
           "self_converse": sc.ok}
    if args.format == "csv":
        _emit(args, csv_text(list(doc), [list(doc.values())]))
    else:
        doc["edge_list"] = [[list(g.vertices[u]), list(g.vertices[v])] for u, v in g.edges()]
        _emit(args, dumps(doc))
    return EXIT_OK


COMMANDS = {
    "states": cmd_states,
    "matrix": cmd_matrix,
    "stationary": cmd_stationary,
    "blockage": cmd_blockage,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "digraph": cmd_digraph,
}


def dispatch(args: argparse.Namespace) -> int:
    try:
        return COMMANDS[args.command](args)
    except StateSpaceTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (DomainError, InvalidStateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except RingWalkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return dispatch(args)


if __name__ == "__main__":
    sys.exit(main())
