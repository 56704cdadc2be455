"""
LRCAvail command line.

Subcommands: bounds | curves | construct | verify | shorten.
Exit codes: 0 pass, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from typing import List, Optional

from pydantic import BaseModel

from . import analysis, bounds, constructions, shortening
from .artifacts import (
    CodeArtifact,
    artifact_from_composite,
    artifact_from_linear,
    dump_artifact,
    load_artifact,
    save_artifact,
    to_composite,
    to_linear,
)
from .config import BOUND_LABELS, DEFAULT_SAMPLER_TRIES, DEFAULT_TRIALS, PARITY_RESEED_ATTEMPTS
from .errors import ConstructionError, LRCError
from .galois import build_base_field, build_tower
from .linalg import rank

logger = logging.getLogger("lrcavail")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Flag combination the parser cannot express."""


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def emit_json(payload) -> None:
    if isinstance(payload, BaseModel):
        emit(payload.model_dump_json(indent=2))
    else:
        emit(json.dumps(payload, indent=2))


# --- bounds ---

def cmd_bounds(args) -> int:
    if args.k > args.n:
        raise UsageError(f"--k {args.k} exceeds --n {args.n}")
    query = bounds.BoundQuery(n=args.n, k=args.k, r=args.r, t=args.t, d=args.d, q=args.q)

    rows = [
        ("wang_rawat", bounds.wang_rawat_bound(query)),
        ("tbf", bounds.tbf_bound(query)),
        ("yaakobi", bounds.yaakobi_bound(query)),
    ]
    if args.r >= 2 and args.k >= 2:
        rows.append(("corollary1", bounds.corollary1_bound(args.n, args.k, args.r)))
    else:
        rows.append(("corollary1", None))
    if args.r >= 2:
        sweep = shortening.theorem2_bounds(args.n, args.k, args.d or 1, args.r)
        rows.append(("theorem2_d", sweep.d_upper))
    else:
        rows.append(("theorem2_d", None))
    if args.r >= 2 and args.d is not None:
        rows.append(("theorem2_k", sweep.k_upper))
    cap = bounds.rate_cap(args.r, args.t)
    rows.append(("rate_cap", math.floor(args.n * cap)))

    width = max(len(name) for name, _ in rows)
    for name, value in rows:
        shown = "n/a" if value is None else str(value)
        emit(f"{name:<{width}}  {shown:>6}  {BOUND_LABELS[name]}")
    emit(f"{'':<{width}}  R*(r,t) = {cap}, n R* = {float(args.n * cap):.4f}")
    return EXIT_OK


# --- curves ---

def cmd_curves(args) -> int:
    start = time.time()
    rows = bounds.curves(args.r, args.t, args.grid)
    crossover = bounds.find_crossover(rows)
    text = bounds.format_curves_csv(rows)
    note = (
        f"crossover delta_c = {crossover:.6f}" if crossover is not None else "no concat/expander crossover on this grid"
    )
    if args.out is None:
        emit(text)
        print(note, file=sys.stderr)
    else:
        try:
            bounds.write_curves_csv(rows, args.out)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc}") from exc
        emit(f"[Curves] wrote {len(rows)} rows to {args.out} in {time.time() - start:.2f}s")
        emit(note)
    return EXIT_OK


# --- construct ---

def _write_artifact(artifact: CodeArtifact, out: Optional[str]) -> None:
    if out is None:
        emit(dump_artifact(artifact))
    else:
        save_artifact(artifact, out)
        logger.info(f"Artifact written to {out}")


def construct_wzl(args) -> CodeArtifact:
    code = constructions.build_wzl(args.r, args.t)
    return artifact_from_linear(code, seed=args.seed, parameters={"r": args.r, "t": args.t})


def construct_concat(args) -> CodeArtifact:
    inner = constructions.build_wzl(args.r, args.t)
    n = args.blocks * inner.n
    n_G = args.blocks * inner.k
    m = args.m if args.m is not None else n_G

    if args.k is not None:
        k = args.k
    else:
        if args.d is None:
            raise UsageError("construct concat needs --d or --k")
        k = analysis.theorem4_dimension(n, args.d, args.r, args.t)
        e_I = (n - args.d + 1) % inner.n
        if analysis.l_star(e_I, args.r, args.t) > inner.n - inner.k:
            logger.warning(f"L*({e_I}) exceeds the inner parity rank {inner.n - inner.k}; the dimension estimate is optimistic")
        if k > n_G:
            logger.warning(f"Dimension bound {k} exceeds n_G={n_G}; using k = n_G")
            k = n_G

    tower = build_tower(1, m, seed=args.seed)
    code = constructions.assemble_concatenated(tower, args.r, args.t, args.blocks, k)
    params = {"r": args.r, "t": args.t, "blocks": args.blocks, "m": m, "d": args.d}
    return artifact_from_composite(code, seed=args.seed, parameters=params, d=args.d)


def construct_expander(args) -> CodeArtifact:
    if args.seed is None:
        raise UsageError("construct expander requires --seed")
    rp1 = args.r + 1
    require_girth = constructions.girth_feasible(args.n, args.t, rp1)
    if not require_girth:
        logger.warning(
            f"No 4-cycle-free ({args.t}, {rp1})-biregular graph on {args.n} vertices exists; sampling simple graphs instead"
        )
    graph = constructions.sample_biregular(
        args.n, args.t, rp1, seed=args.seed, max_tries=args.max_tries, require_girth=require_girth
    )

    base = build_base_field(args.w)
    for attempt in range(PARITY_RESEED_ATTEMPTS):
        parity_seed = args.seed + attempt
        H = constructions.build_expander_parity(graph, base, parity_seed)
        if rank(base, H) == H.shape[0]:
            break
        logger.warning(f"H_E rank deficient with parity seed {parity_seed}, reseeding")
    else:
        raise ConstructionError(f"H_E stayed rank deficient over {PARITY_RESEED_ATTEMPTS} seeds")

    n_G = args.n - H.shape[0]
    m = args.m if args.m is not None else n_G
    k = args.k if args.k is not None else max(1, n_G // 2)
    tower = build_tower(args.w, m, seed=args.seed)
    code = constructions.assemble_expander_code(tower, H, k)
    params = {
        "n": args.n, "r": args.r, "t": args.t, "w": args.w, "m": m,
        "parity_seed": parity_seed,
        "girth_above_4": graph.has_girth_above_4(),
        "graph": graph.to_dict(),
    }
    return artifact_from_composite(code, seed=args.seed, parameters=params)


CONSTRUCTORS = {
    "wzl": construct_wzl,
    "concat": construct_concat,
    "expander": construct_expander,
}


def cmd_construct(args) -> int:
    artifact = CONSTRUCTORS[args.subkind](args)
    _write_artifact(artifact, args.out)
    return EXIT_OK


# --- verify ---

def cmd_verify(args) -> int:
    artifact = load_artifact(args.code)
    code = to_linear(artifact)
    report = analysis.VerifyReport(kind=artifact.kind, n=artifact.n, k=artifact.k)

    if args.distance:
        report.distance = analysis.min_distance(code)
        report.distance_exact = True
        if not artifact.is_composite and artifact.d is not None and report.distance < artifact.d:
            report.passed = False

    if args.availability:
        r = args.r if args.r is not None else artifact.r
        t = args.t if args.t is not None else artifact.t
        if r is None or t is None:
            raise UsageError("availability check needs r and t (artifact or --r/--t)")
        report.availability = analysis.verify_availability(code, r, t)
        report.passed &= report.availability.passed

    if args.erasures is not None:
        if args.seed is None:
            raise UsageError("--erasures requires --seed")
        if artifact.is_composite:
            composite = to_composite(artifact)
            stats = analysis.erasure_monte_carlo(composite, args.erasures, args.trials, args.seed)
            if composite.kind == "concatenated":
                report.block_rank = analysis.block_rank_check(
                    composite.r, composite.t, args.erasures % composite.n_I, args.trials, args.seed
                )
        else:
            stats = analysis.linear_erasure_trials(code, args.erasures, args.trials, args.seed)
        report.erasures = stats
        report.passed &= stats.successes == stats.trials and stats.adversarial_success is not False

    emit_json(report)
    return EXIT_OK if report.passed else EXIT_FAILED


# --- shorten ---

class ShortenReport(BaseModel):
    result: shortening.ShorteningResult
    size_I: int
    closure: List[int]
    closure_size: int
    d: Optional[int] = None
    theorem2: Optional[shortening.Theorem2Bounds] = None
    table: List[shortening.BoundTableRow] = []


def cmd_shorten(args) -> int:
    artifact = load_artifact(args.code)
    code = to_linear(artifact)
    checks = shortening.enumerate_local_checks(code, args.r)
    result = shortening.algorithm1(checks, args.s, code.n, args.r, t=artifact.t)
    cl = shortening.closure(code, result.I)

    report = ShortenReport(result=result, size_I=len(result.I), closure=list(cl), closure_size=len(cl))
    if args.r >= 2 and code.k >= 1:
        d = artifact.d
        if d is None and analysis.distance_is_exact(code):
            d = analysis.min_distance(code)
        if d is not None:
            report.d = d
            report.theorem2 = shortening.theorem2_bounds(code.n, code.k, d, args.r)
            report.table = shortening.bound_table(code.n, code.k, d, args.r)
    emit_json(report)
    return EXIT_OK


# --- parser ---

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lrcavail", description="Locally recoverable codes with availability")
    parser.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="distance bounds for an (r, t) code")
    p.add_argument("--n", type=positive_int, required=True)
    p.add_argument("--k", type=positive_int, required=True)
    p.add_argument("--r", type=positive_int, required=True)
    p.add_argument("--t", type=positive_int, required=True)
    p.add_argument("--q", type=positive_int, default=2)
    p.add_argument("--d", type=positive_int, default=None, help="also evaluate the shortening bound on k")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("curves", help="asymptotic rate curves as CSV")
    p.add_argument("--r", type=positive_int, required=True)
    p.add_argument("--t", type=positive_int, required=True)
    p.add_argument("--grid", type=positive_int, default=200)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("construct", help="build a code artifact")
    p.add_argument("subkind", choices=sorted(CONSTRUCTORS))
    p.add_argument("--r", type=positive_int, required=True)
    p.add_argument("--t", type=positive_int, required=True)
    p.add_argument("--n", type=positive_int, help="expander: code length")
    p.add_argument("--w", type=positive_int, default=4, help="expander: base field GF(2^w)")
    p.add_argument("--m", type=positive_int, default=None, help="extension degree (default n_G)")
    p.add_argument("--k", type=positive_int, default=None, help="Gabidulin dimension")
    p.add_argument("--d", type=positive_int, default=None, help="concat: target distance")
    p.add_argument("--blocks", type=positive_int, default=1, help="concat: inner block count")
    p.add_argument("--max-tries", type=positive_int, default=DEFAULT_SAMPLER_TRIES)
    p.add_argument("--seed", type=nonnegative_int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check distance, availability and erasure decoding")
    p.add_argument("--code", required=True)
    p.add_argument("--distance", action="store_true")
    p.add_argument("--availability", action="store_true")
    p.add_argument("--erasures", type=nonnegative_int, default=None)
    p.add_argument("--trials", type=positive_int, default=DEFAULT_TRIALS)
    p.add_argument("--seed", type=nonnegative_int, default=None)
    p.add_argument("--r", type=positive_int, default=None)
    p.add_argument("--t", type=positive_int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("shorten", help="run the greedy shortening-set construction")
    p.add_argument("--code", required=True)
    p.add_argument("--r", type=positive_int, required=True)
    p.add_argument("--s", type=positive_int, required=True)
    p.set_defaults(func=cmd_shorten)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.command == "construct":
        if args.subkind == "expander" and args.n is None:
            print("error: construct expander requires --n", file=sys.stderr)
            return EXIT_USAGE
        if args.seed is None and args.subkind != "expander":
            args.seed = 0

    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LRCError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
