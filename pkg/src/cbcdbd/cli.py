"""Command-line interface: ``cbcdbd <subcommand> ...`` or ``python3 -m cbcdbd``.

Exit status: 0 success, 1 failed self-check, 2 usage or parse error,
3 problem size refused by a resource guard.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
import time
from pathlib import Path
from typing import Sequence

from .cbc_baseline import MAX_M_NAIVE, construct_cbc_naive, modulus_for
from .cbc_dbd import construct_fast, construct_reference
from .errors import CBCDBDError, ParseError, ResourceLimitError
from .io import dump_vector, format_float, load_vector, write_table
from .pointset import generate_points
from .selfcheck import format_report, run_self_check
from .walsh_space import ProductWeights, wce_product

__all__ = ["main", "parse_weight_spec", "run_convergence_study", "run_benchmark", "build_parser"]

_SPEC_RE = re.compile(r"^(poly|geom|list):(.*)$")


def parse_weight_spec(spec: str, d: int) -> ProductWeights:
    """``poly:c`` gives ``j^-c``, ``geom:q`` gives ``q^j``, ``list:a,b,...`` is taken verbatim."""
    match = _SPEC_RE.match(spec.strip())
    if not match:
        raise ParseError(f"weight spec {spec!r} must be poly:<c>, geom:<q> or list:<values>", position=0)
    kind, body = match.groups()
    offset = len(kind) + 1
    if kind == "list":
        values, pos = [], offset
        for tok in body.split(","):
            try:
                v = float(tok)
            except ValueError:
                raise ParseError(f"not a number: {tok!r}", position=pos) from None
            if not (v > 0 and math.isfinite(v)):
                raise ParseError(f"weights must be positive, got {tok!r}", position=pos)
            values.append(v)
            pos += len(tok) + 1
        if len(values) < d:
            raise ParseError(f"list has {len(values)} weights, need {d}", position=len(spec))
        return ProductWeights(values[:d])
    try:
        c = float(body)
    except ValueError:
        raise ParseError(f"not a number: {body!r}", position=offset) from None
    if kind == "poly":
        if not (c > 0 and math.isfinite(c)):
            raise ParseError("poly exponent must be positive", position=offset)
        return ProductWeights(j ** (-c) for j in range(1, d + 1))
    if not 0 < c < 1:
        raise ParseError("geom ratio must lie in (0, 1)", position=offset)
    return ProductWeights(c**j for j in range(1, d + 1))


def _eval_weights(gamma: ProductWeights, alpha: float, power: bool) -> ProductWeights:
    return gamma.power(alpha) if power else gamma


def run_convergence_study(
    m_range: Sequence[int],
    d: int,
    alphas: Sequence[float],
    construction_weights: str,
    eval_weight_power: bool = True,
) -> list[list]:
    """Rows ``[m, N, alpha, error]``; one construction per ``m`` shared by all ``alpha``."""
    gamma = parse_weight_spec(construction_weights, d)
    rows = []
    for m in m_range:
        rule = construct_fast(m, d, gamma).rule()
        for alpha in alphas:
            e = wce_product(rule, alpha, _eval_weights(gamma, alpha, eval_weight_power))
            rows.append([m, 2**m, float(alpha), e])
    return rows


def run_benchmark(
    m_list: Sequence[int],
    d_list: Sequence[int],
    weights: str = "poly:2",
    repeats: int = 3,
) -> list[list]:
    """Rows ``[m, d, seconds]``: best wall time of ``repeats`` fast constructions."""
    construct_fast(2, 2, [1.0, 1.0])  # compile outside the timed region
    rows = []
    for m in m_list:
        for d in d_list:
            eta = parse_weight_spec(weights, d)
            best = math.inf
            for _ in range(repeats):
                t0 = time.perf_counter()
                construct_fast(m, d, eta)
                best = min(best, time.perf_counter() - t0)
            rows.append([m, d, best])
    return rows


def run_compare(
    m_range: Sequence[int],
    d: int,
    alphas: Sequence[float],
    construction_weights: str,
    eval_weight_power: bool,
    modulus_kind: str,
) -> list[list]:
    """Rows ``[m, N, alpha, dbd_error, cbc_error]``."""
    gamma = parse_weight_spec(construction_weights, d)
    rows = []
    for m in m_range:
        if m > MAX_M_NAIVE:
            raise ResourceLimitError(f"naive CBC comparison is limited to m <= {MAX_M_NAIVE}")
        dbd = construct_fast(m, d, gamma).rule()
        p = modulus_for(m, modulus_kind)
        for alpha in alphas:
            ew = _eval_weights(gamma, alpha, eval_weight_power)
            cbc = construct_cbc_naive(m, d, alpha, ew, modulus_kind).rule(p)
            rows.append([m, 2**m, float(alpha), wce_product(dbd, alpha, ew), wce_product(cbc, alpha, ew)])
    return rows


# ---------------------------------------------------------------------------


def _m_range(text: str) -> range:
    match = re.fullmatch(r"(\d+):(\d+)", text)
    if not match:
        raise argparse.ArgumentTypeError("expected lo:hi")
    lo, hi = int(match.group(1)), int(match.group(2))
    if not 1 <= lo <= hi:
        raise argparse.ArgumentTypeError("need 1 <= lo <= hi")
    return range(lo, hi + 1)


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="write output here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--threads", type=_positive_int, default=1)
    common.add_argument("--seed", default=None, help=argparse.SUPPRESS)

    wts = argparse.ArgumentParser(add_help=False)
    wts.add_argument("--weights", default="poly:2", help="poly:<c> | geom:<q> | list:<v1,v2,...>")
    wts.add_argument("--eval-weight-power", action="store_true",
                     help="evaluate with gamma_j^alpha instead of gamma_j")

    parser = argparse.ArgumentParser(prog="cbcdbd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("construct", parents=[common, wts], help="build a generating vector")
    p.add_argument("--b", type=int, default=2)
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--method", choices=("dbd", "naive"), default="dbd")
    p.add_argument("--alpha", type=float, action="append", help="smoothness for --method naive")
    p.add_argument("--modulus", choices=("power", "primitive"), default="power")

    p = sub.add_parser("error", parents=[common, wts], help="worst-case error of a vector file")
    p.add_argument("--vector", type=Path, required=True)
    p.add_argument("--alpha", type=float, action="append", required=True)

    p = sub.add_parser("convergence", parents=[common, wts], help="error versus N for a range of m")
    p.add_argument("--m-range", type=_m_range, required=True)
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--alpha", type=float, action="append", required=True)

    p = sub.add_parser("compare", parents=[common, wts], help="CBC-DBD against naive CBC")
    p.add_argument("--m-range", type=_m_range, required=True)
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--alpha", type=float, action="append", required=True)
    p.add_argument("--modulus", choices=("power", "primitive"), default="power")

    p = sub.add_parser("bench", parents=[common, wts], help="best-of-three construction times")
    p.add_argument("--m", type=_positive_int, action="append", required=True)
    p.add_argument("--d", type=_positive_int, action="append", required=True)

    p = sub.add_parser("check", parents=[common], help="run oracle and bound checks")
    p.add_argument("--level", choices=("quick", "full"), default="quick")

    p = sub.add_parser("points", parents=[common], help="export the points of a vector file")
    p.add_argument("--vector", type=Path, required=True)
    p.add_argument("--as", dest="style", choices=("fraction", "decimal"), default="fraction")
    return parser


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _check_alphas(parser, alphas):
    for a in alphas or ():
        if not a > 1:
            parser.error(f"--alpha must exceed 1, got {a}")


def _dispatch(args, parser) -> int:
    cmd = args.cmd
    if cmd == "construct":
        gamma = parse_weight_spec(args.weights, args.d)
        if args.method == "naive":
            if args.b != 2 or not args.alpha or len(args.alpha) != 1:
                parser.error("--method naive needs --b 2 and exactly one --alpha")
            _check_alphas(parser, args.alpha)
            ew = _eval_weights(gamma, args.alpha[0], args.eval_weight_power)
            gv = construct_cbc_naive(args.m, args.d, args.alpha[0], ew, args.modulus)
            meta = {"method": "naive", "weights": args.weights, "alpha": format_float(args.alpha[0])}
            _emit(dump_vector(gv, meta, modulus_for(args.m, args.modulus)), args.out)
            return 0
        if args.modulus != "power":
            parser.error("the digit-by-digit construction targets the modulus x^m")
        gv = construct_fast(args.m, args.d, gamma) if args.b == 2 else construct_reference(args.b, args.m, args.d, gamma)
        _emit(dump_vector(gv, {"method": "dbd", "weights": args.weights}), args.out)
        return 0

    if cmd == "error":
        _check_alphas(parser, args.alpha)
        gv, _, modulus = load_vector(args.vector.read_text())
        gamma = parse_weight_spec(args.weights, gv.d)
        rule = gv.rule(modulus)
        rows = [
            [gv.m, gv.b**gv.m, float(a), wce_product(rule, a, _eval_weights(gamma, a, args.eval_weight_power))]
            for a in args.alpha
        ]
        _emit(write_table(rows, ["m", "N", "alpha", "error"], args.format), args.out)
        return 0

    if cmd == "convergence":
        _check_alphas(parser, args.alpha)
        rows = run_convergence_study(args.m_range, args.d, args.alpha, args.weights, args.eval_weight_power)
        _emit(write_table(rows, ["m", "N", "alpha", "error"], args.format), args.out)
        return 0

    if cmd == "compare":
        _check_alphas(parser, args.alpha)
        rows = run_compare(args.m_range, args.d, args.alpha, args.weights, args.eval_weight_power, args.modulus)
        _emit(write_table(rows, ["m", "N", "alpha", "dbd_error", "cbc_error"], args.format), args.out)
        return 0

    if cmd == "bench":
        rows = run_benchmark(args.m, args.d, args.weights)
        _emit(write_table(rows, ["m", "d", "seconds"], args.format), args.out)
        return 0

    if cmd == "check":
        results = run_self_check(args.level)
        if args.format == "json":
            rows = [[r.name, "pass" if r.passed else "fail", r.detail, r.seconds] for r in results]
            _emit(write_table(rows, ["check", "status", "detail", "seconds"], "json"), args.out)
        else:
            _emit(format_report(results) + "\n", args.out)
        return 0 if all(r.passed for r in results) else 1

    if cmd == "points":
        gv, _, modulus = load_vector(args.vector.read_text())
        pts = generate_points(gv.rule(modulus), threads=args.threads)
        denom = gv.b**gv.m
        header = ["n"] + [f"x{j}" for j in range(1, gv.d + 1)]
        if args.style == "fraction":
            rows = [[n] + [f"{u}/{denom}" for u in row] for n, row in enumerate(pts.numerators.tolist())]
        else:
            rows = [[n] + [u / denom for u in row] for n, row in enumerate(pts.numerators.tolist())]
        _emit(write_table(rows, header, args.format), args.out)
        return 0

    raise AssertionError(cmd)  # pragma: no cover


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is not None:
        parser.error("--seed is reserved: every computation here is deterministic")
    try:
        return _dispatch(args, parser)
    except ResourceLimitError as exc:
        print(f"cbcdbd: {exc}", file=sys.stderr)
        return 3
    except (CBCDBDError, OSError) as exc:
        print(f"cbcdbd: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
