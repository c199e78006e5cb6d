"""Oracle and bound checks runnable from the command line.

``run_self_check("quick")`` uses reduced exhaustive ranges and finishes in
seconds; ``"full"`` widens them (exhaustive scans up to ``m = 12``).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import oracles
from .cbc_baseline import construct_cbc_naive
from .cbc_dbd import ConstructionState, GeneratingVector, construct_fast, construct_reference, h_direct, h_quantity
from .field_poly import Poly, laurent_numerator, primitive_poly_f2
from .pointset import PolyLatticeRule, generate_points
from .walsh_space import (
    ProductWeights,
    char_sums,
    log_series_partial,
    phi_table,
    t_measure,
    trunc_gap_bound,
    wce_product,
)

__all__ = ["CheckResult", "run_self_check", "format_report"]

_RNG_SEED = 20240611


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _laurent_division(full):
    top = 8 if full else 6
    for m in range(1, top + 1):
        for p in (1 << m, primitive_poly_f2(m).index):
            for q in range(1 << m):
                got = laurent_numerator(Poly(2, q), Poly(2, p), m)
                if got != oracles.laurent_by_division(q, p, m):
                    return False, f"m={m} p={p} q={q}"
    return True, f"m<={top}, both moduli"


def _init_identity(full):
    top = 12 if full else 8
    for m in range(1, top + 1):
        for t in range(1, m + 1):
            for ell in range(1, 1 << t, 2):
                if (ell << (m - t)).bit_length() - m != ell.bit_length() - t:
                    return False, f"m={m} t={t} l={ell}"
    return True, f"m<={top}"


def _staging(full):
    rng = np.random.default_rng(_RNG_SEED)
    top = 10 if full else 6
    for m in range(2, top + 1):
        d = 4
        eta = rng.uniform(0.05, 1.5, d)
        st = ConstructionState(m, d, ProductWeights(eta))
        while not st.finished:
            r, w = st.r, st.w
            gens = st.components + [st.prefix]
            for t in range(1, m + 1):
                k = r if t < w else r - 1
                for ell in range(1, 1 << t, 2):
                    want = oracles.state_entry_direct(m, t, ell, eta[:k], gens[:k])
                    if abs(st.entry(t, ell) - want) > 1e-12 * abs(want):
                        return False, f"m={m} r={r} w={w} t={t} l={ell}"
            st.step()
    return True, f"2<=m<={top}, d=4"


def _fast_vs_direct(full):
    rng = np.random.default_rng(_RNG_SEED + 1)
    top, dmax = (10, 8) if full else (7, 5)
    worst = 0.0
    for m in range(2, top + 1):
        d = int(rng.integers(2, dmax + 1))
        eta = rng.uniform(0.05, 2.0, d)
        st = ConstructionState(m, d, ProductWeights(eta))
        while not st.finished:
            w = st.w
            for g in (0, 1):
                q = st.candidate(g)
                hf = st.h_fast(w, q)
                hd = h_direct(2, m, st.r, w, eta, [Poly(2, c) for c in st.components], Poly(2, q))
                worst = max(worst, abs(hf - hd) / abs(hd))
            st.step()
    return worst <= 1e-12, f"max relative gap {worst:.3g}"


def _reference_equals_fast(full):
    rng = np.random.default_rng(_RNG_SEED + 2)
    top, dmax = (8, 5) if full else (6, 4)
    for m in range(1, top + 1):
        for d in range(1, dmax + 1):
            eta = rng.uniform(0.05, 2.0, d)
            a = construct_reference(2, m, d, eta).indices()
            b = construct_fast(m, d, eta).indices()
            if a != b:
                return False, f"m={m} d={d}: {a} vs {b}"
    return True, f"m<={top}, d<={dmax}"


def _char_property(full):
    import itertools

    worst = 0.0
    for b in (2, 3):
        for m in range(1, 4 if (full or b == 2) else 3):
            units = [g for g in range(1, b**m) if g % b]
            ks = np.array(list(itertools.product(range(b ** (m + 1)), repeat=2)), dtype=np.int64)
            for gens in itertools.product(units[:3], repeat=2):
                rule = PolyLatticeRule.from_indices(b, m, list(gens))
                want = np.array([1.0 if oracles.dual_member_direct(rule, k) else 0.0 for k in ks])
                worst = max(worst, float(np.max(np.abs(char_sums(rule, ks) - want))))
    return worst <= 1e-9, f"max deviation {worst:.3g}"


def _phi_series(full):
    top = 10 if full else 6
    for alpha in (1.5, 2.0, 3.0):
        for m in range(1, top + 1):
            vals, tail = oracles.phi_series_oracle(m, alpha)
            tab = phi_table(m, alpha)
            exact = np.array([tab[u.bit_length()] for u in range(1 << m)])
            gap = float(np.max(np.abs(vals - exact)))
            if gap > tail * (1 + 1e-9) + 1e-12:
                return False, f"alpha={alpha} m={m} gap {gap:.3g} > tail {tail:.3g}"
    return True, f"m<={top}, alpha in 1.5, 2, 3"


def _wce_dual(full):
    rng = np.random.default_rng(_RNG_SEED + 3)
    worst = 0.0
    cases = [(1, 1, [1])]
    for m in range(1, 6 if full else 4):
        for _ in range(3):
            cases.append((m, 2, [int(x) for x in rng.integers(0, 1 << (m - 1), 2) * 2 + 1]))
    for m, d, gens in cases:
        for alpha in (1.5, 2.0):
            wts = ProductWeights(rng.uniform(0.1, 1.0, d))
            rule = PolyLatticeRule.from_indices(2, m, gens)
            e = wce_product(rule, alpha, wts)
            o = oracles.wce_dual_oracle(rule, alpha, wts)
            # rounding of -1 + mean is absolute, of order 1e-16
            worst = max(worst, abs(e - o) / (abs(o) + 1e-2))
    exact = wce_product(PolyLatticeRule.from_indices(2, 1, [1]), 2.0, [1.0])
    ok = worst <= 1e-12 and abs(exact - 0.5) <= 1e-12
    return ok, f"max gap relative to |e| + 0.01: {worst:.3g}; m=1 value {exact!r}"


def _sandwich(full):
    rng = np.random.default_rng(_RNG_SEED + 4)
    count = 0
    for m in range(1, 4):
        for d in (1, 2):
            for _ in range(4):
                gens = [int(x) * 2 + 1 for x in rng.integers(0, 1 << (m - 1), d)]
                wts = ProductWeights(rng.uniform(0.1, 1.0, d))
                for alpha in (1.5, 2.0, 3.0):
                    rule = PolyLatticeRule.from_indices(2, m, gens)
                    e = wce_product(rule, alpha, wts)
                    t = t_measure(rule, wts, alpha)
                    gap = trunc_gap_bound(alpha, wts, d, 1 << m)
                    if not (t <= e * (1 + 1e-12) and e <= (t + gap) * (1 + 1e-12)):
                        return False, f"m={m} gens={gens} alpha={alpha}: {t} {e} {gap}"
                    count += 1
    return True, f"{count} cases"


def _weight_families(d):
    return {
        "poly:2": [j**-2.0 for j in range(1, d + 1)],
        "poly:1": [1.0 / j for j in range(1, d + 1)],
        "geom:0.9": [0.9**j for j in range(1, d + 1)],
        "const:0.5": [0.5] * d,
    }


def _h_bound(full):
    top = 12 if full else 8
    count = 0
    for m in range(1, top + 1):
        for name, eta in _weight_families(20).items():
            gv = construct_fast(m, 20, eta)
            for d in (1, 2, 5, 20):
                sub = GeneratingVector(2, m, gv.components[:d])
                h = h_quantity(sub, eta[:d])
                bound = oracles.h_upper_bound(2, m, eta[:d])
                if h > bound * (1 + 1e-12):
                    return False, f"m={m} {name} d={d}: {h} > {bound}"
                count += 1
    return True, f"{count} cases, m<={top}, d<=20"


def _t_bound(full):
    top = 8 if full else 6
    count = 0
    for m in range(4, top + 1):
        for name, eta in _weight_families(3).items():
            for d in (1, 2, 3):
                if 2 ** (m * d) > (1 << 24):
                    continue
                gv = construct_fast(m, d, eta)
                t = t_measure(gv.rule(), ProductWeights(eta[:d]), 1.0)
                bound = oracles.t_upper_bound(2, m, eta[:d])
                if t > bound:
                    return False, f"m={m} {name} d={d}: {t} > {bound}"
                count += 1
    return True, f"{count} cases, 4<=m<={top}"


def _recursion(full):
    top = 10 if full else 7
    count = 0
    for m in range(1, top + 1):
        for name, eta in _weight_families(10).items():
            gv = construct_fast(m, 10, eta)
            prev = h_quantity(GeneratingVector(2, m, gv.components[:1]), eta[:1])
            for d in range(2, 11):
                cur = h_quantity(GeneratingVector(2, m, gv.components[:d]), eta[:d])
                rhs = (1 + eta[d - 1]) * prev + eta[d - 1] * (2**m - 1)
                if cur > rhs * (1 + 1e-12) + 1e-12:
                    return False, f"m={m} {name} d={d}: {cur} > {rhs}"
                prev = cur
                count += 1
    return True, f"{count} cases, d=2..10"


def _monotone_selection(full):
    m, d = (12, 10) if full else (8, 6)
    for name, eta in _weight_families(d).items():
        st = ConstructionState(m, d, ProductWeights(eta))
        while not st.finished:
            w = st.w
            h0, h1 = st.step()
            chosen = st.components[-1] if w == m else st.prefix
            bit = (chosen >> (w - 1)) & 1
            kept, rejected = (h1, h0) if bit else (h0, h1)
            if kept > rejected or (h0 == h1 and bit):
                return False, f"{name} w={w}: h0={h0} h1={h1} picked {bit}"
    return True, f"m={m}, d={d}"


def _log_remainder(full):
    prec = 10
    n_list = (1 << 10, 1 << 12) if full else (1 << 10,)
    count = 0
    for n_terms in n_list:
        for u in range(1, 1 << prec):
            x = u / 2.0**prec
            target = -(np.floor(np.log2(x)) + 1)
            rem = abs(log_series_partial(u, prec, n_terms) - target)
            if not rem < oracles.log_remainder_bound(u, prec, n_terms):
                return False, f"u={u} N={n_terms}"
            count += 1
    return True, f"{count} dyadic points"


def _full_grid(full):
    top = 6
    for m in range(1, top + 1):
        for p in (1 << m, primitive_poly_f2(m).index):
            for g in range(1, 1 << m):
                if p == 1 << m and g % 2 == 0:
                    continue
                col = generate_points(PolyLatticeRule.from_indices(2, m, [g], p)).column(1)
                if not np.array_equal(np.sort(col), np.arange(1 << m)):
                    return False, f"m={m} p={p} g={g}"
    return True, f"m<={top}, both moduli"


def _naive_greedy(full):
    import itertools

    top = 6 if full else 4
    for m in range(1, top + 1):
        for kind in ("power", "primitive"):
            wts = ProductWeights([1.0, 0.5, 0.3, 0.2])
            p = 1 << m if kind == "power" else primitive_poly_f2(m).index
            gv = construct_cbc_naive(m, 4, 2.0, wts, kind)
            got = gv.indices()
            prefix: list[int] = []
            for r in range(4):
                best, best_e = None, None
                for c in range(1, 1 << m, 2):
                    rule = PolyLatticeRule.from_indices(2, m, prefix + [c], p)
                    e = oracles.wce_points_oracle(rule, 2.0, wts.gammas[: r + 1])
                    if best_e is None or e < best_e - 1e-13 * abs(best_e):
                        best, best_e = c, e
                rule = PolyLatticeRule.from_indices(2, m, prefix + [got[r]], p)
                mine = oracles.wce_points_oracle(rule, 2.0, wts.gammas[: r + 1])
                if mine > best_e + 1e-13 * abs(best_e):
                    return False, f"m={m} {kind} r={r + 1}: {got[r]} vs {best}"
                prefix.append(got[r])
    return True, f"m<={top}, d=4"


_CHECKS: list[tuple[str, Callable[[bool], tuple[bool, str]]]] = [
    ("laurent digits equal polynomial long division", _laurent_division),
    ("single init loop seeds every level", _init_identity),
    ("state vector entries match direct running products", _staging),
    ("fast quality function equals literal double sum", _fast_vs_direct),
    ("reference and fast constructions agree", _reference_equals_fast),
    ("character sums equal dual-net indicator", _char_property),
    ("kernel equals truncated Walsh series within tail", _phi_series),
    ("closed-form error equals dual-net sum", _wce_dual),
    ("dual measure sandwiches the error", _sandwich),
    ("H quantity bound on constructed vectors", _h_bound),
    ("dual measure bound on constructed vectors", _t_bound),
    ("H quantity recursion inequality", _recursion),
    ("chosen digit never has the larger quality value", _monotone_selection),
    ("log series remainder bound on dyadic points", _log_remainder),
    ("one-dimensional projections are the full grid", _full_grid),
    ("naive CBC picks a per-step minimiser", _naive_greedy),
]


def run_self_check(level: str = "quick") -> list[CheckResult]:
    if level not in ("quick", "full"):
        raise ValueError("level must be 'quick' or 'full'")
    full = level == "full"
    out = []
    for name, fn in _CHECKS:
        t0 = time.perf_counter()
        try:
            ok, detail = fn(full)
        except Exception as exc:  # a crash is a failed check, not an aborted report
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(ok), detail, time.perf_counter() - t0))
    return out


def format_report(results: list[CheckResult]) -> str:
    lines = [
        f"{'PASS' if r.passed else 'FAIL'}  {r.name}  [{r.detail}]  ({r.seconds:.2f}s)"
        for r in results
    ]
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines)
