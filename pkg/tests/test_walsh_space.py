import cmath
import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cbcdbd import oracles
from cbcdbd.errors import (
    DegenerateInputError,
    InvalidParameterError,
    ResourceLimitError,
    UnsupportedBaseError,
)
from cbcdbd.field_poly import primitive_poly_f2
from cbcdbd.pointset import PolyLatticeRule
from cbcdbd.walsh_space import (
    ProductWeights,
    SpaceParams,
    char_sum,
    char_sums,
    delta_p,
    dual_box_set,
    log_series_partial,
    mu_b,
    phi_alpha,
    r_alpha,
    r_alpha_weighted,
    t_measure,
    trunc_gap_bound,
    walsh_eval,
    wce_product,
)


def rule(m, gens, modulus=None, b=2):
    return PolyLatticeRule.from_indices(b, m, gens, modulus)


class TestWeights:
    def test_positive_only(self):
        for bad in ([1.0, 0.0], [-1.0], [math.nan], [math.inf]):
            with pytest.raises(InvalidParameterError):
                ProductWeights(bad)

    def test_subset_weight(self):
        w = ProductWeights([0.5, 0.25, 2.0])
        assert w.subset_weight([]) == 1.0
        assert w.subset_weight({1, 3}) == 1.0
        assert w.gamma(2) == 0.25

    def test_head_too_long(self):
        with pytest.raises(InvalidParameterError):
            ProductWeights([1.0]).head(2)

    def test_space_params_alpha(self):
        with pytest.raises(InvalidParameterError):
            SpaceParams(1.0, ProductWeights([1.0]))


class TestWalshEval:
    def test_wal0(self):
        for u in range(8):
            assert walsh_eval(0, u, 3) == 1.0
            assert walsh_eval(0, u, 2, 3) == 1

    def test_half(self):
        assert walsh_eval(1, 1, 1) == -1.0

    def test_base3_third(self):
        assert cmath.isclose(walsh_eval(1, 1, 1, 3), cmath.exp(2j * math.pi / 3))

    @given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
    def test_character_multiplicative(self, k, h, u):
        # wal_k wal_h = wal_{k xor h} for b = 2
        assert walsh_eval(k, u, 8) * walsh_eval(h, u, 8) == walsh_eval(k ^ h, u, 8)


class TestDecay:
    def test_zero_vector(self):
        assert r_alpha_weighted((0, 0, 0), 2.0, ProductWeights([0.1, 0.2, 0.3])) == 1.0

    def test_examples(self):
        assert r_alpha_weighted((1,), 2.0, ProductWeights([0.25])) == 4.0
        assert r_alpha_weighted((5,), 2.0, ProductWeights([1.0])) == 16.0

    def test_exact_integer_log_at_powers(self):
        for a in range(0, 60):
            assert r_alpha(1 << a, 1.0) == 2.0**a
            assert r_alpha((1 << (a + 1)) - 1, 1.0) == 2.0**a
        assert r_alpha(3**20, 1.0, 3) == 3.0**20
        assert r_alpha(3**20 - 1, 1.0, 3) == 3.0**19

    def test_mu_examples(self):
        assert mu_b(2.0) == 2.0
        assert math.isclose(mu_b(3.0), 4 / 3)
        assert mu_b(2.0, 3) == 3.0

    @pytest.mark.parametrize("alpha", [1.0, 0.5])
    def test_mu_divergent(self, alpha):
        with pytest.raises(InvalidParameterError):
            mu_b(alpha)

    @pytest.mark.parametrize("alpha,b", [(1.5, 2), (2.0, 2), (3.0, 2), (2.0, 3), (1.7, 5)])
    def test_mu_partial_sums(self, alpha, b):
        # block a holds (b-1) b^a frequencies of size b^(alpha a); tail after A blocks is geometric
        A = 40
        partial = math.fsum((b - 1) * b**a * b ** (-alpha * a) for a in range(A))
        q = b ** (1 - alpha)
        tail = (b - 1) * q**A / (1 - q)
        assert abs(mu_b(alpha, b) - partial) <= tail * (1 + 1e-12)
        direct = math.fsum(1.0 / r_alpha(k, alpha, b) for k in range(1, b**6))
        assert direct < mu_b(alpha, b)


class TestPhi:
    def test_origin(self):
        for alpha in (1.5, 2.0, 3.0):
            assert phi_alpha(0, 5, alpha) == mu_b(alpha)

    def test_examples(self):
        assert phi_alpha(1, 1, 2.0) == -1.0
        assert phi_alpha(1, 2, 2.0) == 0.5
        assert phi_alpha(2, 2, 2.0) == -1.0

    def test_range(self):
        with pytest.raises(InvalidParameterError):
            phi_alpha(8, 3, 2.0)

    @pytest.mark.parametrize("alpha", [1.5, 2.0, 3.0])
    @pytest.mark.parametrize("m", [1, 2, 5, 10])
    def test_truncated_series(self, alpha, m):
        vals, tail = oracles.phi_series_oracle(m, alpha)
        exact = np.array([phi_alpha(u, m, alpha) for u in range(1 << m)])
        assert np.max(np.abs(vals - exact)) <= tail * (1 + 1e-9) + 1e-12


class TestWce:
    def test_exact_m1(self):
        assert abs(wce_product(rule(1, [1]), 2.0, ProductWeights([1.0])) - 0.5) <= 1e-12

    def test_zero_weights(self):
        assert wce_product(rule(4, [1, 3, 5]), 2.0, [0.0, 0.0, 0.0]) == 0.0

    def test_unsupported_base(self):
        with pytest.raises(UnsupportedBaseError):
            wce_product(rule(2, [1], b=3), 2.0, [1.0])

    def test_non_unit_component(self):
        with pytest.raises(DegenerateInputError):
            wce_product(rule(3, [1, 2]), 2.0, [1.0, 1.0])

    def test_alpha_must_exceed_one(self):
        with pytest.raises(InvalidParameterError):
            wce_product(rule(3, [1]), 1.0, [1.0])

    def test_negative_eval_weight(self):
        with pytest.raises(InvalidParameterError):
            wce_product(rule(3, [1]), 2.0, [-1.0])

    @given(st.integers(1, 8), st.lists(st.integers(0, 127), min_size=1, max_size=4),
           st.integers(1, 4), st.sampled_from([1.5, 2.0, 3.0]))
    def test_padding_invariance(self, m, raw, pad, alpha):
        gens = [(g % (1 << (m - 1))) * 2 + 1 if m > 1 else 1 for g in raw]
        extra = [1] * pad
        w = [0.7 ** (j + 1) for j in range(len(gens))]
        base = wce_product(rule(m, gens), alpha, w)
        padded = wce_product(rule(m, gens + extra), alpha, w + [0.0] * pad)
        assert base == padded

    @pytest.mark.parametrize("m", range(1, 6))
    @pytest.mark.parametrize("primitive", [False, True])
    def test_matches_dual_sum_oracle(self, m, primitive):
        rng = np.random.default_rng(m)
        p = primitive_poly_f2(m).index if primitive else None
        for _ in range(3):
            gens = [int(x) * 2 + 1 for x in rng.integers(0, 1 << (m - 1), 2)]
            w = ProductWeights(rng.uniform(0.1, 1.5, 2))
            r = rule(m, gens, p)
            for alpha in (1.5, 2.0, 3.0):
                e = wce_product(r, alpha, w)
                # the closed form subtracts 1 from a mean near 1, so rounding is absolute
                assert math.isclose(e, oracles.wce_dual_oracle(r, alpha, w), rel_tol=1e-12, abs_tol=1e-14)
                assert math.isclose(e, oracles.wce_points_oracle(r, alpha, w.gammas), rel_tol=1e-12, abs_tol=1e-14)

    def test_nonnegative(self):
        rng = np.random.default_rng(7)
        for m in range(1, 9):
            gens = [int(x) * 2 + 1 for x in rng.integers(0, 1 << max(m - 1, 0), 6)] if m > 1 else [1] * 6
            assert wce_product(rule(m, gens), 1.5, [0.5] * 6) >= 0.0


class TestDualBox:
    def test_examples(self):
        assert dual_box_set(rule(2, [1])) == {(0,)}
        assert dual_box_set(rule(1, [1, 1])) == {(0, 0), (1, 1)}
        assert dual_box_set(rule(1, [1])) == {(0,)}

    def test_guard(self):
        with pytest.raises(ResourceLimitError):
            dual_box_set(rule(9, [1, 3, 5]))

    @pytest.mark.parametrize("b,m", [(2, 3), (3, 2)])
    def test_matches_polynomial_arithmetic(self, b, m):
        units = [g for g in range(1, b**m) if g % b]
        for gens in itertools.product(units[:4], repeat=2):
            r = rule(m, list(gens), b=b)
            want = {k for k in itertools.product(range(b**m), repeat=2) if oracles.dual_member_direct(r, k)}
            assert dual_box_set(r) == want
            # a subgroup of index b^m in the box of size b^(2m)
            assert len(want) == b**m

    def test_primitive_modulus(self):
        r = rule(3, [1, 5], primitive_poly_f2(3).index)
        want = {k for k in itertools.product(range(8), repeat=2) if oracles.dual_member_direct(r, k)}
        assert dual_box_set(r) == want

    def test_delta(self):
        from cbcdbd.field_poly import Poly

        assert delta_p(Poly(2, 0b110), Poly(2, 0b11)) == 1
        assert delta_p(Poly(2, 0b111), Poly(2, 0b11)) == 0


class TestTMeasure:
    def test_examples(self):
        w = ProductWeights([0.3])
        assert t_measure(rule(2, [1]), w, 1.0) == 0.0
        assert t_measure(rule(2, [1]), w, 2.0) == 0.0
        r = rule(1, [1, 1])
        assert t_measure(r, ProductWeights([1.0, 1.0]), 1.0) == 1.0
        assert t_measure(r, ProductWeights([1.0, 1.0]), 2.0) == 1.0

    def test_base3_matches_generic_definition(self):
        r = rule(2, [1, 4], b=3)
        w = ProductWeights([0.5, 0.8])
        want = sum(1.0 / r_alpha_weighted(k, 1.0, w, 3) for k in dual_box_set(r) if any(k))
        assert math.isclose(t_measure(r, w, 1.0), want)

    def test_base2_vectorised_matches_definition(self):
        r = rule(4, [1, 11], primitive_poly_f2(4).index)
        w = ProductWeights([0.5, 0.8])
        for alpha in (1.0, 2.0):
            want = math.fsum(1.0 / r_alpha_weighted(k, alpha, w) for k in dual_box_set(r) if any(k))
            assert math.isclose(t_measure(r, w, alpha), want, rel_tol=1e-13)

    @pytest.mark.parametrize("m", [1, 2, 3])
    @pytest.mark.parametrize("d", [1, 2])
    def test_sandwich(self, m, d):
        rng = np.random.default_rng(10 * m + d)
        for _ in range(6):
            gens = [int(x) * 2 + 1 for x in rng.integers(0, 1 << (m - 1), d)]
            w = ProductWeights(rng.uniform(0.05, 2.0, d))
            r = rule(m, gens)
            for alpha in (1.5, 2.0, 3.0):
                e = wce_product(r, alpha, w)
                t = t_measure(r, w, alpha)
                gap = trunc_gap_bound(alpha, w, d, 1 << m)
                assert t <= e * (1 + 1e-12)
                assert e <= (t + gap) * (1 + 1e-12)


class TestCharSum:
    def test_examples(self):
        assert char_sum(rule(2, [1]), [4]) == 1.0
        assert char_sum(rule(2, [1]), [1]) == 0.0
        assert char_sum(rule(1, [1, 1]), [1, 1]) == 1.0

    def test_length_mismatch(self):
        with pytest.raises(InvalidParameterError):
            char_sum(rule(2, [1, 3]), [1])

    @pytest.mark.parametrize("b", [2, 3])
    @pytest.mark.parametrize("m", [1, 2, 3])
    @pytest.mark.parametrize("d", [1, 2])
    def test_indicator_exhaustive(self, b, m, d):
        units = [g for g in range(1, b**m) if g % b]
        pick = units if len(units) <= 3 else [units[0], units[len(units) // 2], units[-1]]
        ks = np.array(list(itertools.product(range(b ** (2 * m)), repeat=d)), dtype=np.int64)
        for gens in itertools.product(pick, repeat=d):
            r = rule(m, list(gens), b=b)
            # truncation reads only k mod b^m, so membership is tabulated on residues
            size = b**m
            table = np.zeros((size,) * d)
            for res in itertools.product(range(size), repeat=d):
                table[res] = 1.0 if oracles.dual_member_direct(r, res) else 0.0
            want = table[tuple((ks % size).T)]
            assert np.max(np.abs(char_sums(r, ks) - want)) < 1e-9

    def test_batch_matches_single(self):
        r = rule(2, [1, 5], b=3)
        ks = [[0, 0], [1, 2], [9, 4], [80, 17]]
        assert np.allclose(char_sums(r, ks), [char_sum(r, k) for k in ks])

    def test_base2_matches_walsh_eval(self):
        r = rule(3, [1, 5], primitive_poly_f2(3).index)
        from cbcdbd.pointset import generate_points

        pts = generate_points(r).numerators
        for k in itertools.product(range(16), repeat=2):
            direct = sum(walsh_eval(k[0], int(a), 3) * walsh_eval(k[1], int(c), 3) for a, c in pts) / 8
            assert char_sum(r, list(k)) == direct


class TestLogSeries:
    def test_examples(self):
        assert log_series_partial(1, 1, 4) == 0.0
        assert log_series_partial(1, 2, 4) == 1.0
        assert log_series_partial(1, 1, 2) == 0.0

    def test_zero_rejected(self):
        with pytest.raises(DegenerateInputError):
            log_series_partial(0, 3, 8)

    def test_remainder_bound_strict(self):
        prec = 10
        for mp in range(0, 11):
            n = 1 << mp
            for u in range(1, 1 << prec):
                target = -((u.bit_length() - 1 - prec) + 1)
                rem = abs(log_series_partial(u, prec, n) - target)
                assert rem < oracles.log_remainder_bound(u, prec, n)

    def test_base3_matches_direct(self):
        direct = sum((walsh_eval(k, 4, 2, 3) / r_alpha(k, 1.0, 3)).real for k in range(27))
        assert math.isclose(log_series_partial(4, 2, 27, 3), direct)


class TestGapBound:
    def test_examples(self):
        assert trunc_gap_bound(2.0, ProductWeights([1.0]), 1, 4) == 0.25
        assert trunc_gap_bound(2.0, ProductWeights([1.0, 1.0]), 2, 4) == 1.5
        assert trunc_gap_bound(2.0, ProductWeights([]), 0, 4) == 0.0
