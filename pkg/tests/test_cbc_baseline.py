import numpy as np
import pytest

from cbcdbd import oracles
from cbcdbd.cbc_baseline import MAX_M_NAIVE, candidates_for, construct_cbc_naive, modulus_for
from cbcdbd.errors import InvalidParameterError, ResourceLimitError
from cbcdbd.field_poly import gf2_mod, primitive_poly_f2
from cbcdbd.pointset import PolyLatticeRule
from cbcdbd.walsh_space import ProductWeights, wce_product

W4 = ProductWeights([1.0, 0.5, 0.3, 0.2])


def _rule(m, gens, kind):
    return PolyLatticeRule.from_indices(2, m, gens, modulus_for(m, kind).index)


@pytest.mark.parametrize("m", [1, 2, 5, 9])
def test_first_component_is_one(m):
    assert construct_cbc_naive(m, 1, 2.0, ProductWeights([0.7])).indices() == [1]


def test_two_dimensional_example():
    gv, errs = construct_cbc_naive(2, 2, 2.0, ProductWeights([1.0, 1.0]), return_errors=True)
    assert gv.indices() == [1, 3]
    assert errs[1] == pytest.approx(1.25, abs=1e-14)
    assert wce_product(_rule(2, [1, 1], "power"), 2.0, [1.0, 1.0]) == pytest.approx(1.8125, abs=1e-14)


def test_primitive_example_matches_exhaustive_search():
    wts = ProductWeights([1.0, 1.0])
    got = construct_cbc_naive(2, 2, 2.0, wts, "primitive").indices()
    errs = {c: oracles.wce_points_oracle(_rule(2, [1, c], "primitive"), 2.0, [1.0, 1.0]) for c in (1, 3)}
    best = min(errs, key=lambda c: (errs[c], c))
    assert got == [1, best]


def test_candidates_are_units():
    for m in range(1, 9):
        c = candidates_for(m, "primitive")
        assert c.tolist() == list(range(1, 1 << m, 2))
        p = primitive_poly_f2(m).index
        # a unit mod an irreducible p has nonzero residue
        assert all(gf2_mod(int(g), p) != 0 for g in c)


@pytest.mark.parametrize("kind", ["power", "primitive"])
@pytest.mark.parametrize("m", range(1, 7))
def test_greedy_optimal_each_step(m, kind):
    for alpha in (1.5, 2.0):
        gv = construct_cbc_naive(m, 4, alpha, W4, kind)
        prefix = []
        for r, g in enumerate(gv.indices()):
            gam = W4.gammas[: r + 1]
            errs = {c: oracles.wce_points_oracle(_rule(m, prefix + [c], kind), alpha, gam)
                    for c in range(1, 1 << m, 2)}
            best = min(errs.values())
            assert errs[g] <= best + 1e-13 * abs(best) + 1e-15
            # ties resolved toward the smallest encoding
            assert g == min(c for c, e in errs.items() if e <= errs[g])
            prefix.append(g)


@pytest.mark.parametrize("kind", ["power", "primitive"])
@pytest.mark.parametrize("m", [3, 7, 10])
def test_cached_errors_match_fresh_evaluation(m, kind):
    wts = ProductWeights([j**-2.0 for j in range(1, 7)])
    gv, errs = construct_cbc_naive(m, 6, 1.5, wts, kind, return_errors=True)
    for r in range(1, 7):
        fresh = wce_product(_rule(m, gv.indices()[:r], kind), 1.5, wts.gammas[:r])
        assert errs[r - 1] == pytest.approx(fresh, rel=1e-13, abs=1e-15)


def test_errors_decrease_with_m():
    wts = ProductWeights([j**-2.0 for j in range(1, 6)])
    prev = np.inf
    for m in range(2, 11):
        gv, errs = construct_cbc_naive(m, 5, 2.0, wts, return_errors=True)
        assert errs[-1] < prev
        prev = errs[-1]


def test_resource_limit():
    with pytest.raises(ResourceLimitError):
        construct_cbc_naive(MAX_M_NAIVE + 1, 2, 2.0, ProductWeights([1.0, 1.0]))


@pytest.mark.parametrize("kw", [{"alpha": 1.0}, {"alpha": 0.5}, {"modulus_kind": "other"}])
def test_invalid_arguments(kw):
    args = {"m": 3, "d": 2, "alpha": 2.0, "weights": ProductWeights([1.0, 1.0])}
    args.update(kw)
    with pytest.raises(InvalidParameterError):
        construct_cbc_naive(**args)


def test_deterministic():
    wts = ProductWeights([0.9**j for j in range(1, 9)])
    assert construct_cbc_naive(9, 8, 1.5, wts) == construct_cbc_naive(9, 8, 1.5, wts)
