import itertools
import json
import math
from functools import lru_cache

import numpy as np
import pytest

from stability_lab import corpus
from stability_lab.fourier_core import BooleanFunction, cube_points, level1_weight
from stability_lab.halfspace_bool import (CorrelationResult, HalfSpace, construct_level1_halfspace,
                                          covariance_with_halfspace, exact_M, exact_M_value,
                                          heuristic_M, is_separable, linear_form_abs_mean,
                                          threshold_tables)


def subset_table(mask, n):
    return ((mask >> np.arange(1 << n)) & 1).astype(bool)


@lru_cache(maxsize=None)
def separable_subsets(n):
    """Oracle: every subset of the cube that the LP separates."""
    rows = [subset_table(m, n) for m in range(1 << (1 << n))]
    return np.array([r for r in rows if is_separable(r, n)[0]], float)


def brute_M(f):
    centred = f.values - f.mean()
    return float(np.max(separable_subsets(f.n) @ centred) / (1 << f.n))


def grid_separable(ind, n, span=3):
    """Oracle: integer weights in [-span, span]^n with half-integer offsets."""
    x = cube_points(n)
    for a in itertools.product(range(-span, span + 1), repeat=n):
        d = x @ np.array(a)
        for b in np.arange(-span * n - 0.5, span * n + 1, 1.0):
            if np.array_equal(d <= b, ind):
                return True
    return False


def test_covariance_fixtures():
    f = BooleanFunction.from_callable(2, lambda x: x[:, 0] == -1, "indicator")
    assert covariance_with_halfspace(f, HalfSpace((1, 0), 0)) == pytest.approx(0.25)
    const = BooleanFunction(3, np.full(8, 0.7), "indicator")
    assert covariance_with_halfspace(const, HalfSpace((1, -2, 0.5), 0.3)) == pytest.approx(0)
    par = corpus.builtin("parity-indicator:2")
    B = HalfSpace((1, -1), 0.5)
    assert B.indicator().values.sum() == 3
    assert covariance_with_halfspace(par, B) == pytest.approx(1 / 8)
    with pytest.raises(ValueError, match="dimension mismatch"):
        covariance_with_halfspace(par, HalfSpace((1, 0, 0), 0))


def test_covariance_cauchy_schwarz():
    rng = np.random.default_rng(1)
    for _ in range(50):
        f = BooleanFunction(5, rng.random(32), "indicator")
        B = HalfSpace(tuple(rng.normal(size=5)), rng.normal())
        ind = B.indicator().values
        assert abs(covariance_with_halfspace(f, B)) <= math.sqrt(f.variance() * ind.var()) + 1e-15


def test_halfspace_json_round_trip():
    B = HalfSpace((0.5, -1.25, 3.0), -0.75)
    assert HalfSpace.from_json(json.dumps(B.to_json())) == B
    rec = CorrelationResult(0.125, B, "exact").to_json()
    assert set(rec) == {"value", "witness", "method"}
    assert HalfSpace.from_json(rec["witness"]) == B


def test_is_separable_fixtures():
    ok, w = is_separable([(1, 1)], 2)
    assert ok and np.array_equal(w.indicator().values, [1, 0, 0, 0])
    ok, w = is_separable([(1, 1), (-1, -1)], 2)
    assert not ok and w is None
    assert not grid_separable(subset_table(0b1001, 2), 2)
    sub = BooleanFunction.from_callable(4, lambda x: x[:, 0] == 1, "indicator").values.astype(bool)
    ok, w = is_separable(sub, 4)
    assert ok and np.array_equal(w.indicator().values.astype(bool), sub)
    assert is_separable(np.zeros(8, bool), 3)[0] and is_separable(np.ones(8, bool), 3)[0]


def test_is_separable_matches_weight_grid_n3():
    for mask in range(256):
        ind = subset_table(mask, 3)
        assert is_separable(ind, 3)[0] == grid_separable(ind, 3, span=2)


@pytest.mark.parametrize("n,count", [(1, 4), (2, 14), (3, 104), (4, 1882), (5, 94572)])
def test_threshold_table_counts(n, count):
    tables = threshold_tables(n)
    assert tables.shape == (count, 1 << n)
    assert len({row.tobytes() for row in tables}) == count


def test_threshold_tables_are_separable_n4():
    for row in threshold_tables(4)[::7]:
        assert is_separable(row.astype(bool), 4)[0]


def test_exact_M_fixtures():
    f = BooleanFunction.from_callable(2, lambda x: x[:, 0] == -1, "indicator")
    res = exact_M(f)
    assert res.value == pytest.approx(0.25) and res.method == "exact"
    np.testing.assert_array_equal(res.witness.indicator().values, f.values)
    assert exact_M(corpus.builtin("parity-indicator:2")).value == pytest.approx(1 / 8)
    with pytest.raises(ValueError):
        exact_M(corpus.parity(6))


@pytest.mark.parametrize("n", [2, 3])
def test_exact_M_doubly_exhaustive(n):
    funcs = [BooleanFunction(n, subset_table(m, n).astype(float), "indicator")
             for m in range(1 << (1 << n))]
    for f in funcs:
        assert exact_M_value(f) == pytest.approx(brute_M(f), abs=1e-9)


def test_exact_M_value_and_witness_consistent():
    rng = np.random.default_rng(4)
    for n in (3, 4, 5):
        f = BooleanFunction(n, rng.random(1 << n), "indicator")
        res = exact_M(f)
        assert res.value == pytest.approx(exact_M_value(f), abs=1e-12)
        assert res.value == pytest.approx(covariance_with_halfspace(f, res.witness), abs=1e-12)


def test_exact_M_range_on_indicators():
    rng = np.random.default_rng(5)
    for n in (2, 3, 4, 5):
        for _ in range(10):
            a = BooleanFunction(n, (rng.random(1 << n) < 0.5).astype(float), "indicator")
            assert -1e-15 <= exact_M_value(a) <= 0.25 + 1e-15


@pytest.mark.parametrize("n", [3, 4, 5])
def test_exact_M_invariant_under_relabelling(n):
    rng = np.random.default_rng(50 + n)
    for _ in range(5):
        f = BooleanFunction(n, rng.random(1 << n), "indicator")
        g = f.permuted(rng.permutation(n), rng.random(n) < 0.5)
        assert exact_M_value(g) == pytest.approx(exact_M_value(f), abs=1e-9)


def test_heuristic_bounded_by_exact():
    for name, f in corpus.small_corpus(4).items():
        g = f.as_indicator()
        h = heuristic_M(g, budget=30)
        assert h.method == "heuristic"
        assert h.value == pytest.approx(covariance_with_halfspace(g, h.witness), abs=1e-12)
        assert h.value <= exact_M_value(g) + 1e-12, name
        if name.startswith(("dictator", "majority")):
            assert h.value == pytest.approx(exact_M_value(g), abs=1e-12), name
    assert heuristic_M(BooleanFunction(4, np.full(16, 0.4), "indicator")).value == 0.0


def test_heuristic_majority_n5():
    f = corpus.majority(5)
    assert heuristic_M(f).value == pytest.approx(exact_M(f).value, abs=1e-12)


def test_level1_construction():
    B, cov = construct_level1_halfspace(corpus.dictator(3))
    np.testing.assert_array_equal(B.indicator().values, (cube_points(3)[:, 0] >= 0).astype(float))
    assert cov == pytest.approx(0.5)
    _, cov_ind = construct_level1_halfspace(corpus.dictator(3).as_indicator())
    assert cov_ind == pytest.approx(0.25)
    with pytest.raises(ValueError):
        construct_level1_halfspace(corpus.parity(3))
    rng = np.random.default_rng(12)
    for _ in range(20):
        f = BooleanFunction(6, rng.random(64), "indicator")
        _, cov = construct_level1_halfspace(f)
        assert heuristic_M(f, budget=10).value >= cov - 1e-12
        assert cov >= 0 or level1_weight(f) < 1e-3


def test_linear_form_abs_mean():
    n = 12
    a = np.ones(n) / math.sqrt(n)
    x = cube_points(n)
    exact = float(np.mean(np.abs(x @ a)))
    assert linear_form_abs_mean(a) == pytest.approx(exact, abs=1e-14)
    assert exact >= 1 / 20
    assert abs(exact - math.sqrt(2 / math.pi)) < 0.05
    assert linear_form_abs_mean([0, 0, 3.0]) == pytest.approx(3.0)
