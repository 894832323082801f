import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stability_lab import corpus
from stability_lab.fourier_core import (BooleanFunction, FourierSpectrum, NoiseParam, cube_points,
                                        decode, encode, level1_weight, load_table, noise_operator,
                                        noise_stability, save_table, var_pt, wht, wht_inverse)


def direct_coeffs(f):
    """Oracle: hat f(S) = 2^-n sum_x f(x) prod_{i in S} x_i, one subset at a time."""
    x = cube_points(f.n)
    out = []
    for mask in range(1 << f.n):
        cols = [i for i in range(f.n) if mask >> i & 1]
        chi = np.prod(x[:, cols], axis=1) if cols else np.ones(len(x))
        out.append(np.mean(f.values * chi))
    return np.array(out)


def kernel_pt(f, t):
    """Oracle: P_t f(x) = sum_y prod_i (1 + e^-t x_i y_i)/2 f(y)."""
    x = cube_points(f.n)
    rho = math.exp(-t)
    k = np.prod((1 + rho * x[:, None, :] * x[None, :, :]) / 2, axis=2)
    return k @ f.values


tables = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.floats(0, 1), min_size=1 << n, max_size=1 << n).map(
        lambda v: BooleanFunction(n, v, "indicator")))


def test_index_convention_round_trip():
    for n in range(1, 7):
        for idx in range(1 << n):
            assert encode(decode(idx, n)) == idx
    assert decode(0, 3) == (1, 1, 1)
    assert decode(1, 3) == (-1, 1, 1)
    assert decode(6, 3) == (1, -1, -1)
    np.testing.assert_array_equal(cube_points(2), [[1, 1], [-1, 1], [1, -1], [-1, -1]])


def test_validation_errors():
    with pytest.raises(ValueError, match="value count mismatch"):
        BooleanFunction(2, [0, 1, 0])
    with pytest.raises(ValueError, match="range violation"):
        BooleanFunction(1, [0, 1.5], "indicator")
    with pytest.raises(ValueError, match="range violation"):
        BooleanFunction(1, [-1.2, 1])
    with pytest.raises(ValueError):
        BooleanFunction(21, np.zeros(2))
    with pytest.raises(ValueError):
        NoiseParam(-0.1)


def test_wht_fixtures():
    d = wht(corpus.dictator(2))
    np.testing.assert_allclose(d.coeffs, [0, 1, 0, 0], atol=1e-15)
    both = BooleanFunction.from_points(2, [(1, 1)])
    np.testing.assert_allclose(wht(both).coeffs, [0.25] * 4, atol=1e-15)
    assert d[(0,)] == 1.0


@given(tables)
@settings(max_examples=60, deadline=None)
def test_wht_matches_direct_sum(f):
    np.testing.assert_allclose(wht(f).coeffs, direct_coeffs(f), atol=1e-12)


@pytest.mark.parametrize("n", range(1, 11))
def test_parseval_and_involution(n):
    rng = np.random.default_rng(n)
    for _ in range(50):
        f = BooleanFunction(n, rng.uniform(-1, 1, 1 << n))
        c = wht(f).coeffs
        assert abs(np.sum(c ** 2) - np.mean(f.values ** 2)) <= 1e-10
        assert np.max(np.abs(wht_inverse(wht(f)).values - f.values)) <= 1e-12


def test_inverse_fixtures():
    assert np.all(wht_inverse(FourierSpectrum(3, np.zeros(8))).values == 0)
    g = wht_inverse(FourierSpectrum(2, [0.5, 0.5, 0, 0]))
    assert g.range_tag == "indicator"
    np.testing.assert_allclose(g.values, (1 + cube_points(2)[:, 0]) / 2)


def test_spectrum_round_trip_n8():
    rng = np.random.default_rng(80)
    f = BooleanFunction(8, rng.uniform(-1, 1, 256))
    spec = wht(f)
    assert np.max(np.abs(wht(wht_inverse(spec, "signed")).coeffs - spec.coeffs)) <= 1e-12


def test_noise_operator_eigenfunctions():
    for t in (0.0, 0.3, 1.7):
        np.testing.assert_allclose(noise_operator(corpus.dictator(3), t).values,
                                   math.exp(-t) * cube_points(3)[:, 0], atol=1e-14)
        np.testing.assert_allclose(noise_operator(corpus.parity(4), t).values,
                                   math.exp(-4 * t) * corpus.parity(4).values, atol=1e-14)
    f = corpus.majority(5)
    assert noise_operator(f, 0) is f
    assert noise_operator(f, NoiseParam(0.0)) is f


@pytest.mark.parametrize("n", range(1, 7))
def test_noise_operator_matches_resampling_kernel(n):
    rng = np.random.default_rng(100 + n)
    f = BooleanFunction(n, rng.random(1 << n), "indicator")
    for t in (0.1, 0.5, 1.0, 2.5):
        pt = noise_operator(f, t)
        np.testing.assert_allclose(pt.values, kernel_pt(f, t), atol=1e-12)
        assert abs(var_pt(f, t) - np.var(pt.values)) <= 1e-12
        assert pt.values.min() >= f.values.min() and pt.values.max() <= f.values.max()


def test_semigroup_n6():
    rng = np.random.default_rng(6)
    f = BooleanFunction(6, rng.uniform(-1, 1, 64))
    for s, t in itertools.product((0.1, 0.5, 1.0), repeat=2):
        lhs = noise_operator(noise_operator(f, s), t).values
        assert np.max(np.abs(lhs - noise_operator(f, s + t).values)) <= 1e-10


def test_var_pt_fixtures():
    for t in (0.0, 0.4, 2.0):
        assert var_pt(corpus.dictator(4), t) == pytest.approx(math.exp(-2 * t), abs=1e-14)
        assert var_pt(BooleanFunction(3, np.full(8, 0.3), "indicator"), t) == 0.0
    assert var_pt(corpus.majority(3), 0) == pytest.approx(1.0, abs=1e-14)


@given(tables, st.floats(0, 3), st.floats(0, 3))
@settings(max_examples=60, deadline=None)
def test_var_pt_nonincreasing(f, s, t):
    lo, hi = sorted((s, t))
    assert var_pt(f, hi) <= var_pt(f, lo) + 1e-15
    assert var_pt(f, lo) >= 0


def test_noise_stability_fixtures():
    half = BooleanFunction.from_callable(3, lambda x: x[:, 0] == 1, "indicator")
    for t in (0.0, 0.2, 1.5):
        assert noise_stability(half, t) == pytest.approx(0.25 + math.exp(-t) / 4, abs=1e-14)
        assert noise_stability(BooleanFunction(3, np.ones(8), "indicator"), t) == pytest.approx(1)
    with pytest.raises(ValueError):
        noise_stability(BooleanFunction(2, [0.5, 0, 0, 1], "indicator"), 0.3)


def test_noise_stability_identity_random_sets_n6():
    rng = np.random.default_rng(66)
    for _ in range(20):
        a = BooleanFunction(6, (rng.random(64) < rng.random()).astype(float), "indicator")
        mu = a.mean()
        for t in (0.05, 0.5, 2.0):
            s = noise_stability(a, t)
            assert s == pytest.approx(mu ** 2 + var_pt(a, t / 2), abs=1e-10)
            # direct definition E[1_A P_t 1_A]
            assert s == pytest.approx(np.mean(a.values * kernel_pt(a, t)), abs=1e-12)
            assert mu ** 2 - 1e-12 <= s <= mu + 1e-12


def test_level1_weight_fixtures():
    assert level1_weight(corpus.dictator(3)) == pytest.approx(1)
    assert level1_weight(corpus.parity(2)) == pytest.approx(0, abs=1e-15)
    assert level1_weight(corpus.parity(5)) == pytest.approx(0, abs=1e-15)
    assert level1_weight(corpus.majority(3)) == pytest.approx(0.75, abs=1e-15)
    np.testing.assert_allclose(direct_coeffs(corpus.majority(3))[[1, 2, 4]], 0.5)


@given(tables)
@settings(max_examples=40, deadline=None)
def test_level1_weight_bounded_by_second_moment(f):
    assert -1e-15 <= level1_weight(f) <= np.mean(f.values ** 2) + 1e-12


def test_table_file_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    for f in (BooleanFunction(5, rng.random(32), "indicator"), corpus.majority(5),
              BooleanFunction(3, rng.uniform(-1, 1, 8) / 3)):
        path = tmp_path / "f.txt"
        save_table(f, path)
        assert load_table(path) == f
    assert path.read_text().splitlines()[0] == "n=3 range=signed"


def test_table_file_errors(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("n=2 range=indicator\n0 1 0\n")
    with pytest.raises(ValueError, match="value count mismatch"):
        load_table(p)
    p.write_text("n=1 range=indicator\n0 1.5\n")
    with pytest.raises(ValueError, match="range violation"):
        load_table(p)
    for header in ("n=2", "size=2 range=signed", "n=two range=signed", "n=2 range=weird", ""):
        p.write_text(header + "\n1 1 1 1\n")
        with pytest.raises(ValueError, match="malformed header"):
            load_table(p)


def test_permuted_relabels_coordinates():
    f = corpus.dictator(3)
    g = f.permuted([2, 0, 1])
    np.testing.assert_array_equal(g.values, cube_points(3)[:, 1])
    h = f.permuted([0, 1, 2], flips=[True, False, False])
    np.testing.assert_array_equal(h.values, -f.values)
