import itertools
import math

import numpy as np
import pytest

from stability_lab import corpus
from stability_lab.fourier_core import cube_points, level1_weight, var_pt, wht
from stability_lab.halfspace_bool import exact_M, heuristic_M
from stability_lab.restrictions import Restriction, apply_restriction


@pytest.mark.parametrize("n", [1, 3, 5, 7, 9, 11])
def test_builtins_pointwise(n):
    x = cube_points(n)
    np.testing.assert_array_equal(corpus.dictator(n).values, x[:, 0])
    np.testing.assert_array_equal(corpus.parity(n).values, x.prod(axis=1))
    np.testing.assert_array_equal(corpus.majority(n).values, np.sign(x.sum(axis=1)))
    np.testing.assert_array_equal(corpus.and_indicator(n).values, np.all(x == 1, axis=1))
    w = corpus.tribes_width(n)
    blocks = [x[:, i:i + w] for i in range(0, n, w)]
    expected = np.where(np.any([np.all(b == -1, axis=1) for b in blocks], axis=0), -1, 1)
    np.testing.assert_array_equal(corpus.tribes(n).values, expected)


def test_builtin_lookup():
    assert corpus.builtin("dictator", 3) == corpus.dictator(3)
    assert corpus.builtin("parity:4") == corpus.parity(4)
    assert corpus.builtin("block-ball:2") == corpus.block_ball(2)
    np.testing.assert_allclose(wht(corpus.builtin("majority:3")).level1(), 0.5)
    ind = corpus.builtin("parity-indicator:2")
    assert ind.range_tag == "indicator"
    np.testing.assert_array_equal(ind.values, [1, 0, 0, 1])
    for bad in ("majority:4", "nosuch:3", "parity:x", "parity", "mixed:2", "block-ball:5"):
        with pytest.raises(ValueError):
            corpus.builtin(bad)


def test_resolve_file_and_name(tmp_path):
    f = corpus.tribes(6)
    path = tmp_path / "tribes.txt"
    corpus.save(f, path)
    assert corpus.resolve(str(path)) == f
    assert corpus.resolve("majority:5") == corpus.majority(5)
    with pytest.raises(OSError):
        corpus.resolve(str(tmp_path / "missing.txt"))


def test_save_load_whole_corpus(tmp_path):
    for name, f in corpus.small_corpus(6).items():
        path = tmp_path / f"{name.replace(':', '_')}.txt"
        corpus.save(f, path)
        assert corpus.load(path) == f


def block_ball_oracle(m):
    """Oracle: direct evaluation of sum_i (m^{-1/2} sum_{j in J_i} x_j)^2 <= m with a tolerance."""
    x = cube_points(m * m)
    vals = []
    for p in x:
        total = sum((p[i * m:(i + 1) * m].sum() / math.sqrt(m)) ** 2 for i in range(m))
        vals.append(float(total <= m + 1e-9))
    return np.array(vals)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_block_ball_matches_definition(m):
    np.testing.assert_array_equal(corpus.block_ball(m).values, block_ball_oracle(m))


def test_block_ball_fixtures():
    assert np.all(corpus.block_ball(1).values == 1)
    b2 = corpus.block_ball(2)
    assert b2((1, 1, 1, 1)) == 0
    assert b2.mean() == 0.75
    assert b2.n == 4 and b2.range_tag == "indicator"
    with pytest.raises(ValueError):
        corpus.block_ball(5)


def test_block_ball_symmetries_m2():
    f = corpus.block_ball(2)
    blocks = [(0, 1), (2, 3)]
    for p0, p1 in itertools.product(itertools.permutations(blocks[0]),
                                    itertools.permutations(blocks[1])):
        for order in ((p0, p1), (p1, p0)):
            perm = [c for blk in order for c in blk]
            assert f.permuted(perm) == f


def test_mixed_example():
    n = 5
    f = corpus.mixed_example(n)
    x = cube_points(n)
    np.testing.assert_array_equal(f.values, np.where(x[:, 0] == 1, x[:, 1], x[:, 2:].prod(axis=1)))
    plus = apply_restriction(f, Restriction.parse("+0000"))
    np.testing.assert_array_equal(plus.values, x[:, 1])
    assert exact_M(plus.as_indicator()).value == pytest.approx(0.25)
    minus = apply_restriction(f, Restriction.parse("-0000"))
    np.testing.assert_array_equal(minus.values, x[:, 2:].prod(axis=1))
    assert level1_weight(minus) == pytest.approx(0, abs=1e-15)
    par = corpus.parity(3).as_indicator()
    assert heuristic_M(minus.as_indicator()).value <= exact_M(par).value + 1e-12
    for t in (0.1, 0.5, 1.0):
        # four coefficients of magnitude 1/2, at degrees 1, 2, 3 and 4
        closed = sum(math.exp(-2 * t * k) for k in (1, 2, 3, 4)) / 4
        assert var_pt(f, t) == pytest.approx(closed, abs=1e-12)
        assert var_pt(f, t) >= math.exp(-2 * t) / 4
    with pytest.raises(ValueError):
        corpus.mixed_example(2)


def test_small_corpus_contents():
    c = corpus.small_corpus(5)
    assert "majority:5" in c and "majority:4" not in c
    assert "block-ball:2" in c and "mixed:3" in c
    assert all(f.n <= 5 for f in c.values())
