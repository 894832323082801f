"""Half-spaces {x : <a,x> <= b} on the cube and covariance maximization.

``exact_M`` works from the complete list of threshold dichotomies of the
cube, built from the hyperplane arrangement: every cell of the arrangement
of point-hyperplanes in (a, b)-space has an extreme ray, i.e. a hyperplane
through ``n`` affinely independent cube points, and the cells around that
ray are the fixed off-plane sides combined with every threshold dichotomy
of the on-plane points (found recursively in their affine hull).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import linprog

from .fourier_core import BooleanFunction, coordinate, cube_points, wht

EXACT_MAX_N = 5
SEPARABLE_MARGIN = 1e-7
_GEOM_TOL = 1e-9


@dataclass(frozen=True)
class HalfSpace:
    a: tuple[float, ...]
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", float(self.b))

    @property
    def n(self) -> int:
        return len(self.a)

    def dots(self) -> np.ndarray:
        """``<a, x>`` over the whole table, accumulated one coordinate at a time."""
        d = np.zeros(1 << self.n)
        for i, ai in enumerate(self.a):
            if ai != 0.0:
                d += ai * coordinate(self.n, i)
        return d

    def indicator(self) -> BooleanFunction:
        return BooleanFunction(self.n, (self.dots() <= self.b).astype(float), "indicator")

    def to_json(self) -> dict:
        return {"a": list(self.a), "b": self.b}

    @classmethod
    def from_json(cls, record) -> "HalfSpace":
        if isinstance(record, str):
            record = json.loads(record)
        return cls(tuple(record["a"]), record["b"])


@dataclass(frozen=True)
class CorrelationResult:
    value: float
    witness: HalfSpace
    method: str

    def to_json(self) -> dict:
        return {"value": self.value, "witness": self.witness.to_json(), "method": self.method}


def covariance_with_halfspace(f: BooleanFunction, B: HalfSpace) -> float:
    if B.n != f.n:
        raise ValueError(f"dimension mismatch: f has n={f.n}, half-space has n={B.n}")
    ind = B.dots() <= B.b
    return _cov_with_mask(f.values, ind)


def _cov_with_mask(values: np.ndarray, ind: np.ndarray) -> float:
    return float(np.mean(values * ind) - values.mean() * ind.mean())


def _separation_lp(points: np.ndarray, inside: np.ndarray):
    n = points.shape[1]
    sign = np.where(inside, 1.0, -1.0)
    # variables (a_1..a_n, b, margin); rows: sign * (<a,x> - b) + margin <= 0
    A_ub = np.hstack([sign[:, None] * points, -sign[:, None], np.ones((len(points), 1))])
    bounds = [(-1.0, 1.0)] * n + [(-(n + 1.0), n + 1.0), (None, 1.0)]
    c = np.zeros(n + 2)
    c[-1] = -1.0
    return linprog(c, A_ub=A_ub, b_ub=np.zeros(len(points)), bounds=bounds, method="highs")


def is_separable(inside, n: int) -> tuple[bool, HalfSpace | None]:
    """Decide whether a set of cube points is ``{x : <a,x> <= b}`` for some (a, b).

    ``inside`` is a boolean table of length ``2^n`` or an iterable of points.
    Solved as a margin-maximizing LP; separable iff the optimal margin exceeds
    1e-7, in which case the LP solution is returned as witness.
    """
    points = cube_points(n)
    inside = np.asarray(inside)
    if inside.shape != (1 << n,) or inside.dtype.kind not in "bif":
        inside = BooleanFunction.from_points(n, inside).values
    inside = inside.astype(bool)
    res = _separation_lp(points, inside)
    margin = -res.fun if res.status == 0 else 0.0
    if margin <= SEPARABLE_MARGIN:
        return False, None
    witness = HalfSpace(tuple(res.x[:n]), res.x[n])
    if not np.array_equal(witness.dots() <= witness.b, inside):
        # LP roundoff at the boundary; recentre b inside the margin gap
        d = witness.dots()
        lo = d[inside].max() if inside.any() else d.min() - 1.0
        hi = d[~inside].min() if (~inside).any() else d.max() + 1.0
        witness = HalfSpace(witness.a, (lo + hi) / 2.0)
    return True, witness


class _Dichotomies:
    """Threshold dichotomies of subsets of the cube, memoized by point set."""

    def __init__(self, n: int):
        self.points = cube_points(n)
        self.memo: dict[tuple[int, ...], set[int]] = {}

    def __call__(self, gidx: tuple[int, ...]) -> set[int]:
        found = self.memo.get(gidx)
        if found is None:
            found = self.memo[gidx] = self._compute(gidx)
        return found

    def _compute(self, gidx: tuple[int, ...]) -> set[int]:
        bits = [1 << g for g in gidx]
        m = len(gidx)
        if m == 1:
            return {0, bits[0]}
        pts = self.points[list(gidx)]
        centred = pts - pts[0]
        _, sv, vt = np.linalg.svd(centred, full_matrices=False)
        k = int(np.sum(sv > _GEOM_TOL))
        coords = centred @ vt[:k].T
        if m == k + 1:
            # affinely independent: every subset is cut out by some hyperplane
            return {sum(c) for r in range(m + 1) for c in itertools.combinations(bits, r)}
        if k == 1:
            order = [bits[j] for j in np.argsort(coords[:, 0])]
            out = {0}
            for seq in (order, order[::-1]):
                acc = 0
                for b in seq:
                    acc |= b
                    out.add(acc)
            return out
        combos = np.array(list(itertools.combinations(range(m), k)))
        simplex = coords[combos]
        edges = simplex[:, 1:] - simplex[:, :1]
        _, sv, vt = np.linalg.svd(edges)
        ok = sv[:, -1] > _GEOM_TOL
        normals = vt[ok, -1, :]
        offsets = np.einsum("nk,nk->n", normals, simplex[ok, 0])
        resid = coords @ normals.T - offsets
        weights = np.array([1 << j for j in range(m)], dtype=object)
        on = np.abs(resid) < _GEOM_TOL
        on_keys = [sum(weights[col]) for col in on.T]
        out: set[int] = set()
        seen: set[int] = set()
        for col, key in enumerate(on_keys):
            if key in seen:
                continue
            seen.add(key)
            sub = self(tuple(gidx[j] for j in range(m) if on[j, col]))
            below = sum(bits[j] for j in range(m) if resid[j, col] < -_GEOM_TOL)
            above = sum(bits[j] for j in range(m) if resid[j, col] > _GEOM_TOL)
            for d in sub:
                out.add(below | d)
                out.add(above | d)
        return out


@lru_cache(maxsize=None)
def threshold_tables(n: int) -> np.ndarray:
    """0/1 matrix whose rows are all threshold dichotomies of {-1,1}^n.

    Row counts are 4, 14, 104, 1882, 94572 for n = 1..5 (constants included).
    """
    if not 1 <= n <= EXACT_MAX_N:
        raise ValueError(f"exact enumeration supports 1 <= n <= {EXACT_MAX_N}")
    masks = sorted(_Dichotomies(n)(tuple(range(1 << n))))
    masks = np.array(masks, dtype=np.int64)
    table = ((masks[:, None] >> np.arange(1 << n)) & 1).astype(float)
    table.setflags(write=False)
    return table


def exact_M_values(tables: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Covariance of each row of ``values`` (functions) with every threshold set."""
    values = np.atleast_2d(values)
    size = values.shape[1]
    centred = values - values.mean(axis=1, keepdims=True)
    return centred @ tables.T / size


def exact_M_value(f: BooleanFunction) -> float:
    """``M(f)`` without a witness; fast path for enumeration loops."""
    if f.n > EXACT_MAX_N:
        raise ValueError(f"exact M needs n <= {EXACT_MAX_N}, got {f.n}")
    return float(exact_M_values(threshold_tables(f.n), f.values).max())


def exact_M(f: BooleanFunction) -> CorrelationResult:
    if f.n > EXACT_MAX_N:
        raise ValueError(f"exact M needs n <= {EXACT_MAX_N}, got {f.n}")
    tables = threshold_tables(f.n)
    covs = exact_M_values(tables, f.values)[0]
    best = int(np.argmax(covs))
    ok, witness = is_separable(tables[best].astype(bool), f.n)
    if not ok:
        raise RuntimeError("enumerated dichotomy failed separability certification")
    return CorrelationResult(covariance_with_halfspace(f, witness), witness, "exact")


def _best_offset(dots: np.ndarray, centred: np.ndarray) -> tuple[float, float]:
    """Best ``sum_{<a,x> <= b} centred(x)`` over all offsets ``b``.

    Returns (value, b); ties in ``dots`` are kept on the same side.
    """
    order = np.argsort(dots, kind="stable")
    d = dots[order]
    csum = np.cumsum(centred[order])
    # a cut is only allowed after the last member of a tie group
    ends = np.flatnonzero(np.append(np.diff(d) > _GEOM_TOL, True))
    j = int(np.argmax(csum[ends]))
    best = csum[ends[j]]
    if best <= 0.0:
        return 0.0, float(d[0] - 1.0)
    pos = ends[j]
    b = d[pos] + 1.0 if pos == len(d) - 1 else (d[pos] + d[pos + 1]) / 2.0
    return float(best), float(b)


def heuristic_M(f: BooleanFunction, budget: int = 200, seed=0, refine_rounds: int = 3) -> CorrelationResult:
    """Certified lower bound on ``M(f)`` from a candidate family of directions.

    Candidates are the level-1 (Chow) direction, ``budget`` random Gaussian
    directions and the coordinate directions, each with both orientations
    and a full offset sweep; the best direction is then refined greedily one
    weight at a time.
    """
    n = f.n
    size = 1 << n
    centred = (f.values - f.mean()) / size
    coords = [coordinate(n, i) for i in range(n)]

    def dots_of(a):
        d = np.zeros(size)
        for ai, xi in zip(a, coords):
            if ai != 0.0:
                d += ai * xi
        return d

    rng = np.random.default_rng(seed)
    candidates = [wht(f).level1()]
    candidates += list(rng.standard_normal((budget, n)))
    candidates += list(np.eye(n))
    best_val, best_a, best_b = 0.0, np.eye(n)[0], -float(n) - 1.0
    for a in candidates:
        if not np.any(a):
            continue
        d = dots_of(a)
        for sgn in (1.0, -1.0):
            val, b = _best_offset(sgn * d, centred)
            if val > best_val + 1e-15:
                best_val, best_a, best_b = val, sgn * np.asarray(a, float), b

    step = 0.5 * (np.abs(best_a).max() or 1.0)
    for _ in range(refine_rounds):
        improved = False
        for i in range(n):
            for delta in (step, -step):
                a = best_a.copy()
                a[i] += delta
                val, b = _best_offset(dots_of(a), centred)
                if val > best_val + 1e-15:
                    best_val, best_a, best_b, improved = val, a, b, True
        if not improved:
            step /= 2.0

    witness = HalfSpace(tuple(best_a), best_b)
    return CorrelationResult(covariance_with_halfspace(f, witness), witness, "heuristic")


def construct_level1_halfspace(f: BooleanFunction) -> tuple[HalfSpace, float]:
    """Half-space ``{x : sum_i hat f(i) x_i >= 0}`` and its covariance with ``f``."""
    lvl1 = wht(f).level1()
    if not np.any(np.abs(lvl1) > 1e-15):
        raise ValueError("level-1 weight is zero; no level-1 direction")
    B = HalfSpace(tuple(-lvl1), 0.0)
    return B, covariance_with_halfspace(f, B)


def linear_form_abs_mean(a) -> float:
    """``E|sum_i a_i x_i|`` by exact enumeration of the cube."""
    a = np.asarray(a, dtype=float)
    return float(np.mean(np.abs(HalfSpace(tuple(a), 0.0).dots())))
