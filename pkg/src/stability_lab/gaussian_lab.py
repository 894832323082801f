"""Gaussian-space counterparts: Ornstein-Uhlenbeck stability, shifted and
rescaled sets ``f_{t,y}(x) = f(sqrt(1 - e^{-2t}) x + e^{-t} y)``, level-1
weight through the Stein identity, and the Euclidean-ball experiments.

Monte Carlo draws come from ``SeedSequence(seed, spawn_key=(stream, batch))``
so every batch is reproducible on its own; standard errors are the standard
deviation of batch means over ``sqrt(batches)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, stats
from scipy.optimize import minimize_scalar

from .fourier_core import BooleanFunction

CUTOFF = 8.5
QUAD_TOL = 1e-10
_CHUNK_CELLS = 2_000_000


# ---------------------------------------------------------------- sets

class GaussianSet:
    """Membership oracle on R^n; ``__call__`` maps an ``(N, n)`` array to values in [0, 1]."""

    kind = "abstract"
    n: int

    def __call__(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def measure(self) -> float | None:
        """Closed-form Gaussian measure when one is known."""
        return None


@dataclass(frozen=True)
class HalfSpaceSet(GaussianSet):
    """``{x : <a, x> <= b}`` with ``a`` rescaled to unit length."""

    a: tuple[float, ...]
    b: float
    kind = "halfspace"

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        norm = float(np.linalg.norm(a))
        if norm == 0:
            raise ValueError("half-space normal must be nonzero")
        object.__setattr__(self, "a", tuple(a / norm))
        object.__setattr__(self, "b", float(self.b) / norm)

    @property
    def n(self) -> int:
        return len(self.a)

    def __call__(self, x):
        return (np.asarray(x) @ np.asarray(self.a) <= self.b).astype(float)

    def measure(self):
        return float(stats.norm.cdf(self.b))


@dataclass(frozen=True)
class Ball(GaussianSet):
    n: int
    radius: float
    center: tuple[float, ...] | None = None
    kind = "ball"

    def __post_init__(self):
        if self.center is not None:
            c = tuple(float(v) for v in self.center)
            if len(c) != self.n:
                raise ValueError("center dimension mismatch")
            object.__setattr__(self, "center", c)

    def _c(self) -> np.ndarray:
        return np.zeros(self.n) if self.center is None else np.asarray(self.center)

    def __call__(self, x):
        d = np.asarray(x) - self._c()
        return (np.einsum("ij,ij->i", d, d) <= self.radius ** 2).astype(float)

    def measure(self):
        nc = float(self._c() @ self._c())
        if nc == 0:
            return float(stats.chi2.cdf(self.radius ** 2, self.n))
        return float(stats.ncx2.cdf(self.radius ** 2, self.n, nc))


@dataclass(frozen=True)
class BlockQuadratic(GaussianSet):
    """``{x : sum_i (|J_i|^{-1/2} sum_{j in J_i} x_j)^2 <= threshold}`` over consecutive blocks."""

    block_sizes: tuple[int, ...]
    threshold: float
    kind = "block_quadratic"

    @property
    def n(self) -> int:
        return int(sum(self.block_sizes))

    def __call__(self, x):
        x = np.asarray(x)
        total = np.zeros(len(x))
        start = 0
        for size in self.block_sizes:
            total += x[:, start:start + size].sum(axis=1) ** 2 / size
            start += size
        return (total <= self.threshold).astype(float)

    def measure(self):
        return float(stats.chi2.cdf(self.threshold, len(self.block_sizes)))


@dataclass(frozen=True)
class LiftedBoolean(GaussianSet):
    """``f(sign(x))`` for a cube function ``f`` with values in [0, 1]."""

    f: BooleanFunction
    kind = "lifted_boolean"

    def __post_init__(self):
        if self.f.range_tag != "indicator":
            raise ValueError("lifted functions must be [0,1]-valued")

    @property
    def n(self) -> int:
        return self.f.n

    def __call__(self, x):
        neg = (np.asarray(x) < 0).astype(np.int64)
        idx = neg @ (1 << np.arange(self.n))
        return self.f.values[idx]

    def measure(self):
        return self.f.mean()


@dataclass(frozen=True)
class AffinePullback(GaussianSet):
    """``x -> base(scale * x + shift)``."""

    base: GaussianSet
    scale: float
    shift: tuple[float, ...]
    kind = "affine"

    @property
    def n(self) -> int:
        return self.base.n

    def __call__(self, x):
        return self.base(self.scale * np.asarray(x) + np.asarray(self.shift))


def halfspace(a, b) -> HalfSpaceSet:
    return HalfSpaceSet(tuple(a), b)


def coordinate_halfspace(n: int, b: float, i: int = 0) -> HalfSpaceSet:
    a = np.zeros(n)
    a[i] = 1.0
    return HalfSpaceSet(tuple(a), b)


def sqrt_n_ball(n: int) -> Ball:
    return Ball(n, math.sqrt(n))


@dataclass(frozen=True)
class ShiftScale:
    t: float
    y: tuple[float, ...]

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError("shift-scale time must be positive")
        object.__setattr__(self, "y", tuple(float(v) for v in self.y))

    @property
    def scale(self) -> float:
        return math.sqrt(-math.expm1(-2.0 * self.t)) if math.isfinite(self.t) else 1.0

    @property
    def weight(self) -> float:
        return math.exp(-self.t)


def shift_scale(S: GaussianSet, ss: ShiftScale) -> GaussianSet:
    """The set ``{x : sqrt(1 - e^{-2t}) x + e^{-t} y in S}``."""
    if len(ss.y) != S.n:
        raise ValueError("shift dimension mismatch")
    sig, rho = ss.scale, ss.weight
    y = np.asarray(ss.y)
    if isinstance(S, HalfSpaceSet):
        a = np.asarray(S.a)
        return HalfSpaceSet(S.a, (S.b - rho * float(a @ y)) / sig)
    if isinstance(S, Ball):
        center = (S._c() - rho * y) / sig
        return Ball(S.n, S.radius / sig, tuple(center))
    return AffinePullback(S, sig, tuple(rho * y))


# ---------------------------------------------------------------- Monte Carlo

@dataclass(frozen=True)
class McConfig:
    samples: int = 1_000_000
    seed: int = 0
    batches: int = 20

    def __post_init__(self):
        if self.batches < 2 or self.samples < self.batches:
            raise ValueError("need at least two batches and one sample per batch")

    def rng(self, stream: int, batch: int) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(stream, batch)))

    def batch_sizes(self) -> list[int]:
        base, extra = divmod(self.samples, self.batches)
        return [base + (1 if i < extra else 0) for i in range(self.batches)]


def _chunks(size: int, width: int):
    step = max(1, _CHUNK_CELLS // max(width, 1))
    for start in range(0, size, step):
        yield min(step, size - start)


def batch_means(cfg: McConfig, stream: int, width: int, sampler) -> np.ndarray:
    """Per-batch means of ``sampler(rng, k)``, which returns ``k`` rows of per-sample values."""
    out = []
    for b, size in enumerate(cfg.batch_sizes()):
        rng = cfg.rng(stream, b)
        total = 0.0
        for k in _chunks(size, width):
            total = total + np.sum(sampler(rng, k), axis=0)
        out.append(np.asarray(total, dtype=float) / size)
    return np.array(out)


def _summarize(means: np.ndarray) -> tuple:
    est = means.mean(axis=0)
    se = means.std(axis=0, ddof=1) / math.sqrt(len(means))
    if np.ndim(est) == 0:
        return float(est), float(se)
    return est, se


def _ou_pair(rng, k: int, n: int, rho: float):
    x = rng.standard_normal((k, n))
    y = rho * x + math.sqrt(max(0.0, 1.0 - rho * rho)) * rng.standard_normal((k, n))
    return x, y


def mc_noise_stability(S: GaussianSet, t: float, cfg: McConfig = McConfig(), stream: int = 1):
    """``E[1_S(X) 1_S(e^{-t} X + sqrt(1 - e^{-2t}) X')]``; returns (estimate, stderr)."""
    if not t >= 0:
        raise ValueError("t must be nonnegative")
    rho = math.exp(-t)

    def sampler(rng, k):
        x, y = _ou_pair(rng, k, S.n, rho)
        return S(x) * S(y)

    return _summarize(batch_means(cfg, stream, 2 * S.n, sampler))


def mc_measure(S: GaussianSet, cfg: McConfig = McConfig(), stream: int = 2):
    return _summarize(batch_means(cfg, stream, S.n, lambda rng, k: S(rng.standard_normal((k, S.n)))))


def mc_var_pt(S: GaussianSet, t: float, cfg: McConfig = McConfig(), stream: int = 3):
    """``Var(P_t f) = E[f P_{2t} f] - (E f)^2``, estimated without squaring a mean.

    Each sample contributes ``f(X) (f(X_2t) - f(W))`` with ``X_2t`` an
    ``e^{-2t}``-correlated copy of ``X`` and ``W`` independent.
    """
    rho = math.exp(-2.0 * t)

    def sampler(rng, k):
        x, y = _ou_pair(rng, k, S.n, rho)
        w = rng.standard_normal((k, S.n))
        return S(x) * (S(y) - S(w))

    return _summarize(batch_means(cfg, stream, 3 * S.n, sampler))


# ---------------------------------------------------------------- closed forms

def halfspace_stability_closed(b: float, t: float) -> float:
    """``P(X_1 <= b, e^{-t} X_1 + sqrt(1 - e^{-2t}) X_2 <= b)`` by adaptive quadrature."""
    if not t >= 0:
        raise ValueError("t must be nonnegative")
    rho = math.exp(-t)
    if rho >= 1.0:
        return float(stats.norm.cdf(b))
    sig = math.sqrt(-math.expm1(-2.0 * t))
    upper = min(b, CUTOFF)
    if upper <= -CUTOFF:
        return 0.0

    def integrand(x):
        return stats.norm.pdf(x) * stats.norm.cdf((b - rho * x) / sig)

    val, _ = integrate.quad(integrand, -CUTOFF, upper, epsabs=QUAD_TOL, epsrel=1e-12, limit=200)
    return float(val)


def halfspace_var_pt(b: float, t: float) -> float:
    """``Var(P_t 1_{x_1 <= b}) = E[1_A P_{2t} 1_A] - Phi(b)^2``."""
    return halfspace_stability_closed(b, 2.0 * t) - float(stats.norm.cdf(b)) ** 2


def halfspace_l2_gap(b: float, t: float) -> float:
    """``E[(1_A - P_t 1_A)^2]`` for ``A = {x_1 <= b}``."""
    gamma = float(stats.norm.cdf(b))
    return gamma - 2.0 * halfspace_stability_closed(b, t) + halfspace_stability_closed(b, 2.0 * t)


def _simpson_weights(lo: float, hi: float, count: int) -> tuple[np.ndarray, np.ndarray]:
    count += (count + 1) % 2
    x = np.linspace(lo, hi, count)
    w = np.ones(count)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return x, w * (hi - lo) / (3.0 * (count - 1))


def ball_halfspace_covariance(n: int, radius: float, along: float, across_sq: float,
                              offsets, nodes: int = 801) -> np.ndarray:
    """``Cov(1_ball, 1_{<u,x> <= beta})`` for each ``beta`` in ``offsets``.

    The ball has the given radius and a center whose component along the
    unit normal ``u`` is ``along`` and whose squared orthogonal length is
    ``across_sq``.  Conditioning on ``<u, X>`` leaves a noncentral chi-square
    in the remaining ``n - 1`` coordinates, so each covariance is a 1-D
    integral (composite Simpson on [-8.5, 8.5], split at ``beta``).
    """
    offsets = np.atleast_1d(np.asarray(offsets, dtype=float))

    def inside_prob(x):
        rest = radius ** 2 - (x - along) ** 2
        if across_sq > 0:
            p = stats.ncx2.cdf(np.maximum(rest, 0.0), n - 1, across_sq)
        else:
            p = stats.chi2.cdf(np.maximum(rest, 0.0), n - 1)
        return np.where(rest > 0, p, 0.0)

    def integral(lo, hi):
        if hi <= lo:
            return 0.0
        x, w = _simpson_weights(lo, hi, nodes)
        return float(np.sum(w * stats.norm.pdf(x) * inside_prob(x)))

    total = integral(-CUTOFF, CUTOFF)
    out = []
    for beta in offsets:
        hi = min(max(beta, -CUTOFF), CUTOFF)
        out.append(integral(-CUTOFF, hi) - float(stats.norm.cdf(beta)) * total)
    return np.array(out)


# ---------------------------------------------------------------- level-1 weight

def estimate_mean_gradient(S: GaussianSet, cfg: McConfig = McConfig(), stream: int = 4):
    """Per-coordinate ``E[X_i f(X)]`` with standard errors."""

    def sampler(rng, k):
        x = rng.standard_normal((k, S.n))
        return x * S(x)[:, None]

    return _summarize(batch_means(cfg, stream, S.n, sampler))


def estimate_w1_gaussian(S: GaussianSet, cfg: McConfig = McConfig(), stream: int = 4):
    """``w_1(f) = sum_i E[X_i f(X)]^2``; returns (estimate, stderr).

    Each squared mean is corrected by its estimated variance ``s_i^2``;
    the stderr uses ``Var(m^2) ~ 4 m^2 s^2 + 2 s^4`` per coordinate.
    """
    m, s = estimate_mean_gradient(S, cfg, stream)
    est = float(np.sum(m ** 2 - s ** 2))
    se = float(math.sqrt(np.sum(4 * m ** 2 * s ** 2 + 2 * s ** 4)))
    return est, se


@dataclass
class LabReport:
    check: str
    n: int
    t: float
    lhs: float
    rhs: float
    stderr: float
    passed: bool
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"check": self.check, "n": self.n, "t": self.t, "lhs": self.lhs, "rhs": self.rhs,
                "stderr": self.stderr, "pass": self.passed, **self.extra}


def mc_expected_shifted_w1(S: GaussianSet, t: float, cfg: McConfig = McConfig(),
                           inner: int = 500, stream: int = 5):
    """``E_Y w_1(f_{t,Y})`` by nested sampling.

    For each outer ``Y`` the inner sample is split in halves and the
    product of the two half-sample mean vectors is an unbiased estimate of
    ``|E_X[X f_{t,Y}(X)]|^2``.
    """
    sig = math.sqrt(-math.expm1(-2.0 * t))
    rho = math.exp(-t)
    n = S.n
    half = inner // 2
    outer_cfg = McConfig(max(cfg.batches, cfg.samples // inner), cfg.seed, cfg.batches)

    def sampler(rng, k):
        y = rng.standard_normal((k, 1, n))
        x = rng.standard_normal((k, 2 * half, n))
        g = S((sig * x + rho * y).reshape(-1, n)).reshape(k, 2 * half, 1)
        prod = x * g
        m1 = prod[:, :half].mean(axis=1)
        m2 = prod[:, half:].mean(axis=1)
        return np.sum(m1 * m2, axis=1)

    means = []
    for b, size in enumerate(outer_cfg.batch_sizes()):
        rng = outer_cfg.rng(stream, b)
        total = 0.0
        for k in _chunks(size, 2 * half * n):
            total += float(np.sum(sampler(rng, k)))
        means.append(total / size)
    return _summarize(np.array(means))


def check_exp_w1(S: GaussianSet, t: float, cfg: McConfig = McConfig()) -> LabReport:
    """``E w_1(f_{t,Y}) >= (e^{2t} - 1) Var(P_t f)`` within three combined stderrs."""
    if not t > 0:
        raise ValueError("t must be positive")
    lhs, lhs_se = mc_expected_shifted_w1(S, t, cfg)
    factor = math.expm1(2.0 * t)
    if isinstance(S, HalfSpaceSet):
        var, var_se = halfspace_var_pt(S.b, t), 0.0
    else:
        var, var_se = mc_var_pt(S, t, cfg)
    rhs, rhs_se = factor * var, factor * var_se
    se = math.hypot(lhs_se, rhs_se)
    return LabReport("exp-w1", S.n, t, lhs, rhs, se, lhs >= rhs - 3.0 * se,
                     {"kind": S.kind, "var_pt": var})


def level1_halfspace_gaussian(S: GaussianSet, cfg: McConfig = McConfig(),
                              offsets=np.linspace(-4, 4, 41)) -> LabReport:
    """Half-space along the estimated mean gradient, best offset on a grid.

    Compared with ``w_1 / (8 pi sigma)``; both sides are Monte Carlo.
    """
    m, _ = estimate_mean_gradient(S, cfg, stream=6)
    w1 = float(m @ m)
    u = m / math.sqrt(w1) if w1 > 0 else np.eye(S.n)[0]
    g0 = S.measure()
    if g0 is None:
        g0, _ = mc_measure(S, cfg, stream=7)
    sigma = math.sqrt(max(g0 * (1 - g0), 0.0))
    offsets = np.asarray(offsets, dtype=float)
    phi_b = stats.norm.cdf(offsets)

    def sampler(rng, k):
        x = rng.standard_normal((k, S.n))
        proj = x @ u
        f = S(x)[:, None] - g0
        return np.concatenate([f * ((proj[:, None] >= offsets) - (1 - phi_b)),
                               f * ((proj[:, None] <= offsets) - phi_b)], axis=1)

    covs, ses = _summarize(batch_means(cfg, 8, S.n + 2 * len(offsets), sampler))
    j = int(np.argmax(covs))
    bound = w1 / (8 * math.pi * sigma) if sigma > 0 else 0.0
    return LabReport("gaussian-w1-halfspace", S.n, 0.0, float(covs[j]), bound, float(ses[j]),
                     float(covs[j]) >= bound - 3 * float(ses[j]),
                     {"w1": w1, "sigma": sigma, "direction_sign": 1 if j < len(offsets) else -1,
                      "offset": float(offsets[j % len(offsets)])})


# ---------------------------------------------------------------- ball experiments

STABLE_SLACK = 0.1
STABLE_MIN_N = 32
OFFSETS = np.linspace(-4.0, 4.0, 41)


def ball_stability_bound(t: float) -> float:
    """``1/4 - arccos(e^{-2t}) / (sqrt(2) pi)``, the large-n lower bound on ``Var(P_t 1_ball)``."""
    return 0.25 - math.acos(math.exp(-2.0 * t)) / (math.sqrt(2.0) * math.pi)


def ball_candidate_covariances(n: int, cfg: McConfig, n_random: int = 8,
                               offsets=OFFSETS, stream: int = 10):
    """MC covariances of the ``sqrt(n)``-ball with a family of half-spaces.

    Directions: all coordinates, ``n_random`` random unit vectors and the
    estimated mean-gradient direction; every direction gets every offset.
    Returns (directions, covs, stderrs) with covs shaped (directions, offsets).
    """
    ball = sqrt_n_ball(n)
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(stream, 999)))
    rand = rng.standard_normal((n_random, n))
    rand /= np.linalg.norm(rand, axis=1, keepdims=True)
    pilot = McConfig(max(cfg.batches, cfg.samples // 10), cfg.seed, cfg.batches)
    grad, _ = estimate_mean_gradient(ball, pilot, stream=stream + 1)
    gnorm = float(np.linalg.norm(grad))
    stein = grad / gnorm if gnorm > 0 else np.eye(n)[0]
    dirs = np.vstack([np.eye(n), rand, stein])
    offsets = np.asarray(offsets, dtype=float)
    gamma = ball.measure()
    phi_b = stats.norm.cdf(offsets)

    def sampler(rng, k):
        x = rng.standard_normal((k, n))
        proj = x @ dirs.T
        f = ball(x) - gamma
        return (f[:, None, None] * ((proj[:, :, None] <= offsets) - phi_b)).reshape(k, -1)

    covs, ses = _summarize(batch_means(cfg, stream, n + len(dirs) * len(offsets), sampler))
    shape = (len(dirs), len(offsets))
    return dirs, covs.reshape(shape), ses.reshape(shape)


def ball_exact_M(n: int, offsets=None) -> tuple[float, float]:
    """``M`` of the centred ``sqrt(n)``-ball via rotation invariance: (value, best offset).

    Every half-space is a rotation of some ``{x_1 <= beta}``, so the sup is
    a 1-D maximization over ``beta`` of a 1-D integral.
    """
    grid = np.linspace(-4, 4, 161) if offsets is None else np.asarray(offsets)
    covs = ball_halfspace_covariance(n, math.sqrt(n), 0.0, 0.0, grid)
    j = int(np.argmax(covs))
    lo, hi = grid[max(j - 1, 0)], grid[min(j + 1, len(grid) - 1)]
    res = minimize_scalar(lambda b: -ball_halfspace_covariance(n, math.sqrt(n), 0.0, 0.0, [b])[0],
                          bounds=(lo, hi), method="bounded", options={"xatol": 1e-8})
    if -res.fun >= covs[j]:
        return float(-res.fun), float(res.x)
    return float(covs[j]), float(grid[j])


def mc_shifted_ball_cov_sq(n: int, t: float, cfg: McConfig, offsets=(0.0, 0.5, 1.0),
                           outer: int | None = None, stream: int = 12):
    """``E_Y Cov(g_{t,Y}, 1_{x_1 <= beta})^2`` for the ``sqrt(n)``-ball ``g``.

    ``g_{t,y}`` is the ball of radius ``sqrt(n)/sigma`` centred at
    ``-e^{-t} y / sigma``; each covariance is an exact 1-D integral and only
    ``Y`` is sampled (``outer`` draws, default ``samples / 500``).
    """
    sig = math.sqrt(-math.expm1(-2.0 * t))
    rho = math.exp(-t)
    outer = outer or max(cfg.batches * 10, cfg.samples // 500)
    ocfg = McConfig(outer, cfg.seed, cfg.batches)
    means = []
    for b, size in enumerate(ocfg.batch_sizes()):
        y = ocfg.rng(stream, b).standard_normal((size, n))
        vals = np.array([
            ball_halfspace_covariance(n, math.sqrt(n) / sig, -rho * yy[0] / sig,
                                      (rho / sig) ** 2 * float(yy[1:] @ yy[1:]), offsets,
                                      nodes=401) ** 2
            for yy in y])
        means.append(vals.mean(axis=0))
    return _summarize(np.array(means))


def ball_experiments(n: int, cfg: McConfig = McConfig(), t: float = 0.5) -> dict:
    """Three ball checks: no half-space correlation, no predictable direction, stability."""
    if n < 2:
        raise ValueError("ball experiments need n >= 2")
    cap = n ** -0.5
    dirs, covs, ses = ball_candidate_covariances(n, cfg)
    i, j = np.unravel_index(int(np.argmax(covs)), covs.shape)
    best, best_se = float(covs[i, j]), float(ses[i, j])
    exact_val, exact_off = ball_exact_M(n)
    no_half = LabReport("ball-no-halfspace", n, 0.0, cap, best, best_se,
                        best <= cap + 3 * best_se,
                        {"offset": float(OFFSETS[j]), "direction": int(i), "quadrature_M": exact_val,
                         "quadrature_offset": exact_off,
                         "x1_vs_x2_max_gap": float(np.max(np.abs(covs[0] - covs[1]))),
                         "x1_vs_x2_max_se": float(np.max(np.hypot(ses[0], ses[1])))})

    cov_sq, cov_sq_se = mc_shifted_ball_cov_sq(n, t, cfg)
    k = int(np.argmax(cov_sq))
    no_dir = LabReport("ball-no-direction", n, t, 1.0 / n, float(cov_sq[k]), float(cov_sq_se[k]),
                       bool(np.all(cov_sq <= 1.0 / n + 3 * cov_sq_se)),
                       {"offsets": [0.0, 0.5, 1.0], "values": [float(v) for v in cov_sq]})

    var, var_se = mc_var_pt(sqrt_n_ball(n), t, cfg)
    bound = ball_stability_bound(t) - STABLE_SLACK
    stable = LabReport("ball-stable", n, t, var, bound, var_se,
                       var >= bound - 3 * var_se if n >= STABLE_MIN_N else True,
                       {"asserted": n >= STABLE_MIN_N, "bound_slack": STABLE_SLACK})
    return {"no_halfspace": no_half, "no_direction": no_dir, "stable": stable}


# ---------------------------------------------------------------- converse

def converse_time(s: float, t: float) -> float:
    """``r`` with ``e^{-2r} = e^{-2s} + e^{-2t} - e^{-2s-2t}``."""
    return -0.5 * math.log(math.exp(-2 * s) + math.exp(-2 * t) - math.exp(-2 * s - 2 * t))


def check_converse_identity(b: float, s: float, t: float, cfg: McConfig = McConfig(),
                            stream: int = 20) -> LabReport:
    """``E_Y E[f_{s,Y} P_{2t} f_{s,Y}] = E[f P_{2r} f]`` for ``f = 1_{x_1 <= b}``."""
    sig, rho = math.sqrt(-math.expm1(-2 * s)), math.exp(-s)
    rho2t = math.exp(-2 * t)

    def sampler(rng, k):
        y = rng.standard_normal(k)
        x1 = rng.standard_normal(k)
        x2 = rho2t * x1 + math.sqrt(1 - rho2t ** 2) * rng.standard_normal(k)
        return ((sig * x1 + rho * y <= b) & (sig * x2 + rho * y <= b)).astype(float)

    est, se = _summarize(batch_means(cfg, stream, 3, sampler))
    r = converse_time(s, t)
    closed = halfspace_stability_closed(b, 2 * r)
    return LabReport("converse-identity", 1, t, est, closed, se, abs(est - closed) <= 3 * se,
                     {"b": b, "s": s, "r": r})


def check_gaussian_converse(S: GaussianSet, r: float, s: float, cfg: McConfig = McConfig(),
                            C: float = 10.0, stream: int = 21) -> LabReport:
    """``(1 - e^{-2(s-r)}) Var(P_r f) >= 4 E_Y M(f_{s,Y})^2 - C ((1-e^{-2r})/(1-e^{-2s}))^{1/4}``.

    Half-spaces use the exact ``M = gamma (1 - gamma)`` of each shifted
    half-space; balls use the axial half-space family (a lower bound on M).
    """
    if not 0 < r < s:
        raise ValueError("need 0 < r < s")
    sig, rho = math.sqrt(-math.expm1(-2 * s)), math.exp(-s)
    penalty = C * (math.expm1(-2 * r) / math.expm1(-2 * s)) ** 0.25
    factor = -math.expm1(-2 * (s - r))
    if isinstance(S, HalfSpaceSet):
        var, var_se = halfspace_var_pt(S.b, r), 0.0

        def sampler(rng, k):
            g = stats.norm.cdf((S.b - rho * rng.standard_normal(k)) / sig)
            return (g * (1 - g)) ** 2

        m2, m2_se = _summarize(batch_means(cfg, stream, 1, sampler))
        label = "exact"
    elif isinstance(S, Ball) and S.center is None:
        var, var_se = mc_var_pt(S, r, cfg)
        outer = max(cfg.batches * 10, cfg.samples // 2000)
        ocfg = McConfig(outer, cfg.seed, cfg.batches)
        means = []
        for b, size in enumerate(ocfg.batch_sizes()):
            y = ocfg.rng(stream, b).standard_normal((size, S.n))
            vals = []
            for yy in y:
                # rotate so the shifted centre lies on the first axis
                along = -rho * float(np.linalg.norm(yy)) / sig
                covs = ball_halfspace_covariance(S.n, S.radius / sig, along, 0.0,
                                                 OFFSETS, nodes=401)
                vals.append(max(float(np.max(np.abs(covs))), 0.0) ** 2)
            means.append(np.mean(vals))
        m2, m2_se = _summarize(np.array(means))
        label = "axial-family lower bound"
    else:
        raise ValueError("converse check supports half-spaces and centred balls")
    lhs = factor * var
    rhs = 4 * m2 - penalty
    se = math.hypot(factor * var_se, 4 * m2_se)
    return LabReport("gaussian-converse", S.n, r, lhs, rhs, se, lhs >= rhs - 3 * se,
                     {"s": s, "C": C, "penalty": penalty, "mean_M_sq": m2, "M_method": label,
                      "vacuous": rhs <= 0})


def lifted(f: BooleanFunction) -> LiftedBoolean:
    return LiftedBoolean(f if f.range_tag == "indicator" else f.as_indicator())

