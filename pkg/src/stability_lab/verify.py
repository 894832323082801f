"""Verification checks and named suites.

Every check returns a :class:`CheckReport` whose ``passed`` flag means
``lhs >= rhs - slack``; checks of the form "observed <= bound" put the bound
on the left.  Universal constants the theory leaves unpinned are reported as
empirical ratios and only asserted at the conservative values listed below.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy import stats

from . import corpus
from . import gaussian_lab as gl
from .fourier_core import (BooleanFunction, cube_points, level1_weight, noise_operator,
                           noise_stability, popcounts, var_pt, wht, wht_inverse)
from .halfspace_bool import (EXACT_MAX_N, construct_level1_halfspace, exact_M, exact_M_values,
                             heuristic_M, is_separable, linear_form_abs_mean, threshold_tables)
from .restrictions import (Restriction, RestrictionLaw, all_restrictions, apply_restriction,
                           expected_restricted_w1, restriction_expectation, restriction_time,
                           sample_restrictions)

DEFAULT_SEED = 20240
C_EMP_MIN = 1e-3
PERES_C = 3.0
CONVERSE_C = 10.0
PERES_TIMES = (0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0)
CSV_HEADER = ["check_id", "n", "t", "lhs", "rhs", "slack", "pass"]


def default_seed() -> int:
    env = os.environ.get("STABILITY_LAB_SEED")
    return int(env) if env else DEFAULT_SEED


@dataclass
class CheckReport:
    check_id: str
    params: dict
    lhs: float
    rhs: float
    slack: float
    passed: bool
    runtime: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return _plain(asdict(self))

    @classmethod
    def from_json(cls, record: dict) -> "CheckReport":
        return cls(**record)

    def csv_row(self) -> list[str]:
        return [self.check_id, _g9(self.params.get("n", "")), _g9(self.params.get("t", "")),
                _g9(self.lhs), _g9(self.rhs), _g9(self.slack), "1" if self.passed else "0"]


def _g9(v) -> str:
    return f"{v:.9g}" if isinstance(v, (float, np.floating)) else str(v)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def _report(check_id, params, lhs, rhs, slack=0.0, started=None, passed=None, **extra):
    lhs, rhs, slack = float(lhs), float(rhs), float(slack)
    ok = lhs >= rhs - slack if passed is None else bool(passed)
    runtime = time.perf_counter() - started if started is not None else 0.0
    return CheckReport(check_id, _plain(params), lhs, rhs, slack, ok, runtime, _plain(extra))


def _random_functions(rng, n: int, count: int) -> list[BooleanFunction]:
    """Half real-valued [0,1] tables, half 0/1 indicators."""
    out = []
    for k in range(count):
        vals = rng.random(1 << n)
        if k % 2:
            vals = (vals < 0.5).astype(float)
        out.append(BooleanFunction(n, vals, "indicator"))
    return out


# ---------------------------------------------------------------- identities

def check_fourier_identities(seed: int, max_n: int = 10, per_n: int = 50,
                             tol: float = 1e-10) -> list[CheckReport]:
    started = time.perf_counter()
    rng = np.random.default_rng([seed, 1])
    pars = inv = semi = stab = 0.0
    for n in range(1, max_n + 1):
        for f in _random_functions(rng, n, per_n):
            spec = wht(f)
            pars = max(pars, abs(np.sum(spec.coeffs ** 2) - np.mean(f.values ** 2)))
            inv = max(inv, np.max(np.abs(wht_inverse(spec, f.range_tag).values - f.values)))
            for s, t in itertools.product((0.1, 0.5, 1.0), repeat=2):
                twice = noise_operator(noise_operator(f, s), t).values
                semi = max(semi, np.max(np.abs(twice - noise_operator(f, s + t).values)))
            a = BooleanFunction(n, (f.values >= 0.5).astype(float), "indicator")
            for t in (0.1, 0.5, 1.0):
                stab = max(stab, abs(noise_stability(a, t) - (a.mean() ** 2 + var_pt(a, t / 2))))
    params = {"n": f"1..{max_n}", "per_n": per_n, "seed": seed}
    return [
        _report("identities.parseval", params, tol, pars, started=started),
        _report("identities.involution", params, 1e-12 if tol < 1e-11 else tol, inv, started=started),
        _report("identities.semigroup", params, tol, semi, started=started),
        _report("identities.stability", params, tol, stab, started=started),
    ]


def pointwise_pt(f: BooleanFunction, t: float) -> np.ndarray:
    """``P_t f`` from the resampling kernel ``prod_i (1 + e^{-t} x_i y_i)/2``."""
    x = cube_points(f.n)
    rho = math.exp(-t)
    kernel = np.prod((1.0 + rho * x[:, None, :] * x[None, :, :]) / 2.0, axis=2)
    return kernel @ f.values


def check_restriction_identity(seed: int, max_n: int = 6, per_n: int = 10,
                               tol: float = 1e-10) -> CheckReport:
    started = time.perf_counter()
    rng = np.random.default_rng([seed, 2])
    worst = 0.0
    for n in range(1, max_n + 1):
        for f in _random_functions(rng, n, per_n):
            for t in (0.1, 0.5, 1.0):
                est = restriction_expectation(f, RestrictionLaw(t), lambda g: g.values)
                worst = max(worst, np.max(np.abs(est.value - noise_operator(f, t).values)))
    return _report("identities.restriction", {"n": f"1..{max_n}", "t": "0.1,0.5,1", "seed": seed},
                   tol, worst, started=started)


def check_restriction_weight(max_n: int = 6, tol: float = 1e-10,
                             times=(0.1, 0.5, 1.0)) -> list[CheckReport]:
    """Closed-form ``E w_1(f_{Z_s})`` against 3^n enumeration, and the two lower bounds."""
    started = time.perf_counter()
    gap = 0.0
    dominance = math.inf
    chain = math.inf
    for name, f in corpus.small_corpus(max_n).items():
        for t in times:
            s = restriction_time(t)
            enum = restriction_expectation(f, RestrictionLaw(s), level1_weight).value
            closed = expected_restricted_w1(f, t)
            gap = max(gap, abs(enum - closed.value))
            chain = min(chain, enum - closed.stated_bound)
            dominance = min(dominance, closed.value - closed.variance_bound,
                            closed.stated_bound - closed.variance_bound)
    params = {"n": f"1..{max_n}", "t": ",".join(map(str, times))}
    return [
        _report("identities.restriction_weight_closed", params, tol, gap, started=started),
        _report("identities.restriction_weight_stated", params, chain, 0.0, 1e-12,
                started=started, note="enumeration minus e^{-2t(|S|-1)} expression"),
        _report("identities.restriction_weight_variance", params, dominance, 0.0, 1e-12,
                started=started, note="min over corpus of closed form minus (e^2t-e^t)Var(P_t f)"),
    ]


# ---------------------------------------------------------------- half-spaces

def _hyperoctahedral_maps(n: int) -> np.ndarray:
    """Point permutations of the cube induced by coordinate permutations and sign flips."""
    idx = np.arange(1 << n)
    maps = []
    for perm in itertools.permutations(range(n)):
        for flips in range(1 << n):
            img = np.zeros_like(idx)
            for i, p in enumerate(perm):
                img |= (((idx >> i) & 1) ^ ((flips >> i) & 1)) << p
            maps.append(img)
    return np.array(maps)


@lru_cache(maxsize=None)
def brute_force_threshold_tables(n: int) -> np.ndarray:
    """Every subset of the cube that the LP certifies as a half-space.

    Subsets are grouped into orbits of the coordinate permutation / sign
    flip group (which maps half-spaces to half-spaces); one LP per orbit.
    """
    size = 1 << n
    masks = np.arange(1 << size, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(size)) & 1
    canon = masks.copy()
    for img in _hyperoctahedral_maps(n):
        canon = np.minimum(canon, bits @ (np.int64(1) << img.astype(np.int64)))
    reps, inverse = np.unique(canon, return_inverse=True)
    ok = np.array([is_separable(((int(r) >> np.arange(size)) & 1).astype(bool), n)[0]
                   for r in reps])
    table = bits[ok[inverse]].astype(float)
    table.setflags(write=False)
    return table


def check_exact_M_bruteforce(seed: int, random_n4: int = 200, tol: float = 1e-9) -> list[CheckReport]:
    started = time.perf_counter()
    rng = np.random.default_rng([seed, 3])
    out = []
    for n in (2, 3, 4):
        brute = brute_force_threshold_tables(n)
        if n < 4:
            funcs = np.array([((m >> np.arange(1 << n)) & 1) for m in range(1 << (1 << n))], float)
        else:
            funcs = np.array([f.values for f in _random_functions(rng, n, random_n4)])
        fast = exact_M_values(threshold_tables(n), funcs).max(axis=1)
        slow = exact_M_values(brute, funcs).max(axis=1)
        gap = float(np.max(np.abs(fast - slow)))
        out.append(_report(f"halfspace.exact_M_vs_bruteforce_n{n}",
                           {"n": n, "functions": len(funcs), "seed": seed}, tol, gap,
                           started=started, threshold_sets=len(brute),
                           enumerated_sets=len(threshold_tables(n))))
    par = exact_M(corpus.builtin("parity-indicator", 2)).value
    dic = exact_M(BooleanFunction.from_callable(2, lambda x: (1 - x[:, 0]) / 2, "indicator")).value
    out.append(_report("halfspace.fixture_parity2", {"n": 2}, tol, abs(par - 0.125), value=par))
    out.append(_report("halfspace.fixture_dictator", {"n": 2}, tol, abs(dic - 0.25), value=dic))
    return out


def check_linear_correlation(seed: int, n: int = 12, count: int = 100) -> CheckReport:
    """``E|l| >= ||a||_2 / 20`` for random weights, exact over the cube; lhs is the worst ratio."""
    started = time.perf_counter()
    rng = np.random.default_rng([seed, 4])
    ratios = []
    for k in range(count):
        a = rng.standard_normal(n) if k % 2 == 0 else rng.exponential(size=n) ** 3
        ratios.append(linear_form_abs_mean(a) / np.linalg.norm(a))
    worst = min(ratios)
    return _report("halfspace.linear_correlation", {"n": n, "count": count, "seed": seed},
                   worst, 1 / 20, started=started, gaussian_limit=math.sqrt(2 / math.pi))


def check_level1_construction(max_n: int = 4) -> CheckReport:
    """Level-1 half-space vs ``w_1 / sigma``; reports the smallest achieved constant."""
    started = time.perf_counter()
    consts = {}
    chained = math.inf
    for name, f in corpus.small_corpus(max_n).items():
        if level1_weight(f) <= 1e-12 or f.variance() == 0:
            continue
        _, cov = construct_level1_halfspace(f)
        consts[name] = cov / (level1_weight(f) / math.sqrt(f.variance()))
        chained = min(chained, heuristic_M(f, budget=20).value - cov)
    return _report("halfspace.level1_construction", {"n": f"1..{max_n}"}, chained, 0.0, 1e-12,
                   started=started, min_constant=min(consts.values()), constants=consts)


# ---------------------------------------------------------------- theorems

def expected_M(f: BooleanFunction, law: RestrictionLaw, power: int = 1) -> float:
    """``E M(f_Z)^power`` over all restrictions, exact M, batched."""
    tables = threshold_tables(f.n)
    total = 0.0
    batch, weights = [], []

    def flush():
        nonlocal total
        if batch:
            vals = exact_M_values(tables, np.array(batch)).max(axis=1)
            total += float(np.dot(weights, np.maximum(vals, 0.0) ** power))
            batch.clear()
            weights.clear()

    for z, w in all_restrictions(law, f.n):
        batch.append(apply_restriction(f, z).values)
        weights.append(w)
        if len(batch) == 64:
            flush()
    flush()
    return total


def sampled_M(f: BooleanFunction, law: RestrictionLaw, samples: int, seed,
              power: int = 1, budget: int = 50) -> tuple[float, float]:
    vals = []
    for z in sample_restrictions(law, f.n, samples, seed):
        g = apply_restriction(f, z)
        m = (exact_M_values(threshold_tables(f.n), g.values).max() if f.n <= EXACT_MAX_N
             else heuristic_M(g, budget=budget).value)
        vals.append(max(float(m), 0.0) ** power)
    vals = np.array(vals)
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(len(vals)))


def check_boolean_restriction_theorem(f: BooleanFunction, t: float, mode: str = "exact",
                                      samples: int = 2000, seed: int = 0,
                                      name: str = "f") -> CheckReport:
    """``E M(f_{Z_s}) >= c (e^{2t} - 1) Var(P_t f)`` with ``s = -log(1 - e^{-t})``.

    ``f`` is taken in its [0,1] form.  Passes when ``c_emp >= 1e-3`` or the
    right side is below 1e-6 (vacuous).
    """
    started = time.perf_counter()
    g = f.as_indicator()
    s = restriction_time(t)
    law = RestrictionLaw(s)
    if mode == "exact":
        if g.n > EXACT_MAX_N:
            raise ValueError(f"exact mode needs n <= {EXACT_MAX_N}")
        lhs, se = expected_M(g, law), 0.0
    else:
        lhs, se = sampled_M(g, law, samples, seed)
    var = var_pt(g, t)
    rhs = math.expm1(2 * t) * var
    vacuous = var <= 1e-6
    c_emp = lhs / rhs if rhs > 0 else math.inf
    return _report(f"theorem.boolean_restriction[{name}]",
                   {"n": g.n, "t": t, "s": s, "mode": mode, "range": "indicator",
                    "samples": samples if mode != "exact" else None, "seed": seed},
                   c_emp if math.isfinite(c_emp) else 1.0, C_EMP_MIN, 0.0, started=started,
                   passed=vacuous or c_emp >= C_EMP_MIN,
                   expected_M=lhs, stderr=se, rhs_term=rhs, var_pt=var, vacuous=vacuous,
                   m_engine="exact" if g.n <= EXACT_MAX_N else "heuristic (lower bound)")


def check_boolean_converse(f: BooleanFunction, r: float, s: float, C: float = CONVERSE_C,
                           name: str = "f") -> CheckReport:
    """``(1 - e^{-2(s-r)}) Var(P_r f) >= 4 E M^2(f_{Z_s}) - C ((1-e^{-2r})/(1-e^{-2s}))^{1/4}``."""
    if not 0 < r < s:
        raise ValueError("need 0 < r < s")
    started = time.perf_counter()
    if f.n > EXACT_MAX_N:
        raise ValueError(f"exact mode needs n <= {EXACT_MAX_N}")
    factor = -math.expm1(-2 * (s - r))
    var = var_pt(f, r)
    m2 = expected_M(f, RestrictionLaw(s), power=2)
    ratio = math.expm1(-2 * r) / math.expm1(-2 * s)
    penalty = C * ratio ** 0.25
    rhs = 4 * m2 - penalty
    return _report(f"theorem.boolean_converse[{name}]",
                   {"n": f.n, "t": r, "r": r, "s": s, "C": C, "range": f.range_tag},
                   factor * var, rhs, 0.0, started=started,
                   var_pt=var, factor=factor, mean_M_sq=m2, time_ratio=ratio, penalty=penalty,
                   vacuous=rhs <= 0)


def peres_gap(f: BooleanFunction, t: float) -> float:
    """``E[(1_A - P_t 1_A)^2] = sum_S (1 - e^{-t|S|})^2 hat 1_A(S)^2``."""
    c2 = wht(f.as_indicator()).coeffs ** 2
    return float(np.sum(np.expm1(-t * popcounts(f.n)) ** 2 * c2))


def check_peres(max_n: int = 15, times=PERES_TIMES, C: float = PERES_C) -> CheckReport:
    started = time.perf_counter()
    worst_ratio, worst = 0.0, None
    for n in range(3, max_n + 1, 2):
        f = corpus.majority(n)
        for t in times:
            ratio = peres_gap(f, t) / (C * math.sqrt(t))
            if ratio > worst_ratio:
                worst_ratio, worst = ratio, (n, t)
    return _report("theorem.peres", {"n": f"3..{max_n} odd", "t": ",".join(map(str, times)), "C": C},
                   1.0, worst_ratio, 0.0, started=started, worst_at=worst,
                   note="lhs 1 vs max of gap / (C sqrt t)")


def check_mode_swap(f: BooleanFunction, t: float, samples: int, seed: int,
                    name: str = "f") -> CheckReport:
    """Exact and sampled restriction-theorem LHS agree within 3 stderr."""
    started = time.perf_counter()
    exact = check_boolean_restriction_theorem(f, t, "exact", name=name)
    mc = check_boolean_restriction_theorem(f, t, "sampled", samples=samples, seed=seed, name=name)
    se = mc.extra["stderr"]
    gap = abs(exact.extra["expected_M"] - mc.extra["expected_M"])
    return _report(f"theorem.mode_swap[{name}]", {"n": f.n, "t": t, "samples": samples, "seed": seed},
                   3 * se, gap, 0.0, started=started, exact=exact.extra["expected_M"],
                   sampled=mc.extra["expected_M"])


def theorem_corpus(max_n: int = 5) -> dict[str, BooleanFunction]:
    out = {k: v for k, v in corpus.small_corpus(max_n).items()}
    out["block-ball:2"] = corpus.block_ball(2)
    return out


# ---------------------------------------------------------------- gaussian

def check_gaussian_closed_forms(cfg: gl.McConfig) -> list[CheckReport]:
    started = time.perf_counter()
    sheppard = max(abs(gl.halfspace_stability_closed(0.0, t)
                       - (0.25 + math.asin(math.exp(-t)) / (2 * math.pi)))
                   for t in np.linspace(0.01, 3.0, 60))
    out = [_report("gaussian.sheppard", {"b": 0.0}, 1e-8, sheppard, started=started)]
    for b, t in ((0.0, 0.5), (0.7, 0.3)):
        est, se = gl.mc_noise_stability(gl.coordinate_halfspace(2, b), t, cfg)
        closed = gl.halfspace_stability_closed(b, t)
        out.append(_report(f"gaussian.closed_vs_mc[b={b},t={t}]",
                           {"n": 2, "t": t, "b": b, "samples": cfg.samples, "seed": cfg.seed},
                           3 * se, abs(est - closed), started=started, estimate=est, closed=closed))
    bs = np.linspace(-2, 2, 9)
    ts = (0.05, 0.1, 0.2, 0.5, 1.0, 1.5, 2.0)
    ledoux = hl2 = -math.inf
    for b in bs:
        for t in ts:
            gamma = float(stats.norm.cdf(b))
            ledoux = max(ledoux, gamma - gl.halfspace_stability_closed(b, t)
                         - math.acos(math.exp(-t)) / (2 * math.pi))
            hl2 = max(hl2, gl.halfspace_l2_gap(b, t) - math.acos(math.exp(-t)) / math.pi)
    grid = {"b": "-2..2", "t": ",".join(map(str, ts))}
    out.append(_report("gaussian.ledoux", grid, 1e-8, ledoux, started=started,
                       note="max of gamma - S_t - arccos(e^-t)/2pi"))
    out.append(_report("gaussian.halfspace_l2", grid, 1e-8, hl2, started=started,
                       note="max of E(1_A - P_t 1_A)^2 - arccos(e^-t)/pi"))
    return out


def _from_lab(rep: gl.LabReport, check_id: str, started, params=None) -> CheckReport:
    p = {"n": rep.n, "t": rep.t}
    p.update(params or {})
    extra = dict(rep.extra)
    extra["stderr"] = rep.stderr
    return _report(check_id, p, rep.lhs, rep.rhs, 3 * rep.stderr, started=started,
                   passed=rep.passed, **extra)


def check_gaussian_exp_w1(cfg: gl.McConfig) -> list[CheckReport]:
    out = []
    for label, S in (("halfspace", gl.coordinate_halfspace(4, 0.3)), ("ball8", gl.sqrt_n_ball(8))):
        started = time.perf_counter()
        out.append(_from_lab(gl.check_exp_w1(S, 0.5, cfg), f"gaussian.exp_w1[{label}]", started,
                             {"samples": cfg.samples, "seed": cfg.seed}))
    return out


def check_ball(n: int, cfg: gl.McConfig, t: float = 0.5) -> list[CheckReport]:
    started = time.perf_counter()
    reps = gl.ball_experiments(n, cfg, t)
    params = {"samples": cfg.samples, "seed": cfg.seed}
    out = [_from_lab(reps[k], f"gaussian.ball_{k}[n={n}]", started, params)
           for k in ("no_halfspace", "no_direction", "stable")]
    started = time.perf_counter()
    out.append(_from_lab(gl.check_exp_w1(gl.sqrt_n_ball(n), t, cfg),
                         f"gaussian.ball_exp_w1[n={n}]", started, params))
    return out


def check_gaussian_converse(cfg: gl.McConfig) -> list[CheckReport]:
    out = []
    started = time.perf_counter()
    out.append(_from_lab(gl.check_converse_identity(0.4, 0.7, 0.3, cfg), "gaussian.converse_identity",
                         started, {"samples": cfg.samples}))
    small = gl.McConfig(max(cfg.batches, cfg.samples // 10), cfg.seed, cfg.batches)
    for label, S in (("halfspace", gl.coordinate_halfspace(3, 0.2)), ("ball16", gl.sqrt_n_ball(16))):
        started = time.perf_counter()
        out.append(_from_lab(gl.check_gaussian_converse(S, 0.1, 1.0, small),
                             f"gaussian.converse[{label}]", started, {"r": 0.1, "s": 1.0}))
    started = time.perf_counter()
    out.append(_from_lab(gl.level1_halfspace_gaussian(gl.coordinate_halfspace(3, 0.5), small),
                         "gaussian.w1_to_halfspace[halfspace]", started))
    return out


# ---------------------------------------------------------------- examples

def counterexample_decay(ms=(2, 3, 4), t: float = 0.2, min_var: float = 0.05,
                         budget: int = 200, seed: int = 0) -> CheckReport:
    started = time.perf_counter()
    rows = []
    for m in ms:
        f = corpus.block_ball(m)
        if f.n <= EXACT_MAX_N:
            res, label = exact_M(f), "exact"
        else:
            res, label = heuristic_M(f, budget=budget, seed=seed), "lower bound (heuristic)"
        rows.append({"m": m, "n": f.n, "measure": f.mean(), "var_pt": var_pt(f, t),
                     "best_cov": res.value, "label": label})
    covs = [r["best_cov"] for r in rows]
    decreasing = all(b <= a + 1e-12 for a, b in zip(covs, covs[1:]))
    stable = all(r["var_pt"] >= min_var for r in rows)
    return _report("examples.counterexample_decay", {"n": ",".join(str(r["n"]) for r in rows), "t": t},
                   min(r["var_pt"] for r in rows), min_var, 0.0, started=started,
                   passed=decreasing and stable, rows=rows, nonincreasing=decreasing)


def check_mixed_example(n: int = 5, t: float = 0.5) -> list[CheckReport]:
    started = time.perf_counter()
    f = corpus.mixed_example(n)
    plus = apply_restriction(f, Restriction((1,) + (0,) * (n - 1)))
    minus = apply_restriction(f, Restriction((-1,) + (0,) * (n - 1)))
    m_plus = exact_M(plus.as_indicator()).value
    w_minus = level1_weight(minus)
    m_minus = exact_M(minus.as_indicator()).value
    fail_prob = 0.5 * math.exp(-t)
    return [
        _report("examples.mixed_plus", {"n": n}, 1e-12, abs(m_plus - 0.25), started=started,
                exact_M=m_plus),
        _report("examples.mixed_minus", {"n": n}, 1e-12, w_minus, started=started, w1=w_minus,
                exact_M=m_minus, var_pt=var_pt(minus, t), full_var_pt=var_pt(f, t),
                prob_sensitive_branch=fail_prob),
    ]


# ---------------------------------------------------------------- suites

def _suite_identities(seed, cfg):
    return [lambda: check_fourier_identities(seed), lambda: check_restriction_identity(seed),
            lambda: check_restriction_weight()]


def _suite_halfspace(seed, cfg):
    return [lambda: check_exact_M_bruteforce(seed), lambda: check_linear_correlation(seed),
            lambda: check_level1_construction()]


def _suite_theorems(seed, cfg):
    jobs = [lambda n=name, f=f: check_boolean_restriction_theorem(f, 0.5, name=n)
            for name, f in theorem_corpus().items()]
    jobs += [lambda: check_boolean_converse(corpus.dictator(3), 0.1, 2.0, name="dictator:3"),
             lambda: check_boolean_converse(corpus.parity(4), 0.1, 2.0, name="parity:4"),
             lambda: check_boolean_converse(corpus.majority(5), 0.1, 2.0, name="majority:5"),
             lambda: check_peres(),
             lambda: check_mode_swap(corpus.majority(3), 0.5, 4000, seed, name="majority:3")]
    return jobs


def _suite_gaussian(seed, cfg):
    return [lambda: check_gaussian_closed_forms(cfg), lambda: check_gaussian_exp_w1(cfg),
            lambda: check_ball(16, cfg), lambda: check_ball(64, cfg),
            lambda: check_gaussian_converse(cfg)]


def _suite_examples(seed, cfg):
    return [lambda: counterexample_decay(seed=seed), lambda: check_mixed_example()]


SUITES = {
    "identities": _suite_identities,
    "halfspace": _suite_halfspace,
    "theorems": _suite_theorems,
    "gaussian": _suite_gaussian,
    "examples": _suite_examples,
}


def run_suite(name: str, seed: int | None = None, samples: int = 1_000_000,
              jobs: int | None = None) -> list[CheckReport]:
    """Run every check of a suite (``"all"`` runs them all); reports sorted by id."""
    seed = default_seed() if seed is None else seed
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}, all")
    cfg = gl.McConfig(samples, seed, 20)
    tasks = [task for n in names for task in SUITES[n](seed, cfg)]
    workers = jobs or min(len(tasks), os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(lambda job: job(), tasks))
    reports = []
    for r in results:
        reports.extend(r if isinstance(r, list) else [r])
    return sorted(reports, key=lambda r: r.check_id)


def to_json(reports: list[CheckReport]) -> str:
    return json.dumps([r.to_json() for r in reports], indent=2)


def to_csv(reports: list[CheckReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in reports:
        writer.writerow(r.csv_row())
    return buf.getvalue()


def emit(reports: list[CheckReport], out_dir, stem: str) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    jpath, cpath = out / f"{stem}.json", out / f"{stem}.csv"
    jpath.write_text(to_json(reports) + "\n")
    cpath.write_text(to_csv(reports))
    return jpath, cpath


def stability_curve(f: BooleanFunction, t0: float, t1: float, steps: int) -> str:
    """CSV of ``Var(P_t f)`` and, for indicators, ``S_t`` over a time grid."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "var_pt", "stability"])
    for t in np.linspace(t0, t1, steps):
        stab = noise_stability(f, t) if f.is_boolean() and f.range_tag == "indicator" else ""
        writer.writerow([_g9(float(t)), _g9(var_pt(f, t)), _g9(stab) if stab != "" else ""])
    return buf.getvalue()

