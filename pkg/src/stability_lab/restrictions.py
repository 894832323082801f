"""Random restrictions ``z in {-1,0,+1}^n`` acting on cube functions.

``z (/) y`` keeps ``z_i`` where it is nonzero and substitutes ``y_i`` where
``z_i = 0``; ``f_z(x) = f(z (/) x)``.  A restricted function keeps the ambient
dimension, with the fixed coordinates simply ignored.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .fourier_core import BooleanFunction, popcounts, var_pt, wht

EXACT_MAX_N = 10
_SYMBOLS = {"-": -1, "0": 0, "+": 1}


@dataclass(frozen=True)
class Restriction:
    z: tuple[int, ...]

    def __post_init__(self):
        z = tuple(int(v) for v in self.z)
        if any(v not in (-1, 0, 1) for v in z):
            raise ValueError(f"restriction entries must be in {{-1,0,1}}: {self.z}")
        object.__setattr__(self, "z", z)

    @property
    def n(self) -> int:
        return len(self.z)

    @property
    def free(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.z) if v == 0)

    @classmethod
    def parse(cls, text: str) -> "Restriction":
        try:
            return cls(tuple(_SYMBOLS[ch] for ch in text.strip()))
        except KeyError as exc:
            raise ValueError(f"bad restriction string {text!r}") from exc

    def __str__(self) -> str:
        return "".join("-0+"[v + 1] for v in self.z)

    def merge(self, other: "Restriction") -> "Restriction":
        """Composite restriction: own fixed entries win, ``other`` fills the zeros."""
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        return Restriction(tuple(a if a != 0 else b for a, b in zip(self.z, other.z)))

    def masks(self) -> tuple[int, int]:
        """(fixed-coordinate bitmask, bitmask of coordinates fixed to -1)."""
        fixed = sum(1 << i for i, v in enumerate(self.z) if v != 0)
        minus = sum(1 << i for i, v in enumerate(self.z) if v == -1)
        return fixed, minus


@dataclass(frozen=True)
class RestrictionLaw:
    """Product law: each coordinate is 0 w.p. ``e^{-t}``, else a fair sign."""

    t: float

    def __post_init__(self):
        if not self.t >= 0:
            raise ValueError(f"restriction time must be nonnegative, got {self.t}")

    @property
    def zero_prob(self) -> float:
        return math.exp(-self.t)

    @property
    def fixed_prob(self) -> float:
        return (1.0 - self.zero_prob) / 2.0

    def probability(self, z: Restriction) -> float:
        k = z.z.count(0)
        return self.zero_prob ** k * self.fixed_prob ** (z.n - k)


def restriction_time(t: float) -> float:
    """``s = -log(1 - e^{-t})``, the restriction time paired with noise time ``t``."""
    if t <= 0:
        raise ValueError("noise time must be positive")
    return -math.log1p(-math.exp(-t))


def apply_restriction(f: BooleanFunction, z: Restriction) -> BooleanFunction:
    if z.n != f.n:
        raise ValueError(f"dimension mismatch: f has n={f.n}, z has n={z.n}")
    fixed, minus = z.masks()
    idx = (np.arange(1 << f.n) & ~fixed) | minus
    return BooleanFunction(f.n, f.values[idx], f.range_tag)


def sample_restriction(law: RestrictionLaw, n: int, seed=None) -> Restriction:
    return sample_restrictions(law, n, 1, seed)[0]


def sample_restrictions(law: RestrictionLaw, n: int, count: int, seed=None) -> list[Restriction]:
    rng = np.random.default_rng(seed)
    u = rng.random((count, n))
    signs = np.where(rng.random((count, n)) < 0.5, -1, 1)
    z = np.where(u < law.zero_prob, 0, signs)
    return [Restriction(tuple(row)) for row in z]


def all_restrictions(law: RestrictionLaw, n: int):
    """Yield ``(z, mu_t(z))`` over all ``3^n`` restrictions."""
    p0, p1 = law.zero_prob, law.fixed_prob
    for z in itertools.product((-1, 0, 1), repeat=n):
        k = z.count(0)
        w = p0 ** k * p1 ** (n - k)
        if w > 0:
            yield Restriction(z), w


class Estimate(NamedTuple):
    value: float | np.ndarray
    stderr: float | np.ndarray
    samples: int
    exact: bool


def restriction_expectation(
    f: BooleanFunction,
    law: RestrictionLaw,
    stat: Callable[[BooleanFunction], float | np.ndarray],
    mode: str = "exact",
    samples: int = 10_000,
    seed=0,
) -> Estimate:
    """``E_{Z ~ mu_t} stat(f_Z)``, by exact enumeration or Monte Carlo.

    ``stat`` may return a scalar or an array (e.g. the whole restricted table);
    the expectation is taken elementwise.
    """
    if mode == "exact":
        if f.n > EXACT_MAX_N:
            raise ValueError(f"exact restriction enumeration needs n <= {EXACT_MAX_N}")
        total = 0.0
        count = 0
        for z, w in all_restrictions(law, f.n):
            total = total + w * np.asarray(stat(apply_restriction(f, z)), dtype=float)
            count += 1
        return Estimate(_scalar(total), _scalar(np.zeros_like(total)), count, True)
    if mode != "mc":
        raise ValueError(f"unknown mode {mode!r}")
    vals = np.array([np.asarray(stat(apply_restriction(f, z)), dtype=float)
                     for z in sample_restrictions(law, f.n, samples, seed)])
    mean = vals.mean(axis=0)
    se = vals.std(axis=0, ddof=1) / math.sqrt(samples) if samples > 1 else np.zeros_like(mean)
    return Estimate(_scalar(mean), _scalar(se), samples, False)


def _scalar(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def _subset_products(z: Restriction) -> np.ndarray:
    """``prod_{j in S} z_j`` for every mask S."""
    prod = np.ones(1 << z.n)
    for j, v in enumerate(z.z):
        prod[1 << j:1 << (j + 1)] = prod[:1 << j] * v
    return prod


def restricted_level1_coeff(f: BooleanFunction, z: Restriction, i: int) -> float:
    """``hat f_z(i)`` straight from the spectrum of ``f``.

    Zero when ``z_i`` is fixed, otherwise
    ``sum_{S ni i} hat f(S) prod_{j in S \\ {i}} z_j``.
    """
    if z.n != f.n:
        raise ValueError("dimension mismatch")
    if not 0 <= i < f.n:
        raise ValueError(f"coordinate {i} out of range")
    if z.z[i] != 0:
        return 0.0
    coeffs = wht(f).coeffs
    prod = _subset_products(z)
    masks = np.arange(1 << f.n)
    with_i = masks[(masks >> i) & 1 == 1]
    return float(np.sum(coeffs[with_i] * prod[with_i & ~(1 << i)]))


class RestrictedWeight(NamedTuple):
    """Expected level-1 weight of ``f_{Z_s}`` with ``e^{-s} = 1 - e^{-t}``.

    ``value`` is the exact expectation; ``stated_bound`` uses the faster decay
    ``e^{-2t(|S|-1)}`` and ``variance_bound`` is ``(e^{2t} - e^t) Var(P_t f)``.
    """

    value: float
    stated_bound: float
    variance_bound: float


def expected_restricted_w1(f: BooleanFunction, t: float) -> RestrictedWeight:
    if not t > 0:
        raise ValueError("t must be positive")
    c2 = wht(f).coeffs ** 2
    deg = popcounts(f.n)
    free = 1.0 - math.exp(-t)
    # each fixed coordinate j contributes E[Z_j^2] = P(Z_j != 0) = e^{-t}
    exact = free * np.sum(deg * c2 * np.exp(-t * (deg - 1)))
    stated = free * np.sum(deg * c2 * np.exp(-2.0 * t * (deg - 1)))
    lower = (math.exp(2 * t) - math.exp(t)) * var_pt(f, t)
    return RestrictedWeight(float(exact), float(stated), float(lower))
