"""Dense truth tables on the cube {-1,1}^n and their Fourier-Walsh calculus.

Index convention: bit ``i`` of a table index encodes coordinate ``x_{i+1}``
through ``x = 1 - 2*bit``, so bit 0 is +1 and bit 1 is -1.  A Fourier
coefficient at mask ``m`` belongs to the set ``S = {i : bit i of m set}`` and
is normalized as ``hat f(S) = E[f(x) chi_S(x)]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

MAX_N = 20
ATOL = 1e-10

INDICATOR = "indicator"
SIGNED = "signed"
RANGE_TAGS = {INDICATOR: (0.0, 1.0), SIGNED: (-1.0, 1.0)}


def popcounts(n: int) -> np.ndarray:
    """``|S|`` for every mask ``0 .. 2^n - 1``."""
    counts = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        counts[1 << i:1 << (i + 1)] = counts[:1 << i] + 1
    return counts


def cube_points(n: int) -> np.ndarray:
    """All points of {-1,1}^n as a ``(2^n, n)`` float array in table order."""
    idx = np.arange(1 << n)
    return 1.0 - 2.0 * ((idx[:, None] >> np.arange(n)) & 1)


def coordinate(n: int, i: int) -> np.ndarray:
    """Values of ``x_{i+1}`` over the table (0-based ``i``)."""
    return 1.0 - 2.0 * ((np.arange(1 << n) >> i) & 1)


def encode(x) -> int:
    """Table index of a point given as a sequence of +-1 values."""
    return sum(1 << i for i, xi in enumerate(x) if xi < 0)


def decode(index: int, n: int) -> tuple[int, ...]:
    return tuple(1 - 2 * ((index >> i) & 1) for i in range(n))


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise ValueError(f"dimension n={n} outside 1..{MAX_N}")


@dataclass(frozen=True)
class BooleanFunction:
    """A real-valued function on {-1,1}^n stored as a dense table."""

    n: int
    values: np.ndarray
    range_tag: str = SIGNED

    def __post_init__(self):
        _check_n(self.n)
        if self.range_tag not in RANGE_TAGS:
            raise ValueError(f"unknown range tag {self.range_tag!r}")
        vals = np.array(self.values, dtype=float)
        if vals.shape != (1 << self.n,):
            raise ValueError(
                f"value count mismatch: expected {1 << self.n}, got {vals.size}")
        lo, hi = RANGE_TAGS[self.range_tag]
        if not np.all(np.isfinite(vals)) or vals.min() < lo or vals.max() > hi:
            raise ValueError(f"range violation: values outside [{lo}, {hi}]")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, n: int, func, range_tag: str = SIGNED) -> "BooleanFunction":
        """Tabulate ``func(x)`` where ``x`` is a ``(2^n, n)`` array of points."""
        _check_n(n)
        return cls(n, np.asarray(func(cube_points(n)), dtype=float), range_tag)

    @classmethod
    def from_points(cls, n: int, points, range_tag: str = INDICATOR) -> "BooleanFunction":
        """Indicator of a set of points given as +-1 tuples."""
        vals = np.zeros(1 << n)
        for p in points:
            vals[encode(p)] = 1.0
        return cls(n, vals, range_tag)

    def __call__(self, x) -> float:
        return float(self.values[encode(x)])

    def __eq__(self, other):
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return (self.n == other.n and self.range_tag == other.range_tag
                and np.array_equal(self.values, other.values))

    __hash__ = None

    def mean(self) -> float:
        return float(self.values.mean())

    def variance(self) -> float:
        return float(self.values.var())

    def is_boolean(self) -> bool:
        """True when the table only takes the two extreme values of its range."""
        lo, hi = RANGE_TAGS[self.range_tag]
        return bool(np.all((self.values == lo) | (self.values == hi)))

    def as_indicator(self) -> "BooleanFunction":
        """Map a signed function to ``(1 + f)/2`` (identity on indicators)."""
        if self.range_tag == INDICATOR:
            return self
        return BooleanFunction(self.n, (1.0 + self.values) / 2.0, INDICATOR)

    def as_signed(self) -> "BooleanFunction":
        if self.range_tag == SIGNED:
            return self
        return BooleanFunction(self.n, 2.0 * self.values - 1.0, SIGNED)

    def permuted(self, perm, flips=None) -> "BooleanFunction":
        """``g(x) = f(y)`` with ``y_{perm[i]} = s_i x_i``, ``s_i = -1`` where ``flips[i]``."""
        n = self.n
        flips = np.zeros(n, bool) if flips is None else np.asarray(flips, bool)
        idx = np.arange(1 << n)
        src = np.zeros_like(idx)
        for i, p in enumerate(perm):
            bit = (idx >> i) & 1
            if flips[i]:
                bit = 1 - bit
            src |= bit << p
        return BooleanFunction(n, self.values[src], self.range_tag)


@dataclass(frozen=True)
class FourierSpectrum:
    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        _check_n(self.n)
        c = np.array(self.coeffs, dtype=float)
        if c.shape != (1 << self.n,):
            raise ValueError("coefficient count must be 2^n")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __getitem__(self, subset) -> float:
        """Coefficient of a subset of 0-based coordinates."""
        return float(self.coeffs[sum(1 << i for i in subset)])

    def degrees(self) -> np.ndarray:
        return popcounts(self.n)

    def weight_by_degree(self) -> np.ndarray:
        """``W^k = sum_{|S|=k} hat f(S)^2`` for ``k = 0..n``."""
        return np.bincount(self.degrees(), weights=self.coeffs ** 2, minlength=self.n + 1)

    def level1(self) -> np.ndarray:
        """Singleton coefficients ``hat f(i)`` in coordinate order."""
        return self.coeffs[1 << np.arange(self.n)]


@dataclass(frozen=True)
class NoiseParam:
    t: float

    def __post_init__(self):
        if not self.t >= 0:
            raise ValueError(f"noise time must be nonnegative, got {self.t}")

    @property
    def rho(self) -> float:
        return float(np.exp(-self.t))


def _as_time(p) -> float:
    return p.t if isinstance(p, NoiseParam) else NoiseParam(float(p)).t


def hadamard(values: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard butterfly, ``O(n 2^n)``."""
    a = np.array(values, dtype=float)
    size = a.size
    h = 1
    while h < size:
        a = a.reshape(-1, 2, h)
        a = np.stack((a[:, 0] + a[:, 1], a[:, 0] - a[:, 1]), axis=1)
        h *= 2
    return a.reshape(size)


def wht(f: BooleanFunction) -> FourierSpectrum:
    return FourierSpectrum(f.n, hadamard(f.values) / (1 << f.n))


def wht_inverse(spec: FourierSpectrum, range_tag: str | None = None) -> BooleanFunction:
    """Evaluate the expansion; the range tag is inferred when not given."""
    vals = hadamard(spec.coeffs)
    if range_tag is None:
        range_tag = INDICATOR if vals.min() >= -ATOL and vals.max() <= 1 + ATOL else SIGNED
    lo, hi = RANGE_TAGS[range_tag]
    vals = np.clip(vals, lo, hi) if vals.min() >= lo - ATOL and vals.max() <= hi + ATOL else vals
    return BooleanFunction(spec.n, vals, range_tag)


def noise_operator(f: BooleanFunction, p) -> BooleanFunction:
    t = _as_time(p)
    if t == 0:
        return f
    spec = wht(f)
    damp = np.exp(-t * popcounts(f.n))
    vals = hadamard(spec.coeffs * damp)
    # P_t is an average of f, so rounding may only push past [min f, max f]
    vals = np.clip(vals, f.values.min(), f.values.max())
    return BooleanFunction(f.n, vals, f.range_tag)


def var_pt(f: BooleanFunction, p) -> float:
    """``Var(P_t f) = sum_{S nonempty} e^{-2t|S|} hat f(S)^2``."""
    t = _as_time(p)
    c = wht(f).coeffs
    deg = popcounts(f.n)
    return float(np.sum(np.exp(-2.0 * t * deg[1:]) * c[1:] ** 2))


def noise_stability(a: BooleanFunction, p) -> float:
    """``S_t(A) = E[1_A P_t 1_A] = sum_S e^{-t|S|} hat 1_A(S)^2``."""
    if not np.all((a.values == 0.0) | (a.values == 1.0)):
        raise ValueError("noise stability needs a 0/1-valued indicator table")
    t = _as_time(p)
    c = wht(a).coeffs
    return float(np.sum(np.exp(-t * popcounts(a.n)) * c ** 2))


def level1_weight(f: BooleanFunction) -> float:
    return float(np.sum(wht(f).level1() ** 2))


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def save_table(f: BooleanFunction, path) -> None:
    text = f"n={f.n} range={f.range_tag}\n" + " ".join(_fmt(v) for v in f.values) + "\n"
    Path(path).write_text(text)


def load_table(path) -> BooleanFunction:
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise ValueError("malformed header: empty file")
    fields = dict(tok.split("=", 1) for tok in lines[0].split() if "=" in tok)
    if set(fields) != {"n", "range"} or len(lines[0].split()) != 2:
        raise ValueError(f"malformed header: {lines[0]!r}")
    try:
        n = int(fields["n"])
    except ValueError:
        raise ValueError(f"malformed header: {lines[0]!r}") from None
    if fields["range"] not in RANGE_TAGS:
        raise ValueError(f"malformed header: unknown range {fields['range']!r}")
    tokens = " ".join(lines[1:]).split()
    if len(tokens) != 1 << n:
        raise ValueError(f"value count mismatch: expected {1 << n}, got {len(tokens)}")
    return BooleanFunction(n, np.array([float(v) for v in tokens]), fields["range"])
