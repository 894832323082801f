"""Named functions: standard test instruments plus the block-ball and mixed examples."""

from __future__ import annotations

import math

import numpy as np

from .fourier_core import MAX_N, BooleanFunction, load_table, save_table

NAMES = ("dictator", "majority", "parity", "parity-indicator", "tribes",
         "and-indicator", "block-ball", "mixed")


def dictator(n: int) -> BooleanFunction:
    return BooleanFunction.from_callable(n, lambda x: x[:, 0])


def majority(n: int) -> BooleanFunction:
    if n % 2 == 0:
        raise ValueError("majority needs odd n")
    return BooleanFunction.from_callable(n, lambda x: np.sign(x.sum(axis=1)))


def parity(n: int) -> BooleanFunction:
    return BooleanFunction.from_callable(n, lambda x: x.prod(axis=1))


def tribes_width(n: int) -> int:
    if n < 2:
        return 1
    return max(1, min(n, math.ceil(math.log2(n) - math.log2(math.log(n)))))


def tribes(n: int) -> BooleanFunction:
    """OR of ANDs over consecutive blocks of ``tribes_width(n)`` coordinates.

    True is encoded as -1, so the value is -1 when some full block is all -1.
    """
    w = tribes_width(n)

    def func(x):
        hit = np.zeros(len(x), bool)
        for start in range(0, n, w):
            hit |= np.all(x[:, start:start + w] == -1, axis=1)
        return np.where(hit, -1.0, 1.0)

    return BooleanFunction.from_callable(n, func)


def and_indicator(n: int) -> BooleanFunction:
    """Indicator of the all-(+1) point."""
    return BooleanFunction.from_callable(n, lambda x: np.all(x == 1, axis=1), "indicator")


def block_ball(m: int) -> BooleanFunction:
    """Indicator of ``{x : sum_i (m^{-1/2} sum_{j in J_i} x_j)^2 <= m}`` on ``n = m^2`` bits.

    Blocks are ``J_i = {(i-1)m, ..., im - 1}`` (0-based coordinates).
    """
    if m < 1 or m * m > MAX_N:
        raise ValueError(f"block_ball needs 1 <= m and m^2 <= {MAX_N}, got m={m}")
    n = m * m

    def func(x):
        sums = x.reshape(len(x), m, m).sum(axis=2)
        # integer arithmetic: sum_i s_i^2 / m <= m  <=>  sum_i s_i^2 <= m^2
        return (np.sum(sums.astype(np.int64) ** 2, axis=1) <= m * m).astype(float)

    return BooleanFunction.from_callable(n, func, "indicator")


def mixed_example(n: int) -> BooleanFunction:
    """``x_2`` when ``x_1 = 1``, otherwise ``prod_{i>=3} x_i``."""
    if n < 3:
        raise ValueError("mixed example needs n >= 3")

    def func(x):
        return np.where(x[:, 0] == 1, x[:, 1], x[:, 2:].prod(axis=1))

    return BooleanFunction.from_callable(n, func)


def builtin(name: str, n: int | None = None) -> BooleanFunction:
    """Look up a named function.

    ``name`` may carry its size after a colon (``"majority:5"``,
    ``"block-ball:2"``); for ``block-ball`` the parameter is ``m``.
    """
    if ":" in name:
        name, arg = name.split(":", 1)
        try:
            n = int(arg)
        except ValueError:
            raise ValueError(f"bad size {arg!r} for {name}") from None
    if n is None:
        raise ValueError(f"{name} needs a size, e.g. {name}:3")
    builders = {
        "dictator": dictator,
        "majority": majority,
        "parity": parity,
        "parity-indicator": lambda k: parity(k).as_indicator(),
        "tribes": tribes,
        "and-indicator": and_indicator,
        "block-ball": block_ball,
        "mixed": mixed_example,
    }
    if name not in builders:
        raise ValueError(f"unknown function {name!r}; known: {', '.join(NAMES)}")
    return builders[name](n)


def resolve(spec: str) -> BooleanFunction:
    """A registry name with size, or a path to a truth-table file."""
    if ":" in spec and spec.split(":", 1)[0] in NAMES:
        return builtin(spec)
    return load_table(spec)


def small_corpus(max_n: int = 6) -> dict[str, BooleanFunction]:
    """Every registry family at every admissible size up to ``max_n``."""
    out = {}
    for n in range(1, max_n + 1):
        out[f"dictator:{n}"] = dictator(n)
        out[f"parity:{n}"] = parity(n)
        out[f"tribes:{n}"] = tribes(n)
        out[f"and-indicator:{n}"] = and_indicator(n)
        if n % 2:
            out[f"majority:{n}"] = majority(n)
        if n >= 3:
            out[f"mixed:{n}"] = mixed_example(n)
    for m in range(1, 4):
        if m * m <= max_n:
            out[f"block-ball:{m}"] = block_ball(m)
    return out


load = load_table
save = save_table
