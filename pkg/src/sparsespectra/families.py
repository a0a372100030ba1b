"""Parametric continuous laws used as degree-weight distributions.

Each family exposes sampling, quantiles, and closed-form conditional means
over quantile slabs (the ingredients needed both for i.i.d. degree
construction and for deterministic quantization into a
:class:`~sparsespectra.measures.DiscreteMeasure`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["ContinuousLaw", "OnePlusExponential", "UniformLaw", "parse_family"]


class ContinuousLaw:
    """Interface for a continuous law on [0, ∞) with finite mean."""

    def mean(self) -> float:
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        raise NotImplementedError

    def quantile(self, p):
        raise NotImplementedError

    def slab_mean(self, p0: float, p1: float) -> float:
        """E[X | q(p0) < X ≤ q(p1)] in closed form."""
        raise NotImplementedError

    def scaled(self, factor: float) -> "ContinuousLaw":
        raise NotImplementedError

    def normalized(self) -> "ContinuousLaw":
        """Copy rescaled to mean exactly 1."""
        return self.scaled(1.0 / self.mean())

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class OnePlusExponential(ContinuousLaw):
    """scale · (1 + Exp(rate)): an offset exponential bounded away from 0.

    Mean is scale·(1 + 1/rate); e.g. rate=1, scale=1/2 has mean exactly 1.
    """

    rate: float = 1.0
    scale: float = 1.0

    def __post_init__(self) -> None:
        if self.rate <= 0 or self.scale <= 0:
            raise ValueError("rate and scale must be positive")

    def mean(self) -> float:
        return self.scale * (1.0 + 1.0 / self.rate)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return self.scale * (1.0 + rng.exponential(1.0 / self.rate, size))

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        return self.scale * (1.0 - np.log1p(-p) / self.rate)

    def slab_mean(self, p0: float, p1: float) -> float:
        # Conditional mean of Exp(rate) between its p0- and p1-quantiles:
        # survival weights are exactly 1-p0 and 1-p1, so the truncated-mean
        # formula needs no exponentials at all.
        lam = self.rate
        e0 = -math.log1p(-p0) / lam
        if p1 >= 1.0:
            cond = e0 + 1.0 / lam
        else:
            e1 = -math.log1p(-p1) / lam
            s0, s1 = 1.0 - p0, 1.0 - p1
            cond = ((e0 + 1 / lam) * s0 - (e1 + 1 / lam) * s1) / (s0 - s1)
        return self.scale * (1.0 + cond)

    def scaled(self, factor: float) -> "OnePlusExponential":
        return OnePlusExponential(self.rate, self.scale * factor)

    def describe(self) -> str:
        return f"one-plus-exponential(rate={self.rate:g},scale={self.scale:g})"


@dataclass(frozen=True)
class UniformLaw(ContinuousLaw):
    """Uniform on [low, high], low ≥ 0."""

    low: float
    high: float

    def __post_init__(self) -> None:
        if not (0 <= self.low < self.high):
            raise ValueError("need 0 <= low < high")

    def mean(self) -> float:
        return 0.5 * (self.low + self.high)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.uniform(self.low, self.high, size)

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        return self.low + p * (self.high - self.low)

    def slab_mean(self, p0: float, p1: float) -> float:
        return 0.5 * (float(self.quantile(p0)) + float(self.quantile(p1)))

    def scaled(self, factor: float) -> "UniformLaw":
        return UniformLaw(self.low * factor, self.high * factor)

    def describe(self) -> str:
        return f"uniform(low={self.low:g},high={self.high:g})"


def parse_family(text: str) -> ContinuousLaw:
    """Parse a family spec like ``one-plus-exponential(rate=1,scale=0.5)``.

    Bare positional numbers are allowed: ``one-plus-exponential(1)``.
    """
    text = text.strip()
    if "(" in text:
        name, _, rest = text.partition("(")
        args = rest.rstrip(")")
    else:
        name, args = text, ""
    name = name.strip().lower()
    positional: list[float] = []
    keyword: dict[str, float] = {}
    for chunk in filter(None, (c.strip() for c in args.split(","))):
        if "=" in chunk:
            key, _, val = chunk.partition("=")
            keyword[key.strip()] = float(val)
        else:
            positional.append(float(chunk))
    if name in ("one-plus-exponential", "one_plus_exponential"):
        rate = keyword.pop("rate", positional[0] if positional else 1.0)
        scale = keyword.pop("scale", positional[1] if len(positional) > 1 else 1.0)
        if keyword:
            raise ValueError(f"unknown parameters {sorted(keyword)} for {name}")
        return OnePlusExponential(rate, scale)
    if name == "uniform":
        low = keyword.pop("low", positional[0] if positional else 0.0)
        high = keyword.pop("high", positional[1] if len(positional) > 1 else 1.0)
        if keyword:
            raise ValueError(f"unknown parameters {sorted(keyword)} for {name}")
        return UniformLaw(low, high)
    raise ValueError(f"unknown family {name!r}")
