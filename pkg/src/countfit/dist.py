"""Count distributions: pmf, log-pmf, generating functions and moments.

Supported families: Poisson, geometric, negative binomial, and the two
compound constructions (zero-inflated/deflated and hurdle) over any of the
base families. Compound nesting is restricted to depth 1. All model types
are immutable and every operation is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import InvalidModelError, ParameterBoundError
from .specfn import ln_gamma

__all__ = [
    "Poisson",
    "Geometric",
    "NegBinomial",
    "ZeroInflated",
    "Hurdle",
    "CountModel",
    "BaseModel",
    "Moments",
    "pmf",
    "log_pmf",
    "pgf",
    "moments",
    "make_zero_inflated",
    "make_hurdle",
]

_NEG_INF = float("-inf")


@dataclass(frozen=True)
class Poisson:
    mean: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.mean) or self.mean < 0.0:
            raise InvalidModelError(f"Poisson mean must be >= 0, got {self.mean!r}")


@dataclass(frozen=True)
class Geometric:
    p: float

    def __post_init__(self) -> None:
        if not 0.0 < self.p <= 1.0:
            raise InvalidModelError(f"Geometric p must be in (0, 1], got {self.p!r}")


@dataclass(frozen=True)
class NegBinomial:
    p: float
    k: float

    def __post_init__(self) -> None:
        if not 0.0 < self.p <= 1.0:
            raise InvalidModelError(f"NegBinomial p must be in (0, 1], got {self.p!r}")
        if not math.isfinite(self.k) or self.k <= 0.0:
            raise InvalidModelError(f"NegBinomial k must be > 0, got {self.k!r}")


BaseModel = Union[Poisson, Geometric, NegBinomial]


@dataclass(frozen=True)
class ZeroInflated:
    pi: float
    base: BaseModel

    def __post_init__(self) -> None:
        if isinstance(self.base, (ZeroInflated, Hurdle)):
            raise InvalidModelError("compound models cannot be nested")
        lo = _zero_inflation_floor(self.base)
        if not lo <= self.pi <= 1.0:
            raise ParameterBoundError(
                f"zero-inflation weight {self.pi!r} outside admissible "
                f"interval [{lo:.6g}, 1]",
                lo,
                1.0,
            )


@dataclass(frozen=True)
class Hurdle:
    pi: float
    base: BaseModel

    def __post_init__(self) -> None:
        if isinstance(self.base, (ZeroInflated, Hurdle)):
            raise InvalidModelError("compound models cannot be nested")
        if not 0.0 <= self.pi <= 1.0:
            raise ParameterBoundError(
                f"hurdle zero mass {self.pi!r} outside [0, 1]", 0.0, 1.0
            )
        if pmf(self.base, 0) >= 1.0:
            raise InvalidModelError(
                "hurdle base puts all mass at zero; truncated part is undefined"
            )


CountModel = Union[Poisson, Geometric, NegBinomial, ZeroInflated, Hurdle]


@dataclass(frozen=True)
class Moments:
    mean: float
    variance: float
    dispersion: float | None  # variance/mean; None when mean == 0


def _zero_inflation_floor(base: BaseModel) -> float:
    """Smallest admissible mixing weight: -p0/(1-p0) keeps P(Y=0) >= 0."""
    p0 = pmf(base, 0)
    if p0 >= 1.0:
        return 0.0
    return -p0 / (1.0 - p0)


def make_zero_inflated(base: BaseModel, pi: float) -> ZeroInflated:
    """Validated zero-inflated(deflated) model over a non-compound base."""
    return ZeroInflated(pi=pi, base=base)


def make_hurdle(base: BaseModel, pi: float) -> Hurdle:
    """Validated hurdle model over a non-compound base with base P(0) < 1."""
    return Hurdle(pi=pi, base=base)


def log_pmf(model: CountModel, y: int) -> float:
    """ln P(Y=y); returns -inf where the pmf is exactly zero."""
    if y < 0:
        raise InvalidModelError(f"count must be >= 0, got {y!r}")
    if isinstance(model, Poisson):
        if model.mean == 0.0:
            return 0.0 if y == 0 else _NEG_INF
        return y * math.log(model.mean) - model.mean - ln_gamma(y + 1.0)
    if isinstance(model, Geometric):
        if model.p == 1.0:
            return 0.0 if y == 0 else _NEG_INF
        return math.log(model.p) + y * math.log1p(-model.p)
    if isinstance(model, NegBinomial):
        p, k = model.p, model.k
        if p == 1.0:
            return 0.0 if y == 0 else _NEG_INF
        return (
            ln_gamma(y + k)
            - ln_gamma(y + 1.0)
            - ln_gamma(k)
            + k * math.log(p)
            + y * math.log1p(-p)
        )
    if isinstance(model, ZeroInflated):
        pi = model.pi
        if y == 0:
            p0 = pmf(model.base, 0)
            mass = pi + (1.0 - pi) * p0
            return math.log(mass) if mass > 0.0 else _NEG_INF
        if pi >= 1.0:
            return _NEG_INF
        return math.log1p(-pi) + log_pmf(model.base, y)
    if isinstance(model, Hurdle):
        pi = model.pi
        if y == 0:
            return math.log(pi) if pi > 0.0 else _NEG_INF
        if pi >= 1.0:
            return _NEG_INF
        base_lp = log_pmf(model.base, y)
        if base_lp == _NEG_INF:
            return _NEG_INF
        return math.log1p(-pi) + base_lp - math.log1p(-pmf(model.base, 0))
    raise InvalidModelError(f"unknown model type {type(model).__name__}")


def pmf(model: CountModel, y: int) -> float:
    """P(Y=y); exact 0.0 for structurally impossible outcomes."""
    lp = log_pmf(model, y)
    return 0.0 if lp == _NEG_INF else math.exp(lp)


def pgf(model: CountModel, z: float) -> float:
    """Probability generating function E(z^Y) for |z| <= 1."""
    if abs(z) > 1.0:
        raise InvalidModelError(f"pgf requires |z| <= 1, got {z!r}")
    if isinstance(model, Poisson):
        return math.exp(model.mean * (z - 1.0))
    if isinstance(model, Geometric):
        return model.p / (1.0 - (1.0 - model.p) * z)
    if isinstance(model, NegBinomial):
        return (model.p / (1.0 - (1.0 - model.p) * z)) ** model.k
    if isinstance(model, ZeroInflated):
        return model.pi + (1.0 - model.pi) * pgf(model.base, z)
    if isinstance(model, Hurdle):
        p0 = pmf(model.base, 0)
        return model.pi + (1.0 - model.pi) * (pgf(model.base, z) - p0) / (1.0 - p0)
    raise InvalidModelError(f"unknown model type {type(model).__name__}")


def moments(model: CountModel) -> Moments:
    """Mean, variance and variance-to-mean ratio from the closed formulas."""
    if isinstance(model, Poisson):
        mean = var = model.mean
    elif isinstance(model, Geometric):
        q = 1.0 - model.p
        mean = q / model.p
        var = q / model.p**2
    elif isinstance(model, NegBinomial):
        q = 1.0 - model.p
        mean = model.k * q / model.p
        var = model.k * q / model.p**2
    elif isinstance(model, ZeroInflated):
        base = moments(model.base)
        pi = model.pi
        mean = (1.0 - pi) * base.mean
        var = (1.0 - pi) * base.variance + pi * (1.0 - pi) * base.mean**2
    elif isinstance(model, Hurdle):
        base = moments(model.base)
        alpha = (1.0 - model.pi) / (1.0 - pmf(model.base, 0))
        mean = alpha * base.mean
        var = alpha * base.variance + alpha * (1.0 - alpha) * base.mean**2
    else:
        raise InvalidModelError(f"unknown model type {type(model).__name__}")
    dispersion = var / mean if mean > 0.0 else None
    return Moments(mean=mean, variance=var, dispersion=dispersion)
