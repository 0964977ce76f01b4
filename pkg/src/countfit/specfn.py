"""Special functions backing the likelihood and chi-squared machinery.

Thin, domain-checked wrappers around scipy.special: log-gamma, digamma,
trigamma, and the chi-squared survival function (regularized upper
incomplete gamma). All functions are pure and safe for concurrent use.
"""

import math

from scipy import special as _sp

from .errors import DomainError

__all__ = ["ln_gamma", "digamma", "trigamma", "chi2_survival"]


def _check_positive(x: float, name: str) -> None:
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"{name} requires a finite argument > 0, got {x!r}")


def ln_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0."""
    _check_positive(x, "ln_gamma")
    return float(_sp.gammaln(x))


def digamma(x: float) -> float:
    """Logarithmic derivative of the gamma function for x > 0."""
    _check_positive(x, "digamma")
    return float(_sp.psi(x))


def trigamma(x: float) -> float:
    """Derivative of the digamma function for x > 0; always positive there."""
    _check_positive(x, "trigamma")
    return float(_sp.polygamma(1, x))


def chi2_survival(stat: float, df: int) -> float:
    """P(X >= stat) for X ~ chi-squared with df degrees of freedom.

    Computed as the regularized upper incomplete gamma Q(df/2, stat/2).
    """
    if not math.isfinite(stat) or stat < 0.0:
        raise DomainError(f"chi2_survival requires stat >= 0, got {stat!r}")
    if df < 1:
        raise DomainError(f"chi2_survival requires df >= 1, got {df!r}")
    return float(_sp.gammaincc(df / 2.0, stat / 2.0))
