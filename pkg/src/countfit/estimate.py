"""Maximum-likelihood and method-of-moments estimators for count data.

Zero-inflated geometric, hurdle geometric, geometric and Poisson fits are
closed-form. The negative binomial shape requires a numerical root of its
digamma score equation, solved by safeguarded Newton iteration inside an
expanding bracket with bisection fallback.
"""

from __future__ import annotations

import math
import warnings
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np
from scipy import special as _sp

from .dist import (
    CountModel,
    Geometric,
    Hurdle,
    NegBinomial,
    Poisson,
    ZeroInflated,
    log_pmf,
)
from .errors import (
    AllZerosError,
    EstimationError,
    InvalidModelError,
    NoSignChangeError,
    UnderDispersedError,
)

__all__ = [
    "FrequencySample",
    "SolverInfo",
    "FitResult",
    "summarize",
    "loglik",
    "score_residuals",
    "mle_zig",
    "mle_hg",
    "mle_geometric",
    "mle_poisson",
    "mle_nb",
    "mom_nb",
    "zig_hg_reparam",
    "hg_zig_reparam",
]

_BRACKET_CAP = 1e8
_BRACKET_FLOOR = 1e-8


@dataclass(frozen=True)
class FrequencySample:
    """Histogram summary of a count sample.

    ``freq`` maps count -> frequency. It may be None for samples specified
    only through (n, n0, mean), which is all the closed-form estimators
    need; operations that require the full histogram raise in that case.
    Variance uses denominator n (population convention, matching the
    method-of-moments formulas).
    """

    freq: Mapping[int, int] | None
    n: int
    n0: int
    mean: float
    var: float | None

    @classmethod
    def from_summary(
        cls, n: int, n0: int, mean: float, var: float | None = None
    ) -> "FrequencySample":
        if n < 1 or n0 < 0 or n0 > n or mean < 0.0:
            raise EstimationError(
                f"inconsistent summary: n={n!r}, n0={n0!r}, mean={mean!r}"
            )
        return cls(freq=None, n=n, n0=n0, mean=mean, var=var)

    def counts_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Distinct counts and their frequencies as aligned arrays."""
        if self.freq is None:
            raise EstimationError("operation requires the full frequency table")
        ys = np.array(sorted(self.freq), dtype=np.float64)
        fs = np.array([self.freq[int(y)] for y in ys], dtype=np.float64)
        return ys, fs


def summarize(data: Iterable[int] | Mapping[int, int]) -> FrequencySample:
    """Build a FrequencySample from raw counts or a count->frequency map."""
    if isinstance(data, Mapping):
        freq = {int(y): int(f) for y, f in data.items() if f != 0}
    else:
        freq = {}
        for y in data:
            freq[int(y)] = freq.get(int(y), 0) + 1
    if not freq:
        raise EstimationError("empty sample")
    if any(y < 0 for y in freq):
        raise EstimationError("negative counts are not allowed")
    if any(f < 0 for f in freq.values()):
        raise EstimationError("negative frequencies are not allowed")
    n = sum(freq.values())
    total = sum(y * f for y, f in freq.items())
    mean = total / n
    var = sum(f * (y - mean) ** 2 for y, f in freq.items()) / n
    return FrequencySample(freq=freq, n=n, n0=freq.get(0, 0), mean=mean, var=var)


@dataclass(frozen=True)
class SolverInfo:
    method: str  # "closed-form", "newton-bisection" or "moments"
    iterations: int = 0
    bracket: tuple[float, float] | None = None
    residual: float | None = None
    boundary: bool = False
    notes: tuple[str, ...] = field(default=())


@dataclass(frozen=True)
class FitResult:
    model: CountModel
    loglik: float
    aic: float
    n_params: int
    solver: SolverInfo


def _fit_result(
    model: CountModel, ll: float, n_params: int, solver: SolverInfo
) -> FitResult:
    return FitResult(
        model=model, loglik=ll, aic=2.0 * n_params - 2.0 * ll,
        n_params=n_params, solver=solver,
    )


def _xlogy(x: float, y: float) -> float:
    """x * ln(y) with the convention 0 * ln(0) = 0."""
    if x == 0.0:
        return 0.0
    return x * math.log(y) if y > 0.0 else float("-inf")


def loglik(model: CountModel, s: FrequencySample) -> float:
    """Log-likelihood of the sample under the model.

    With a full histogram this is the direct sum of freq * log_pmf. For
    summary-only samples the structured forms (functions of n, n0 and the
    mean alone) are used; they exist for the geometric family and its
    zero-inflated/hurdle compounds.
    """
    if s.freq is not None:
        return float(sum(f * log_pmf(model, y) for y, f in s.freq.items()))
    return _loglik_structured(model, s)


def _loglik_structured(model: CountModel, s: FrequencySample) -> float:
    n, n0, m = s.n, s.n0, s.mean
    if isinstance(model, Geometric):
        return _xlogy(n, model.p) + _xlogy(m * n, 1.0 - model.p)
    if isinstance(model, ZeroInflated) and isinstance(model.base, Geometric):
        pi, p = model.pi, model.base.p
        p0 = pi + (1.0 - pi) * p
        return (
            _xlogy(n0, p0)
            + _xlogy(n - n0, 1.0 - pi)
            + _xlogy(n - n0, p)
            + _xlogy(m * n, 1.0 - p)
        )
    if isinstance(model, Hurdle) and isinstance(model.base, Geometric):
        pi, p = model.pi, model.base.p
        return (
            _xlogy(n0, pi)
            + _xlogy(n - n0, 1.0 - pi)
            + _xlogy(n - n0, p)
            + _xlogy(m * n - (n - n0), 1.0 - p)
        )
    raise EstimationError(
        f"no structured log-likelihood for {type(model).__name__}; "
        "provide the full frequency table"
    )


def score_residuals(model: CountModel, s: FrequencySample) -> np.ndarray:
    """Score-equation values at the model's parameters.

    Components are the partial derivatives of the log-likelihood with
    respect to (pi, p), (p, k), p or the Poisson mean, depending on the
    family. At a closed-form MLE every component vanishes.
    """
    n, n0, m = s.n, s.n0, s.mean
    if isinstance(model, ZeroInflated) and isinstance(model.base, Geometric):
        pi, p = model.pi, model.base.p
        p0 = pi + (1.0 - pi) * p
        if p0 <= 0.0 or pi >= 1.0:
            warnings.warn("score evaluated at a boundary parameter; one-sided")
            return np.array([float("nan"), float("nan")])
        d_pi = n0 * (1.0 - p) / p0 - (n - n0) / (1.0 - pi)
        d_p = n0 * (1.0 - pi) / p0 + (n - n0) / p - m * n / (1.0 - p)
        return np.array([d_pi, d_p])
    if isinstance(model, Hurdle) and isinstance(model.base, Geometric):
        pi, p = model.pi, model.base.p
        if pi in (0.0, 1.0):
            warnings.warn("score evaluated at a boundary parameter; one-sided")
        d_pi = (n0 / pi if pi > 0.0 else float("inf")) - (
            (n - n0) / (1.0 - pi) if pi < 1.0 else float("inf")
        )
        d_p = (n - n0) * (1.0 / (1.0 - p) + 1.0 / p) - m * n / (1.0 - p)
        return np.array([d_pi, d_p])
    if isinstance(model, NegBinomial):
        ys, fs = s.counts_arrays()
        p, k = model.p, model.k
        d_p = n * k / p - m * n / (1.0 - p)
        d_k = float(np.sum(fs * _sp.psi(ys + k)) - n * _sp.psi(k) + n * math.log(p))
        return np.array([d_p, d_k])
    if isinstance(model, Geometric):
        return np.array([n / model.p - m * n / (1.0 - model.p)])
    if isinstance(model, Poisson):
        if model.mean == 0.0:
            warnings.warn("score evaluated at a boundary parameter; one-sided")
            return np.array([float("inf") if m > 0 else 0.0])
        return np.array([m * n / model.mean - n])
    raise InvalidModelError(
        f"score equations not available for {type(model).__name__}"
    )


def _require_nonzero_mean(s: FrequencySample) -> None:
    if s.mean == 0.0:
        raise AllZerosError("every observation is zero; no two-parameter fit exists")


def mle_zig(s: FrequencySample) -> FitResult:
    """Closed-form MLE for the zero-inflated(deflated) geometric model."""
    _require_nonzero_mean(s)
    n, n0, m = s.n, s.n0, s.mean
    denom = m * n - n + n0
    if denom <= 0.0:
        raise EstimationError(
            "degenerate sample: every nonzero count equals 1; the ZIG "
            "likelihood has no interior maximizer"
        )
    pi_hat = (m * n0 - n + n0) / denom
    p_hat = (n - n0) / (m * n)
    if p_hat < 1.0:
        # guard against roundoff pushing the boundary estimate below the
        # admissible floor -p/(1-p)
        floor = -p_hat / (1.0 - p_hat)
        if floor - 1e-9 < pi_hat < floor:
            pi_hat = floor
    notes: tuple[str, ...] = ()
    boundary = n0 == 0
    if boundary:
        notes = ("no zeros observed: estimate sits on the P(0)=0 boundary",)
    model = ZeroInflated(pi=pi_hat, base=Geometric(p=p_hat))
    ll = loglik(model, s)
    return _fit_result(
        model, ll, 2, SolverInfo(method="closed-form", boundary=boundary, notes=notes)
    )


def mle_hg(s: FrequencySample) -> FitResult:
    """Closed-form MLE for the hurdle geometric model."""
    _require_nonzero_mean(s)
    n, n0, m = s.n, s.n0, s.mean
    pi_hat = n0 / n
    p_hat = (n - n0) / (n * m)
    if p_hat >= 1.0:
        raise EstimationError(
            "degenerate sample: every nonzero count equals 1; the hurdle "
            "geometric base collapses to a point mass at zero"
        )
    model = Hurdle(pi=pi_hat, base=Geometric(p=p_hat))
    ll = loglik(model, s)
    boundary = n0 == 0
    return _fit_result(
        model, ll, 2, SolverInfo(method="closed-form", boundary=boundary)
    )


def mle_geometric(s: FrequencySample) -> FitResult:
    """Geometric MLE: p = 1/(1+m); p=1 degenerate for an all-zero sample."""
    model = Geometric(p=1.0 / (1.0 + s.mean))
    ll = loglik(model, s)
    return _fit_result(model, ll, 1, SolverInfo(method="closed-form"))


def mle_poisson(s: FrequencySample) -> FitResult:
    """Poisson MLE: the sample mean."""
    model = Poisson(mean=s.mean)
    if s.freq is not None:
        ll = loglik(model, s)
    elif s.mean == 0.0:
        ll = 0.0
    else:
        raise EstimationError("Poisson log-likelihood requires the full histogram")
    return _fit_result(model, ll, 1, SolverInfo(method="closed-form"))


def mom_nb(s: FrequencySample) -> FitResult:
    """Method-of-moments NB fit: k = m^2/(s2 - m), p = k/(m + k)."""
    _require_nonzero_mean(s)
    if s.var is None:
        raise EstimationError("method of moments requires the sample variance")
    if s.var <= s.mean:
        raise UnderDispersedError(
            f"sample variance {s.var:.6g} does not exceed mean {s.mean:.6g}"
        )
    k_hat = s.mean**2 / (s.var - s.mean)
    p_hat = k_hat / (s.mean + k_hat)
    model = NegBinomial(p=p_hat, k=k_hat)
    ll = loglik(model, s) if s.freq is not None else float("nan")
    return _fit_result(model, ll, 2, SolverInfo(method="moments"))


def _nb_k_score(k: float, ys: np.ndarray, fs: np.ndarray, n: int, m: float) -> float:
    """Profile score in k after substituting p = k/(m+k)."""
    return float(
        np.sum(fs * _sp.psi(ys + k)) - n * _sp.psi(k) + n * math.log(k / (m + k))
    )


def _nb_k_score_deriv(
    k: float, ys: np.ndarray, fs: np.ndarray, n: int, m: float
) -> float:
    return float(
        np.sum(fs * _sp.polygamma(1, ys + k))
        - n * _sp.polygamma(1, k)
        + n * (1.0 / k - 1.0 / (m + k))
    )


def _newton_bisect(
    f, fprime, lo: float, hi: float, f_lo: float, tol: float
) -> tuple[float, float, int]:
    """Safeguarded Newton: steps leaving the bracket fall back to bisection."""
    x = 0.5 * (lo + hi)
    fx = f(x)
    iterations = 1
    for _ in range(200):
        if abs(fx) < tol or (hi - lo) < 1e-14 * max(1.0, abs(x)):
            break
        if (fx > 0.0) == (f_lo > 0.0):
            lo = x
        else:
            hi = x
        d = fprime(x)
        x_new = x - fx / d if d != 0.0 else lo
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        x = x_new
        fx = f(x)
        iterations += 1
    return x, fx, iterations


def mle_nb(s: FrequencySample) -> FitResult:
    """Numerical NB MLE via the digamma score equation in the shape k.

    Brackets the root around the method-of-moments shape, expands the
    bracket geometrically until the score changes sign (cap 1e8), scans for
    multiple sign changes, solves each by safeguarded Newton and returns
    the root with the highest log-likelihood.
    """
    _require_nonzero_mean(s)
    if s.var is None or s.freq is None:
        raise EstimationError("NB MLE requires the full frequency table")
    if s.var <= s.mean:
        raise UnderDispersedError(
            f"sample variance {s.var:.6g} does not exceed mean {s.mean:.6g}; "
            "the NB score equation has no finite root"
        )
    ys, fs = s.counts_arrays()
    n, m = s.n, s.mean

    def f(k: float) -> float:
        return _nb_k_score(k, ys, fs, n, m)

    def fp(k: float) -> float:
        return _nb_k_score_deriv(k, ys, fs, n, m)

    k_mom = s.mean**2 / (s.var - s.mean)
    k_lo = max(_BRACKET_FLOOR, k_mom / 10.0)
    k_hi = min(_BRACKET_CAP, k_mom * 10.0)
    f_lo, f_hi = f(k_lo), f(k_hi)
    while (f_lo > 0.0) == (f_hi > 0.0):
        expanded = False
        if k_lo > _BRACKET_FLOOR:
            k_lo = max(_BRACKET_FLOOR, k_lo / 10.0)
            f_lo = f(k_lo)
            expanded = True
        if (f_lo > 0.0) == (f_hi > 0.0) and k_hi < _BRACKET_CAP:
            k_hi = min(_BRACKET_CAP, k_hi * 10.0)
            f_hi = f(k_hi)
            expanded = True
        if not expanded:
            raise NoSignChangeError(
                f"no sign change of the NB score on [{k_lo:.3g}, {k_hi:.3g}] "
                f"(cap {_BRACKET_CAP:.0e}); the MLE may not exist"
            )

    # scan for multiple roots before polishing; keep the best by loglik
    grid = np.geomspace(k_lo, k_hi, 64)
    fg = np.array([f(k) for k in grid])
    sign_changes = [
        (grid[i], grid[i + 1], fg[i])
        for i in range(len(grid) - 1)
        if (fg[i] > 0.0) != (fg[i + 1] > 0.0)
    ]
    if not sign_changes:
        sign_changes = [(k_lo, k_hi, f_lo)]

    tol = 0.5e-10 * n
    best: tuple[float, CountModel, float, float, int] | None = None
    total_iter = 0
    for lo, hi, flo in sign_changes:
        k_hat, res, iters = _newton_bisect(f, fp, float(lo), float(hi), float(flo), tol)
        total_iter += iters
        k_hat = float(k_hat)
        model = NegBinomial(p=k_hat / (m + k_hat), k=k_hat)
        ll = loglik(model, s)
        if best is None or ll > best[0]:
            best = (ll, model, res, k_hat, iters)
    assert best is not None
    ll, model, res, _, _ = best
    notes = ()
    if len(sign_changes) > 1:
        notes = (f"{len(sign_changes)} score roots found; kept the best by loglik",)
    info = SolverInfo(
        method="newton-bisection",
        iterations=total_iter,
        bracket=(float(k_lo), float(k_hi)),
        residual=res,
        notes=notes,
    )
    return _fit_result(model, ll, 2, info)


def zig_hg_reparam(pi_zig: float, p: float) -> float:
    """Map ZIG parameters to the hurdle zero mass with identical pmf."""
    return pi_zig + (1.0 - pi_zig) * p


def hg_zig_reparam(pi_hg: float, p: float) -> float:
    """Inverse map: hurdle zero mass back to the ZIG mixing weight."""
    return (pi_hg - p) / (1.0 - p)
