import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CROFTON_ZIG, SEO_ZIG, recovered_n0
from countfit.dist import Geometric, Hurdle, NegBinomial, ZeroInflated, log_pmf
from countfit.errors import (
    AllZerosError,
    EstimationError,
    UnderDispersedError,
)
from countfit.estimate import (
    FrequencySample,
    hg_zig_reparam,
    loglik,
    mle_geometric,
    mle_hg,
    mle_nb,
    mle_poisson,
    mle_zig,
    mom_nb,
    score_residuals,
    summarize,
    zig_hg_reparam,
)
from countfit.sim import sample


def random_sample(rng, n_max=500):
    pi = float(rng.uniform(0.0, 0.7))
    p = float(rng.uniform(0.2, 0.8))
    n = int(rng.integers(30, n_max + 1))
    counts = sample(ZeroInflated(pi=pi, base=Geometric(p=p)), n, rng.integers(2**31))
    s = summarize(counts.tolist())
    if s.mean == 0.0 or s.n0 == 0:
        return random_sample(rng, n_max)
    return s


# --- summarize -------------------------------------------------------------


def test_summarize_from_counts():
    s = summarize([0, 0, 1, 3])
    assert (s.n, s.n0, s.mean, s.var) == (4, 2, 1.0, 1.5)


def test_summarize_from_histogram():
    s = summarize({0: 50, 1: 50})
    assert (s.n, s.n0, s.mean) == (100, 50, 0.5)


def test_summarize_single_observation():
    s = summarize({5: 1})
    assert (s.n, s.n0, s.mean) == (1, 0, 5.0)


def test_summarize_rejects_bad_input():
    with pytest.raises(EstimationError):
        summarize([])
    with pytest.raises(EstimationError):
        summarize([-1, 2])


# --- loglik ----------------------------------------------------------------


def test_loglik_trivial():
    s = summarize({0: 1})
    assert loglik(Geometric(p=0.5), s) == pytest.approx(math.log(0.5))
    assert loglik(Hurdle(pi=0.0, base=Geometric(p=0.5)), s) == float("-inf")


def test_loglik_two_accumulations_agree(rng):
    # generic freq*log_pmf sum vs the structured (n, n0, mean) form
    for _ in range(20):
        s = random_sample(rng)
        summary = FrequencySample.from_summary(s.n, s.n0, s.mean)
        for model in [
            ZeroInflated(pi=0.2, base=Geometric(p=0.4)),
            Hurdle(pi=0.35, base=Geometric(p=0.45)),
            Geometric(p=0.55),
        ]:
            assert loglik(model, s) == pytest.approx(
                loglik(model, summary), rel=1e-10
            )


# --- closed-form estimators ------------------------------------------------


def test_mle_zig_seo_sample_a():
    n, m, pi_ref, p_ref = SEO_ZIG["A"]
    s = FrequencySample.from_summary(n, recovered_n0(n, m, p_ref), m)
    assert s.n0 == 329
    fit = mle_zig(s)
    assert fit.model.pi == pytest.approx(pi_ref, abs=5e-3)
    assert fit.model.base.p == pytest.approx(p_ref, abs=5e-3)
    assert fit.solver.method == "closed-form"


def test_mle_zig_crofton_sample_c():
    n, m, pi_ref, p_ref = CROFTON_ZIG["C"]
    s = FrequencySample.from_summary(n, recovered_n0(n, m, p_ref), m)
    fit = mle_zig(s)
    assert fit.model.pi == pytest.approx(0.4875, abs=5e-3)
    assert fit.model.base.p == pytest.approx(0.4605, abs=5e-3)


def test_mle_zig_exact_geometric_data():
    fit = mle_zig(FrequencySample.from_summary(100, 50, 1.0))
    assert fit.model.pi == pytest.approx(0.0, abs=1e-14)
    assert fit.model.base.p == pytest.approx(0.5)


def test_mle_zig_score_zero_at_estimate(rng):
    for _ in range(20):
        s = random_sample(rng)
        fit = mle_zig(s)
        resid = score_residuals(fit.model, s)
        assert np.all(np.abs(resid) < 1e-8 * max(1.0, s.n))


def test_mle_zig_moment_matching(rng):
    # P(0) = n0/n and fitted mean = sample mean, algebraically
    for _ in range(20):
        s = random_sample(rng)
        fit = mle_zig(s)
        pi, p = fit.model.pi, fit.model.base.p
        assert pi + (1.0 - pi) * p == pytest.approx(s.n0 / s.n, abs=1e-12)
        assert (1.0 - pi) * (1.0 - p) / p == pytest.approx(s.mean, abs=1e-12 * s.mean)


def test_mle_zig_all_zeros_error():
    with pytest.raises(AllZerosError):
        mle_zig(summarize({0: 10}))


def test_mle_zig_no_zeros_boundary():
    s = summarize({1: 5, 2: 3, 4: 2})
    fit = mle_zig(s)
    assert fit.solver.boundary
    p = fit.model.base.p
    assert fit.model.pi == pytest.approx(-p / (1.0 - p), abs=1e-12)
    # zero probability vanishes on the boundary
    assert fit.model.pi + (1.0 - fit.model.pi) * p == pytest.approx(0.0, abs=1e-12)


def test_mle_hg_direct_formula():
    fit = mle_hg(FrequencySample.from_summary(100, 50, 1.0))
    assert fit.model.pi == pytest.approx(0.5)
    assert fit.model.base.p == pytest.approx(0.5)


def test_mle_hg_no_zeros():
    fit = mle_hg(FrequencySample.from_summary(100, 0, 2.0))
    assert fit.model.pi == pytest.approx(0.0)
    assert fit.model.base.p == pytest.approx(0.5)


def test_mle_hg_score_zero_at_estimate(rng):
    for _ in range(10):
        s = random_sample(rng)
        fit = mle_hg(s)
        resid = score_residuals(fit.model, s)
        assert np.all(np.abs(resid) < 1e-8 * max(1.0, s.n))


def test_mle_hg_all_zeros_error():
    with pytest.raises(AllZerosError):
        mle_hg(summarize({0: 7}))


def test_zig_hg_logliks_coincide(rng):
    for _ in range(30):
        s = random_sample(rng)
        assert mle_zig(s).loglik == pytest.approx(mle_hg(s).loglik, abs=1e-9)


def test_mle_geometric():
    assert mle_geometric(FrequencySample.from_summary(10, 5, 1.0)).model.p == 0.5
    assert mle_geometric(summarize({0: 5})).model.p == 1.0
    fit = mle_geometric(FrequencySample.from_summary(100, 25, 3.0))
    assert fit.model.p == pytest.approx(0.25)
    # numerical derivative of the geometric loglik vanishes at the estimate
    s = FrequencySample.from_summary(100, 25, 3.0)
    h = 1e-6
    d = (
        loglik(Geometric(p=0.25 + h), s) - loglik(Geometric(p=0.25 - h), s)
    ) / (2 * h)
    assert abs(d) < 1e-4  # O(h^2) curvature term plus roundoff


def test_mle_poisson():
    s = summarize({0: 3, 2: 4, 5: 3})
    fit = mle_poisson(s)
    assert fit.model.mean == pytest.approx(s.mean)
    assert math.isfinite(fit.loglik)
    assert mle_poisson(summarize({0: 4})).model.mean == 0.0


# --- NB estimators ---------------------------------------------------------


def test_mom_nb_direct():
    s = FrequencySample.from_summary(100, 30, 2.0, var=4.0)
    fit = mom_nb(s)
    assert fit.model.k == pytest.approx(2.0)
    assert fit.model.p == pytest.approx(0.5)
    assert fit.solver.method == "moments"


def test_mom_nb_underdispersed():
    with pytest.raises(UnderDispersedError):
        mom_nb(FrequencySample.from_summary(100, 30, 1.0, var=1.0))


def test_mom_nb_recovery():
    m, k = 2.5, 0.6
    counts = sample(NegBinomial(p=k / (m + k), k=k), 100_000, 11)
    fit = mom_nb(summarize(counts.tolist()))
    assert fit.model.k == pytest.approx(0.6, abs=0.1)


def test_mle_nb_underdispersed_error():
    with pytest.raises(UnderDispersedError):
        mle_nb(summarize({0: 1, 1: 1}))


def test_mle_nb_recovery_table_params():
    m, k = 4.6102, 0.6193
    counts = sample(NegBinomial(p=k / (m + k), k=k), 100_000, 42)
    s = summarize(counts.tolist())
    fit = mle_nb(s)
    assert 0.58 <= fit.model.k <= 0.66
    assert abs(fit.solver.residual) < 1e-10 * s.n
    # the score changes sign across the recorded bracket
    resid_lo = score_residuals(
        NegBinomial(p=fit.solver.bracket[0] / (s.mean + fit.solver.bracket[0]), k=fit.solver.bracket[0]), s
    )[1]
    resid_hi = score_residuals(
        NegBinomial(p=fit.solver.bracket[1] / (s.mean + fit.solver.bracket[1]), k=fit.solver.bracket[1]), s
    )[1]
    assert (resid_lo > 0) != (resid_hi > 0)


def test_mle_nb_on_geometric_data():
    counts = sample(Geometric(p=0.4), 100_000, 5)
    fit = mle_nb(summarize(counts.tolist()))
    assert 0.9 <= fit.model.k <= 1.1


def test_mle_nb_p_relation():
    counts = sample(NegBinomial(p=0.3, k=1.5), 50_000, 3)
    s = summarize(counts.tolist())
    fit = mle_nb(s)
    assert fit.model.p == pytest.approx(fit.model.k / (s.mean + fit.model.k), rel=1e-12)


def test_geometric_is_nb_k1_constrained():
    s = FrequencySample.from_summary(100, 40, 1.5)
    assert mle_geometric(s).model.p == 1.0 / (1.0 + s.mean)


# --- score residuals -------------------------------------------------------


def test_hg_pi_score_identity():
    s = summarize({0: 4, 1: 3, 2: 2, 5: 1})
    fit = mle_hg(s)
    resid = score_residuals(fit.model, s)
    assert resid[0] == pytest.approx(0.0, abs=1e-10)


def test_score_nonzero_off_optimum(rng):
    s = random_sample(rng)
    fit = mle_zig(s)
    shifted = ZeroInflated(pi=fit.model.pi + 0.1, base=fit.model.base)
    assert abs(score_residuals(shifted, s)[0]) > 1e-3


def test_nb_score_components():
    counts = sample(NegBinomial(p=0.4, k=2.0), 20_000, 9)
    s = summarize(counts.tolist())
    fit = mle_nb(s)
    resid = score_residuals(fit.model, s)
    assert abs(resid[0]) < 1e-6 * s.n  # p-equation holds by construction
    assert abs(resid[1]) < 1e-10 * s.n


# --- reparametrization -----------------------------------------------------


def test_zig_hg_reparam_values():
    assert zig_hg_reparam(0.0, 0.37) == pytest.approx(0.37)
    assert zig_hg_reparam(0.4875, 0.4605) == pytest.approx(0.7235, abs=1e-4)


@given(
    pi=st.floats(min_value=-0.5, max_value=0.99),
    p=st.floats(min_value=0.01, max_value=0.95),
)
@settings(max_examples=1000)
def test_zig_hg_reparam_round_trip(pi, p):
    assert hg_zig_reparam(zig_hg_reparam(pi, p), p) == pytest.approx(pi, abs=1e-14)


def test_reparam_maps_fits_onto_each_other(rng):
    s = random_sample(rng)
    zig = mle_zig(s).model
    hg = mle_hg(s).model
    assert zig_hg_reparam(zig.pi, zig.base.p) == pytest.approx(hg.pi, abs=1e-12)
    assert zig.base.p == pytest.approx(hg.base.p, abs=1e-12)
