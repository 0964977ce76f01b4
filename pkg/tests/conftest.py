"""Shared fixtures: published reference rows and random model generators."""

import numpy as np
import pytest

from countfit.dist import Geometric, Hurdle, NegBinomial, Poisson, ZeroInflated

# Ascaris (Seo) reference rows: sample id -> (n, mean, zig_pi, zig_p)
SEO_ZIG = {
    "A": (540, 1.0167, 0.3653, 0.3843),
    "B": (136, 2.8235, 0.2687, 0.2057),
    "C": (32, 2.3125, 0.2011, 0.2568),
    "D": (47, 2.5106, 0.1819, 0.2458),
    "E": (39, 6.6410, 0.0971, 0.1197),
    "F": (59, 4.6102, 0.1581, 0.1544),
}

# Gammarus/Polymorphus (Crofton) reference rows, same layout; A, B, D, E
# are zero-deflated (negative pi)
CROFTON_ZIG = {
    "A": (549, 2.2732, -0.0256, 0.3109),
    "B": (509, 1.4165, -0.1304, 0.4438),
    "C": (633, 0.6003, 0.4875, 0.4605),
    "D": (486, 1.3189, -0.3313, 0.5023),
    "E": (276, 0.8913, -0.1020, 0.5528),
    "F": (191, 0.2670, 0.2195, 0.7451),
}


def recovered_n0(n: int, mean: float, p_hat: float) -> int:
    """Invert p = (n - n0)/(mean*n) for the zero count of a reference row."""
    return round(n * (1.0 - p_hat * mean))


def random_base_model(rng: np.random.Generator):
    kind = rng.integers(3)
    if kind == 0:
        return Poisson(mean=float(rng.uniform(0.2, 6.0)))
    if kind == 1:
        return Geometric(p=float(rng.uniform(0.15, 0.9)))
    return NegBinomial(p=float(rng.uniform(0.15, 0.9)), k=float(rng.uniform(0.3, 5.0)))


def random_model(rng: np.random.Generator):
    kind = rng.integers(3)
    base = random_base_model(rng)
    if kind == 0:
        return base
    from countfit.dist import pmf

    p0 = pmf(base, 0)
    if kind == 1:
        lo = -p0 / (1.0 - p0) if p0 < 1.0 else 0.0
        pi = float(rng.uniform(0.8 * lo, 0.9))
        return ZeroInflated(pi=pi, base=base)
    if p0 >= 1.0:
        return base
    return Hurdle(pi=float(rng.uniform(0.05, 0.9)), base=base)


@pytest.fixture
def rng():
    return np.random.default_rng(20260826)
