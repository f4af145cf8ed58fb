"""Momentum grid, dispersion, mode energies, and amplitude invariants."""

import math

import numpy as np
import pytest

from kitchain.modes import (
    ModelParams,
    amplitudes,
    dispersion,
    ground_energy,
    mode_energies,
    momentum_grid,
)


def test_momentum_grid_quarter_zone():
    params = ModelParams(n_sites=12)
    q = momentum_grid(params)
    assert q.shape == (3,)
    np.testing.assert_allclose(q, [np.pi / 12, 3 * np.pi / 12, 5 * np.pi / 12])
    assert np.all(q > 0) and np.all(q < np.pi / 2)
    # uniform spacing 2*pi/N
    np.testing.assert_allclose(np.diff(q), 2 * np.pi / 12)


def test_momentum_grid_rejects_bad_sizes():
    for n in (6, 10, 14):
        with pytest.raises(ValueError):
            momentum_grid(ModelParams(n_sites=n))


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(jx=0.0)
    with pytest.raises(ValueError):
        ModelParams(jx=-1.0)
    with pytest.raises(ValueError):
        ModelParams(jy=-0.5)
    with pytest.raises(ValueError):
        ModelParams(h=float("nan"))
    with pytest.raises(ValueError):
        ModelParams(n_sites=0)


def test_from_ratio_round_trip():
    params = ModelParams.from_ratio(0.75, h=0.2, n_sites=32, jx=2.0)
    assert params.jy == pytest.approx(1.5)
    assert params.r == pytest.approx(0.75)


def test_dispersion_positive_and_limits():
    """eps stays strictly positive on the grid for every ratio (no gapless
    interior point: the grid avoids q = pi/2 where eps -> 0 at r = 1)."""
    for r in (0.0, 0.5, 1.0, 2.0, 10.0):
        params = ModelParams.from_ratio(r, n_sites=64)
        q = momentum_grid(params)
        eps, theta = dispersion(params, q)
        assert np.all(eps > 0)
        assert np.all(np.isfinite(theta))
    # isotropic point: eps = jx*cos(q), theta = 0
    params = ModelParams.from_ratio(1.0, n_sites=64)
    q = momentum_grid(params)
    eps, theta = dispersion(params, q)
    np.testing.assert_allclose(eps, np.cos(q), atol=1e-15)
    np.testing.assert_allclose(theta, 0.0, atol=1e-15)
    # decoupled point r = 0: eps = jx/2, theta = q
    params = ModelParams.from_ratio(0.0, n_sites=64)
    eps, theta = dispersion(params, q)
    np.testing.assert_allclose(eps, 0.5, atol=1e-15)
    np.testing.assert_allclose(theta, q, atol=1e-15)


def test_mode_energy_ordering_and_symmetry():
    params = ModelParams(jx=1.0, jy=0.7, h=0.4, n_sites=20)
    for q in momentum_grid(params):
        lam = mode_energies(params, q)
        assert lam.lambda_mm <= lam.lambda_pm <= lam.lambda_mp <= lam.lambda_pp
        # the four levels are symmetric around zero in +/- pairs
        assert lam.lambda_mm + lam.lambda_pp == pytest.approx(0.0, abs=1e-14)
        assert lam.lambda_pm + lam.lambda_mp == pytest.approx(0.0, abs=1e-14)


def test_ground_energy_is_block_sum():
    params = ModelParams(jx=1.0, jy=0.8, h=0.6, n_sites=40)
    total = sum(2.0 * (mode_energies(params, q).lambda_mm
                       + mode_energies(params, q).lambda_pm)
                for q in momentum_grid(params))
    assert ground_energy(params) == pytest.approx(total, rel=1e-14)


def test_amplitude_normalization_random_points():
    # 2|alpha|^2 + |beta|^2 + 2|gamma|^2 + |1-beta|^2 = 1 at 1e-12
    rng = np.random.default_rng(42)
    for _ in range(1000):
        params = ModelParams(jx=float(rng.uniform(0.2, 3.0)),
                             jy=float(rng.uniform(0.0, 3.0)),
                             h=float(rng.uniform(-3.0, 3.0)),
                             n_sites=4 * int(rng.integers(1, 60)))
        q = float(rng.choice(momentum_grid(params)))
        amp = amplitudes(params, q)
        assert abs(amp.norm_sq() - 1.0) < 1e-12
        probs = amp.probabilities()
        assert np.all(probs >= -1e-15)
        assert abs(probs.sum() - 1.0) < 1e-12


def test_amplitudes_field_free_branch():
    """At h = 0 the closed form must hand over smoothly to the limit branch:
    beta = 1 - beta = 1/2 and the h2 ratio runs off to -inf."""
    params = ModelParams(jx=1.0, jy=0.5, h=0.0, n_sites=16)
    q = momentum_grid(params)[1]
    amp = amplitudes(params, q)
    assert amp.beta == pytest.approx(0.5, abs=1e-15)
    assert amp.one_minus_beta == pytest.approx(0.5, abs=1e-15)
    assert amp.h2 == -math.inf
    # continuity: a tiny field reproduces the same amplitudes to O(h)
    near = amplitudes(ModelParams(jx=1.0, jy=0.5, h=1e-9, n_sites=16), q)
    assert abs(near.alpha - amp.alpha) < 1e-8
    assert abs(near.beta - amp.beta) < 1e-8
    assert abs(near.gamma - amp.gamma) < 1e-8


def test_amplitude_ratio_route_consistency():
    """The two-ratio expressions and the direct amplitudes describe the same
    state: beta/(1-beta) = h1*h2 and gamma^2 = beta(1-beta) - alpha^2-like
    relations collapse to h1 = -h/(eps+s)."""
    params = ModelParams(jx=1.0, jy=0.6, h=0.8, n_sites=24)
    for q in momentum_grid(params):
        amp = amplitudes(params, q)
        eps, _ = dispersion(params, float(q))
        s = math.hypot(params.h, float(eps))
        assert amp.h1 == pytest.approx(-params.h / (float(eps) + s), rel=1e-14)
        assert amp.h2 == pytest.approx(-(float(eps) + s) / params.h, rel=1e-14)
        # normalization shared between the ratio route and the direct one
        assert amp.h1 * amp.h2 == pytest.approx(1.0, rel=1e-12)


def test_everything_even_in_h():
    base = ModelParams(jx=1.0, jy=0.4, h=0.9, n_sites=28)
    flipped = ModelParams(jx=1.0, jy=0.4, h=-0.9, n_sites=28)
    assert ground_energy(base) == pytest.approx(ground_energy(flipped), rel=1e-15)
    for q in momentum_grid(base):
        a, b = amplitudes(base, q), amplitudes(flipped, q)
        assert a.beta == b.beta and a.gamma == b.gamma and a.alpha == b.alpha


def test_ground_energy_value_isotropic():
    # closed sum: E0 = -4 sum_q sqrt(eps^2 + h^2); spot value at r=1, h=0:
    # sum of cos(q) over the quarter grid gives E0 = -2/sin(pi/N) * ... but
    # the small-N case is checkable by hand: N=4 has the single q = pi/4.
    params = ModelParams(jx=1.0, jy=1.0, h=0.0, n_sites=4)
    assert ground_energy(params) == pytest.approx(-4.0 * math.cos(math.pi / 4), rel=1e-15)
