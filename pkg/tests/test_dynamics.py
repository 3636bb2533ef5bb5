import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from udwent import dynamics as dy
from udwent import gaussian
from udwent.correlators import initial_covariance
from udwent.params import DetectorParams, InitialGaussianState, PairConfig

FIG4 = DetectorParams.from_omega(1e-4, 2.3, lambda_cut_0=25.0, lambda_cut_1=25.0)
WEAK = DetectorParams.from_omega(1e-5, 2.3, lambda_cut_0=20.0, lambda_cut_1=20.0)
GROUND = InitialGaussianState(1.0, 1.0)
PERIOD = 2 * math.pi / 2.3


# trajectories

def test_trajectory_first_row_is_initial_state():
    cfg = PairConfig(FIG4, 2.0)
    s = InitialGaussianState(1.1, 4.5)
    tab = dy.entanglement_trajectory(cfg, s, [0.0, 0.5, 1.0])
    v0 = initial_covariance(s, FIG4)
    m = gaussian.measures(v0, 1.0)
    row = tab.data[0]
    assert row[2] == pytest.approx(m.sigma, rel=1e-12)
    assert row[3] == pytest.approx(m.log_negativity, rel=1e-12)
    assert row[4] == pytest.approx(0.0, abs=1e-10)


def test_trajectory_rows_sorted_by_separation():
    cfg = PairConfig(FIG4, 2.0)
    tab = dy.entanglement_trajectory(cfg, GROUND, [0.1, 0.2], d_values=[3.0, 1.0, 2.0])
    assert list(tab.column("d")) == [1.0, 1.0, 2.0, 2.0, 3.0, 3.0]
    assert len(tab.at_separation(2.0)) == 2


@pytest.mark.parametrize("grid", [[], [0.0, 0.0], [1.0, 0.5], [[0.1, 0.2]]])
def test_trajectory_rejects_bad_grid(grid):
    with pytest.raises(ValueError):
        dy.entanglement_trajectory(PairConfig(FIG4, 1.0), GROUND, grid)


def test_trajectory_rejects_empty_separations_and_method():
    cfg = PairConfig(FIG4, 1.0)
    with pytest.raises(ValueError):
        dy.entanglement_trajectory(cfg, GROUND, [0.1], d_values=[])
    with pytest.raises(ValueError, match="unknown method"):
        dy.entanglement_trajectory(cfg, GROUND, [0.1], method="exact")
    with pytest.raises(ValueError):
        dy.covariance_by_method([-1.0], cfg, GROUND)


def test_full_series_limits():
    s = InitialGaussianState(1.1, 4.5)
    with pytest.raises(ValueError):
        dy.covariance_by_method([50.0], PairConfig(FIG4, 1.0), s, "full_series")
    with pytest.raises(ArithmeticError, match="short_distance"):
        dy.covariance_by_method([0.5], PairConfig(FIG4, 0.05), s, "full_series")


def test_full_series_equals_high_order_truncation():
    cfg = PairConfig(FIG4, 1.0)
    s = InitialGaussianState(1.1, 4.5)
    t = np.array([0.5, 2.5, 4.5])
    a = dy.covariance_by_method(t, cfg, s, "full_series")
    b = dy.covariance_by_method(t, cfg, s, "first_order", order=6)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-14)


def test_entangled_state_disentangles_with_decreasing_negativity():
    p = DetectorParams.from_omega(3e-3, 2.3, lambda_cut_0=20.0, lambda_cut_1=20.0)
    cfg = PairConfig(p, 5.0)
    s = InitialGaussianState(1.1, 4.5)
    r = dy.disentanglement_time(cfg, s, method="zeroth", revival_window=0)
    assert 0 < r.t_de < r.horizon
    t = np.linspace(0.0, r.t_de, 4001)
    en = dy.entanglement_trajectory(cfg, s, t, method="zeroth").column("log_negativity")
    quarters = [en[i * 1000:(i + 1) * 1000].max() for i in range(4)]
    assert all(a > b for a, b in zip(quarters, quarters[1:]))
    after = dy.entanglement_trajectory(cfg, s, [r.t_de * 1.5, r.t_de * 2], method="zeroth")
    assert np.all(after.column("log_negativity") == 0)


def test_disentanglement_errors():
    cfg = PairConfig(FIG4, 5.0)
    with pytest.raises(ValueError, match="not entangled"):
        dy.disentanglement_time(cfg, GROUND)
    with pytest.raises(ArithmeticError, match="horizon"):
        dy.disentanglement_time(cfg, InitialGaussianState(1.1, 4.5), horizon=10.0)


def test_separable_states_stay_separable_outside_light_cone():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        a = math.exp(rng.uniform(math.log(0.3), math.log(3.0)))
        s = InitialGaussianState(a, 1.0 / a)
        g = 10 ** rng.uniform(-5, -2)
        d = 10 ** rng.uniform(-0.3, 1.7)
        p = DetectorParams.from_omega(g, 2.3, lambda_cut_1=rng.uniform(5, 20))
        t = np.sort(rng.uniform(0, 0.99 * d, 5))
        assert np.all(dy.sigma_series(t, PairConfig(p, d), s, method="zeroth") > 0)


# outside the light cone

@pytest.mark.parametrize("ab, expected", [((1.1, 4.5), (1.94, -2.89, 0.95)), ((1.5, 0.2), (-4.68, -0.06, 4.74))])
def test_en_rel_coefficients(ab, expected):
    d = 1.0
    a0, a1, a2, b = dy.en_rel_coefficients(0.0, d, InitialGaussianState(*ab), WEAK)
    got = np.array([a0, a1, a2]) * d * d / b
    assert np.allclose(got, expected, rtol=0.02, atol=0.01)


EN_REL_POINTS = [(30.0, 0.3), (30.0, 5.0), (50.0, 12.7), (100.0, 40.0), (40.0, 1.0)]


@pytest.mark.parametrize("ab", [(1.1, 4.5), (1.5, 0.2)])
def test_en_rel_direct_matches_closed_form(ab):
    # leading order in 1 / omega (d - t); the next correction is about 1%
    s = InitialGaussianState(*ab)
    for d, t in EN_REL_POINTS:
        r = dy.en_rel(t, d, PairConfig(WEAK, d), s)
        scale = WEAK.gamma / (math.pi * math.log(2)) * (abs(r.a0) + abs(r.a1) + abs(r.a2)) / abs(r.b)
        assert abs(r.direct - r.closed_form) < 0.03 * scale


def test_en_rel_errors():
    cfg = PairConfig(WEAK, 2.0)
    with pytest.raises(ValueError):
        dy.en_rel(3.0, 2.0, cfg, InitialGaussianState(1.1, 4.5))
    with pytest.raises(ValueError, match="separable"):
        dy.en_rel(0.5, 2.0, cfg, GROUND)


# early times

def test_early_time_coefficients_near_separable():
    s = GROUND
    c1 = dy.early_time_coefficients(PairConfig(FIG4, 0.5), s)
    c2 = dy.early_time_coefficients(PairConfig(FIG4, 1.0), s)
    expected = -FIG4.gamma**2 * (1 - 2.3**2) ** 2 / (4 * 2.3**4 * 0.25)
    assert c1.s2_1 == pytest.approx(expected, rel=1e-12)
    assert c1.s2_1 == pytest.approx(4 * c2.s2_1, rel=1e-12)


@given(st.floats(0.2, 3.0))
def test_pre_arrival_coefficients_nonnegative(alpha):
    c = dy.early_time_coefficients(PairConfig(FIG4, 1.0), InitialGaussianState(alpha, 1 / alpha))
    assert c.s1_0 >= 0 and c.s2_0 >= 0


def test_pre_arrival_coefficients_vanish_for_ground_width():
    a = math.sqrt(1 / 2.3)
    c = dy.early_time_coefficients(PairConfig(FIG4, 1.0), InitialGaussianState(a, 1 / a))
    assert c.s1_0 == pytest.approx(0.0, abs=1e-25) and c.s2_0 == pytest.approx(0.0, abs=1e-25)


def test_early_time_window():
    cfg = PairConfig(FIG4, 1.0)
    val, co = dy.early_time_sigma([1.0, 2.0], cfg, GROUND)
    assert np.allclose(val, co.value(np.array([1.0, 2.0]), 1.0))
    with pytest.raises(ValueError):
        dy.early_time_sigma(1e4, cfg, GROUND)
    with pytest.raises(ValueError):
        dy.early_time_sigma(0.0, cfg, GROUND)


@pytest.mark.parametrize("d", [0.01, 0.5])
def test_early_time_fit_matches_closed_form_for_close_pair(d):
    cfg = PairConfig(FIG4, d)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        fit = dy.fit_early_time_coefficients(cfg, GROUND)
    ref = dy.early_time_coefficients(cfg, GROUND)
    assert fit.s2_1 == 0.0
    assert fit.s2_0 == pytest.approx(ref.s2_0 + ref.s2_1, rel=0.1)


def test_entanglement_creation_fig4():
    r = dy.entanglement_creation(PairConfig(FIG4, 0.01), GROUND)
    assert r.d1 == pytest.approx(3.3 / 1.3 / 2.3, rel=1e-12)
    assert abs(r.t_ent - 0.15) < r.uncertainty_window


def test_entanglement_creation_limits():
    a = math.sqrt(1 / 2.3)
    r = dy.entanglement_creation(PairConfig(FIG4, 5.0), InitialGaussianState(a, 1 / a))
    assert r.d1 == math.inf
    assert dy.entanglement_creation(PairConfig(FIG4, 1.3), GROUND).t_ent is None


def test_onset_fig4_short_distance():
    t = dy.entanglement_onset(PairConfig(FIG4, 0.01), GROUND, 1.0, method="short_distance", n=200)
    assert abs(t - 0.15) < PERIOD
    est = dy.entanglement_creation(PairConfig(FIG4, 0.01), GROUND).t_ent
    assert abs(t - est) < PERIOD


@pytest.mark.parametrize("d", [1.3, 2.0])
def test_no_transient_creation_beyond_d1(d):
    assert dy.entanglement_onset(PairConfig(FIG4, d), GROUND, 40.0, n=2000) is None


def test_transient_plateau():
    cfg = PairConfig(FIG4, 0.01)
    val = dy.transient_sigma(cfg, GROUND)
    assert val == pytest.approx(-0.046, rel=0.1)
    for b in np.linspace(0.5, 2.0, 7):
        assert dy.transient_sigma(cfg, InitialGaussianState(1.0, b)) == val


def test_transient_plateau_positive_near_ground_width():
    # both factors turn positive just below alpha**2 omega = hbar
    a = math.sqrt(0.999 / 2.3)
    assert dy.transient_sigma(PairConfig(FIG4, 0.005), InitialGaussianState(a, 1.0)) > 0
    assert dy.transient_sigma(PairConfig(FIG4, 0.005), InitialGaussianState(a * 1.002, 1.0)) < 0


def test_transient_plateau_regime():
    with pytest.raises(ValueError):
        dy.transient_sigma(PairConfig(FIG4, 1.0), GROUND)


# widely separated detectors

def test_z_fit_reproduces_disentanglement_time_positive_z4():
    s = InitialGaussianState(1.5, 0.2)
    z = dy.fit_z_params(FIG4, s)
    assert z.z4 > 0
    t_plus, t_minus, _ = dy.t_de_estimates(s, FIG4, z)
    assert t_minus is None
    const = FIG4.gamma**2 * FIG4.lambda_cut_1**2 / (math.pi**2 * 2.3**2)
    resid = dy.sigma0_weak(t_plus, s, FIG4, z) - const - (
        FIG4.gamma * FIG4.lambda_cut_1 / (4 * math.pi * (1.5 * 0.2) ** 2 * 2.3**2) * z.z2 * math.exp(-2 * FIG4.gamma * t_plus))
    assert abs(resid) < 1e-12 * const
    num = dy.disentanglement_time(PairConfig(FIG4, 1e6), s, method="zeroth").t_de
    assert t_plus == pytest.approx(num, rel=0.02)


def test_z_fit_negative_z4_slow_disentanglement():
    s = InitialGaussianState(1.1, 4.5)
    z = dy.fit_z_params(FIG4, s)
    assert z.z4 < 0
    t_plus, t_minus, _ = dy.t_de_estimates(s, FIG4, z)
    assert t_plus is None
    num = dy.disentanglement_time(PairConfig(FIG4, 1e6), s, method="zeroth").t_de
    assert t_minus == pytest.approx(num, rel=0.05)
    scale = math.log(1 / (FIG4.gamma * FIG4.lambda_cut_1)) / (2 * FIG4.gamma)
    assert 0.8 < t_minus / scale < 1.6


def test_corrected_time_oscillates_with_separation():
    s = InitialGaussianState(1.5, 0.2)
    z = dy.fit_z_params(FIG4, s)
    d = 10.0
    base = dy.t_de_estimates(s, FIG4, z, d)[2]
    shifted = dy.t_de_estimates(s, FIG4, z, d + PERIOD)[2]
    half = dy.t_de_estimates(s, FIG4, z, d + PERIOD / 2)[2]
    t_plus = dy.t_de_estimates(s, FIG4, z)[0]
    assert abs(base - shifted) < 0.25 * abs(base - t_plus)
    assert (base - t_plus) * (half - t_plus) < 0


def test_z_params_validation():
    with pytest.raises(ValueError):
        dy.WeakCouplingZParams(1.0, 2.0, 1.0, 1.0, 1.0, 2.3)
    with pytest.raises(ValueError):
        dy.WeakCouplingZParams(-1.0, 0.5, 1.0, 1.0, 1.0, 2.3)
