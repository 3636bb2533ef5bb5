import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from udwent import gaussian
from udwent.correlators import initial_covariance
from udwent.params import InitialGaussianState

finite = st.floats(-3, 3, allow_nan=False)


def random_physical(rng, hbar=1.0):
    """Symplectic image of a thermal state: always a valid covariance matrix."""
    a = rng.normal(size=(4, 4))
    h = (a + a.T) / 2
    j = gaussian.SYMPLECTIC_FORM
    s = _expm(j @ h * 0.5)
    nu = rng.uniform(0.5, 3.0, size=2) * hbar
    d = np.diag([nu[0], nu[0], nu[1], nu[1]])
    return s @ d @ s.T


def _expm(m):
    from scipy.linalg import expm

    return expm(m)


@given(arrays(float, (4, 4), elements=finite))
def test_sigma_equals_spectrum_form(a):
    v = a @ a.T + 0.1 * np.eye(4)
    s1, s2 = gaussian.sigma(v), gaussian.sigma_from_spectrum(v)
    assert abs(s1 - s2) <= 1e-10 * max(1.0, abs(s1), np.linalg.det(v))


def test_sigma_is_product_of_shifted_eigenvalues():
    rng = np.random.default_rng(3)
    for _ in range(20):
        v = random_physical(rng)
        sp = gaussian.symplectic_spectrum(gaussian.partial_transpose(v))
        cp, cm = sp.c_plus, sp.c_minus
        assert gaussian.sigma(v) == pytest.approx((cp**2 - 0.25) * (cm**2 - 0.25), rel=1e-9, abs=1e-12)


def test_spectrum_is_symplectic_invariant():
    rng = np.random.default_rng(5)
    v = random_physical(rng)
    # local symplectic maps preserve the spectrum of V and of V^PT
    a = np.array([[2.0, 0.3], [0.0, 0.5]])
    s = np.block([[a, np.zeros((2, 2))], [np.zeros((2, 2)), np.eye(2)]])
    w = s @ v @ s.T
    for f in (lambda x: x, gaussian.partial_transpose):
        x, y = gaussian.symplectic_spectrum(f(v)), gaussian.symplectic_spectrum(f(w))
        assert x.c_plus == pytest.approx(y.c_plus, rel=1e-10)
        assert x.c_minus == pytest.approx(y.c_minus, rel=1e-10)


@pytest.mark.parametrize("alpha,beta", [(1.1, 4.5), (1.5, 0.2), (0.7, 0.4)])
def test_pure_squeezed_state(alpha, beta):
    v = initial_covariance(InitialGaussianState(alpha, beta))
    sp = gaussian.symplectic_spectrum(v)
    assert sp.c_plus == pytest.approx(0.5) and sp.c_minus == pytest.approx(0.5)
    assert gaussian.uncertainty(v) == pytest.approx(0.0, abs=1e-12)
    # PT swaps P+ and P-: c = sqrt(<u^2><p_-^2>) etc. for the sum/difference modes
    var = sorted([np.sqrt(1 / (2 * beta**2) * 1 / (2 * alpha**2)), np.sqrt(alpha**2 / 2 * beta**2 / 2)])
    pt = gaussian.symplectic_spectrum(gaussian.partial_transpose(v))
    assert pt.c_minus == pytest.approx(var[0], rel=1e-12)
    assert gaussian.log_negativity(v) == pytest.approx(max(0.0, -np.log2(2 * var[0])), rel=1e-12)


def test_separable_product_state():
    st_ = InitialGaussianState(0.8, 1 / 0.8)
    v = initial_covariance(st_)
    assert np.allclose(v[:2, 2:], 0)
    m = gaussian.measures(v)
    assert m.log_negativity == 0.0
    assert m.sigma == pytest.approx(0.0, abs=1e-12)


def test_negative_sigma_iff_entangled():
    rng = np.random.default_rng(11)
    for _ in range(50):
        v = random_physical(rng)
        m = gaussian.measures(v)
        assert (m.sigma < 0) == (m.c_minus < 0.5)
        assert m.uncertainty >= -1e-9


def test_validate_rejects_bad_input():
    with pytest.raises(ValueError):
        gaussian.validate(np.ones((3, 3)))
    v = np.eye(4)
    v[0, 1] = 1.0
    with pytest.raises(ValueError):
        gaussian.validate(v)
    with pytest.raises(ValueError):
        gaussian.validate(np.full((4, 4), np.nan))


def test_vectorized_measures():
    rng = np.random.default_rng(2)
    vs = np.stack([random_physical(rng) for _ in range(5)])
    en = gaussian.log_negativity(vs)
    assert en.shape == (5,)
    assert np.allclose(en, [gaussian.measures(v).log_negativity for v in vs])
