import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special as sp

from udwent import special

mp.mp.dps = 30


def ref_expn_scaled(n, z):
    z = mp.mpc(z)
    return complex(mp.exp(z) * mp.expint(n, z))


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
@pytest.mark.parametrize("z", [0.3 + 0.1j, 2.0 - 1.5j, -3 + 0.5j, 12j, -12j, 25 + 3j, 60 - 10j, 0.01 + 200j])
def test_expn_scaled_against_mpmath(n, z):
    got = special.expn_scaled(n, z)
    ref = ref_expn_scaled(n, z)
    assert abs(got - ref) <= 1e-12 * abs(ref)


def test_expn_scaled_zero_argument():
    assert special.expn_scaled(3, 0.0) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        special.expn_scaled(1, 0.0)


def test_expn_scaled_vectorized_matches_scalar():
    z = np.array([0.5 + 0.5j, 5 - 2j, 50j])
    vec = special.expn_scaled(2, z)
    assert np.allclose(vec, [special.expn_scaled(2, x) for x in z], rtol=1e-15)


@given(st.floats(0.05, 40), st.floats(-40, 40))
def test_expn_recurrence(x, y):
    # n E_{n+1}(z) = exp(-z) - z E_n(z), i.e. n h_{n+1} = 1 - z h_n
    z = complex(x, y)
    h1, h2 = special.expn_scaled(1, z), special.expn_scaled(2, z)
    assert abs(h2 - (1 - z * h1)) <= 1e-11 * max(1.0, abs(z * h1))


@pytest.mark.parametrize("x", [1e-3, 0.5, 3.0, 17.0, 80.0])
def test_si_ci_real_axis(x):
    s, c = sp.sici(x)
    assert special.si(x).real == pytest.approx(s, rel=1e-13)
    assert special.ci(x).real == pytest.approx(c, rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("z", [1 + 1j, 4 - 0.2j, -2 + 0.3j, 15 + 0.5j, -15 - 0.5j])
def test_si_ci_complex(z):
    assert abs(special.si(z) - complex(mp.si(z))) <= 1e-12 * abs(complex(mp.si(z)))
    assert abs(special.ci(z) - complex(mp.ci(z))) <= 1e-12 * abs(complex(mp.ci(z)))


def test_ci_principal_branch_reflection():
    z = 2.0 + 0.7j
    assert special.ci(-z) == pytest.approx(special.ci(z) - 1j * np.pi, rel=1e-13)


@given(st.floats(0.01, 30), st.floats(0.5, 3), st.floats(0, 0.3))
def test_script_functions_stable_forms(x, omega, gamma):
    s, sd = special.script_s(x, omega, gamma), special.script_s_direct(x, omega, gamma)
    c, cd = special.script_c(x, omega, gamma), special.script_c_direct(x, omega, gamma)
    assert abs(s - sd) <= 1e-9 * max(1.0, abs(sd))
    assert abs(c - cd) <= 1e-9 * max(1.0, abs(cd))


def test_script_parity():
    x = np.array([0.7, 3.1])
    assert np.allclose(special.script_s(-x, 2.3, 0.01), -special.script_s(x, 2.3, 0.01))
    assert np.allclose(special.script_c(-x, 2.3, 0.01), special.script_c(x, 2.3, 0.01))


def test_script_bounded_where_direct_overflows():
    # gamma x large: Si and Ci grow like exp(gamma x) but the combination stays bounded
    val = special.script_s(5e3, 2.3, 0.5)
    assert np.isfinite(val) and abs(val) < 10
    assert abs(special.script_s(1e5, 2.3, 0.0) + np.pi / 2 * np.exp(2.3j * 1e5)) < 1e-4


def test_script_rejects_zero():
    with pytest.raises(ValueError):
        special.script_s(0.0, 2.3, 0.1)
