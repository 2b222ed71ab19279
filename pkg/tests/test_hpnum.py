import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpc, mpf

from nazeta import hpnum


def test_working_adds_guard_digits():
    with hpnum.working(30) as dps:
        assert dps == 30 + hpnum.WORK_EXTRA
        assert mp.dps == dps
    assert mp.dps == 15


def test_gamma_half_is_sqrt_pi():
    with mp.workdps(60):
        assert abs(hpnum.gamma(mpf(1) / 2, 50) - mp.sqrt(mp.pi)) < mpf(10) ** -50


def test_loggamma_matches_log_of_gamma_off_the_branch_cut():
    with mp.workdps(50):
        z = mpc(3.2, 1.5)
        assert abs(mp.exp(hpnum.loggamma(z, 40)) - hpnum.gamma(z, 40)) < mpf(10) ** -38


@pytest.mark.parametrize("nu,x", [(0, "0.3"), ("0.5", 2), ("1.7", 15), ("2.25", 80), ("0.1", 300)])
def test_bessel_k_matches_mpmath(nu, x):
    with mp.workdps(50):
        ours = hpnum.bessel_k(mpf(nu), mpf(x), 40)
        ref = mp.besselk(mpf(nu), mpf(x))
        assert abs(ours - ref) <= mpf(10) ** -38 * abs(ref)


def test_bessel_k_half_order_closed_form():
    # K_{1/2}(x) = sqrt(pi/(2x)) e^-x
    with mp.workdps(50):
        for x in (mpf("0.5"), mpf(7), mpf(60)):
            closed = mp.sqrt(mp.pi / (2 * x)) * mp.exp(-x)
            assert abs(hpnum.bessel_k(mpf(1) / 2, x, 40) - closed) <= mpf(10) ** -38 * closed


def test_bessel_k_complex_order_matches_mpmath():
    with mp.workdps(40):
        nu, x = mpc(1.5, 2.0), mpf(4)
        ref = mp.besselk(nu, x)
        assert abs(hpnum.bessel_k(nu, x, 30) - ref) <= mpf(10) ** -28 * abs(ref)


def test_upper_incomplete_gamma_order_one_is_exponential():
    with mp.workdps(50):
        for x in (mpf("0.1"), mpf(3), mpf(40)):
            assert abs(hpnum.upper_incomplete_gamma(1, x, 40) - mp.exp(-x)) < mpf(10) ** -38 * mp.exp(-x)


@settings(max_examples=25, deadline=None)
@given(st.floats(-6, 6), st.floats(-20, 20), st.floats(0.05, 60))
def test_upper_incomplete_gamma_matches_mpmath(sr, si, x):
    with mp.workdps(40):
        s, x = mpc(sr, si), mpf(x)
        ref = mp.gammainc(s, x)
        ours = hpnum.upper_incomplete_gamma(s, x, 30)
        assert abs(ours - ref) <= mpf(10) ** -27 * max(abs(ref), mpf(10) ** -300)


def test_parse_complex_and_is_close():
    assert hpnum.parse_complex("1.5,-2") == mpc(1.5, -2)
    assert hpnum.parse_complex("3") == mpc(3, 0)
    with pytest.raises(ValueError):
        hpnum.parse_complex("1,2,3")
    assert hpnum.is_close(1, 1 + 1e-12, 1e-10)
    assert not hpnum.is_close(1, 1.1, 1e-3)
    assert hpnum.is_close(0, 0, 1e-30)


def test_to_real_rejects_complex():
    with pytest.raises(ValueError):
        hpnum.to_real(mpc(1, 1))
    assert hpnum.to_real(mpc(2, 0)) == 2


def test_digits_of_is_exact_string():
    with mp.workdps(40):
        assert hpnum.digits_of(mp.pi, 20) == "3.1415926535897932385"
    assert hpnum.digits_of(mpf(0), 10) == "0"


def test_constants_memoized_at_precision():
    assert abs(hpnum.pi(40) - mpmath.pi) < 1e-15
    assert hpnum.euler_gamma(30) == hpnum.euler_gamma(30)
