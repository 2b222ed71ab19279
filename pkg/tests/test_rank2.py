import warnings

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpc, mpf

from nazeta import rank2
from nazeta.errors import PoleAtZeroOrOne
from nazeta.fields import Q, Q_I, Q_SQRT_5, Q_SQRT_M3, Q_SQRT_M5, SHIPPED_FIELDS


def xi_ref(w):
    """Completed Riemann zeta straight from mpmath."""
    return mp.power(mp.pi, -w / 2) * mp.gamma(w / 2) * mp.zeta(w)


def test_value_at_two_against_direct_formula():
    with mp.workdps(50):
        v = rank2.rank2_zeta(2, Q, 40)
        assert abs(v - (xi_ref(4) - xi_ref(3) / 2)) < mpf(10) ** -40
        # frozen regression value
        assert mp.nstr(v.real, 15) == "0.0140056221154225"


def test_value_at_half_is_finite_and_matches_limit():
    with mp.workdps(100):
        v = rank2.rank2_zeta(mpf(1) / 2, Q, 40)
        f = lambda s: xi_ref(2 * s) / (s - 1) - xi_ref(2 * s - 1) / s
        h = mpf(10) ** -25
        limit = (f(mpf(1) / 2 + h) + f(mpf(1) / 2 - h)) / 2
        assert abs(v - limit) < mpf(10) ** -38
        assert mp.nstr(v.real, 30) == "-0.092382835864484135257240991626"


def test_points_near_half_are_continuous():
    with mp.workdps(50):
        centre = rank2.rank2_zeta(mpf(1) / 2, Q, 40)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            for gap in (mpf("1e-3"), mpf("1e-9"), mpf("1e-20")):
                near = rank2.rank2_zeta(mpf(1) / 2 + gap, Q, 40)
                assert abs(near - centre) < 10 * gap


@pytest.mark.parametrize("K", SHIPPED_FIELDS, ids=lambda K: K.label)
def test_functional_equation(K):
    with mp.workdps(50):
        for s in (mpc(2.5, 3), mpc(-1.1, 17), mpc(0.5, 9.3), mpc(0.1, 0)):
            a = rank2.rank2_zeta(s, K, 40)
            b = rank2.rank2_zeta(1 - s, K, 40)
            assert abs(a - b) <= mpf(10) ** -35 * abs(a)


@settings(max_examples=20, deadline=None)
@given(st.floats(-2, 3), st.floats(-30, 30))
def test_functional_equation_random_points(sr, si):
    s = mpc(sr, si)
    if min(abs(s), abs(s - 1)) < 1e-3:
        return
    with mp.workdps(40):
        a = rank2.rank2_zeta(s, Q, 30)
        assert abs(a - rank2.rank2_zeta(1 - s, Q, 30)) <= mpf(10) ** -25 * abs(a)


def test_real_on_the_critical_line():
    with mp.workdps(40):
        for K in (Q, Q_SQRT_M5):
            v = rank2.rank2_zeta(mpc(0.5, 7.3), K, 30)
            assert abs(v.imag) < mpf(10) ** -28 * abs(v)


def test_poles_raise():
    for s in (0, 1):
        with pytest.raises(PoleAtZeroOrOne):
            rank2.rank2_zeta(s, Q, 30)


def test_literal_form_coincides_over_q():
    with mp.workdps(40):
        s = mpc(1.7, 2)
        assert abs(rank2.rank2_zeta(s, Q, 30, literal=True) - rank2.rank2_zeta(s, Q, 30)) < mpf(10) ** -28


def test_truncated_zeta():
    with mp.workdps(50):
        assert abs(rank2.rank2_zeta_T(mpc(1.3, 4), 1, 40) - rank2.rank2_zeta(mpc(1.3, 4), Q, 40)) < mpf(10) ** -38
        v = rank2.rank2_zeta_T(2, 2, 40)
        assert abs(v - (2 * xi_ref(4) - xi_ref(3) / 8)) < mpf(10) ** -38
        assert mp.nstr(v.real, 15) == "0.195410379994482"
        s = mpc(0.3, 5)
        assert abs(rank2.rank2_zeta_T(s, 10, 40) - rank2.rank2_zeta_T(1 - s, 10, 40)) < mpf(10) ** -35
    with pytest.raises(ValueError):
        rank2.rank2_zeta_T(2, 0, 30)


def test_residue_over_q_two_paths():
    with mp.workdps(50):
        target = mp.pi / 6 - mpf(1) / 2
        assert abs(rank2.residue_contour(1, Q, 40) - target) < mpf(10) ** -35
        assert abs(rank2.residue_limit(1, Q, 40) - target) < mpf(10) ** -38
        assert abs(rank2.residue_contour(0, Q, 40) + target) < mpf(10) ** -35
        assert mp.nstr(target, 22) == "0.02359877559829887307711"


@pytest.mark.parametrize("K,res1", [(Q_I, "0.05532186"), (Q_SQRT_M3, "0.02865893"),
                                    (Q_SQRT_M5, "0.8800722"), (Q_SQRT_5, "0.1072977")],
                         ids=lambda x: getattr(x, "label", x))
def test_residues_other_fields(K, res1):
    with mp.workdps(40):
        c1 = rank2.residue_contour(1, K, 30)
        c0 = rank2.residue_contour(0, K, 30)
        assert abs(c1 - rank2.residue_limit(1, K, 30)) < mpf(10) ** -25
        assert abs(c0 + c1) < mpf(10) ** -25
        assert abs(c1 - mpf(res1)) < mpf(10) ** -7


def test_residue_rejects_other_points():
    with pytest.raises(ValueError):
        rank2.residue_contour(2, Q, 30)


def test_half_cancellation_residues_agree():
    a, b = rank2.verify_half_cancellation(Q_I, 30)
    assert abs(a - b) < mpf(10) ** -25


@pytest.mark.parametrize("n", [2, 3, 5, mpf("-1.5"), mpf("7.25")])
def test_special_value_identity(n):
    lhs, rhs = rank2.special_value_identity(n, 40)
    assert abs(lhs - rhs) <= mpf(10) ** -35 * max(abs(rhs), 1)


def test_suzuki_function_values():
    with mp.workdps(50):
        f0 = rank2.suzuki_F(0, 40)
        assert abs(f0 + xi_ref(mpf(1) / 2) / 4) < mpf(10) ** -38
        assert mp.nstr(f0.real, 15) == "0.994241556376628"
        # F(+-i/4) = -Z(0) = -Z(1) = 1
        assert abs(rank2.suzuki_F(mpc(0, 0.25), 40) - 1) < mpf(10) ** -38
        v = rank2.suzuki_F(3.7, 40)
        assert abs(v.imag) < mpf(10) ** -38


def test_suzuki_identity_at_and_off_origin():
    lhs, rhs = rank2.suzuki_identity_sides(0, 40)
    assert abs(lhs) < mpf(10) ** -38 and rhs == 0
    for z in (mpc(1.3, 0), mpc(-4, 2), mpc(11, -0.5)):
        lhs, rhs = rank2.suzuki_identity_sides(z, 50)
        assert abs(lhs - rhs) <= mpf(10) ** -40 * max(abs(lhs), abs(rhs))
