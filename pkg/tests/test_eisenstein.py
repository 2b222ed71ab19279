from fractions import Fraction

import pytest
from mpmath import mp, mpc, mpf

from nazeta import eisenstein, epstein, lattice, zetalib
from nazeta.errors import AbscissaViolation, NotImaginaryQuadratic, PoleAtOne
from nazeta.fields import Q, Q_I, Q_SQRT_M5, make_field

Z0 = mpc("0.3", "1.2")


def rel(a, b):
    return abs(a - b) / abs(b)


def test_lattice_sum_is_periodic_and_modular():
    with mp.workdps(40):
        base = eisenstein.epstein_lattice_sum(Z0, 2, None, 30)
        assert rel(eisenstein.epstein_lattice_sum(Z0 + 1, 2, None, 30), base) < mpf(10) ** -28
        assert rel(eisenstein.epstein_lattice_sum(-1 / Z0, 2, None, 30), base) < mpf(10) ** -28


def test_box_sum_converges_to_the_theta_value():
    with mp.workdps(30):
        z = mpc(0, 1)
        target = eisenstein.epstein_lattice_sum(z, 2, None, 25)
        errors = [abs(eisenstein.epstein_lattice_sum(z, 2, N, 25) - target) for N in (8, 16, 32)]
        assert errors[0] > errors[1] > errors[2]
        # box tail of sum |v|^-4 beyond radius N is about pi / N^2 (times the prefactor)
        assert errors[2] < mpf("1e-3")


def test_lattice_sum_needs_convergence():
    with pytest.raises(AbscissaViolation):
        eisenstein.epstein_lattice_sum(Z0, 1, None, 20)
    with pytest.raises(ValueError):
        eisenstein.epstein_lattice_sum(mpc(0, -1), 2, None, 20)


@pytest.mark.parametrize("z,s", [(Z0, mpc(2)), (mpc("-0.1", "0.8"), mpc("2.5", 1)), (mpc("0.45", 3), mpc(3))])
def test_fourier_equals_lattice_sum(z, s):
    with mp.workdps(40):
        four = eisenstein.eisenstein_fourier(z, s, None, 30)
        lat = eisenstein.epstein_lattice_sum(z, s, None, 30)
        assert rel(four, lat) < mpf(10) ** -25


def test_fourier_at_large_height_is_the_constant_term():
    with mp.workdps(40):
        y = mpf(10)
        value = eisenstein.eisenstein_fourier(mpc("0.2", y), 2, None, 30)
        constant = zetalib.completed_xi(4, 30) * 100 + zetalib.completed_xi(3, 30) / 10
        assert abs(value - constant) < mpf(10) ** -20


def test_fourier_series_functional_equation():
    with mp.workdps(40):
        s = mpc("0.3", 2)
        a = eisenstein.eisenstein_fourier(Z0, s, None, 30)
        b = eisenstein.eisenstein_fourier(Z0, 1 - s, None, 30)
        assert rel(a, b) < mpf(10) ** -25


def test_fourier_modular_invariance():
    with mp.workdps(40):
        s = mpc(2.5, 1)
        a = eisenstein.eisenstein_fourier(Z0, s, None, 30)
        assert rel(eisenstein.eisenstein_fourier(Z0 + 1, s, None, 30), a) < mpf(10) ** -25
        assert rel(eisenstein.eisenstein_fourier(-1 / Z0, s, None, 30), a) < mpf(10) ** -25


def test_divisor_term_symmetry_at_rational_s():
    # m^(s-1/2) sigma_{1-2s}(m) is unchanged by s -> 1 - s
    with mp.workdps(50):
        s = mpf(1) / 3
        for m in range(1, 51):
            a = mp.power(m, s - mpf(1) / 2) * eisenstein.divisor_sigma(1 - 2 * s, m)
            b = mp.power(m, mpf(1) / 2 - s) * eisenstein.divisor_sigma(2 * s - 1, m)
            assert abs(a - b) < mpf(10) ** -45 * abs(a)


def test_divisor_sigma_integer_values():
    assert [eisenstein.divisor_sigma(1, m) for m in (1, 6, 12)] == [1, 12, 28]
    assert eisenstein.divisor_sigma(0, 36) == 9


def test_fourier_coefficients_constant_terms_share_the_code_path():
    for s in (mpc(2), mpc("2.5", 1)):
        fc = eisenstein.fourier_coefficients(s, 10, 30)
        assert fc.constant_a == zetalib.completed_xi(2 * s, 30)
        assert fc.constant_b == zetalib.completed_xi(2 * s - 1, 30)
    fc = eisenstein.fourier_coefficients(mpf(3), 10, 30)
    assert all(v.imag == 0 for v in fc.divisor_terms.values())
    with mp.workdps(40):
        assert abs(fc.divisor_terms[6] - (1 + mpf(2) ** -5 + mpf(3) ** -5 + mpf(6) ** -5) / mp.zeta(6)) < mpf(10) ** -28
    with pytest.raises(PoleAtOne):
        eisenstein.fourier_coefficients(mpf(1) / 2, 3, 20)


def test_constant_term_over_gaussian_integers():
    with mp.workdps(40):
        L = lattice.LatticeK(Q_I, (mpc(0), mpf(1)))
        eta = lattice.make_cusp(1, 0, L)
        a0, exponent = eisenstein.constant_term_k(eta, L, 2, 30)
        beta4 = (mp.zeta(4, mpf(1) / 4) - mp.zeta(4, mpf(3) / 4)) / 256
        assert abs(a0 - mp.zeta(4) * beta4) < mpf(10) ** -28
        assert a0.real > 0 and exponent == 2


def test_constant_terms_over_d_minus_20_split_zeta_by_class():
    K = Q_SQRT_M5
    with mp.workdps(40):
        L = lattice.LatticeK(K, (mpc(0), mpf(1)))
        d = K.disc
        principal = lattice.make_cusp(1, 0, L)
        other = lattice.make_cusp(lattice.QuadNumber(d, 2), lattice.QuadNumber(d, 1, Fraction(1, 2)), L)
        assert principal.ideal_class != other.ideal_class
        s = mpf(2)
        parts = []
        for eta in (principal, other):
            a0, _ = eisenstein.constant_term_k(eta, L, s, 30)
            n = eta.ideal_b_norm
            parts.append(a0 / mp.power(mpf(n.numerator) / n.denominator, 2 * s))
        assert abs(parts[0] - parts[1]) > mpf("1e-3")
        total = zetalib.dedekind_zeta(2 * s, K, 30)
        assert abs(sum(parts) - total) < mpf(10) ** -28


def test_constant_term_errors():
    with pytest.raises(NotImaginaryQuadratic):
        L = lattice.LatticeK(Q, mpc(0, 1))
        eisenstein.constant_term_k(lattice.make_cusp(1, 0, L), L, 2, 20)
    L = lattice.LatticeK(Q_I, (mpc(0), mpf(1)))
    with pytest.raises(AbscissaViolation):
        eisenstein.constant_term_k(lattice.make_cusp(1, 0, L), L, 1, 20)


def test_gaussian_lattice_at_j_matches_four_squares():
    # #{(x, y) in Z[i]^2 : |x|^2 + |y|^2 = n} = r_4(n), and sum r_4(n) n^-w = 8 (1 - 4^(1-w)) zeta(w) zeta(w-1)
    with mp.workdps(40):
        s = mpc("1.8", "0.2")
        w = 2 * s
        series = 8 * (1 - mp.power(4, 1 - w)) * mp.zeta(w) * mp.zeta(w - 1)
        ref = mp.power(2, 1 - w) * mp.power(4, s) * mp.power(mp.pi, -w) * mp.gamma(w) * series / 4
        value = eisenstein.epstein_from_lattice(lattice.LatticeK(Q_I, (mpc(0), mpf(1))), s, 30)
        assert rel(value, ref) < mpf(10) ** -28


def test_unit_quotient_by_brute_force():
    # sum over all nonzero vectors / |units| = sum over one vector per unit orbit, on a unit-stable ball
    with mp.workdps(30):
        L = lattice.LatticeK(Q_I, (mpc("0.2", "0.1"), mpf("1.1")))
        gram = L.length_gram()
        w = 6
        half = list(epstein.short_vectors(gram, 12))
        every = half + [tuple(-c for c in v) for v in half]
        total = mp.fsum(mp.power(epstein.form_value(gram, c), -w) for c in every)
        reps = mpf(0)
        for c in every:
            x, y = L.vector(c)
            lead = x if not x.is_zero() else y
            # one representative per orbit: leading coordinate with 0 <= arg < pi/2
            arg = mp.arg(lead.embed())
            if 0 <= arg < mp.pi / 2 - mpf(10) ** -20:
                reps += mp.power(epstein.form_value(gram, c), -w)
        assert len(every) % 4 == 0
        assert abs(total / 4 - reps) < mpf(10) ** -25


@pytest.mark.parametrize("tau,s", [(mpc(0, 1), mpc(2)), (mpc("0.3", "1.2"), mpc("2.5")), (mpc(0, 2), mpc(3))])
def test_bridge_over_q(tau, s):
    L = lattice.LatticeK(Q, tau)
    assert eisenstein.bridge_check(L, s, 30) < mpf(10) ** -20


def test_bridge_over_q_ignores_the_scale():
    L = lattice.LatticeK(Q, mpc("0.3", "1.2"), mpf("1.7"))
    assert eisenstein.bridge_check(L, mpc("2.2", 1), 30) < mpf(10) ** -20


def test_bridge_over_gaussian_integers():
    L = lattice.LatticeK(Q_I, (mpc("0.1", "0.2"), mpf("0.8")))
    assert eisenstein.bridge_check(L, mpc(2, "0.5"), 25) < mpf(10) ** -20


@pytest.mark.parametrize("A,B,s,closed", [(1, 1, 2, "1"), ("pi", 2, 1, "0.5")])
def test_mellin_simple_cases(A, B, s, closed):
    with mp.workdps(40):
        A = mp.pi if A == "pi" else A
        numeric, exact = eisenstein.mellin_check(A, B, s, 30)
        assert abs(numeric - exact) < mpf(10) ** -25
        assert abs(exact - mpf(closed)) < mpf(10) ** -28


def test_mellin_needs_positive_real_part():
    with pytest.raises(ValueError):
        eisenstein.mellin_check(1, 1, 0, 20)


def test_rankin_selberg_closed_form_is_the_rank_two_zeta():
    from nazeta import rank2
    with mp.workdps(40):
        assert abs(eisenstein.rankin_selberg_closed(2, 1, 30) - rank2.rank2_zeta(2, Q, 30)) < mpf(10) ** -28
        expected = 3 * zetalib.completed_xi(4, 30) - zetalib.completed_xi(3, 30) / 18
        assert abs(eisenstein.rankin_selberg_closed(2, 3, 30) - expected) < mpf(10) ** -28


def test_truncated_domain_quadrature_converges():
    errors = []
    for order in (3, 6, 12):
        numeric, closed = eisenstein.integrate_truncated_domain(2, 1, 15, order)
        errors.append(abs(numeric - closed) / abs(closed))
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] < mpf("1e-3")


def test_truncated_domain_rejects_small_t():
    with pytest.raises(ValueError):
        eisenstein.integrate_truncated_domain(2, "0.5", 15, 4)
