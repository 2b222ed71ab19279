"""Epstein and Eisenstein series: lattice sums, Fourier expansion and integrals.

The completed SL(2,Z) series is

    E*(z, s) = pi^-s Gamma(s) (1/2) sum'_{(m,n)} y^s / |m z + n|^(2s)
             = xi(2s) y^s + xi(2s-1) y^(1-s)
               + 2 sqrt(y) sum_{m != 0} |m|^(s-1/2) sigma_{1-2s}(|m|) K_{s-1/2}(2 pi |m| y) e(m x).

The lattice-sum side is evaluated by the theta split of ``epstein`` (its
error is controlled by Gaussian decay rather than a slowly converging box
tail), the Fourier side term by term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from mpmath import mp, mpc, mpf

from . import epstein
from .errors import AbscissaViolation, NotImaginaryQuadratic, PoleAtOne, UnsupportedField
from .fields import QuadIdeal
from .hpnum import DEFAULT_DIGITS, bessel_k, to_complex, working
from .lattice import Cusp, LatticeK
from .zetalib import completed_xi, partial_class_zeta


def _check_abscissa(s: mpc, bound=1):
    if s.real <= bound:
        raise AbscissaViolation(f"the lattice sum needs Re(s) > {bound}, got {s}")


def _upper(z) -> mpc:
    z = to_complex(z)
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half plane")
    return z


def _point_gram(z: mpc) -> list[list[mpf]]:
    x, y = z.real, z.imag
    return [[y + x * x / y, x / y], [x / y, 1 / y]]


# ------------------------------------------------------------- lattice sum

def epstein_lattice_sum(z, s, N: int | None = None, p: int = DEFAULT_DIGITS) -> mpc:
    """E*(z, s) from the lattice sum, Re(s) > 1.

    With ``N`` given the plain box sum over max(|m|, |n|) <= N is returned
    (used to study convergence); otherwise the theta-split evaluation.
    """
    s = to_complex(s)
    _check_abscissa(s)
    with working(p):
        z = _upper(z)
        if N is not None:
            box = epstein.direct_epstein(_point_gram(z), s, int(N))
            return mp.power(mp.pi, -s) * mp.gamma(s) * box / 2
        return epstein.completed_epstein(_point_gram(z), s, p) / 2


# ---------------------------------------------------------------- Fourier

@dataclass
class FourierCoefficients:
    s: mpc
    constant_a: mpc  # coefficient of y^s: xi(2s)
    constant_b: mpc  # coefficient of y^(1-s): xi(2s-1)
    divisor_terms: dict = field(default_factory=dict)  # m -> sigma_{1-2s}(m) / zeta(2s)
    order: int = 0


def divisor_sigma(nu, m: int):
    """sigma_nu(m) = sum_{d | m} d^nu."""
    total = 0
    d = 1
    while d * d <= m:
        if m % d == 0:
            total += mp.power(d, nu)
            if d * d != m:
                total += mp.power(m // d, nu)
        d += 1
    return total


def fourier_coefficients(s, M: int, p: int = DEFAULT_DIGITS) -> FourierCoefficients:
    """Constant-term coefficients and phi_m(s) = sigma_{1-2s}(m) / zeta(2s) for 1 <= m <= M."""
    s = to_complex(s)
    if 2 * s == 1:
        raise PoleAtOne("phi_m(s) divides by zeta(2s), which has a pole at s = 1/2")
    with working(p):
        zeta2s = mp.zeta(2 * s)
        terms = {m: divisor_sigma(1 - 2 * s, m) / zeta2s for m in range(1, M + 1)}
        return FourierCoefficients(s, completed_xi(2 * s, p), completed_xi(2 * s - 1, p), terms, M)


HALF_C = mpc(0.5)


def _fourier_order(y: mpf, dps: int) -> int:
    return max(4, math.ceil((dps * math.log(10) + 10) / (2 * math.pi * float(y))) + 2)


@lru_cache(maxsize=256)
def _constant_pair(s_key, p: int):
    s = mpc(*s_key)
    return completed_xi(2 * s, p), completed_xi(2 * s - 1, p)


def eisenstein_fourier(z, s, M: int | None = None, p: int = DEFAULT_DIGITS) -> mpc:
    """E*(z, s) from its Fourier expansion truncated at |m| <= M (M chosen from y if omitted)."""
    s = to_complex(s)
    with working(p) as dps:
        z = _upper(z)
        x, y = z.real, z.imag
        if M is None:
            M = _fourier_order(y, dps)
        xa, xb = _constant_pair((str(s.real), str(s.imag)), p)
        value = xa * mp.power(y, s) + xb * mp.power(y, 1 - s)
        nu = s - HALF_C
        order = nu.real if nu.imag == 0 else nu
        total = mpc(0)
        for m in range(1, M + 1):
            k = bessel_k(order, 2 * mp.pi * m * y, p)
            # the m and -m terms combine into 2 cos(2 pi m x)
            total += mp.power(m, nu) * divisor_sigma(1 - 2 * s, m) * k * 2 * mp.cos(2 * mp.pi * m * x)
        return value + 2 * mp.sqrt(y) * total


# ----------------------------------------------------------- general K data

def constant_term_k(eta: Cusp, L: LatticeK, s, p: int = DEFAULT_DIGITS) -> tuple[mpc, mpc]:
    """(A0, s) with A0 = N(a^-1 b)^(2s) zeta([a^-1 b], 2s) for the cusp eta of L."""
    K = L.field
    if not K.is_imaginary_quadratic:
        raise NotImaginaryQuadratic(f"{K.label} is not imaginary quadratic")
    s = to_complex(s)
    _check_abscissa(s)
    with working(p):
        gens = [eta.alpha] + [eta.beta * g for g in L.ideal.basis]
        b = QuadIdeal.generated_by(K.disc, gens)
        ab = L.ideal.inverse() * b
        n = ab.norm()
        cls = ab.ideal_class()
        a0 = mp.power(mpf(n.numerator) / n.denominator, 2 * s) * partial_class_zeta(2 * s, cls, p)
        return a0, s


def _units(L: LatticeK) -> int:
    return L.field.unit_count


def epstein_from_lattice(L: LatticeK, s, p: int = DEFAULT_DIGITS) -> mpc:
    """Completed Epstein zeta of the lattice L, summed over (L minus 0)/units.

    Q:  pi^-s Gamma(s) sum |v|^(-2s);
    imaginary quadratic:  2 (2 pi)^(-2s) Gamma(2s) (N(a) Delta_K)^s sum q(v)^(-2s).
    """
    s = to_complex(s)
    _check_abscissa(s)
    K = L.field
    with working(p):
        scale2 = mpf(L.scale) ** 2
        gram = [[scale2 * g for g in row] for row in L.length_gram()]
        if K.is_rational:
            return epstein.completed_epstein(gram, s, p) / _units(L)
        if not K.is_imaginary_quadratic:
            raise UnsupportedField(f"{K.label}: lattices over real quadratic fields are not modelled")
        norm_a = mpf(L.ideal_norm.numerator) / L.ideal_norm.denominator
        completed = epstein.completed_epstein(gram, 2 * s, p)  # pi^-2s Gamma(2s) sum q^-2s
        return mp.power(2, 1 - 2 * s) * mp.power(norm_a * K.abs_disc, s) * completed / _units(L)


def point_series(L: LatticeK, s, p: int = DEFAULT_DIGITS) -> mpc:
    """The completed series at the point tau of L, written with the quaternion norm.

    Imaginary quadratic K: 2 (2 pi)^(-2s) Gamma(2s) (N(a) Delta_K)^s
    sum_{(alpha, beta)} (N(tau) / ||N(-beta tau + alpha)||^2)^s over (O_K + a minus 0)/units,
    with ||c tau + d||^2 = |c z + d|^2 + |c|^2 r^2 and N(tau) = r^2.  The sum is
    taken with the theta split at a different split point from
    ``epstein_from_lattice`` and a Gram matrix assembled from the quaternion
    formula, so agreement checks both the module bookkeeping and the split.
    """
    s = to_complex(s)
    _check_abscissa(s)
    K = L.field
    if not K.is_imaginary_quadratic:
        raise UnsupportedField("point_series is the imaginary quadratic counterpart of eisenstein_fourier")
    with working(p):
        z, r = mpc(L.tau[0]), mpf(L.tau[1])
        basis = L.module_basis()
        # linear forms: c = -x, d = y  =>  c z + d and c r
        forms = [(-(bx.embed()) * z + by.embed(), -(bx.embed()) * r) for bx, by in basis]
        k = len(forms)
        gram = [[(forms[i][0] * mp.conj(forms[j][0]) + forms[i][1] * mp.conj(forms[j][1])).real / r
                 for j in range(k)] for i in range(k)]
        scale2 = mpf(L.scale) ** 2
        gram = [[scale2 * g for g in row] for row in gram]
        norm_a = mpf(L.ideal_norm.numerator) / L.ideal_norm.denominator
        completed = epstein.completed_epstein(gram, 2 * s, p, split=mpf(1))
        return mp.power(2, 1 - 2 * s) * mp.power(norm_a * K.abs_disc, s) * completed / _units(L)


def bridge_check(L: LatticeK, s, p: int = DEFAULT_DIGITS) -> mpf:
    """|lattice-side value - point-side value| for the lattice L.

    Over Q the point side is the Fourier expansion at tau (the lattice value
    is rescaled to volume one first); over imaginary quadratic K it is
    ``point_series``.
    """
    s = to_complex(s)
    with working(p):
        lattice_value = epstein_from_lattice(L, s, p)
        if L.field.is_rational:
            lattice_value *= mp.power(mpf(L.scale), 2 * s)
            point_value = eisenstein_fourier(mpc(L.tau), s, None, p)
        else:
            point_value = point_series(L, s, p)
        return abs(lattice_value - point_value)


# ------------------------------------------------------------------ Mellin

def mellin_check(A, B, s, p: int = DEFAULT_DIGITS) -> tuple[mpc, mpc]:
    """(quadrature of int_0^inf exp(-A t^B) t^s dt/t, (1/B) A^(-s/B) Gamma(s/B))."""
    s = to_complex(s)
    if s.real <= 0:
        raise ValueError("the Mellin integral needs Re(s) > 0")
    with working(p):
        A, B = mpf(A), mpf(B)
        # split at the peak of t^(s-1) exp(-A t^B) so tanh-sinh sees a smooth bump
        sr = max(s.real, mpf("0.5"))
        peak = mp.power(sr / (A * B), 1 / B)
        numeric = mp.quad(lambda t: mp.exp(-A * mp.power(t, B)) * mp.power(t, s - 1),
                          [0, peak / 4, peak, 4 * peak, mp.inf])
        closed = mp.power(A, -s / B) * mp.gamma(s / B) / B
        return mpc(numeric), mpc(closed)


# ------------------------------------------------- truncated-domain integral

def _gauss_legendre(n: int, dps: int):
    """Nodes and weights on [-1, 1] at ``dps`` digits."""
    with mp.workdps(dps):
        nodes, weights = [], []
        for i in range(1, n + 1):
            x = mp.cos(mp.pi * (i - mpf(1) / 4) / (n + mpf(1) / 2))
            for _ in range(100):
                p0, p1 = mpf(1), x
                for k in range(2, n + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = n * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < mpf(10) ** (-dps + 2):
                    break
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dp * dp))
        return nodes, weights


def rankin_selberg_closed(s, T, p: int = DEFAULT_DIGITS) -> mpc:
    """xi(2s)/(s-1) T^(s-1) - xi(2s-1)/s T^(-s)."""
    s = to_complex(s)
    with working(p):
        T = mpf(T)
        return (completed_xi(2 * s, p) / (s - 1) * mp.power(T, s - 1)
                - completed_xi(2 * s - 1, p) / s * mp.power(T, -s))


def integrate_truncated_domain(s, T, p: int = 15, quad_order: int = 12) -> tuple[mpc, mpc]:
    """(quadrature of E*(z, s) dx dy / y^2 over D_T, closed form).

    D_T = {|x| <= 1/2, |z| >= 1, y <= T}.  Tensor Gauss-Legendre: x in two
    panels of [0, 1/2] (the integrand is even in x), and for each x the
    y-range [sqrt(1 - x^2), T] split at 1, 2, 4, ... so panel length grows
    with y like the 1/y^2 weight decays.
    """
    s = to_complex(s)
    _check_abscissa(s)
    T = mpf(T)
    if T < 1:
        raise ValueError("the truncated domain needs T >= 1")
    with working(p) as dps:
        nodes, weights = _gauss_legendre(quad_order, dps)

        def panel(a, b, fn):
            half, mid = (b - a) / 2, (a + b) / 2
            return half * mp.fsum(w * fn(mid + half * t) for t, w in zip(nodes, weights))

        y_breaks = [mpf(1)]
        while y_breaks[-1] * 2 < T:
            y_breaks.append(y_breaks[-1] * 2)
        y_breaks.append(T)

        def inner(x):
            y0 = mp.sqrt(1 - x * x)
            cuts = [y0] + [b for b in y_breaks if b > y0]
            if cuts[-1] != T:
                cuts.append(T)
            f = lambda y: eisenstein_fourier(mpc(x, y), s, None, p) / (y * y)
            return mp.fsum(panel(a, b, f) for a, b in zip(cuts, cuts[1:]) if b > a)

        x_breaks = [mpf(0), mpf(1) / 4, mpf(1) / 2]
        numeric = 2 * mp.fsum(panel(a, b, inner) for a, b in zip(x_breaks, x_breaks[1:]))
        return mpc(numeric), rankin_selberg_closed(s, T, p)
