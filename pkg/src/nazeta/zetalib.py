"""Riemann zeta, Dirichlet L-functions, Dedekind zetas and their completions.

All Dirichlet series here are evaluated by Euler-Maclaurin summation on
residue classes: a direct sum up to N (powers n^-s built multiplicatively from
prime powers) plus, for every class a mod q, the Hurwitz tail
zeta(s, N/q + a/q) expanded with Bernoulli corrections.  The remainder is
bounded by Backlund's estimate

    |R_M| <= |T_{M+1}| * |s + 2M + 1| / (Re s + 2M + 1),

T_{M+1} being the first omitted correction.  The same expansion is the analytic
continuation to all s != 1, so no functional equation is used on the main path.
"""

from __future__ import annotations

import math
from functools import lru_cache

from mpmath import mp, mpc, mpf

from . import epstein
from .errors import (AbscissaViolation, FieldIsRationals, NotImaginaryQuadratic, PoleAtOne,
                     PoleAtZeroOrOne)
from .fields import FieldDescriptor, IdealClassRep
from .hpnum import DEFAULT_DIGITS, to_complex, working

_LOG2PI = math.log(2 * math.pi)


# ------------------------------------------------------------- sieve data

@lru_cache(maxsize=8)
def _smallest_prime_factors(n: int) -> tuple[int, ...]:
    spf = list(range(n + 1))
    k = 2
    while k * k <= n:
        if spf[k] == k:
            for j in range(k * k, n + 1, k):
                if spf[j] == j:
                    spf[j] = k
        k += 1
    return tuple(spf)


def _power_table(s: mpc, n: int) -> list:
    """[0, 1^-s, 2^-s, ..., n^-s] using one exponential per prime."""
    spf = _smallest_prime_factors(max(n, 2))
    table = [mpc(0)] * (n + 1)
    if n >= 1:
        table[1] = mpc(1)
    for k in range(2, n + 1):
        p = spf[k]
        if p == k:
            table[k] = mp.exp(-s * mp.log(k))
        else:
            table[k] = table[p] * table[k // p]
    return table


@lru_cache(maxsize=64)
def _bernoulli_over_factorial(j_max: int, dps: int) -> tuple:
    """B_{2j}/(2j)! for j = 1..j_max at ``dps`` digits."""
    with mp.workdps(dps):
        return tuple(mp.bernoulli(2 * j) / mp.factorial(2 * j) for j in range(1, j_max + 1))


# ---------------------------------------------------------------- planner

def _plan(s: mpc, q: int, digits: int) -> tuple[int, int]:
    """Choose (N0, M): tail starts at u = N0 + a/q and M Bernoulli corrections are kept.

    Works with float magnitudes of the Backlund bound; the target is an absolute
    error of 10^-digits against values of unit size (callers add guard digits
    for cancellation in the direct sum).
    """
    sr, si = float(s.real), float(s.imag)
    target = -digits * math.log(10) - 2.0
    n0 = max(2, math.ceil((abs(complex(sr, si)) + 0.6 * digits) / (2 * math.pi * q)))
    while True:
        u = n0  # smallest tail start among the classes is n0 + 1/q > n0
        # log|T_j| = log|B_2j/(2j)!| + log|(s)_{2j-1}| - (sr + 2j - 1) log u
        log_poch = math.log(abs(complex(sr, si))) if (sr, si) != (0.0, 0.0) else 0.0
        log_u = math.log(u)
        prev = math.inf
        j = 1
        while True:
            log_term = math.log(2.0 * 1.65) - 2 * j * _LOG2PI + log_poch - (sr + 2 * j - 1) * log_u
            # next term's Pochhammer increment
            inc = (math.log(max(abs(complex(sr + 2 * j - 1, si)), 1e-30))
                   + math.log(max(abs(complex(sr + 2 * j, si)), 1e-30)))
            if sr + 2 * j + 1 > 0:
                next_term = log_term + inc - 2 * _LOG2PI - 2 * log_u
                backlund = next_term + math.log(abs(complex(sr + 2 * j + 1, si)) / (sr + 2 * j + 1))
                if backlund < target:
                    return n0, j
            if log_term > prev and sr + 2 * j + 1 > 0:
                break
            prev = log_term
            log_poch += inc
            j += 1
            if j > 4 * digits + 200:
                break
        n0 = math.ceil(n0 * 1.5) + 1


def _tail_hurwitz(s: mpc, u, m_terms: int, coeffs: list) -> mpc:
    """Euler-Maclaurin value of sum_{k>=0} (u+k)^-s with ``m_terms`` corrections."""
    w = mp.exp(-s * mp.log(u))  # u^-s
    total = u * w / (s - 1) + w / 2
    t = w / u
    v = 1 / (u * u)
    for j in range(m_terms):
        total += coeffs[j] * t
        t *= v
    return total


def _em_coefficients(s: mpc, m_terms: int, dps: int) -> list:
    """c_j = B_2j/(2j)! * s(s+1)...(s+2j-2), j = 1..m_terms."""
    bern = _bernoulli_over_factorial(m_terms, dps)
    out = []
    poch = s
    for j in range(1, m_terms + 1):
        out.append(bern[j - 1] * poch)
        poch *= (s + 2 * j - 1) * (s + 2 * j)
    return out


def _cancellation_digits(s: mpc, n: int) -> int:
    sigma = float(s.real)
    return max(0, math.ceil(max(0.0, 1.0 - sigma) * math.log10(n + 1))) + 2


def _series(s: mpc, q: int, chars: list[tuple[int, ...]], p: int) -> list[mpc]:
    """sum_n chi(n) n^-s for each period-q character table in ``chars``."""
    with working(p) as dps:
        s = mpc(s)
        n0, m_terms = _plan(s, q, dps)
        extra = _cancellation_digits(s, n0 * q)
    with mp.workdps(dps + extra):
        s = mpc(s)
        n0, m_terms = _plan(s, q, dps + extra)
        big_n = n0 * q
        powers = _power_table(s, big_n)
        coeffs = _em_coefficients(s, m_terms, mp.dps)
        q_pow = mp.exp(-s * mp.log(q)) if q > 1 else mpc(1)
        tails = {}
        for a in range(1, q + 1):
            if any(ch[a % q] for ch in chars):
                tails[a] = _tail_hurwitz(s, n0 + mpf(a) / q, m_terms, coeffs)
        results = []
        for ch in chars:
            head = mpc(0)
            for n in range(1, big_n + 1):
                c = ch[n % q]
                if c == 1:
                    head += powers[n]
                elif c:
                    head += c * powers[n]
            tail = mpc(0)
            for a, value in tails.items():
                c = ch[a % q]
                if c:
                    tail += c * value
            results.append(head + q_pow * tail)
    return [+r for r in results]


# --------------------------------------------------------------- one-variable

def _check_not_one(s: mpc):
    if s == 1:
        raise PoleAtOne("zeta has a pole at s = 1")


def riemann_zeta(s, p: int = DEFAULT_DIGITS) -> mpc:
    """zeta(s) for s != 1 by Euler-Maclaurin (valid on all of C minus {1})."""
    s = to_complex(s)
    _check_not_one(s)
    with working(p):
        return _series(s, 1, [(1,)], p)[0]


def hurwitz_zeta(s, a, p: int = DEFAULT_DIGITS) -> mpc:
    """zeta(s, a) = sum_{k>=0} (k+a)^-s for 0 < a <= 1 and s != 1."""
    s = to_complex(s)
    _check_not_one(s)
    with working(p) as dps:
        a = mpf(a)
        if not 0 < a <= 1:
            raise ValueError("Hurwitz parameter must lie in (0, 1]")
        n0, m_terms = _plan(s, 1, dps)
        extra = _cancellation_digits(s, n0)
        with mp.workdps(dps + extra):
            s = mpc(s)
            coeffs = _em_coefficients(s, m_terms, mp.dps)
            head = mp.fsum(mp.exp(-s * mp.log(a + k)) for k in range(n0))
            value = head + _tail_hurwitz(s, a + n0, m_terms, coeffs)
        return +value


def dirichlet_l(s, K: FieldDescriptor, p: int = DEFAULT_DIGITS) -> mpc:
    """L(s, chi_d) for the quadratic character of K (entire)."""
    if K.is_rational:
        raise FieldIsRationals("L(s, chi_d) needs a quadratic field")
    s = to_complex(s)
    q = abs(K.disc)
    with working(p):
        if s == 1:
            return _l_at_one(K, p)
        return _series(s, q, [K.chi_table], p)[0]


def _l_at_one(K: FieldDescriptor, p: int) -> mpc:
    # the class-by-class tail has a removable singularity at s = 1; step around it
    with working(p) as dps:
        h = mpf(10) ** (-(dps // 2))
        plus = _series(mpc(1) + h, abs(K.disc), [K.chi_table], p + dps)[0]
        minus = _series(mpc(1) - h, abs(K.disc), [K.chi_table], p + dps)[0]
        return (plus + minus) / 2


def dedekind_zeta(s, K: FieldDescriptor, p: int = DEFAULT_DIGITS) -> mpc:
    """zeta_K(s) = zeta(s) for Q and zeta(s) L(s, chi_d) for quadratic K."""
    s = to_complex(s)
    _check_not_one(s)
    with working(p):
        if K.is_rational:
            return _series(s, 1, [(1,)], p)[0]
        q = abs(K.disc)
        zeta, lval = _series(s, q, [(1,) * q, K.chi_table], p)
        return zeta * lval


def partial_class_zeta(s, cls: IdealClassRep, p: int = DEFAULT_DIGITS) -> mpc:
    """zeta(class; s) = (1/w) sum' Q(m,n)^-s for the reduced form Q of the class.

    Evaluated with the theta-split (incomplete gamma) form of the Epstein zeta,
    whose truncation error is bounded by the Gaussian decay of the split terms.
    """
    if not isinstance(cls, IdealClassRep):
        raise NotImaginaryQuadratic("partial zetas are defined for imaginary quadratic classes")
    s = to_complex(s)
    if s.real <= 1:
        raise AbscissaViolation(f"partial class zeta needs Re(s) > 1, got {s}")
    with working(p):
        gram = [[mpf(cls.a), mpf(cls.b) / 2], [mpf(cls.b) / 2, mpf(cls.c)]]
        completed = epstein.completed_epstein(gram, s, p)
        return completed / (mp.power(mp.pi, -s) * mp.gamma(s)) / cls.unit_count


def dedekind_zeta_by_forms(s, K: FieldDescriptor, p: int = DEFAULT_DIGITS) -> mpc:
    """zeta_K(s) as the sum of partial class zetas (imaginary quadratic K, Re s > 1)."""
    if not K.is_imaginary_quadratic:
        raise NotImaginaryQuadratic(f"{K.label} is not imaginary quadratic")
    with working(p):
        return mp.fsum(partial_class_zeta(s, f, p) for f in K.forms)


# ------------------------------------------------------------ gamma factors

def gamma_factor_real(s, p: int = DEFAULT_DIGITS) -> mpc:
    """L_R(s) = pi^(-s/2) Gamma(s/2)."""
    with working(p):
        s = to_complex(s)
        return mp.power(mp.pi, -s / 2) * mp.gamma(s / 2)


def gamma_factor_complex(s, p: int = DEFAULT_DIGITS) -> mpc:
    """L_C(s) = 2 (2 pi)^(-s) Gamma(s)."""
    with working(p):
        s = to_complex(s)
        return 2 * mp.power(2 * mp.pi, -s) * mp.gamma(s)


REFLECT_RADIUS = mpf("0.25")


def _near_gamma_pole(s: mpc, K: FieldDescriptor) -> bool:
    """True within REFLECT_RADIUS of a pole of the gamma factors of Lambda_K.

    There zeta_K has a zero that cancels the pole, and the product loses
    relative accuracy as the distance shrinks; the reflected point has none
    of that cancellation.
    """
    if s.real > REFLECT_RADIUS:
        return False
    n = int(mp.nint(s.real))
    if n > 0 or (K.signature[1] == 0 and n % 2):
        return False
    return abs(s - n) < REFLECT_RADIUS


def completed_xi(s, p: int = DEFAULT_DIGITS) -> mpc:
    """xi(s) = pi^(-s/2) Gamma(s/2) zeta(s) (no s(s-1) factor); poles at 0 and 1."""
    from .fields import Q
    return completed_xi_K(s, Q, p)


def completed_xi_K(s, K: FieldDescriptor, p: int = DEFAULT_DIGITS) -> mpc:
    """Lambda_K(s) = Delta^(s/2) L_R(s)^r1 L_C(s)^r2 zeta_K(s), with Lambda_K(1-s) = Lambda_K(s).

    Close to the poles of the gamma factors (where zeta_K vanishes) the value
    is taken from the reflected point 1 - s.
    """
    s = to_complex(s)
    if s == 0 or s == 1:
        raise PoleAtZeroOrOne(f"Lambda_K has a pole at s = {s}")
    if _near_gamma_pole(s, K):
        s = 1 - s
    with working(p):
        r1, r2 = K.signature
        factor = mpc(1)
        if K.abs_disc != 1:
            factor *= mp.power(K.abs_disc, s / 2)
        if r1:
            factor *= gamma_factor_real(s, p) ** r1
        if r2:
            factor *= gamma_factor_complex(s, p) ** r2
        return factor * dedekind_zeta(s, K, p)


def class_number_residue(K: FieldDescriptor, p: int = DEFAULT_DIGITS) -> mpf:
    """Res_{s=1} Lambda_K(s) = Delta^(1/2) pi^(-r2) L(1, chi_d) (= 1 for Q)."""
    with working(p):
        if K.is_rational:
            return mpf(1)
        r1, r2 = K.signature
        if r1 == 2:
            # Res zeta = 1, L_R(1) = 1 => residue Delta^(1/2) L(1, chi)
            return mp.sqrt(K.abs_disc) * dirichlet_l(1, K, p).real
        return mp.sqrt(K.abs_disc) / mp.pi * dirichlet_l(1, K, p).real
