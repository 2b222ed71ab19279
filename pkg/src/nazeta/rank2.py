"""Rank-two non-abelian zeta functions and the objects built from them.

xi_{K,2}(s) = Lambda_K(2s)/(s-1) - Lambda_K(2s-1)/s, with Lambda_K the fully
completed Dedekind zeta, satisfies xi_{K,2}(1-s) = xi_{K,2}(s) exactly.  Its
only poles are s = 0 and s = 1.  At s = 1/2 both terms have simple poles
whose residues cancel; the value there is recovered as the mean over a small
circle (exact for analytic functions up to the trapezoid error), and points
close to 1/2 get extra working digits to absorb the cancellation.
"""

from __future__ import annotations

import math
import warnings
from functools import lru_cache
from typing import Callable

from mpmath import mp, mpc, mpf

from .errors import CancellationAtHalf, PoleAtZeroOrOne
from .fields import Q, FieldDescriptor
from .hpnum import DEFAULT_DIGITS, GUARD_DIGITS, to_complex, to_real, working
from .zetalib import class_number_residue, completed_xi, completed_xi_K

HALF = mpf(1) / 2
NEAR_HALF = mpf("0.1")  # below this distance from 1/2 extra digits are added
CIRCLE_RADIUS = mpf("0.1")


def _check_poles(s: mpc):
    if s == 0 or s == 1:
        raise PoleAtZeroOrOne(f"xi_(K,2) has a pole at s = {s}")


def _circle_mean(fn: Callable[[mpc, int], mpc], centre: mpc, radius: mpf, p: int) -> mpc:
    """Mean of fn over a circle: the value at the centre for fn analytic inside."""
    with working(p) as dps:
        # nearest singularities of the rank-two zetas lie at distance 1/2
        ratio = float(radius / HALF)
        points = max(16, math.ceil((dps + 5) * math.log(10) / -math.log(ratio)))
        total = mpc(0)
        for j in range(points):
            total += fn(centre + radius * mp.expjpi(mpf(2 * j) / points), p)
        return total / points


def _near_half_digits(s: mpc) -> int:
    gap = abs(s - HALF)
    if gap >= NEAR_HALF:
        return 0
    return math.ceil(math.log10(float(NEAR_HALF / gap))) + 2


def _two_terms(s: mpc, K: FieldDescriptor, T, p: int) -> tuple[mpc, mpc]:
    first = completed_xi_K(2 * s, K, p) / (s - 1)
    second = completed_xi_K(2 * s - 1, K, p) / s
    if T is not None:
        first *= mp.power(T, s - 1)
        second *= mp.power(T, -s)
    return first, second


def _evaluate(s: mpc, K: FieldDescriptor, T, p: int) -> mpc:
    _check_poles(s)
    if s == HALF:
        verify_half_cancellation(K, p)
        return _circle_mean(lambda w, q: _evaluate(w, K, T, q), s, CIRCLE_RADIUS, p)
    extra = _near_half_digits(s)
    with working(p + extra):
        first, second = _two_terms(s, K, T, p + extra)
        value = first - second
        scale = max(abs(first), abs(second))
        if extra and value != 0 and scale / abs(value) > mpf(10) ** (10 + extra):
            warnings.warn(f"catastrophic cancellation at s = {s}: "
                          f"{float(mp.log10(scale / abs(value))):.1f} digits lost", RuntimeWarning)
    with working(p):
        return +value


def rank2_zeta(s, K: FieldDescriptor = Q, p: int = DEFAULT_DIGITS, literal: bool = False) -> mpc:
    """xi_{K,2}(s) = Lambda_K(2s)/(s-1) - Lambda_K(2s-1)/s.

    With ``literal=True`` returns instead the expression
    xi_K(2s)/(s-1) Delta^(s-1) - xi_K(2s-1)/s Delta^(-s), xi_K carrying only the
    gamma factors (no discriminant power).  That variant agrees with the shipped
    function only up to K-dependent factors and is a diagnostic.
    """
    s = to_complex(s)
    if literal:
        return _literal(s, K, p)
    return _evaluate(s, K, None, p)


def _literal(s: mpc, K: FieldDescriptor, p: int) -> mpc:
    _check_poles(s)
    with working(p):
        delta = mpf(K.abs_disc)
        a = completed_xi_K(2 * s, K, p) * mp.power(delta, -s)
        b = completed_xi_K(2 * s - 1, K, p) * mp.power(delta, -(2 * s - 1) / 2)
        return a / (s - 1) * mp.power(delta, s - 1) - b / s * mp.power(delta, -s)


def rank2_zeta_T(s, T, p: int = DEFAULT_DIGITS) -> mpc:
    """Truncated xi^T(s) = xi(2s)/(s-1) T^(s-1) - xi(2s-1)/s T^(-s) over Q."""
    s = to_complex(s)
    T = to_real(T)
    if T <= 0:
        raise ValueError("T must be positive")
    return _evaluate(s, Q, T, p)


def rank2_function(K: FieldDescriptor = Q, T=None) -> Callable[[mpc, int], mpc]:
    """The function s -> xi_{K,2}(s) (or xi^T for K = Q) as a callable of (s, p)."""
    if T is None or mpf(T) == 1:
        return lambda s, p: rank2_zeta(s, K, p)
    if not K.is_rational:
        raise ValueError("the truncated zeta is defined over Q only")
    return lambda s, p: rank2_zeta_T(s, T, p)


# ----------------------------------------------------------------- residues

RESIDUE_RADIUS = mpf("1e-2")


def residue_contour(s0: int, K: FieldDescriptor = Q, p: int = DEFAULT_DIGITS,
                    radius=RESIDUE_RADIUS) -> mpc:
    """(1/2 pi i) times the integral of xi_{K,2} over |s - s0| = radius (trapezoid rule)."""
    if s0 not in (0, 1):
        raise ValueError("xi_(K,2) has poles only at 0 and 1")
    return _contour_residue(lambda w, q: rank2_zeta(w, K, q), mpf(s0), mpf(radius), p)


def _contour_residue(fn, centre, radius, p) -> mpc:
    with working(p) as dps:
        # other singularities are at distance >= 1/2 from 0 and 1 (s = 1/2 is removable,
        # the next true pole at distance 1); trapezoid error ~ (radius/1)^n
        points = max(8, math.ceil((dps + 5) / -math.log10(float(radius))) + 2)
        total = mpc(0)
        for j in range(points):
            step = radius * mp.expjpi(mpf(2 * j) / points)
            total += fn(centre + step, p) * step
        return total / points


def residue_limit(s0: int, K: FieldDescriptor = Q, p: int = DEFAULT_DIGITS) -> mpc:
    """Residue from the pole structure of the two terms.

    With R = Res_{w=1} Lambda_K(w):  Res_1 = Lambda_K(2) - R/2 and
    Res_0 = R/2 - Lambda_K(-1).
    """
    with working(p):
        half_r = class_number_residue(K, p) / 2
        if s0 == 1:
            return completed_xi_K(2, K, p) - half_r
        if s0 == 0:
            return half_r - completed_xi_K(-1, K, p)
    raise ValueError("xi_(K,2) has poles only at 0 and 1")


def residue(s0: int, K: FieldDescriptor = Q, p: int = DEFAULT_DIGITS) -> mpc:
    """Signed residue of xi_{K,2} at s0 in {0, 1}, by the contour integral."""
    return residue_contour(s0, K, p)


@lru_cache(maxsize=32)
def verify_half_cancellation(K: FieldDescriptor, p: int) -> tuple[mpc, mpc]:
    """Residues of the two terms at s = 1/2; they must cancel (each is -/+ Res Lambda_K)."""
    radius = mpf("0.05")
    with working(p):
        a = _contour_residue(lambda w, q: completed_xi_K(2 * w, K, q) / (w - 1), HALF, radius, p)
        b = _contour_residue(lambda w, q: completed_xi_K(2 * w - 1, K, q) / w, HALF, radius, p)
        if abs(a - b) > mpf(10) ** (GUARD_DIGITS - p) * max(abs(a), 1):
            raise CancellationAtHalf(f"residues at s = 1/2 do not cancel: {a} vs {b}")
        return a, b


# ---------------------------------------------------------- special values

def special_value_identity(n, p: int = DEFAULT_DIGITS) -> tuple[mpc, mpc]:
    """((n-1) n xi_{Q,2}(n), n xi(2n) - (n-1) xi(2n-1)).

    The right side is evaluated with mpmath's own zeta and gamma so the two
    sides share no code.
    """
    n = to_real(n)
    if n in (0, 1):
        raise PoleAtZeroOrOne("n must avoid the poles 0 and 1")
    with working(p):
        lhs = (n - 1) * n * rank2_zeta(n, Q, p)

        def xi_ref(w):
            if w < HALF:  # reflect away from the trivial zeros and gamma poles
                w = 1 - w
            return mp.power(mp.pi, -w / 2) * mp.gamma(w / 2) * mp.zeta(w)

        rhs = mpc(n * xi_ref(2 * n) - (n - 1) * xi_ref(2 * n - 1))
        return lhs, rhs


# --------------------------------------------------------- Suzuki function

def _z_function(s: mpc, p: int) -> mpc:
    """Z(s) = s (1-s) xi(s), entire; Z(0) = Z(1) = -1."""
    if s == 0 or s == 1:
        return mpc(-1)
    return s * (1 - s) * completed_xi(s, p)


def suzuki_F(z, p: int = DEFAULT_DIGITS) -> mpc:
    """F(z) = -Z(1/2 + 2iz); real on the real axis."""
    z = to_complex(z)
    with working(p):
        return -_z_function(HALF + 2j * z, p)


def suzuki_identity_sides(z, p: int = DEFAULT_DIGITS) -> tuple[mpc, mpc]:
    """(F(z + i/4) - F(z - i/4), i z (1 + 4 z^2) xi_{Q,2}(1/2 + i z))."""
    z = to_complex(z)
    with working(p):
        quarter = mpc(0, HALF / 2)
        lhs = suzuki_F(z + quarter, p) - suzuki_F(z - quarter, p)
        if z == 0:
            return lhs, mpc(0)
        rhs = 1j * z * (1 + 4 * z * z) * rank2_zeta(HALF + 1j * z, Q, p)
        return lhs, rhs


def suzuki_identity_residual(z, p: int = DEFAULT_DIGITS) -> mpf:
    """|F(z + i/4) - F(z - i/4) - i z (1 + 4 z^2) xi_{Q,2}(1/2 + i z)|."""
    lhs, rhs = suzuki_identity_sides(z, p)
    with working(p):
        return abs(lhs - rhs)
