"""Rank-two metrized lattices over Q and imaginary quadratic fields.

A lattice is the module P = O_K + a (a the twist ideal) with the metric given
by a point tau and a scale.  Over Q, tau = x + iy and the vector (m, n) has

    |(m, n)|^2 = |m tau + n|^2 / y                      (volume 1 at scale 1).

Over imaginary quadratic K, tau = (z, r) in hyperbolic 3-space and (x, y) in
O_K + a has hermitian length

    q(x, y) = (|x z + y|^2 + |x|^2 r^2) / r,

whose N-norm (the complex place counted twice) is W = q^2.  The rank-one
sublattice through v = (x, y) has ideal b_v = O_K x + a^-1 y, and the lattice
is semistable iff W(v) >= N(a) N(b_v)^2 for every v (Hayashi's criterion).
Writing the cusp of v as [alpha : beta] = [y : -x] turns the same ratio into
the reciprocal distance mu(eta, tau) = N(b^2 a^-1) N(tau) / ||N(-beta tau + alpha)||^2
with b = O_K alpha + a beta.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from mpmath import mp, mpc, mpf

from .epstein import form_value, short_vectors
from .errors import DegenerateCusp, UnsupportedField
from .fields import FieldDescriptor, IdealClassRep, QuadIdeal, QuadNumber
from .hpnum import DEFAULT_DIGITS, working


def _abs2(w) -> mpf:
    """|w|^2 without a square root (exact for exact inputs)."""
    w = mpc(w)
    return w.real * w.real + w.imag * w.imag


# ----------------------------------------------------------------- types

@dataclass(frozen=True)
class LatticeK:
    """O_K + a with the metric of tau at a given scale.

    ``tau`` is a complex number x + iy (y > 0) over Q and a pair (z, r) with
    r > 0 over an imaginary quadratic field.  ``twist`` None means a = O_K.
    """

    field: FieldDescriptor
    tau: object
    scale: object = 1
    twist: Optional[IdealClassRep] = None

    def __post_init__(self):
        if not (self.field.is_rational or self.field.is_imaginary_quadratic):
            raise UnsupportedField(f"lattice geometry is implemented for Q and imaginary quadratic fields, not {self.field.label}")
        if mpf(self.scale) <= 0:
            raise ValueError("scale must be positive")
        if self.field.is_rational:
            if self.twist is not None:
                raise ValueError("Q has no nontrivial ideal classes")
            if mpc(self.tau).imag <= 0:
                raise ValueError("tau must lie in the upper half plane")
        else:
            z, r = self.tau
            if mpf(r) <= 0:
                raise ValueError("tau = (z, r) needs r > 0")
            if self.twist is not None and self.twist.disc != self.field.disc:
                raise ValueError("twist class has the wrong discriminant")

    # module data
    @property
    def ideal(self) -> QuadIdeal:
        K = self.field
        if K.is_rational:
            raise UnsupportedField("Q has no ideal object here")
        if self.twist is None:
            return K.unit_ideal()
        return self.twist.ideal()

    @property
    def ideal_norm(self) -> Fraction:
        if self.field.is_rational or self.twist is None:
            return Fraction(1)
        return Fraction(self.twist.a)

    def module_basis(self) -> list[tuple[QuadNumber, QuadNumber]]:
        """Z-basis of O_K + a as pairs (x, y)."""
        K = self.field
        if K.is_rational:
            one, zero = QuadNumber(0, 1), QuadNumber(0, 0)
            return [(one, zero), (zero, one)]
        zero = QuadNumber(K.disc, 0)
        o1, o2 = K.ring_basis()
        a1, a2 = self.ideal.basis
        return [(o1, zero), (o2, zero), (zero, a1), (zero, a2)]

    def vector(self, coeffs) -> tuple[QuadNumber, QuadNumber]:
        x = y = None
        for c, (bx, by) in zip(coeffs, self.module_basis()):
            x = bx * c if x is None else x + bx * c
            y = by * c if y is None else y + by * c
        return x, y

    def length_gram(self) -> list[list[mpf]]:
        """Gram matrix of |.|^2 (Q) or q (imaginary quadratic) on the Z-basis, at scale 1."""
        if self.field.is_rational:
            t = mpc(self.tau)
            x, y = t.real, t.imag
            return [[y + x * x / y, x / y], [x / y, 1 / y]]
        z, r = mpc(self.tau[0]), mpf(self.tau[1])
        forms = []
        for bx, by in self.module_basis():
            ex, ey = bx.embed(), by.embed()
            forms.append((ex * z + ey, ex * r))
        k = len(forms)
        return [[(forms[i][0] * mp.conj(forms[j][0]) + forms[i][1] * mp.conj(forms[j][1])).real / r
                 for j in range(k)] for i in range(k)]

    def weight(self, x: QuadNumber, y: QuadNumber) -> mpf:
        """N-norm of the vector (x, y) at scale 1: |v|^2 over Q, q^2 over imaginary quadratic K."""
        if self.field.is_rational:
            t = mpc(self.tau)
            return _abs2(x.embed() * t + y.embed()) / t.imag
        z, r = mpc(self.tau[0]), mpf(self.tau[1])
        ex, ey = x.embed(), y.embed()
        q = (_abs2(ex * z + ey) + _abs2(ex) * r * r) / r
        return q * q


@dataclass(frozen=True)
class Cusp:
    """[alpha : beta] in P^1(K) with the ideal b = O_K alpha + a beta (norm only over Q)."""

    alpha: QuadNumber
    beta: QuadNumber
    ideal_b_norm: Fraction
    ideal_class: Optional[IdealClassRep] = field(default=None, compare=False)

    def key(self):
        """Projective class: the ratio alpha/beta (None for the cusp at infinity)."""
        if self.beta.is_zero():
            return None
        return self.alpha / self.beta


def _rational_gcd(a: Fraction, b: Fraction) -> Fraction:
    if a == 0:
        return abs(b)
    if b == 0:
        return abs(a)
    den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    return Fraction(math.gcd(int(a * den), int(b * den)), den)


def make_cusp(alpha, beta, L: LatticeK) -> Cusp:
    """Cusp [alpha : beta] relative to the module of L, with b = O_K alpha + a beta."""
    K = L.field
    d = K.disc
    alpha = alpha if isinstance(alpha, QuadNumber) else QuadNumber(d, alpha)
    beta = beta if isinstance(beta, QuadNumber) else QuadNumber(d, beta)
    if alpha.is_zero() and beta.is_zero():
        raise DegenerateCusp("[0 : 0] is not a point of P^1")
    if K.is_rational:
        return Cusp(alpha, beta, _rational_gcd(alpha.u, beta.u))
    gens = [alpha] + [beta * g for g in L.ideal.basis]
    b = QuadIdeal.generated_by(d, gens)
    return Cusp(alpha, beta, b.norm(), b.ideal_class())


# ------------------------------------------------------------- cohomology

def _theta_gram(L: LatticeK) -> list[list[mpf]]:
    """Quadratic form in the exponent: exp(-pi v^T G v)."""
    factor = mpf(L.scale) ** 2 * (1 if L.field.is_rational else 2)
    return [[factor * g for g in row] for row in L.length_gram()]


def theta_log(gram, p: int) -> mpf:
    """log sum_{v in Z^k} exp(-pi v^T G v), truncated where the Gaussian tail is below 10^-p."""
    with working(p) as dps:
        cut = (dps * math.log(10) + 10 + len(gram) * 5) / math.pi
        total = mpf(0)
        for vec in short_vectors(gram, cut):
            total += mp.exp(-mp.pi * form_value(gram, vec))
        return mp.log(1 + 2 * total)


def h0(L: LatticeK, p: int = DEFAULT_DIGITS) -> mpf:
    """h^0 = log sum_{x in Lambda} exp(-pi sum_real |x|^2 - 2 pi sum_complex |x|^2)."""
    with working(p):
        return theta_log(_theta_gram(L), p)


def _inverse(gram):
    m = mp.matrix(gram) ** -1
    k = len(gram)
    return [[m[i, j] for j in range(k)] for i in range(k)]


def h1(L: LatticeK, p: int = DEFAULT_DIGITS) -> mpf:
    """h^1 = h^0 of the dual lattice (Q only; the dualizing lattice of Q is trivial)."""
    if not L.field.is_rational:
        raise UnsupportedField("h^1 is implemented over Q only")
    with working(p):
        return theta_log(_inverse(_theta_gram(L)), p)


def dual_lattice(L: LatticeK) -> LatticeK:
    """Lambda^dual over Q: the point -conj(tau) at scale 1/T.

    The inverse of the Gram matrix at tau is the Gram matrix at -conj(tau)
    with the two coordinates swapped, so h0(dual_lattice(L)) = h1(L).
    """
    if not L.field.is_rational:
        raise UnsupportedField("dual lattices are implemented over Q only")
    t = mpc(L.tau)
    return LatticeK(L.field, mpc(-t.real, t.imag), 1 / mpf(L.scale))


def volume(L: LatticeK) -> mpf:
    """scale^(2 deg K) N(a) Delta_K."""
    K = L.field
    return mpf(L.scale) ** (2 * K.degree) * mpf(L.ideal_norm.numerator) / L.ideal_norm.denominator * K.abs_disc


def degree(L: LatticeK) -> mpf:
    """Arakelov degree -log Vol + log Delta_K (rank two)."""
    return -mp.log(volume(L)) + mp.log(L.field.abs_disc)


# ------------------------------------------------------------- reduction

def reduce_sl2z(z) -> tuple[mpc, tuple[tuple[int, int], tuple[int, int]]]:
    """Move z into {|Re z| <= 1/2, |z| >= 1}; returns (z', ((a, b), (c, d))) with z' = (az+b)/(cz+d)."""
    z = mpc(z)
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half plane")
    a, b, c, d = 1, 0, 0, 1
    for _ in range(10000):
        n = int(mp.nint(z.real))
        if n:
            z -= n
            a, b = a - n * c, b - n * d
        if abs(z) < 1:
            z = -1 / z
            a, b, c, d = -c, -d, a, b
            continue
        break
    # boundary normalisation
    if z.real == -0.5:
        z += 1
        a, b = a + c, b + d
    return z, ((a, b), (c, d))


def lambda1(L: LatticeK) -> mpf:
    """Shortest nonzero vector length over Q by Lagrange-Gauss reduction."""
    if not L.field.is_rational:
        raise UnsupportedField("lambda1 is implemented over Q")
    t = mpc(L.tau)
    sy = mp.sqrt(t.imag)
    s = mpf(L.scale)
    u = [s * sy, s * t.real / sy]
    v = [mpf(0), s / sy]

    def dot(p, q):
        return p[0] * q[0] + p[1] * q[1]

    if dot(u, u) < dot(v, v):
        u, v = v, u
    while True:
        # keep v the shorter one, reduce u against it
        mu = mp.nint(dot(u, v) / dot(v, v))
        u = [u[0] - mu * v[0], u[1] - mu * v[1]]
        if dot(u, u) >= dot(v, v):
            return mp.sqrt(dot(v, v))
        u, v = v, u


def is_semistable_q(z) -> bool:
    """Fundamental-domain test: Im of the reduced point is at most 1."""
    zr, _ = reduce_sl2z(z)
    return zr.imag <= 1


# ---------------------------------------------------------------- cusps

def mu_distance(eta: Cusp, L: LatticeK) -> mpf:
    """mu(eta, tau) = N(b^2 a^-1) N(Im tau) / ||N(-beta tau + alpha)||^2."""
    if eta.alpha.is_zero() and eta.beta.is_zero():
        raise DegenerateCusp("[0 : 0] is not a point of P^1")
    nb = mpf(eta.ideal_b_norm.numerator) / eta.ideal_b_norm.denominator
    na = mpf(L.ideal_norm.numerator) / L.ideal_norm.denominator
    a, b = eta.alpha.embed(), eta.beta.embed()
    if L.field.is_rational:
        t = mpc(L.tau)
        return nb * nb / na * t.imag / _abs2(-b * t + a)
    z, r = mpc(L.tau[0]), mpf(L.tau[1])
    quat = _abs2(-b * z + a) + _abs2(b) * r * r
    return nb * nb / na * r * r / (quat * quat)


def _cusp_bound(L: LatticeK, threshold) -> mpf:
    K = L.field
    na = mpf(L.ideal_norm.numerator) / L.ideal_norm.denominator
    return max(mpf(1), na * 2 ** K.signature[1] * K.abs_disc / mpf(threshold))


def _vectors_up_to(L: LatticeK, weight_bound):
    """Module vectors (one per +-pair) with N-norm weight <= weight_bound."""
    gram = L.length_gram()
    if L.field.is_rational:
        radius = float(weight_bound)
    else:
        radius = math.sqrt(float(weight_bound))
    for coeffs in short_vectors(gram, radius):
        yield L.vector(coeffs)


def _collect_cusps(L: LatticeK, threshold, bound) -> dict:
    found = {}
    for x, y in _vectors_up_to(L, bound):
        key = None if x.is_zero() else y / (-x)
        if key in found:
            continue
        cusp = make_cusp(y, -x, L)
        if mu_distance(cusp, L) >= threshold:
            found[key] = cusp
        else:
            found.setdefault(key, None)
    return {k: c for k, c in found.items() if c is not None}


def enumerate_candidate_cusps(L: LatticeK, threshold=1, p: int = DEFAULT_DIGITS) -> list[Cusp]:
    """All cusps with mu(eta, tau) >= threshold, deduplicated projectively.

    Every cusp has a vector representative with N(b_v) below the Minkowski
    constant, so vectors of weight up to N(a) 2^r2 Delta_K / threshold suffice;
    the search is repeated with twice that bound as a safety check.
    """
    with working(p):
        threshold = mpf(threshold)
        bound = _cusp_bound(L, threshold)
        first = _collect_cusps(L, threshold, bound)
        second = _collect_cusps(L, threshold, 2 * bound)
        if set(second) != set(first):
            warnings.warn("doubling the cusp search bound found new cusps", RuntimeWarning)
        cusps = list(second.values())
        cusps.sort(key=lambda c: -mu_distance(c, L))
        return cusps


def is_semistable_k(L: LatticeK, p: int = DEFAULT_DIGITS) -> bool:
    """Distance criterion: no cusp has mu(eta, tau) > 1."""
    with working(p):
        return all(mu_distance(c, L) <= 1 for c in enumerate_candidate_cusps(L, 1, p))


def hayashi_check(L: LatticeK, bound=None, p: int = DEFAULT_DIGITS) -> bool:
    """Direct test W(v) >= N(a b_v^2), b_v = O_K x + a^-1 y, over all vectors up to ``bound``."""
    K = L.field
    with working(p):
        if bound is None:
            bound = 2 * _cusp_bound(L, 1)
        na = L.ideal_norm
        inv = None if K.is_rational else L.ideal.inverse()
        for x, y in _vectors_up_to(L, bound):
            if K.is_rational:
                nb = _rational_gcd(x.u, y.u)
            else:
                gens = [x] + [y * g for g in inv.basis]
                nb = QuadIdeal.generated_by(K.disc, gens).norm()
            need = na * nb * nb
            if L.weight(x, y) < mpf(need.numerator) / need.denominator:
                return False
        return True
