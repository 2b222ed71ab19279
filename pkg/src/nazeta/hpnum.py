"""Arbitrary-precision numbers and special functions.

Values are mpmath ``mpf`` (BigReal) and ``mpc`` (BigComplex).  Precision is
always a per-call argument ``p`` in decimal digits.  Public functions work
internally at ``p + WORK_EXTRA`` digits; the documented contract is a relative
error of at most ``10**(GUARD_DIGITS - p)`` on every returned value.
"""

from __future__ import annotations

import math
import threading
from contextlib import contextmanager
from typing import Iterator, Union

import mpmath
from mpmath import mp, mpc, mpf

from .errors import NonPositiveArgument, PoleAtNonPositiveInteger, PrecisionError

DEFAULT_DIGITS = 50
GUARD_DIGITS = 5
WORK_EXTRA = 12

BigReal = mpf
BigComplex = mpc
Number = Union[int, float, str, mpf, mpc, complex]


@contextmanager
def working(p: int, extra: int = WORK_EXTRA) -> Iterator[int]:
    """Run the block at ``p + extra`` decimal digits and yield that precision."""
    dps = int(p) + extra
    with mp.workdps(dps):
        yield dps


def rel_tol(p: int) -> mpf:
    """The advertised relative error bound ``10**(g - p)``."""
    return mpf(10) ** (GUARD_DIGITS - int(p))


def to_real(x: Number) -> mpf:
    if isinstance(x, mpc):
        if x.imag != 0:
            raise ValueError(f"expected a real value, got {x}")
        return x.real
    return mpf(x)


def to_complex(z: Number) -> mpc:
    if isinstance(z, tuple):
        return mpc(mpf(z[0]), mpf(z[1]))
    return mpc(z)


def parse_complex(text: str) -> mpc:
    """Parse ``"re,im"`` or ``"re"`` into an mpc at the ambient precision."""
    parts = [t.strip() for t in text.split(",")]
    if len(parts) == 1:
        return mpc(mpf(parts[0]), 0)
    if len(parts) != 2:
        raise ValueError(f"cannot parse complex value {text!r}")
    return mpc(mpf(parts[0]), mpf(parts[1]))


def is_close(a: Number, b: Number, tol: Number) -> bool:
    """Relative comparison ``|a-b| <= tol * max(|a|,|b|)``; exact zero matches exact zero."""
    a, b = mpc(a), mpc(b)
    scale = max(abs(a), abs(b))
    if scale == 0:
        return True
    return abs(a - b) <= mpf(tol) * scale


# ---------------------------------------------------------------- constants

_const_lock = threading.Lock()
_const_cache: dict[tuple[str, int], mpf] = {}


def _constant(name: str, p: int) -> mpf:
    key = (name, int(p))
    value = _const_cache.get(key)
    if value is None:
        with mp.workdps(int(p) + WORK_EXTRA):
            value = {"pi": mp.pi, "log2": mp.ln2, "euler": mp.euler}[name] * 1
        with _const_lock:
            value = _const_cache.setdefault(key, value)
    return value


def pi(p: int = DEFAULT_DIGITS) -> mpf:
    return _constant("pi", p)


def log2(p: int = DEFAULT_DIGITS) -> mpf:
    return _constant("log2", p)


def euler_gamma(p: int = DEFAULT_DIGITS) -> mpf:
    return _constant("euler", p)


# ------------------------------------------------------------------- gamma

def _nonpositive_integer(z: mpc) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == int(z.real)


def gamma(z: Number, p: int = DEFAULT_DIGITS) -> mpc:
    """Gamma function; reflection is applied for Re(z) < 1/2."""
    with working(p):
        z = to_complex(z)
        if _nonpositive_integer(z):
            raise PoleAtNonPositiveInteger(f"Gamma has a pole at {z}")
        if z.real < 0.5:
            return mp.pi / (mp.sinpi(z) * mp.gamma(1 - z))
        return mp.gamma(z)


def loggamma(z: Number, p: int = DEFAULT_DIGITS) -> mpc:
    """Principal branch of log Gamma (continuous off the negative real axis)."""
    with working(p):
        z = to_complex(z)
        if _nonpositive_integer(z):
            raise PoleAtNonPositiveInteger(f"log Gamma has a pole at {z}")
        return mp.loggamma(z)


# ------------------------------------------------------------- Bessel K_nu

def bessel_crossover(nu: Number) -> mpf:
    """Argument above which the large-x asymptotic series is attempted."""
    return max(mpf(10), abs(mpc(nu)) ** 2 / 2)


def _bessel_k_asymptotic(nu: mpc, x: mpf, eps: mpf):
    """Hankel expansion; returns None when its smallest term is not below ``eps``."""
    mu = 4 * nu * nu
    term = mpc(1)
    total = mpc(1)
    k = 0
    prev = mpf("inf")
    while True:
        k += 1
        term *= (mu - (2 * k - 1) ** 2) / (k * 8 * x)
        size = abs(term)
        if size < eps * abs(total):
            # first omitted term bounds the remainder (real order, k > |nu| - 1/2)
            total += term
            break
        if size > prev or k > 400:
            return None
        prev = size
        total += term
    return mp.sqrt(mp.pi / (2 * x)) * mp.exp(-x) * total


def bessel_k(nu: Number, x: Number, p: int = DEFAULT_DIGITS):
    """Modified Bessel function of the second kind K_nu(x) for x > 0.

    For x >= max(10, |nu|^2/2) the Hankel asymptotic series is used when its
    minimal term is below the target accuracy; otherwise (small x, or x too
    small for the requested digits) the convergent hypergeometric
    representation is evaluated.  Real ``nu`` gives a real result.
    """
    with working(p):
        x = to_real(x)
        if x <= 0:
            raise NonPositiveArgument(f"K_nu needs x > 0, got {x}")
        nu_c = to_complex(nu)
        value = None
        if x >= bessel_crossover(nu_c):
            value = _bessel_k_asymptotic(nu_c, x, mpf(10) ** (-(p + GUARD_DIGITS)))
        if value is None:
            value = mpc(mp.besselk(nu_c if nu_c.imag else nu_c.real, x))
        if nu_c.imag == 0:
            return value.real
        return value


# ------------------------------------------------- upper incomplete gamma

def _gammainc_upper_cf(s: mpc, x: mpf, eps: mpf, max_iter: int = 2000):
    """Legendre continued fraction (modified Lentz); None if it fails to settle."""
    tiny = mpf(10) ** (-mp.dps * 2)
    b = x + 1 - s
    c = 1 / tiny
    d = 1 / b
    h = d
    for i in range(1, max_iter):
        an = -i * (i - s)
        b += 2
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1 / d
        delta = d * c
        h *= delta
        if abs(delta - 1) < eps:
            return mp.exp(-x + s * mp.log(x)) * h
    return None


def upper_incomplete_gamma(s: Number, x: Number, p: int = DEFAULT_DIGITS) -> mpc:
    """Gamma(s, x) = int_x^inf t^(s-1) e^(-t) dt for x > 0 and any complex s."""
    with working(p):
        s = to_complex(s)
        x = to_real(x)
        if x <= 0:
            raise NonPositiveArgument(f"Gamma(s, x) needs x > 0, got {x}")
        value = None
        if x > 1 + abs(s) / 4:
            value = _gammainc_upper_cf(s, x, mpf(10) ** (-(p + GUARD_DIGITS + 2)))
        if value is None:
            value = mpc(mp.gammainc(s, x))
        if not mp.isfinite(value.real) or not mp.isfinite(value.imag):
            raise PrecisionError(f"Gamma({s}, {x}) did not evaluate")
        return value


def mpmath_version() -> str:
    return mpmath.__version__


def digits_of(value, p: int) -> str:
    """Decimal string with ``p`` significant digits (output helper)."""
    return mpmath.nstr(value, p) if value != 0 else "0"
