"""Number-field data for Q and quadratic fields.

Holds the field descriptor, Kronecker characters, reduced binary quadratic
forms (the model for ideal classes of imaginary quadratic fields) and a small
amount of exact arithmetic on quadratic numbers and fractional ideals.  Only
what the lattice and zeta code consume is implemented: norms, Z-bases and the
ideal class of a two-generator ideal.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from mpmath import mp, mpc, mpf

from .errors import DomainError


# ------------------------------------------------------------ characters

def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d/n) for integers d, n."""
    if n == 0:
        return 1 if abs(d) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if d < 0:
            result = -result
    twos = 0
    while n % 2 == 0:
        n //= 2
        twos += 1
    if twos:
        if d % 2 == 0:
            return 0
        if twos % 2 == 1 and d % 8 in (3, 5):
            result = -result
    # Jacobi symbol (d/n) for odd positive n
    a = d % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_fundamental_discriminant(d: int) -> bool:
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return _squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def _squarefree(n: int) -> bool:
    n = abs(n)
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def discriminant_of_sqrt(k: int) -> int:
    """Fundamental discriminant of Q(sqrt k) for squarefree k != 0, 1."""
    if k in (0, 1) or not _squarefree(k):
        raise DomainError(f"Q(sqrt {k}) needs squarefree k not in (0, 1)")
    return k if k % 4 == 1 else 4 * k


# ----------------------------------------------------------------- forms

@dataclass(frozen=True, order=True)
class IdealClassRep:
    """Reduced primitive positive-definite form a x^2 + b xy + c y^2."""

    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def unit_count(self) -> int:
        return unit_count(self.disc)

    @property
    def is_principal(self) -> bool:
        return self.a == 1

    def __post_init__(self):
        d = self.disc
        if d >= 0:
            raise DomainError(f"form {self.triple} is not positive definite")
        if math.gcd(math.gcd(self.a, self.b), self.c) != 1:
            raise DomainError(f"form {self.triple} is not primitive")
        if not is_reduced(self.a, self.b, self.c):
            raise DomainError(f"form {self.triple} is not reduced")

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def ideal(self) -> "QuadIdeal":
        """The ideal [a, (-b + sqrt d)/2] belonging to this class."""
        d = self.disc
        return QuadIdeal(d, (QuadNumber(d, Fraction(self.a)),
                             QuadNumber(d, Fraction(-self.b, 2), Fraction(1, 2))))


def unit_count(d: int) -> int:
    return {-3: 6, -4: 4}.get(d, 2)


def is_reduced(a: int, b: int, c: int) -> bool:
    if not (abs(b) <= a <= c):
        return False
    if (abs(b) == a or a == c) and b < 0:
        return False
    return True


def reduce_form(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Gauss reduction of a positive-definite form (proper equivalence)."""
    if b * b - 4 * a * c >= 0 or a <= 0:
        raise DomainError("only positive-definite forms can be reduced")
    while True:
        if c < a:
            a, b, c = c, -b, a
            continue
        if b > a or b <= -a:
            # translate x -> x + k y so that -a < b <= a
            k = (a - b) // (2 * a)
            c = a * k * k + b * k + c
            b = b + 2 * a * k
            continue
        if a == c and b < 0:
            b = -b
        return a, b, c


def reduced_forms(d: int) -> list[IdealClassRep]:
    """All reduced primitive forms of discriminant d < 0 (one per ideal class)."""
    if d >= 0 or d % 4 not in (0, 1):
        raise DomainError(f"{d} is not a negative discriminant")
    forms = []
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b - d) % 2:
                continue
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (a == c and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            forms.append(IdealClassRep(a, b, c))
        a += 1
    return sorted(forms)


# -------------------------------------------------------- quadratic numbers

class QuadNumber:
    """Exact element u + v*sqrt(d) of Q(sqrt d); d = 0 encodes Q itself."""

    __slots__ = ("d", "u", "v")

    def __init__(self, d: int, u, v=0):
        self.d = d
        self.u = Fraction(u)
        self.v = Fraction(v) if d else Fraction(0)

    @classmethod
    def omega(cls, d: int) -> "QuadNumber":
        """Generator of the ring of integers: Z[omega], omega = (d + sqrt d)/2."""
        if d == 0:
            return cls(0, 1)
        return cls(d, Fraction(d, 2), Fraction(1, 2))

    def __add__(self, other):
        other = self._coerce(other)
        return QuadNumber(self.d, self.u + other.u, self.v + other.v)

    __radd__ = __add__

    def __neg__(self):
        return QuadNumber(self.d, -self.u, -self.v)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return QuadNumber(self.d, self.u * other.u + self.d * self.v * other.v,
                          self.u * other.v + self.v * other.u)

    __rmul__ = __mul__

    def conj(self) -> "QuadNumber":
        return QuadNumber(self.d, self.u, -self.v)

    def norm(self) -> Fraction:
        """Field norm (for Q the number itself)."""
        if self.d == 0:
            return self.u
        return self.u * self.u - self.d * self.v * self.v

    def inverse(self) -> "QuadNumber":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.d == 0:
            return QuadNumber(0, 1 / self.u)
        c = self.conj()
        return QuadNumber(self.d, c.u / n, c.v / n)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def __eq__(self, other):
        other = self._coerce(other)
        return self.u == other.u and self.v == other.v

    def __hash__(self):
        return hash((self.d, self.u, self.v))

    def coords(self) -> tuple[Fraction, Fraction]:
        """Coordinates (x, y) with self = x + y*omega."""
        if self.d == 0:
            return (self.u, Fraction(0))
        y = 2 * self.v
        return (self.u - y * Fraction(self.d, 2), y)

    @classmethod
    def from_coords(cls, d: int, x, y) -> "QuadNumber":
        return cls(d, x) + cls.omega(d) * Fraction(y)

    def embed(self):
        """Complex embedding with sqrt(d) = i sqrt|d| for d < 0."""
        u = mpf(self.u.numerator) / self.u.denominator
        if self.d == 0:
            return mpc(u)
        v = mpf(self.v.numerator) / self.v.denominator
        if self.d < 0:
            return mpc(u, v * mp.sqrt(-self.d))
        return mpc(u + v * mp.sqrt(self.d))

    def _coerce(self, other) -> "QuadNumber":
        if isinstance(other, QuadNumber):
            return other
        return QuadNumber(self.d, Fraction(other))

    def __repr__(self):
        if self.d == 0:
            return f"{self.u}"
        return f"({self.u} + {self.v}*sqrt({self.d}))"


def _hnf2(vectors: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], tuple[int, int]]:
    """Z-basis (lower-triangular HNF rows) of the lattice spanned by integer 2-vectors."""
    rows = [list(v) for v in vectors if v != (0, 0)]
    # gcd-combine second coordinates into one row, collecting the rest
    pivot = None
    rest = []
    for r in rows:
        if r[1] == 0:
            rest.append(r)
            continue
        if pivot is None:
            pivot = r
            continue
        # extended Euclid on the second coordinate
        a, b = pivot, r
        while b[1] != 0:
            q = a[1] // b[1]
            a, b = b, [a[0] - q * b[0], a[1] - q * b[1]]
        pivot = a
        rest.append(b)
    g0 = 0
    for r in rest:
        g0 = math.gcd(g0, r[0])
    if pivot is None or g0 == 0:
        raise DomainError("vectors do not span a rank-two lattice")
    if pivot[1] < 0:
        pivot = [-pivot[0], -pivot[1]]
    return (g0, 0), (pivot[0] % g0, pivot[1])


class QuadIdeal:
    """Fractional ideal of an imaginary quadratic (or Q) ring of integers, by Z-basis."""

    def __init__(self, d: int, basis: tuple[QuadNumber, QuadNumber]):
        self.d = d
        self.basis = basis

    @classmethod
    def generated_by(cls, d: int, gens: Iterable[QuadNumber]) -> "QuadIdeal":
        """O_K-ideal generated by the given elements."""
        omega = QuadNumber.omega(d)
        zgens = []
        for g in gens:
            if g.is_zero():
                continue
            zgens.append(g)
            zgens.append(g * omega)
        return cls._from_zgens(d, zgens)

    @classmethod
    def _from_zgens(cls, d: int, zgens: list[QuadNumber]) -> "QuadIdeal":
        if not zgens:
            raise DomainError("zero ideal")
        coords = [g.coords() for g in zgens]
        den = 1
        for x, y in coords:
            den = den * x.denominator // math.gcd(den, x.denominator)
            den = den * y.denominator // math.gcd(den, y.denominator)
        ivecs = [(int(x * den), int(y * den)) for x, y in coords]
        (a0, _), (b0, b1) = _hnf2(ivecs)
        e1 = QuadNumber.from_coords(d, Fraction(a0, den), 0)
        e2 = QuadNumber.from_coords(d, Fraction(b0, den), Fraction(b1, den))
        return cls(d, (e1, e2))

    def __add__(self, other: "QuadIdeal") -> "QuadIdeal":
        return QuadIdeal._from_zgens(self.d, list(self.basis) + list(other.basis))

    def __mul__(self, other):
        if isinstance(other, QuadIdeal):
            return QuadIdeal._from_zgens(self.d, [x * y for x in self.basis for y in other.basis])
        return QuadIdeal._from_zgens(self.d, [x * other for x in self.basis])

    def conj(self) -> "QuadIdeal":
        return QuadIdeal(self.d, (self.basis[0].conj(), self.basis[1].conj()))

    def inverse(self) -> "QuadIdeal":
        """I^-1 = conj(I)/N(I) (valid for imaginary quadratic orders O_K)."""
        n = self.norm()
        return QuadIdeal._from_zgens(self.d, [b.conj() * (1 / n) for b in self.basis])

    def norm(self) -> Fraction:
        """Absolute norm = covolume relative to Z[omega]."""
        (x1, y1), (x2, y2) = (self.basis[0].coords(), self.basis[1].coords())
        return abs(x1 * y2 - x2 * y1)

    def contains(self, x: QuadNumber) -> bool:
        (x1, y1), (x2, y2) = (self.basis[0].coords(), self.basis[1].coords())
        det = x1 * y2 - x2 * y1
        px, py = x.coords()
        a = (px * y2 - x2 * py) / det
        b = (x1 * py - px * y1) / det
        return a.denominator == 1 and b.denominator == 1

    def form(self) -> tuple[int, int, int]:
        """Norm form N(x e1 - y e2)/N(I) for a positively oriented basis."""
        e1, e2 = self.basis
        z1, z2 = e1.embed(), e2.embed()
        if (mp.conj(z1) * z2).imag < 0:
            e2 = -e2
        n = self.norm()
        a = e1.norm() / n
        b = -(e1 * e2.conj() + e1.conj() * e2).u / n
        c = e2.norm() / n
        for v in (a, b, c):
            if v.denominator != 1:
                raise DomainError("norm form is not integral")
        return int(a), int(b), int(c)

    def ideal_class(self) -> IdealClassRep:
        """Reduced form representing the ideal class (imaginary quadratic only)."""
        if self.d >= 0:
            raise DomainError("ideal classes are modelled for imaginary quadratic fields only")
        return IdealClassRep(*reduce_form(*self.form()))

    def __repr__(self):
        return f"QuadIdeal(d={self.d}, basis={self.basis})"


# ----------------------------------------------------------- descriptors

@dataclass(frozen=True)
class FieldDescriptor:
    label: str
    disc: int  # fundamental discriminant; 0 encodes Q
    class_number: int = 1
    chi_table: tuple[int, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.disc != 0 and not is_fundamental_discriminant(self.disc):
            raise DomainError(f"{self.disc} is not a fundamental discriminant")
        if self.class_number < 1:
            raise DomainError("class number must be positive")
        if not self.chi_table:
            q = abs(self.disc)
            table = tuple(kronecker(self.disc, a) for a in range(q)) if q else (1,)
            object.__setattr__(self, "chi_table", table)

    @property
    def is_rational(self) -> bool:
        return self.disc == 0

    @property
    def is_imaginary_quadratic(self) -> bool:
        return self.disc < 0

    @property
    def is_real_quadratic(self) -> bool:
        return self.disc > 0

    @property
    def degree(self) -> int:
        return 1 if self.disc == 0 else 2

    @property
    def abs_disc(self) -> int:
        return 1 if self.disc == 0 else abs(self.disc)

    @property
    def signature(self) -> tuple[int, int]:
        if self.disc == 0:
            return (1, 0)
        return (2, 0) if self.disc > 0 else (0, 1)

    @property
    def unit_count(self) -> int:
        """Number of roots of unity (size of the unit group when it is finite)."""
        if self.disc == 0 or self.disc > 0:
            return 2
        return unit_count(self.disc)

    def chi(self, n: int) -> int:
        q = abs(self.disc)
        if q == 0:
            return 1
        return self.chi_table[n % q]

    @cached_property
    def forms(self) -> tuple[IdealClassRep, ...]:
        if not self.is_imaginary_quadratic:
            raise DomainError(f"{self.label}: ideal classes via forms need an imaginary quadratic field")
        return tuple(reduced_forms(self.disc))

    def principal_form(self) -> IdealClassRep:
        return self.forms[0]

    def ring_basis(self) -> tuple[QuadNumber, QuadNumber] | tuple[QuadNumber]:
        if self.disc == 0:
            return (QuadNumber(0, 1),)
        return (QuadNumber(self.disc, 1), QuadNumber.omega(self.disc))

    def element(self, x, y=0) -> QuadNumber:
        """Element x + y*omega (for Q: x)."""
        if self.disc == 0:
            return QuadNumber(0, x)
        return QuadNumber.from_coords(self.disc, Fraction(x), Fraction(y))

    def unit_ideal(self) -> QuadIdeal:
        basis = self.ring_basis()
        if len(basis) == 1:
            return QuadIdeal(0, (basis[0], basis[0]))
        return QuadIdeal(self.disc, basis)


def make_field(disc: int, class_number: int | None = None, label: str | None = None) -> FieldDescriptor:
    """Descriptor for Q (disc 0) or the quadratic field of fundamental discriminant ``disc``."""
    if disc == 0:
        return FieldDescriptor("Q", 0, 1)
    if class_number is None:
        if disc < 0:
            class_number = len(reduced_forms(disc))
        elif disc in _REAL_CLASS_NUMBERS:
            class_number = _REAL_CLASS_NUMBERS[disc]
        else:
            raise DomainError(f"class number of Q(sqrt) with discriminant {disc} must be supplied")
    if label is None:
        label = _label_for(disc)
    return FieldDescriptor(label, disc, class_number)


def _label_for(disc: int) -> str:
    k = disc // 4 if disc % 4 == 0 else disc
    return f"Q(sqrt {k})" if k > 0 else f"Q(sqrt -{-k})"


# class numbers of a few real quadratic fields (data, not computed)
_REAL_CLASS_NUMBERS = {5: 1, 8: 1, 12: 1, 13: 1, 17: 1, 21: 1, 24: 1, 28: 1, 29: 1,
                       33: 1, 37: 1, 40: 2, 41: 1, 44: 1, 53: 1, 56: 1, 57: 1, 60: 2,
                       61: 1, 65: 2}

Q = make_field(0)
Q_I = make_field(-4)
Q_SQRT_M3 = make_field(-3)
Q_SQRT_M5 = make_field(-20)
Q_SQRT_5 = make_field(5)
SHIPPED_FIELDS = (Q, Q_I, Q_SQRT_M3, Q_SQRT_M5, Q_SQRT_5)

_SPEC_RE = re.compile(r"^(?:Q|Qsqrt(?P<k>[+-]?\d+)|disc:(?P<d>[+-]?\d+):h:(?P<h>\d+))$")


def parse_field(spec: str) -> FieldDescriptor:
    """Parse ``Q`` | ``Qsqrt<k>`` | ``disc:<d>:h:<n>``."""
    m = _SPEC_RE.match(spec.strip())
    if not m:
        raise ValueError(f"cannot parse field spec {spec!r}")
    if m.group("k") is not None:
        return make_field(discriminant_of_sqrt(int(m.group("k"))))
    if m.group("d") is not None:
        d = int(m.group("d"))
        if d == 0:
            return Q
        return make_field(d, int(m.group("h")))
    return Q
