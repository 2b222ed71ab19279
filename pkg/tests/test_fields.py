from fractions import Fraction

import pytest

from nazeta.errors import DomainError
from nazeta.fields import (Q, Q_I, Q_SQRT_5, Q_SQRT_M3, Q_SQRT_M5, IdealClassRep, QuadIdeal, QuadNumber,
                           discriminant_of_sqrt, is_fundamental_discriminant, kronecker, make_field,
                           parse_field, reduce_form, reduced_forms)


def test_kronecker_values_against_quadratic_residues():
    # chi_-4 is the nontrivial character mod 4
    assert [kronecker(-4, n) for n in range(1, 9)] == [1, 0, -1, 0, 1, 0, -1, 0]
    # chi_5(n) = Legendre symbol (n/5)
    assert [kronecker(5, n) for n in range(1, 6)] == [1, -1, -1, 1, 0]
    assert [kronecker(-3, n) for n in range(1, 7)] == [1, -1, 0, 1, -1, 0]


def test_fundamental_discriminants():
    assert [d for d in range(-30, 0) if is_fundamental_discriminant(d)] == \
        [-24, -23, -20, -19, -15, -11, -8, -7, -4, -3]
    assert discriminant_of_sqrt(-1) == -4
    assert discriminant_of_sqrt(-5) == -20
    assert discriminant_of_sqrt(5) == 5
    assert discriminant_of_sqrt(-3) == -3


@pytest.mark.parametrize("d,h", [(-3, 1), (-4, 1), (-20, 2), (-23, 3), (-56, 4), (-84, 4), (-163, 1)])
def test_class_numbers_from_reduced_forms(d, h):
    assert len(reduced_forms(d)) == h


def test_reduced_forms_of_minus_20():
    assert [f.triple for f in reduced_forms(-20)] == [(1, 0, 5), (2, 2, 3)]


def test_reduce_form_preserves_discriminant():
    a, b, c = reduce_form(7, 11, 5)
    assert b * b - 4 * a * c == 11 * 11 - 4 * 35
    assert (a, b, c) == reduce_form(a, b, c)


def test_ideal_class_rep_validation():
    with pytest.raises(ValueError):
        IdealClassRep(3, 2, 2)   # a > c: not reduced
    with pytest.raises(ValueError):
        IdealClassRep(2, 2, 2)   # not primitive


def test_quad_number_arithmetic():
    d = -20
    x = QuadNumber(d, 3, 1)
    assert x * x.inverse() == QuadNumber(d, 1)
    assert x.norm() == 9 + 20
    assert (x / x) == 1
    assert QuadNumber(0, 1) / QuadNumber(0, 2) == QuadNumber(0, Fraction(1, 2))
    assert QuadNumber(0, 6).inverse() == QuadNumber(0, Fraction(1, 6))


def test_ideal_arithmetic_d_minus_20():
    K = Q_SQRT_M5
    p2 = K.forms[1].ideal()              # non-principal prime above 2
    assert p2.norm() == 2
    assert (p2 * p2).ideal_class().is_principal
    assert p2.ideal_class().triple == (2, 2, 3)
    assert (p2 * p2.inverse()).norm() == 1
    unit = K.unit_ideal()
    assert unit.ideal_class().is_principal


def test_ideal_generated_by_principal():
    K = Q_SQRT_M5
    two = QuadIdeal.generated_by(K.disc, [QuadNumber(K.disc, 2)])
    assert two.norm() == 4
    assert two.contains(QuadNumber(K.disc, 6))
    assert not two.contains(QuadNumber(K.disc, 3))


def test_shipped_field_descriptors():
    assert Q.is_rational and Q.degree == 1 and Q.abs_disc == 1
    assert Q_I.is_imaginary_quadratic and Q_I.unit_count == 4 and Q_I.signature == (0, 1)
    assert Q_SQRT_M3.unit_count == 6
    assert Q_SQRT_M5.class_number == 2
    assert Q_SQRT_5.is_real_quadratic and Q_SQRT_5.signature == (2, 0)


def test_parse_field_grammar():
    assert parse_field("Q") is Q or parse_field("Q").disc == 0
    assert parse_field("Qsqrt-1").disc == -4
    assert parse_field("Qsqrt-5").class_number == 2
    assert parse_field("disc:-23:h:3").class_number == 3
    with pytest.raises(ValueError):
        parse_field("Qsqrt")
    with pytest.raises(DomainError):
        make_field(-12)
