"""Exact field arithmetic in Q(lambda)."""

from fractions import Fraction

import pytest

from faultline.algebra import (
    NumberField,
    compare,
    field_arith,
    irreducible_factors,
    isolate_real_roots,
    mod_reduce,
    poly_str,
    squarefree_part,
)
from faultline.errors import ValidationError

from conftest import rng_for


@pytest.fixture
def field():
    # the quadratic field with root ~2.3028, the larger root of x^2-x-3
    f, _ = NumberField.with_largest_real_root((-3, -1, 1))
    return f


def test_lambda_squared_reduces(field):
    lam = field.gen()
    assert lam * lam == lam + 3


def test_sub_self_is_zero(field):
    a = field.element([Fraction(2, 7), Fraction(-5, 3)])
    assert (a - a).is_zero()


def test_lambda_times_lambda_minus_one(field):
    lam = field.gen()
    assert lam * (lam - 1) == field.from_rational(3)


def test_field_arith_dispatch(field):
    lam = field.gen()
    assert field_arith("add", lam, lam) == 2 * lam
    assert field_arith("sub", lam, lam).is_zero()
    assert field_arith("mul", lam, lam) == lam + 3
    assert field_arith("div", lam + 3, lam) == lam
    with pytest.raises(ValidationError):
        field_arith("pow", lam, lam)


def test_division_and_inverse(field):
    lam = field.gen()
    inv = lam.inverse()
    assert (lam * inv) == field.one()
    # 1/lambda = (lambda - 1)/3 since lambda(lambda-1) = 3
    assert inv == (lam - 1) / 3
    with pytest.raises(ZeroDivisionError):
        field.zero().inverse()


def test_compare_examples(field):
    lam = field.gen()
    assert compare(lam, field.from_rational(2)) > 0
    assert compare(lam, lam) == 0
    assert compare(lam * lam - lam, field.from_rational(3)) == 0


def test_compare_matches_float_on_random_elements(field):
    rng = rng_for("compare")
    elems = []
    for _ in range(40):
        c0 = Fraction(rng.randint(-50, 50), rng.randint(1, 20))
        c1 = Fraction(rng.randint(-50, 50), rng.randint(1, 20))
        elems.append(field.element([c0, c1]))
    for a in elems[:20]:
        for b in elems[20:]:
            fa, fb = float(a), float(b)
            if abs(fa - fb) > 1e-12:
                assert compare(a, b) == (1 if fa > fb else -1)
            else:
                assert compare(a, b) == 0


def test_ring_axioms_random(field):
    rng = rng_for("ring")
    for _ in range(60):
        a, b, c = (
            field.element([Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(2)])
            for _ in range(3)
        )
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a
        assert a * (b * c) == (a * b) * c


def test_mod_reduce_examples(field):
    lam = field.gen()
    three = field.from_rational(3)
    assert mod_reduce(lam, three) == lam
    assert mod_reduce(three, three).is_zero()
    assert mod_reduce(2 * lam, three) == 2 * lam - 3


def test_mod_reduce_invariants(field):
    rng = rng_for("mod")
    lam = field.gen()
    three = field.from_rational(3)
    for _ in range(30):
        a = field.element([Fraction(rng.randint(-40, 40)), Fraction(rng.randint(-40, 40))])
        r = mod_reduce(a, three)
        assert r.sign() >= 0 and (r - three).sign() < 0
        k = a - r
        # the cofactor is an exact integer multiple of the modulus
        q = k / three
        assert q.is_rational() and q.as_fraction().denominator == 1
    # irrational modulus too
    for m in range(1, 8):
        r = mod_reduce(field.from_rational(m), lam)
        assert r.sign() >= 0 and (r - lam).sign() < 0


def test_floor_and_float(field):
    lam = field.gen()
    assert lam.floor() == 2
    assert (-lam).floor() == -3
    assert (lam * lam).floor() == 5
    assert abs(float(lam) - 2.302775637731995) < 1e-12


def test_total_order_operators(field):
    lam = field.gen()
    xs = sorted([lam, field.from_rational(2), lam * lam, field.zero(), -lam])
    assert [round(float(x), 3) for x in xs] == [-2.303, 0.0, 2.0, 2.303, 5.303]


def test_rational_degree_one_field():
    f, root = NumberField.with_largest_real_root((-2, -1, 1))  # (x-2)(x+1)
    assert f.degree == 1
    assert root.is_rational() and root.as_fraction() == 2
    assert (root * root - root - 2).is_zero()
    assert mod_reduce(f.from_rational(7), f.from_rational(2)) == f.from_rational(1)


def test_field_mismatch_rejected(field):
    other, _ = NumberField.with_largest_real_root((-1, -1, 1))
    with pytest.raises(ValidationError):
        field.gen() + other.gen()


def test_poly_utilities():
    assert poly_str((-3, -1, 1)) == "x^2-x-3"
    assert poly_str((1,)) == "1"
    assert poly_str((0, 2)) == "2x"
    assert poly_str((-1, 0, 0, 1)) == "x^3-1"
    # (x-1)^2 (x+2) has squarefree part (x-1)(x+2)
    sf = squarefree_part((2, -3, 0, 1))
    assert sf == (-2, 1, 1) or sf == (2, -1, -1)
    facs = irreducible_factors((-2, -1, 1))
    assert [f for f, _ in facs] == [(-2, 1), (1, 1)]
    roots = isolate_real_roots((-3, -1, 1))
    assert len(roots) == 2 and roots[0][1] < roots[1][0]


def test_mod_reduce_rational_fallback():
    assert mod_reduce(7, 3) == 1
    assert mod_reduce(Fraction(-1, 2), 3) == Fraction(5, 2)
