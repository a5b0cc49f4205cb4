import itertools

import pytest

from nwbf.errors import DomainError, UsageError
from nwbf.finite_field import FieldSpec, digit_set, ff_add, ff_inv, ff_mul, is_irreducible

GF4 = FieldSpec(2, 2, (1, 1, 1))

# every field with q <= 16, with two moduli for GF(8) and GF(16)
FIELDS = [FieldSpec(2), FieldSpec(3), FieldSpec(5), FieldSpec(7), FieldSpec(11), FieldSpec(13),
          GF4, FieldSpec(3, 2, (1, 0, 1)), FieldSpec(3, 2, (2, 1, 1)),
          FieldSpec(2, 3, (1, 1, 0, 1)), FieldSpec(2, 3, (1, 0, 1, 1)),
          FieldSpec(2, 4, (1, 1, 0, 0, 1)), FieldSpec(2, 4, (1, 0, 0, 1, 1))]


def poly_mulmod(a, b, modulus, p):
    """Schoolbook product reduced by a monic modulus, independent of the tables."""
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    c = len(modulus) - 1
    for top in range(len(prod) - 1, c - 1, -1):
        coef = prod[top]
        if coef:
            for i, m in enumerate(modulus):
                prod[top - c + i] = (prod[top - c + i] - coef * m) % p
    return tuple((prod + [0] * c)[:c])


@pytest.mark.parametrize("spec", FIELDS, ids=lambda s: f"GF{s.p}^{s.c}-{s.modulus}")
def test_field_axioms_exhaustive(spec):
    els = digit_set(spec)
    zero, one = spec.zero(), spec.one()
    for a, b, c in itertools.product(els, repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
    for a in els:
        assert a + zero == a and a * one == a and a + (-a) == zero
        if a:
            assert a * ff_inv(a) == one


@pytest.mark.parametrize("spec", FIELDS, ids=lambda s: f"GF{s.p}^{s.c}-{s.modulus}")
def test_multiplication_matches_schoolbook(spec):
    for a, b in itertools.product(digit_set(spec), repeat=2):
        expect = poly_mulmod(a.coeffs, b.coeffs, spec.modulus, spec.p) if spec.c > 1 else \
            ((a.coeffs[0] * b.coeffs[0]) % spec.p,)
        assert ff_mul(a, b).coeffs == expect


def test_add_examples():
    F2, F3 = FieldSpec(2), FieldSpec(3)
    assert ff_add(F2.one(), F2.one()) == F2.zero()
    assert ff_add(F3.element(2), F3.element(2)) == F3.element(1)
    x, x1 = GF4.element((0, 1)), GF4.element((1, 1))
    assert ff_add(x, x1) == GF4.one()


def test_mul_examples():
    F3 = FieldSpec(3)
    for spec in FIELDS:
        for a in digit_set(spec):
            assert ff_mul(a, spec.one()) == a
    assert ff_mul(GF4.element((0, 1)), GF4.element((0, 1))).coeffs == (1, 1)
    assert ff_mul(F3.element(2), F3.element(2)) == F3.one()


def test_inverse_examples_against_search():
    F3 = FieldSpec(3)
    assert ff_inv(F3.one()) == F3.one()
    assert ff_inv(F3.element(2)) == F3.element(2)
    assert ff_inv(GF4.element((0, 1))).coeffs == (1, 1)
    for spec in FIELDS:
        for a in digit_set(spec)[1:]:
            found = [b for b in digit_set(spec) if a * b == spec.one()]
            assert found == [ff_inv(a)]


def test_inverse_of_zero_rejected():
    with pytest.raises(DomainError):
        ff_inv(GF4.zero())


def test_digit_set_order():
    assert [a.coeffs for a in digit_set(FieldSpec(2))] == [(0,), (1,)]
    assert [a.coeffs for a in digit_set(FieldSpec(3))] == [(0,), (1,), (2,)]
    assert [a.coeffs for a in digit_set(GF4)] == [(0, 0), (1, 0), (0, 1), (1, 1)]
    for spec in FIELDS:
        ds = digit_set(spec)
        assert ds[0] == spec.zero() and ds[1] == spec.one()
        assert [a.index for a in ds] == list(range(spec.q))


def test_irreducibility_brute_force():
    # a cubic or quadratic over GF(p) is irreducible iff it has no root
    for p in (2, 3):
        for coeffs in itertools.product(range(p), repeat=3):
            for deg in (2, 3):
                poly = (*coeffs[:deg], 1)
                no_root = all(sum(c * x ** i for i, c in enumerate(poly)) % p for x in range(p))
                assert is_irreducible(poly, p) == no_root


@pytest.mark.parametrize("args", [(4, 1, None), (2, 5, None), (2, 2, (1, 0, 1)), (2, 2, None), (2, 2, (1, 1, 0))])
def test_bad_specs_rejected(args):
    with pytest.raises((UsageError, DomainError)):
        FieldSpec(*args)


def test_mixed_fields_rejected():
    with pytest.raises(UsageError):
        FieldSpec(2).one() + FieldSpec(3).one()
