from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from backend.errors import DivisionByZero, MixedFields, ParseError
from backend.exactfield import Field, FieldScalar, enumerate_field

SMALL_PRIMES = (2, 3, 5, 7)


def test_prime_field_needs_a_prime():
    with pytest.raises(ValueError):
        Field.prime(4)
    with pytest.raises(ValueError):
        Field('Fp')


def test_inverses_exhaustive_small_fields():
    for p in SMALL_PRIMES:
        f = Field.prime(p)
        for a in range(1, p):
            assert f.mul(a, f.inv(a)) == 1


def test_zero_has_no_inverse(f5, q):
    with pytest.raises(DivisionByZero):
        f5.inv(0)
    with pytest.raises(ZeroDivisionError):
        q.inv(Fraction(0))


def test_parse_and_format_rationals(q):
    assert q.parse("2/4") == Fraction(1, 2)
    assert q.format(q.parse("-3/4")) == "-3/4"
    assert q.format(q.parse("6/3")) == "2"


def test_parse_reduces_mod_p(f5):
    assert f5.parse("-1") == 4
    assert f5.parse("1/2") == 3
    assert f5.format(f5.parse("7")) == "2"


@pytest.mark.parametrize("text", ["abc", "1/0", "", "1.5.2"])
def test_parse_rejects_bad_scalars(f5, text):
    with pytest.raises(ParseError):
        f5.parse(text)


def test_rational_enumeration_by_height(q):
    expected = [Fraction(x) for x in ("0", "1", "-1", "2", "-2", "1/2", "-1/2")]
    assert q.first_elements(7) == expected


def test_enumerate_prime_field(f3):
    assert [s.value for s in enumerate_field(f3)] == [0, 1, 2]


def test_scalar_arithmetic(f5):
    two = f5.scalar(2)
    assert two * 3 == f5.scalar(1)
    assert (two / 3) * 3 == two
    assert -two == f5.scalar(3)
    assert two ** -1 == f5.scalar(3)
    assert str(two + 4) == "1"


def test_scalar_equality_matches_hash(f3, f5):
    assert f5.scalar(2) != 2
    assert f5.scalar(7) == f5.scalar(2)
    assert f3.scalar(1) != f5.scalar(1)
    assert len({f5.scalar(2), f5.scalar(7), f3.scalar(2)}) == 2


def test_mixed_fields_rejected(f3, f5):
    with pytest.raises(MixedFields):
        f3.scalar(1) + f5.scalar(1)
    with pytest.raises(MixedFields):
        f5.coerce(FieldScalar(f3, 1))


@given(st.integers(), st.integers(), st.integers())
def test_distributivity_f7(a, b, c):
    f = Field.prime(7)
    a, b, c = f.coerce(a), f.coerce(b), f.coerce(c)
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


@given(st.fractions(), st.fractions().filter(lambda x: x != 0))
def test_rational_division_round_trip(a, b):
    q = Field.rationals()
    assert q.mul(q.div(a, b), b) == a


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_fermat_little_theorem(p):
    f = Field.prime(p)
    for a in range(p):
        assert f.scalar(a) ** p == f.scalar(a)


field_cases = st.sampled_from([Field.prime(p) for p in SMALL_PRIMES] + [Field.rationals()])


@given(field_cases, st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_field_axioms(f, a, b, c):
    a, b, c = f.coerce(a), f.coerce(b), f.coerce(c)
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
    assert f.mul(f.add(a, b), c) == f.add(f.mul(a, c), f.mul(b, c))
    if not f.is_zero(a):
        assert f.mul(a, f.inv(a)) == f.one
