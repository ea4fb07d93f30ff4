from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from backend.core import LeibnizAlgebra, bracketings
from backend.errors import CertificationFailed, NotAnIdeal, NotClosed
from backend.exactfield import Field
from backend.linalg import Matrix
from backend.generators import abelian, cyclic_algebra, four_dim_example, sl2

F5 = Field.prime(5)
FOUR_DIM_F5 = four_dim_example(F5)

vectors_f5 = st.tuples(*[st.integers(min_value=0, max_value=4)] * 4)


def span_of(algebra, *names):
    return algebra.span(algebra.element(name) for name in names)


def test_four_dim_products(four_dim):
    a = four_dim
    u, n, k, n2 = (a.element(x) for x in ('u', 'n', 'k', 'n2'))
    assert a.multiply(u, n) == u
    assert a.multiply(n, u) == a.element("-1,0,1,0")
    assert a.multiply(u, n2) == k
    assert a.multiply(n, n) == n2
    assert a.multiply(n, k) == a.scale(-1, k)
    assert a.multiply(k, n) == a.zero_element()


def test_four_dim_is_leibniz_not_lie(four_dim):
    assert four_dim.verify_leibniz().passed
    assert not four_dim.is_lie()


def test_leibniz_failure_reports_triple(q):
    bad = LeibnizAlgebra(q, 1, {(0, 0): [1]})
    verdict = bad.verify_leibniz()
    assert not verdict.passed
    assert verdict.triple == (1, 1, 1)
    assert verdict.lhs == (1,)
    assert verdict.rhs == (2,)


def test_element_parsing(four_dim):
    assert four_dim.element("n") == four_dim.basis_vector(1)
    assert four_dim.element("1/2,0,0,-1") == (Fraction(1, 2), 0, 0, -1)
    with pytest.raises(ValueError):
        four_dim.element("1,2")


def test_format_and_describe(four_dim):
    assert four_dim.format_element(four_dim.element("1,0,-1,0")) == "u - k"
    assert four_dim.format_element(four_dim.element("0,2,0,1")) == "2*n + n2"
    assert four_dim.format_element(four_dim.zero_element()) == "0"
    assert four_dim.describe(span_of(four_dim, 'k', 'n2')) == "span{k, n2}"


def test_series_of_four_dim(four_dim):
    a = four_dim
    lower = a.lower_central_series()
    assert lower[1] == span_of(a, 'u', 'k', 'n2')
    assert lower[2] == span_of(a, 'u', 'k')
    assert len(lower) == 3
    assert not a.is_nilpotent()
    assert a.nilpotency_class() is None
    assert [s.dim for s in a.derived_series()] == [4, 3, 1, 0]
    assert a.is_soluble()


def test_cyclic_nilpotency_class(q):
    for k in range(1, 5):
        assert cyclic_algebra(k, q).nilpotency_class() == k


def test_zero_algebra(q):
    zero = LeibnizAlgebra(q, 0)
    assert zero.verify_leibniz().passed
    assert zero.nilpotency_class() == 0
    assert zero.is_soluble()


def test_sl2_is_not_soluble(q):
    a = sl2(q)
    assert a.is_lie()
    assert not a.is_soluble()
    assert a.product_space(a.whole(), a.whole()).is_whole()


def test_left_centre_and_lie_quotient(four_dim):
    verdict = four_dim.is_lie_quotient()
    assert verdict.left_centre == span_of(four_dim, 'k', 'n2')
    assert verdict.passed
    assert verdict.quotient.dim == 2
    assert verdict.quotient.labels == ('u', 'n')


def test_subalgebras(four_dim):
    a = four_dim
    assert a.subalgebra(span_of(a, 'u')).dim == 1
    with pytest.raises(NotClosed):
        a.subalgebra(span_of(a, 'n'))
    assert a.subalgebra_generated_by([a.element('n')]).space == span_of(a, 'n', 'n2')


def test_ideals_and_quotients(four_dim):
    a = four_dim
    assert a.is_ideal(span_of(a, 'k'))
    assert a.is_ideal(span_of(a, 'u', 'k', 'n2'))
    assert not a.is_ideal(span_of(a, 'n'))
    with pytest.raises(NotAnIdeal):
        a.quotient(span_of(a, 'n'))
    qmap = a.quotient(span_of(a, 'k'))
    assert qmap.algebra.dim == 3
    assert qmap.algebra.verify_leibniz().passed
    assert qmap.project(a.element('k')) == qmap.algebra.zero_element()
    assert qmap.preimage(qmap.algebra.zero_space()) == span_of(a, 'k')
    assert qmap.projection_matrix() @ qmap.section_matrix() == Matrix.identity(a.field, 3)


def test_every_quotient_by_a_series_term_is_leibniz(four_dim):
    a = four_dim
    for ideal in a.lower_central_series() + a.derived_series() + [a.left_centre()]:
        assert a.quotient(ideal).algebra.verify_leibniz().passed


def test_quotient_of_bad_table_is_not_certified(q):
    bad = LeibnizAlgebra(q, 1, {(0, 0): [1]})
    with pytest.raises(CertificationFailed):
        bad.quotient(bad.zero_space())


def test_normalizers_of_engel_subalgebra(four_dim):
    a = four_dim
    u = span_of(a, 'n', 'n2')
    norms = a.normalizers(u)
    assert norms.full == u
    assert norms.right == u


def test_restrict(four_dim):
    inner = four_dim.restrict(span_of(four_dim, 'n', 'n2'))
    assert inner.dim == 2
    assert inner.is_nilpotent()
    assert inner.nilpotency_class() == 2


def test_right_subnormal(four_dim):
    a = four_dim
    square = span_of(a, 'u', 'k', 'n2')
    assert a.is_right_subnormal(square).subnormal
    verdict = a.is_right_subnormal(span_of(a, 'n', 'n2'))
    assert not verdict.subnormal
    assert verdict.chain[-1].is_whole()


def test_bracketings_count(four_dim):
    n = four_dim.element('n')
    assert len(bracketings([n, n, n], four_dim)) == 2
    assert len(bracketings([n] * 4, four_dim)) == 5


def test_over_prime_field(four_dim, f5):
    assert four_dim.over(f5) == FOUR_DIM_F5


def test_maximal_subalgebras_of_two_dim_lie(lie2_f3):
    maximal = lie2_f3.maximal_subalgebras()
    assert len(maximal) == 4
    assert all(m.dim == 1 for m in maximal)


def test_maximal_subalgebras_of_cyclic(f3):
    a = cyclic_algebra(2, f3)
    assert a.maximal_subalgebras() == [a.span([a.element('a2')])]


def test_abelian_everything_closed(f3):
    a = abelian(2, f3)
    assert len(a.closed_subspaces()) == 6


@settings(max_examples=40, deadline=None)
@given(vectors_f5, vectors_f5, vectors_f5)
def test_leibniz_identity_on_elements(x, y, z):
    a = FOUR_DIM_F5
    x, y, z = a.element(list(x)), a.element(list(y)), a.element(list(z))
    lhs = a.multiply(x, a.multiply(y, z))
    rhs = a.add(a.multiply(a.multiply(x, y), z), a.multiply(y, a.multiply(x, z)))
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(vectors_f5, vectors_f5)
def test_left_multiplication_is_a_derivation_bracket(x, y):
    a = FOUR_DIM_F5
    lx, ly = a.left_mult(x), a.left_mult(y)
    assert a.left_mult(a.multiply(x, y)) == lx @ ly - ly @ lx


@settings(max_examples=40, deadline=None)
@given(vectors_f5)
def test_squares_lie_in_left_centre(x):
    a = FOUR_DIM_F5
    assert a.left_centre().contains(a.multiply(x, x))


def test_right_normalizer_need_not_be_closed(four_dim):
    a = four_dim
    right = a.normalizers(span_of(a, 'u')).right
    assert right.contains(a.element('n'))
    assert right == span_of(a, 'u', 'n', 'k')
    assert not right.contains(a.multiply(a.element('n'), a.element('n')))
    assert not a.is_closed(right)
