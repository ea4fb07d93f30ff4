import pytest

from backend.errors import InfiniteField, NoComplementNeeded, NotAbelianIdeal, PreconditionViolated
from backend.exactfield import Field
from backend.generators import abelian, cyclic_algebra, four_dim_example, primitive_split_extension, sl2
from backend.representations import SMode
from backend.structure import StructureAnalyzer


def span_of(algebra, *names):
    return algebra.span(algebra.element(name) for name in names)


def test_minimal_ideal_of_four_dim(f3):
    a = four_dim_example(f3)
    analyzer = StructureAnalyzer(a)
    assert analyzer.minimal_ideals() == [span_of(a, 'k')]
    assert analyzer.socle() == span_of(a, 'k')


def test_ideal_closure(four_dim):
    analyzer = StructureAnalyzer(four_dim)
    assert analyzer.ideal_closure(four_dim.element('u')) == span_of(four_dim, 'u', 'k')
    assert analyzer.ideal_closure(four_dim.element('n')).is_whole()


def test_lattice_searches_need_prime_field(four_dim):
    analyzer = StructureAnalyzer(four_dim)
    with pytest.raises(InfiniteField):
        analyzer.minimal_ideals()
    with pytest.raises(InfiniteField):
        analyzer.frattini()
    with pytest.raises(InfiniteField):
        analyzer.is_primitive()


def test_frattini_of_nilpotent_is_square(cyclic3_f3):
    a = cyclic3_f3
    analyzer = StructureAnalyzer(a)
    assert analyzer.frattini() == span_of(a, 'a2', 'a3')
    assert all(nilpotent for _, nilpotent in analyzer.frattini_right_ideals())


def test_frattini_nilpotency_check(cyclic3_f3):
    a = cyclic3_f3
    analyzer = StructureAnalyzer(a)
    verdict = analyzer.frattini_nilpotency_check(a.whole(), span_of(a, 'a2', 'a3'))
    assert verdict.passed
    assert verdict.nilpotency_class == 3
    with pytest.raises(PreconditionViolated):
        analyzer.frattini_nilpotency_check(a.whole(), span_of(a, 'a'))


def test_frattini_inside_every_maximal(f3):
    a = four_dim_example(f3)
    analyzer = StructureAnalyzer(a)
    phi = analyzer.frattini()
    for m in analyzer.maximal_subalgebras():
        assert m.includes(phi)


def test_two_dim_lie_is_primitive(lie2_f3):
    analyzer = StructureAnalyzer(lie2_f3)
    cert = analyzer.is_primitive()
    assert cert is not None
    assert cert.is_lie
    assert cert.socle == span_of(lie2_f3, 'x')
    complements = analyzer.complements(cert.socle)
    assert len(complements) == 3
    verdict = analyzer.conjugacy_theorem_check()
    assert verdict.passed
    assert len(verdict.conjugators) == 3


def test_conjugating_element(lie2_f3):
    a = lie2_f3
    analyzer = StructureAnalyzer(a)
    socle = span_of(a, 'x')
    u, v = span_of(a, 'h'), a.span([a.element("1,1")])
    c = analyzer.conjugating_element(socle, u, v)
    assert c is not None
    assert socle.contains(c)


def test_conjugating_element_needs_abelian_ideal(f3):
    a = four_dim_example(f3)
    analyzer = StructureAnalyzer(a)
    with pytest.raises(NotAbelianIdeal):
        analyzer.conjugating_element(a.whole(), span_of(a, 'n'), span_of(a, 'n'))


def test_non_lie_primitive_has_unique_complement(hm_f3):
    analyzer = StructureAnalyzer(hm_f3)
    cert = analyzer.is_primitive()
    assert cert is not None
    assert not cert.is_lie
    assert cert.socle == hm_f3.left_centre()
    assert analyzer.complements(cert.socle) == [span_of(hm_f3, 'h')]
    assert analyzer.primitive_complement(cert) == span_of(hm_f3, 'h')
    assert analyzer.conjugacy_theorem_check().passed


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("mode", list(SMode))
def test_irreducible_plane_actions_are_primitive(p, mode):
    a = primitive_split_extension(Field.prime(p), 2, mode)
    analyzer = StructureAnalyzer(a)
    cert = analyzer.is_primitive()
    assert cert is not None
    assert cert.socle.dim == 2
    m = analyzer.primitive_complement(cert)
    assert (m + cert.socle).is_whole()
    assert m in analyzer.complements(cert.socle)
    assert analyzer.conjugacy_theorem_check().passed


def test_not_primitive(f3, f5):
    assert StructureAnalyzer(abelian(2, f3)).is_primitive() is None
    assert StructureAnalyzer(sl2(f5)).is_primitive() is None
    assert StructureAnalyzer(cyclic_algebra(2, f3)).is_primitive() is None


def test_socle_equal_to_algebra_needs_no_complement(f3):
    a = abelian(1, f3)
    analyzer = StructureAnalyzer(a)
    cert = analyzer.is_primitive()
    assert cert is not None
    with pytest.raises(NoComplementNeeded):
        analyzer.primitive_complement(cert)
