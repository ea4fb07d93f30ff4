"""Ideal lattice over prime fields: minimal ideals, socle, Frattini subalgebra and primitive algebras."""
import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from backend.core import LeibnizAlgebra, SpaceLike, _space
from backend.engel import engel_subalgebra
from backend.errors import (
    InfiniteField,
    NoComplementNeeded,
    NotAbelianIdeal,
    PreconditionViolated,
    TheoremViolated,
)
from backend.linalg import Matrix, Subspace, Vector, enumerate_subspaces, projective_points, solve, subspaces_within

logger = logging.getLogger('StructureAnalyzer')


@dataclass(frozen=True)
class PrimitiveCertificate:
    socle: Subspace
    complement: Optional[Subspace]
    is_lie: bool


@dataclass(frozen=True)
class FrattiniVerdict:
    passed: bool
    frattini: Subspace
    nilpotency_class: Optional[int]


@dataclass
class ConjugacyVerdict:
    passed: bool
    socle: Subspace
    complements: List[Subspace]
    conjugators: Dict[Tuple[int, int], Vector] = dc_field(default_factory=dict)
    reason: str = ''


class StructureAnalyzer:
    """Ideal lattice, Frattini subalgebra and primitivity of one algebra.

    Everything that searches the subspace lattice needs a prime field and
    stays within `budget` candidates.
    """

    def __init__(self, algebra: LeibnizAlgebra, budget: int = 10**6):
        self.algebra = algebra
        self.budget = budget
        self._maximal = None
        self._minimal_ideals = None

    def _require_prime_field(self, what: str) -> None:
        if not self.algebra.field.is_finite:
            raise InfiniteField(f"{what} needs a prime field, got {self.algebra.field}")

    def ideal_closure(self, v) -> Subspace:
        """Smallest 2-sided ideal containing an element or a subspace."""
        a = self.algebra
        space = v if isinstance(v, Subspace) else a.span([v])
        basis = [a.basis_vector(i) for i in range(a.dim)]
        while True:
            grown = space.span_with(
                [a.multiply(e, x) for e in basis for x in space.basis]
                + [a.multiply(x, e) for e in basis for x in space.basis])
            if grown == space:
                return space
            space = grown

    def minimal_ideals(self) -> List[Subspace]:
        if self._minimal_ideals is not None:
            return self._minimal_ideals
        self._require_prime_field("minimal ideals")
        closures = []
        for point in projective_points(self.algebra.whole(), self.budget):
            ideal = self.ideal_closure(point)
            if ideal not in closures:
                closures.append(ideal)
        minimal = [i for i in closures if not any(j != i and i.includes(j) for j in closures)]
        for ideal in minimal:
            for point in projective_points(ideal, self.budget):
                if self.ideal_closure(point) != ideal:
                    raise TheoremViolated(f"{self.algebra.describe(ideal)} contains a smaller nonzero ideal")
        logger.info(f"{len(minimal)} minimal ideals among {len(closures)} principal ideals")
        self._minimal_ideals = minimal
        return minimal

    def socle(self) -> Subspace:
        result = self.algebra.zero_space()
        for ideal in self.minimal_ideals():
            result = result + ideal
        return result

    def maximal_subalgebras(self) -> List[Subspace]:
        if self._maximal is None:
            self._require_prime_field("maximal subalgebras")
            self._maximal = self.algebra.maximal_subalgebras(self.budget)
        return self._maximal

    def frattini(self) -> Subspace:
        """Intersection of the maximal subalgebras (0 for the zero algebra)."""
        maximal = self.maximal_subalgebras()
        if not maximal:
            return self.algebra.zero_space()
        result = maximal[0]
        for m in maximal[1:]:
            result = result & m
        return result

    def frattini_right_ideals(self) -> List[Tuple[Subspace, bool]]:
        """Right ideals of A inside the Frattini subalgebra, each with its nilpotency."""
        a = self.algebra
        out = []
        for space in subspaces_within(self.frattini(), budget=self.budget):
            if a.is_right_ideal(space):
                out.append((space, a.restrict(space).is_nilpotent()))
        return out

    def frattini_nilpotency_check(self, u: SpaceLike, v: SpaceLike) -> FrattiniVerdict:
        """U right subnormal, V an ideal of U inside the Frattini subalgebra and
        U/V nilpotent: then U itself is nilpotent."""
        a = self.algebra
        u_space, v_space = _space(u), _space(v)
        if not a.is_closed(u_space):
            raise PreconditionViolated(f"{a.describe(u_space)} is not a subalgebra")
        if not a.is_right_subnormal(u_space).subnormal:
            raise PreconditionViolated(f"{a.describe(u_space)} is not right subnormal")
        phi = self.frattini()
        if not phi.includes(v_space):
            raise PreconditionViolated(f"{a.describe(v_space)} is not inside the Frattini subalgebra")
        if not u_space.includes(v_space):
            raise PreconditionViolated(f"{a.describe(v_space)} is not inside {a.describe(u_space)}")
        for x in u_space.basis:
            for y in v_space.basis:
                if not (v_space.contains(a.multiply(x, y)) and v_space.contains(a.multiply(y, x))):
                    raise PreconditionViolated(f"{a.describe(v_space)} is not an ideal of {a.describe(u_space)}")
        inner = a.restrict(u_space)
        inner_v = inner.span(u_space.coordinates(y) for y in v_space.basis)
        if not inner.quotient(inner_v).algebra.is_nilpotent():
            raise PreconditionViolated("U/V is not nilpotent")
        cls = inner.nilpotency_class()
        if cls is None:
            logger.error(f"{a.describe(u_space)} satisfies every hypothesis but is not nilpotent")
        return FrattiniVerdict(cls is not None, phi, cls)

    def is_primitive(self) -> Optional[PrimitiveCertificate]:
        """Soluble with a minimal ideal C such that the centralizer of C is C."""
        self._require_prime_field("primitivity")
        a = self.algebra
        if a.dim == 0 or not a.is_soluble():
            return None
        minimal = self.minimal_ideals()
        socle = next((c for c in minimal if a.centralizer(c) == c), None)
        if socle is None:
            return None
        if len(minimal) != 1:
            raise TheoremViolated(f"primitive algebra has {len(minimal)} minimal ideals")
        lie = a.is_lie()
        if not lie and socle != a.left_centre():
            raise TheoremViolated("socle of a non-Lie primitive algebra differs from the left centre")
        return PrimitiveCertificate(socle, None, lie)

    def primitive_complement(self, certificate: Optional[PrimitiveCertificate] = None) -> Subspace:
        """A complement M to the socle C, taken as E_P(b) for some b in a
        minimal ideal B/C of P/C with L_b(C) != 0."""
        a = self.algebra
        try:
            certificate = certificate or self.is_primitive()
            if certificate is None:
                raise PreconditionViolated("algebra is not primitive")
            if not a.is_soluble():
                raise PreconditionViolated("algebra is not soluble")
            c = certificate.socle
            if c.is_whole():
                raise NoComplementNeeded("the socle is the whole algebra")

            qmap = a.quotient(c)
            b_bar = StructureAnalyzer(qmap.algebra, self.budget).minimal_ideals()[0]
            b_space = qmap.preimage(b_bar)
            b = None
            for point in projective_points(b_space, self.budget):
                if any(any(not a.field.is_zero(x) for x in a.multiply(point, y)) for y in c.basis):
                    b = point
                    break
            if b is None:
                raise TheoremViolated("no b in B acts nontrivially on the socle")

            m = engel_subalgebra(a, b).space
            if not (m + c).is_whole() or not (m & c).is_zero() or not a.is_closed(m):
                raise TheoremViolated(f"E_P({a.format_element(b)}) is not a complement to the socle")
            logger.info(f"Complement {a.describe(m)} from b = {a.format_element(b)}")
            return m
        except NoComplementNeeded:
            raise
        except Exception as e:
            logger.error(f"Error building primitive complement: {str(e)}")
            raise

    def complements(self, c: Subspace) -> List[Subspace]:
        """All subalgebras M with M + C = A and M meeting C in 0."""
        self._require_prime_field("complement census")
        a = self.algebra
        target = a.dim - c.dim
        found = []
        for m in enumerate_subspaces(a.dim, a.field, target, self.budget):
            if not (m + c).is_whole():
                continue
            if a.is_closed(m):
                found.append(m)
        return found

    def conjugating_element(self, c_ideal: Subspace, u: SpaceLike, v: SpaceLike) -> Optional[Vector]:
        """A c in C with (1 + L_c)(U) = V, or None."""
        a = self.algebra
        f = a.field
        u_space, v_space = _space(u), _space(v)
        if not a.is_ideal(c_ideal) or not a.product_space(c_ideal, c_ideal).is_zero():
            raise NotAbelianIdeal(f"{a.describe(c_ideal)} is not an abelian ideal")
        if u_space.dim != v_space.dim:
            raise PreconditionViolated("subalgebras of different dimensions cannot be conjugate")
        q = v_space.annihilator()
        blocks = []
        rhs = []
        for x in u_space.basis:
            columns = [q.apply(a.multiply(ck, x)) for ck in c_ideal.basis]
            blocks.append(Matrix.from_columns(f, columns, q.rows))
            rhs.extend(f.neg(t) for t in q.apply(x))
        system = Matrix.stack(f, blocks, c_ideal.dim)
        gamma = solve(system, rhs)
        if gamma is None:
            return None
        c = c_ideal.from_coordinates(gamma)

        alpha = Matrix.identity(f, a.dim) + a.left_mult(c)
        if u_space.image_under(alpha) != v_space:
            raise TheoremViolated("solved conjugator does not map U onto V")
        basis = [a.basis_vector(i) for i in range(a.dim)]
        for x in basis:
            for y in basis:
                if alpha.apply(a.multiply(x, y)) != a.multiply(alpha.apply(x), alpha.apply(y)):
                    raise TheoremViolated(f"1 + L_c is not multiplicative for c = {a.format_element(c)}")
        return c

    def conjugacy_theorem_check(self) -> ConjugacyVerdict:
        """Split over the socle, with every complement conjugate to every other."""
        certificate = self.is_primitive()
        if certificate is None:
            raise PreconditionViolated("algebra is not primitive")
        c = certificate.socle
        found = self.complements(c)
        verdict = ConjugacyVerdict(True, c, found)
        if not found:
            verdict.passed = False
            verdict.reason = "no complement to the socle"
            return verdict
        if not certificate.is_lie and len(found) != 1:
            verdict.passed = False
            verdict.reason = f"non-Lie primitive algebra has {len(found)} complements"
            return verdict
        for i, m in enumerate(found):
            for j in range(i + 1, len(found)):
                conj = self.conjugating_element(c, m, found[j])
                if conj is None:
                    verdict.passed = False
                    verdict.reason = f"complements {i} and {j} are not conjugate"
                    return verdict
                verdict.conjugators[(i, j)] = conj
        logger.info(f"{len(found)} complements, all conjugate")
        return verdict
