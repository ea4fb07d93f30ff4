"""Engel subalgebras, Fitting decompositions and Cartan subalgebras."""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from backend.core import LeibnizAlgebra, SpaceLike, Subalgebra, _space
from backend.errors import (
    CertificationFailed,
    FieldTooSmall,
    PreconditionViolated,
    TheoremViolated,
)
from backend.linalg import (
    Matrix,
    Subspace,
    Vector,
    element_stream,
    enumerate_vectors,
    fitting_image,
    generalized_nullspace,
    solve,
)

logger = logging.getLogger('EngelSubalgebras')


@dataclass(frozen=True)
class EngelSubalgebra:
    base_element: Vector
    space: Subspace
    fitting_image: Subspace

    @property
    def dim(self) -> int:
        return self.space.dim


@dataclass(frozen=True)
class CartanCertificate:
    subalgebra: Subalgebra
    nilpotency_class: int
    normalizer_equal: bool
    witness_element: Optional[Vector] = None

    @property
    def space(self) -> Subspace:
        return self.subalgebra.space


@dataclass(frozen=True)
class CartanVerdict:
    passed: bool
    nilpotent: bool
    normalizer: Optional[Subspace]
    certificate: Optional[CartanCertificate] = None


@dataclass(frozen=True)
class NormalizingVerdict:
    passed: bool
    right_normalizer: Subspace
    counterexample: Optional[Vector] = None


@dataclass(frozen=True)
class IntravarianceVerdict:
    passed: bool
    cartan: Subspace
    normalizer: Subspace
    total: Subspace


def engel_subalgebra(algebra: LeibnizAlgebra, a: Sequence) -> EngelSubalgebra:
    """E_A(a), the generalized nullspace of L_a, with its Fitting complement.

    a need not lie in E_A(a).
    """
    a = algebra.element(list(a))
    la = algebra.left_mult(a)
    space = generalized_nullspace(la)
    image = fitting_image(la)
    if not algebra.is_closed(space):
        raise TheoremViolated(f"E_A({algebra.format_element(a)}) is not closed")
    if space.dim + image.dim != algebra.dim or not (space & image).is_zero():
        raise TheoremViolated(f"Fitting decomposition fails for {algebra.format_element(a)}")
    return EngelSubalgebra(a, space, image)


def _operator_on(algebra: LeibnizAlgebra, op: Matrix, space: Subspace) -> Matrix:
    """Matrix of an operator leaving `space` invariant, in the RREF basis of `space`."""
    columns = [space.coordinates(op.apply(v)) for v in space.basis]
    return Matrix.from_columns(algebra.field, columns, space.dim)


def engel_representative(algebra: LeibnizAlgebra, a: Sequence) -> Vector:
    """An a' in E_A(a) with L_a' = L_a.

    Inside U, the subalgebra generated by a, L_a splits U into its null part
    and L_a^n(U); a' is the null component of a. The other component lies in
    the span of the powers a^k, k >= 2, which act as zero from the left.
    """
    f = algebra.field
    a = algebra.element(list(a))
    engel = engel_subalgebra(algebra, a)
    if engel.space.contains(a):
        return a
    u = algebra.subalgebra_generated_by([a]).space
    la = algebra.left_mult(a)
    on_u = _operator_on(algebra, la, u)
    null_part = generalized_nullspace(on_u)
    image_part = fitting_image(on_u)
    columns = list(null_part.basis) + list(image_part.basis)
    coeffs = solve(Matrix.from_columns(f, columns, u.dim), u.coordinates(a))
    if coeffs is None:
        raise TheoremViolated("Fitting decomposition of the subalgebra generated by a is not a direct sum")
    null_coords = [f.zero] * u.dim
    for c, v in zip(coeffs[:null_part.dim], null_part.basis):
        null_coords = [f.add(x, f.mul(c, y)) for x, y in zip(null_coords, v)]
    rep = u.from_coordinates(null_coords)

    if algebra.left_mult(rep) != la:
        raise TheoremViolated(f"L_a' differs from L_a for a = {algebra.format_element(a)}")
    if not engel.space.contains(rep):
        raise TheoremViolated(f"representative of {algebra.format_element(a)} lies outside E_A(a)")
    if engel_subalgebra(algebra, rep).space != engel.space:
        raise TheoremViolated(f"E_A(a') differs from E_A(a) for a = {algebra.format_element(a)}")
    return rep


def check_right_self_normalizing(algebra: LeibnizAlgebra, u: SpaceLike, a: Sequence) -> NormalizingVerdict:
    space = _space(u)
    engel = engel_subalgebra(algebra, a)
    if not space.includes(engel.space):
        raise PreconditionViolated(f"{algebra.describe(space)} does not contain E_A({algebra.format_element(engel.base_element)})")
    right = algebra.normalizers(space).right
    if right == space:
        return NormalizingVerdict(True, right)
    witness = next(v for v in right.basis if not space.contains(v))
    logger.error(f"{algebra.describe(space)} is not its own right normalizer: {algebra.format_element(witness)}")
    return NormalizingVerdict(False, right, witness)


def is_cartan(algebra: LeibnizAlgebra, u: SpaceLike) -> CartanVerdict:
    """Nilpotent and equal to its own normalizer."""
    space = _space(u)
    if not algebra.is_closed(space):
        return CartanVerdict(False, False, None)
    restricted = algebra.restrict(space)
    nilpotent = restricted.is_nilpotent()
    normalizer = algebra.normalizers(space).full
    if not (nilpotent and normalizer == space):
        return CartanVerdict(False, nilpotent, normalizer)
    certificate = CartanCertificate(Subalgebra(space), restricted.nilpotency_class(), True)
    return CartanVerdict(True, nilpotent, normalizer, certificate)


def cartan_certificate(algebra: LeibnizAlgebra, u: SpaceLike, witness: Optional[Sequence] = None) -> CartanCertificate:
    verdict = is_cartan(algebra, u)
    if not verdict.passed:
        raise CertificationFailed(f"{algebra.describe(u)} is not a Cartan subalgebra")
    cert = verdict.certificate
    return CartanCertificate(cert.subalgebra, cert.nilpotency_class, True,
                             tuple(witness) if witness is not None else None)


def _non_nilpotent_direction(algebra: LeibnizAlgebra, space: Subspace) -> Vector:
    """Some x in the subalgebra whose left multiplication is not nilpotent there."""
    for v in space.basis:
        if not _operator_on(algebra, algebra.left_mult(v), space).is_nilpotent():
            return v
    for coords in element_stream(algebra.field, space.dim):
        v = space.from_coordinates(coords)
        if not _operator_on(algebra, algebra.left_mult(v), space).is_nilpotent():
            return v
    raise TheoremViolated(f"{algebra.describe(space)} is not nilpotent but every left multiplication is")


def minimal_engel_search(algebra: LeibnizAlgebra) -> EngelSubalgebra:
    """Descend through Engel subalgebras until one is nilpotent.

    Starts from the basis vector with the smallest Engel subalgebra. While
    E = E_A(a) is not nilpotent, pick x in E with L_x not nilpotent on E and
    move a to a + t x for the first of dim(A) + 1 field values t that shrinks
    E_A. A nilpotent Engel subalgebra is minimal and Cartan.
    """
    f = algebra.field
    n = algebra.dim
    if not f.has_at_least(n + 1):
        raise FieldTooSmall(f"{f} has fewer than {n + 1} elements")
    candidates = [engel_subalgebra(algebra, algebra.basis_vector(i)) for i in range(n)]
    current = min(candidates, key=lambda e: e.dim) if candidates else engel_subalgebra(algebra, ())
    scalars = f.first_elements(n + 1)
    steps = 0
    while True:
        a = engel_representative(algebra, current.base_element)
        if algebra.restrict(current.space).is_nilpotent():
            break
        x = _non_nilpotent_direction(algebra, current.space)
        for t in scalars:
            candidate = engel_subalgebra(algebra, algebra.add(a, algebra.scale(t, x)))
            if candidate.dim < current.dim:
                current = candidate
                steps += 1
                break
        else:
            raise TheoremViolated(f"no t among {n + 1} field values shrinks {algebra.describe(current.space)}")
    logger.info(f"Minimal Engel subalgebra of dim {current.dim} after {steps} descent steps")
    verdict = is_cartan(algebra, current.space)
    if not verdict.passed:
        raise CertificationFailed(f"minimal Engel subalgebra {algebra.describe(current.space)} is not Cartan")
    return current


def cartan_subalgebra(algebra: LeibnizAlgebra) -> CartanCertificate:
    engel = minimal_engel_search(algebra)
    return cartan_certificate(algebra, engel.space, engel.base_element)


def cartan_in_quotient(algebra: LeibnizAlgebra, k: SpaceLike, c: CartanCertificate) -> CartanCertificate:
    if not is_cartan(algebra, c.space).passed:
        raise PreconditionViolated(f"{algebra.describe(c.space)} is not a Cartan subalgebra")
    qmap = algebra.quotient(k)
    image = qmap.project_subspace(c.space)
    witness = qmap.project(c.witness_element) if c.witness_element is not None else None
    verdict = is_cartan(qmap.algebra, image)
    if not verdict.passed:
        raise TheoremViolated(f"image of {algebra.describe(c.space)} is not Cartan in the quotient")
    return CartanCertificate(verdict.certificate.subalgebra, verdict.certificate.nilpotency_class, True, witness)


def intravariance_check(algebra: LeibnizAlgebra, n_ideal: SpaceLike, c: CartanCertificate) -> IntravarianceVerdict:
    """N + N_A(C) = A for an ideal N and a Cartan subalgebra C of N.

    c is given in the coordinates of N as an algebra in its own right.
    """
    ideal = _space(n_ideal)
    if not algebra.is_ideal(ideal):
        raise PreconditionViolated(f"{algebra.describe(ideal)} is not a 2-sided ideal")
    inner = algebra.restrict(ideal)
    if c.space.ambient_dim != inner.dim or not is_cartan(inner, c.space).passed:
        raise PreconditionViolated("certificate is not a Cartan subalgebra of the ideal")
    cartan = algebra.span(ideal.from_coordinates(v) for v in c.space.basis)
    normalizer = algebra.normalizers(cartan).full
    total = ideal + normalizer
    return IntravarianceVerdict(total.is_whole(), cartan, normalizer, total)


def engel_subalgebras_census(algebra: LeibnizAlgebra, budget: int = 10**6) -> List[Tuple[Subspace, Vector]]:
    """Every distinct E_A(a) over a prime field, with the first a producing it."""
    found: Dict[Subspace, Vector] = {}
    for a in enumerate_vectors(algebra.field, algebra.dim, budget):
        space = generalized_nullspace(algebra.left_mult(a))
        if space not in found:
            found[space] = a
    logger.info(f"{len(found)} distinct Engel subalgebras over {algebra.field}")
    return list(found.items())


def minimal_engel_subalgebras(algebra: LeibnizAlgebra, budget: int = 10**6) -> List[Tuple[Subspace, Vector]]:
    census = engel_subalgebras_census(algebra, budget)
    return [(space, a) for space, a in census
            if not any(other != space and space.includes(other) for other, _ in census)]
