"""Leibniz algebras presented by structure constants.

e_i * e_j = sum_k c[i][j][k] e_k, left Leibniz identity a(bc) = (ab)c + b(ac).
Elements are coordinate tuples in the presentation basis.
"""
import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from backend.errors import CertificationFailed, NotAnIdeal, NotClosed, TheoremViolated
from backend.exactfield import Field
from backend.linalg import (
    Matrix,
    Subspace,
    Vector,
    enumerate_subspaces,
    kernel,
    unit_vector,
    zero_vector,
)

logger = logging.getLogger('LeibnizCore')


@dataclass(frozen=True)
class LeibnizVerdict:
    passed: bool
    triple: Optional[Tuple[int, int, int]] = None  # 1-based basis indices
    lhs: Optional[Vector] = None
    rhs: Optional[Vector] = None


@dataclass(frozen=True)
class Subalgebra:
    space: Subspace
    closure_certificate: bool = True

    @property
    def dim(self) -> int:
        return self.space.dim


@dataclass(frozen=True)
class Normalizers:
    left: Subspace
    right: Subspace
    full: Subspace


@dataclass(frozen=True)
class LieQuotientVerdict:
    passed: bool
    left_centre: Subspace
    quotient: 'LeibnizAlgebra'


@dataclass(frozen=True)
class SubnormalVerdict:
    subnormal: bool
    chain: Tuple[Subspace, ...]


SpaceLike = Union[Subspace, Subalgebra]


def _space(u: SpaceLike) -> Subspace:
    return u.space if isinstance(u, Subalgebra) else u


class LeibnizAlgebra:
    def __init__(self, field: Field, dim: int, products: Optional[Dict[Tuple[int, int], Sequence]] = None,
                 labels: Optional[Sequence[str]] = None):
        """products maps 0-based (i, j) to the coordinates of e_i * e_j; missing pairs are zero."""
        self.field = field
        self.dim = dim
        if labels is not None and len(labels) != dim:
            raise ValueError(f"expected {dim} labels, got {len(labels)}")
        self.labels = tuple(labels) if labels is not None else None
        zero = zero_vector(field, dim)
        self._table = [[zero] * dim for _ in range(dim)]
        for (i, j), out in (products or {}).items():
            if len(out) != dim:
                raise ValueError(f"product e{i + 1}e{j + 1} has {len(out)} coordinates, expected {dim}")
            self._table[i][j] = tuple(field.coerce(x) for x in out)
        self._left_basis = None
        self._right_basis = None

    @classmethod
    def from_tensor(cls, field: Field, tensor: Sequence[Sequence[Sequence]], labels=None) -> 'LeibnizAlgebra':
        dim = len(tensor)
        products = {(i, j): tensor[i][j] for i in range(dim) for j in range(dim)}
        return cls(field, dim, products, labels)

    def __repr__(self):
        return f"LeibnizAlgebra(dim={self.dim}, field={self.field})"

    def __eq__(self, other):
        return (isinstance(other, LeibnizAlgebra) and self.field == other.field and self.dim == other.dim
                and self._table == other._table and self.labels == other.labels)

    def over(self, field: Field) -> 'LeibnizAlgebra':
        """The same table read in another field (integer constants reduce mod p)."""
        return LeibnizAlgebra(field, self.dim, dict(self.nonzero_products()), self.labels)

    # Elements

    def structure_constant(self, i: int, j: int, k: int):
        return self._table[i][j][k]

    def basis_product(self, i: int, j: int) -> Vector:
        return self._table[i][j]

    def nonzero_products(self) -> List[Tuple[Tuple[int, int], Vector]]:
        f = self.field
        return [((i, j), self._table[i][j]) for i in range(self.dim) for j in range(self.dim)
                if not all(f.is_zero(x) for x in self._table[i][j])]

    def basis_vector(self, i: int) -> Vector:
        return unit_vector(self.field, self.dim, i)

    def zero_element(self) -> Vector:
        return zero_vector(self.field, self.dim)

    def element(self, coords: Union[str, Sequence]) -> Vector:
        """Coordinates from scalars, scalar strings, a comma-separated string or a label."""
        if isinstance(coords, str):
            text = coords.strip()
            if self.labels and text in self.labels:
                return self.basis_vector(self.labels.index(text))
            coords = [c for c in text.split(',')] if text else []
        if len(coords) != self.dim:
            raise ValueError(f"element needs {self.dim} coordinates, got {len(coords)}")
        return tuple(self.field.coerce(c) for c in coords)

    def add(self, x: Sequence, y: Sequence) -> Vector:
        f = self.field
        return tuple(f.add(a, b) for a, b in zip(x, y))

    def scale(self, c, x: Sequence) -> Vector:
        f = self.field
        return tuple(f.mul(c, a) for a in x)

    def multiply(self, x: Sequence, y: Sequence) -> Vector:
        f = self.field
        out = [f.zero] * self.dim
        for i, a in enumerate(x):
            if f.is_zero(a):
                continue
            row = self._table[i]
            for j, b in enumerate(y):
                if f.is_zero(b):
                    continue
                ab = f.mul(a, b)
                for k, c in enumerate(row[j]):
                    if not f.is_zero(c):
                        out[k] = f.add(out[k], f.mul(ab, c))
        return tuple(out)

    def format_element(self, v: Sequence) -> str:
        f = self.field
        if self.labels is None:
            return '(' + ', '.join(f.format(x) for x in v) + ')'
        terms = []
        for x, name in zip(v, self.labels):
            if f.is_zero(x):
                continue
            text = f.format(x)
            if text == '1':
                term = name
            elif text == '-1':
                term = '-' + name
            else:
                term = f"{text}*{name}"
            terms.append(term)
        if not terms:
            return '0'
        out = terms[0]
        for term in terms[1:]:
            out += f" - {term[1:]}" if term.startswith('-') else f" + {term}"
        return out

    def describe(self, u: SpaceLike) -> str:
        space = _space(u)
        return 'span{' + ', '.join(self.format_element(v) for v in space.basis) + '}'

    # The identity

    def verify_leibniz(self) -> LeibnizVerdict:
        f = self.field
        n = self.dim
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    lhs = self.multiply(self.basis_vector(i), self._table[j][k])
                    rhs = self.add(self.multiply(self._table[i][j], self.basis_vector(k)),
                                   self.multiply(self.basis_vector(j), self._table[i][k]))
                    if lhs != rhs:
                        logger.info(f"Leibniz identity fails at e{i + 1}, e{j + 1}, e{k + 1}")
                        return LeibnizVerdict(False, (i + 1, j + 1, k + 1), lhs, rhs)
        return LeibnizVerdict(True)

    def is_lie(self) -> bool:
        """x * x = 0 for all x."""
        f = self.field
        for i in range(self.dim):
            if not all(f.is_zero(x) for x in self._table[i][i]):
                return False
            for j in range(i + 1, self.dim):
                if self.add(self._table[i][j], self._table[j][i]) != self.zero_element():
                    return False
        return True

    # Multiplication operators

    def _basis_operators(self):
        if self._left_basis is None:
            n = self.dim
            self._left_basis = [Matrix.from_columns(self.field, [self._table[i][j] for j in range(n)], n)
                                for i in range(n)]
            self._right_basis = [Matrix.from_columns(self.field, [self._table[i][j] for i in range(n)], n)
                                 for j in range(n)]
        return self._left_basis, self._right_basis

    def _combine(self, a: Sequence, operators: List[Matrix]) -> Matrix:
        f = self.field
        result = Matrix.zeros(f, self.dim, self.dim)
        for c, op in zip(a, operators):
            if not f.is_zero(c):
                result = result + op.scale(c)
        return result

    def left_mult(self, a: Sequence) -> Matrix:
        """Matrix of L_a: x -> a x."""
        return self._combine(a, self._basis_operators()[0])

    def right_mult(self, a: Sequence) -> Matrix:
        """Matrix of R_a: x -> x a."""
        return self._combine(a, self._basis_operators()[1])

    def power_element(self, a: Sequence, k: int) -> Vector:
        if k < 1:
            raise ValueError("powers start at 1")
        result = tuple(a)
        for _ in range(k - 1):
            result = self.multiply(a, result)
        return result

    # Subspaces

    def whole(self) -> Subspace:
        return Subspace.whole(self.field, self.dim)

    def zero_space(self) -> Subspace:
        return Subspace.zero(self.field, self.dim)

    def span(self, vectors: Iterable[Sequence]) -> Subspace:
        return Subspace(self.field, self.dim, [tuple(self.field.coerce(x) for x in v) for v in vectors])

    def product_space(self, u: SpaceLike, v: SpaceLike) -> Subspace:
        u, v = _space(u), _space(v)
        u._check(v)
        return self.span(self.multiply(x, y) for x in u.basis for y in v.basis)

    def lower_central_series(self) -> List[Subspace]:
        """A = A^1, A^2, ... up to the first repeated term."""
        whole = self.whole()
        series = [whole]
        while True:
            nxt = self.product_space(whole, series[-1])
            if nxt == series[-1]:
                return series
            series.append(nxt)

    def derived_series(self) -> List[Subspace]:
        series = [self.whole()]
        while True:
            nxt = self.product_space(series[-1], series[-1])
            if nxt == series[-1]:
                return series
            series.append(nxt)

    def is_nilpotent(self) -> bool:
        return self.lower_central_series()[-1].is_zero()

    def is_soluble(self) -> bool:
        return self.derived_series()[-1].is_zero()

    def nilpotency_class(self) -> Optional[int]:
        series = self.lower_central_series()
        if not series[-1].is_zero():
            return None
        return len(series) - 1

    def left_centre(self) -> Subspace:
        """{z : z a = 0 for all a}."""
        _, right = self._basis_operators()
        if not right:
            return self.zero_space()
        result = kernel(Matrix.stack(self.field, right, self.dim))
        if not self.is_ideal(result):
            raise TheoremViolated(f"left centre {result} is not a 2-sided ideal")
        return result

    def is_lie_quotient(self) -> LieQuotientVerdict:
        centre = self.left_centre()
        q = self.quotient(centre).algebra
        return LieQuotientVerdict(q.is_lie(), centre, q)

    def is_closed(self, u: SpaceLike) -> bool:
        space = _space(u)
        return all(space.contains(self.multiply(x, y)) for x in space.basis for y in space.basis)

    def subalgebra(self, u: SpaceLike) -> Subalgebra:
        if isinstance(u, Subalgebra):
            return u
        if not self.is_closed(u):
            raise NotClosed(f"{self.describe(u)} is not closed under multiplication")
        return Subalgebra(u)

    def subalgebra_generated_by(self, vectors: Iterable[Sequence]) -> Subalgebra:
        space = self.span(vectors)
        while True:
            grown = space.span_with(self.multiply(x, y) for x in space.basis for y in space.basis)
            if grown == space:
                return Subalgebra(space)
            space = grown

    def is_left_ideal(self, u: SpaceLike) -> bool:
        space = _space(u)
        return all(space.contains(self.multiply(self.basis_vector(i), x))
                   for i in range(self.dim) for x in space.basis)

    def is_right_ideal(self, u: SpaceLike) -> bool:
        space = _space(u)
        return all(space.contains(self.multiply(x, self.basis_vector(i)))
                   for i in range(self.dim) for x in space.basis)

    def is_ideal(self, u: SpaceLike) -> bool:
        return self.is_left_ideal(u) and self.is_right_ideal(u)

    def normalizers(self, u: SpaceLike) -> Normalizers:
        space = _space(u)
        f = self.field
        q = space.annihilator()
        left = kernel(Matrix.stack(f, [q @ self.right_mult(x) for x in space.basis], self.dim))
        right = kernel(Matrix.stack(f, [q @ self.left_mult(x) for x in space.basis], self.dim))
        full = left & right
        for name, result in (('left', left), ('full', full)):
            if not self.is_closed(result):
                raise TheoremViolated(f"{name} normalizer of {self.describe(space)} is not a subalgebra")
        return Normalizers(left, right, full)

    def centralizer(self, u: SpaceLike) -> Subspace:
        """{x : x U = U x = 0}."""
        space = _space(u)
        blocks = [self.right_mult(x) for x in space.basis] + [self.left_mult(x) for x in space.basis]
        result = kernel(Matrix.stack(self.field, blocks, self.dim))
        if not self.is_closed(result):
            raise TheoremViolated(f"centralizer of {self.describe(space)} is not a subalgebra")
        if self.is_ideal(space) and not self.is_ideal(result):
            raise TheoremViolated(f"centralizer of the ideal {self.describe(space)} is not an ideal")
        return result

    def quotient(self, k: SpaceLike) -> 'QuotientMap':
        ideal = _space(k)
        if not self.is_ideal(ideal):
            raise NotAnIdeal(f"{self.describe(ideal)} is not a 2-sided ideal")
        free = tuple(j for j in range(self.dim) if j not in ideal.pivots)
        qmap = QuotientMap(self, ideal, free, None)
        products = {}
        for a, i in enumerate(free):
            for b, j in enumerate(free):
                products[(a, b)] = qmap.project(self._table[i][j])
        labels = tuple(self.labels[j] for j in free) if self.labels else None
        qmap.algebra = LeibnizAlgebra(self.field, len(free), products, labels)
        verdict = qmap.algebra.verify_leibniz()
        if not verdict.passed:
            raise CertificationFailed(f"quotient by {self.describe(ideal)} fails the Leibniz identity at {verdict.triple}")
        return qmap

    def restrict(self, u: SpaceLike) -> 'LeibnizAlgebra':
        """Structure constants of a subalgebra on its RREF basis."""
        space = self.subalgebra(u).space
        products = {}
        for a, x in enumerate(space.basis):
            for b, y in enumerate(space.basis):
                products[(a, b)] = space.coordinates(self.multiply(x, y))
        return LeibnizAlgebra(self.field, space.dim, products)

    def right_ideal_closure(self, u: SpaceLike, within: SpaceLike) -> Subspace:
        """Smallest right ideal of `within` containing u."""
        space, outer = _space(u), _space(within)
        while True:
            grown = space.span_with(self.multiply(x, y) for x in space.basis for y in outer.basis)
            if grown == space:
                return space
            space = grown

    def is_right_subnormal(self, u: SpaceLike) -> SubnormalVerdict:
        """Canonical chain X_0 = A, X_(i+1) = smallest right ideal of X_i containing U.

        U is right subnormal exactly when this chain ends at U.
        """
        space = _space(u)
        chain = [self.whole()]
        while True:
            nxt = self.right_ideal_closure(space, chain[-1])
            if nxt == chain[-1]:
                break
            chain.append(nxt)
        return SubnormalVerdict(chain[-1] == space, tuple(chain))

    # Lattice searches over prime fields

    def closed_subspaces(self, budget: int = 10**6, proper: bool = False) -> List[Subspace]:
        found = []
        for space in enumerate_subspaces(self.dim, self.field, budget=budget):
            if proper and space.is_whole():
                continue
            if self.is_closed(space):
                found.append(space)
        return found

    def maximal_subalgebras(self, budget: int = 10**6) -> List[Subspace]:
        closed = self.closed_subspaces(budget, proper=True)
        ordered = sorted(closed, key=lambda s: -s.dim)
        maximal = []
        for m in ordered:
            if not any(other.dim > m.dim and other.includes(m) for other in maximal):
                # Anything properly above m is inside some maximal one already found
                maximal.append(m)
        logger.info(f"Found {len(maximal)} maximal subalgebras among {len(closed)} proper closed subspaces")
        return [m for m in closed if m in set(maximal)]


@dataclass
class QuotientMap:
    source: LeibnizAlgebra
    ideal: Subspace
    free_columns: Tuple[int, ...]
    algebra: Optional[LeibnizAlgebra] = dc_field(default=None)

    def project(self, v: Sequence) -> Vector:
        r = self.ideal.reduce(v)
        return tuple(r[j] for j in self.free_columns)

    def lift(self, coords: Sequence) -> Vector:
        f = self.source.field
        out = [f.zero] * self.source.dim
        for c, j in zip(coords, self.free_columns):
            out[j] = c
        return tuple(out)

    def projection_matrix(self) -> Matrix:
        n = self.source.dim
        return Matrix.from_columns(self.source.field, [self.project(unit_vector(self.source.field, n, j))
                                                       for j in range(n)], len(self.free_columns))

    def section_matrix(self) -> Matrix:
        q = len(self.free_columns)
        return Matrix.from_columns(self.source.field, [self.lift(unit_vector(self.source.field, q, a))
                                                       for a in range(q)], self.source.dim)

    def project_subspace(self, u: SpaceLike) -> Subspace:
        return Subspace(self.source.field, len(self.free_columns), [self.project(v) for v in _space(u).basis])

    def preimage(self, u: Subspace) -> Subspace:
        return self.ideal.span_with(self.lift(v) for v in u.basis)


def bracketings(factors: Sequence[Vector], algebra: LeibnizAlgebra) -> List[Vector]:
    """Every bracketing of the ordered product of the factors."""
    if len(factors) == 1:
        return [tuple(factors[0])]
    out = []
    for split in range(1, len(factors)):
        for left in bracketings(factors[:split], algebra):
            for right in bracketings(factors[split:], algebra):
                out.append(algebra.multiply(left, right))
    return out

