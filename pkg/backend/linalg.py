"""Dense exact linear algebra over a `Field`.

Vectors are tuples of raw field values. Operators act on column vectors:
entry [i][j] of an operator matrix is the e_i coordinate of the image of e_j.
Subspaces are kept as the rows of their reduced row echelon form, so equality
of subspaces is equality of those rows.
"""
import logging
from itertools import combinations, product
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from backend.errors import AmbientMismatch, BudgetExceeded, InfiniteField
from backend.exactfield import Field

logger = logging.getLogger('LinearAlgebra')

Vector = Tuple


class Matrix:
    def __init__(self, field: Field, rows: Sequence[Sequence], cols: Optional[int] = None):
        self.field = field
        self.entries = [tuple(row) for row in rows]
        self.rows = len(self.entries)
        if cols is None:
            cols = len(self.entries[0]) if self.entries else 0
        self.cols = cols
        for row in self.entries:
            if len(row) != cols:
                raise ValueError(f"ragged matrix: expected {cols} columns, got {len(row)}")

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> 'Matrix':
        return cls(field, [[field.zero] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, field: Field, n: int) -> 'Matrix':
        return cls(field, [[field.one if i == j else field.zero for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], rows: int) -> 'Matrix':
        return cls(field, [[col[i] for col in columns] for i in range(rows)], len(columns))

    @classmethod
    def stack(cls, field: Field, blocks: Sequence['Matrix'], cols: int) -> 'Matrix':
        rows = []
        for block in blocks:
            rows.extend(block.entries)
        return cls(field, rows, cols)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field and self.cols == other.cols
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.field, self.cols, tuple(self.entries)))

    def __repr__(self):
        body = '; '.join(' '.join(self.field.format(x) for x in row) for row in self.entries)
        return f"Matrix[{self.rows}x{self.cols}]({body})"

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> 'Matrix':
        return Matrix(self.field, [self.column(j) for j in range(self.cols)], self.rows)

    def is_zero(self) -> bool:
        return all(self.field.is_zero(x) for row in self.entries for x in row)

    def __add__(self, other: 'Matrix') -> 'Matrix':
        f = self.field
        return Matrix(f, [[f.add(a, b) for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.cols)

    def __sub__(self, other: 'Matrix') -> 'Matrix':
        f = self.field
        return Matrix(f, [[f.sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.cols)

    def __neg__(self) -> 'Matrix':
        f = self.field
        return Matrix(f, [[f.neg(a) for a in row] for row in self.entries], self.cols)

    def scale(self, c) -> 'Matrix':
        f = self.field
        return Matrix(f, [[f.mul(c, a) for a in row] for row in self.entries], self.cols)

    def __matmul__(self, other: 'Matrix') -> 'Matrix':
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        f = self.field
        out = []
        for row in self.entries:
            acc = [f.zero] * other.cols
            for k, a in enumerate(row):
                if f.is_zero(a):
                    continue
                for j, b in enumerate(other.entries[k]):
                    if not f.is_zero(b):
                        acc[j] = f.add(acc[j], f.mul(a, b))
            out.append(acc)
        return Matrix(f, out, other.cols)

    def apply(self, v: Sequence) -> Vector:
        f = self.field
        out = []
        for row in self.entries:
            acc = f.zero
            for a, b in zip(row, v):
                if not f.is_zero(a) and not f.is_zero(b):
                    acc = f.add(acc, f.mul(a, b))
            out.append(acc)
        return tuple(out)

    def power(self, k: int) -> 'Matrix':
        result = Matrix.identity(self.field, self.rows)
        base = self
        while k > 0:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_nilpotent(self) -> bool:
        return self.power(self.rows).is_zero()

    def rref(self) -> Tuple['Matrix', int, Tuple[int, ...]]:
        m, rank, pivots = _rref_rows(self.field, self.entries, self.cols)
        return Matrix(self.field, m, self.cols), rank, pivots

    def rank(self) -> int:
        return self.rref()[1]

    def to_strings(self) -> List[List[str]]:
        return [[self.field.format(x) for x in row] for row in self.entries]


def _rref_rows(field: Field, rows: Iterable[Sequence], cols: int):
    """Gauss-Jordan elimination, pivoting on the first nonzero entry.

    Returns the nonzero rows of the reduced form, the rank and pivot columns.
    """
    m = [list(r) for r in rows]
    pivots = []
    piv_r = 0
    for piv_c in range(cols):
        for i_row in range(piv_r, len(m)):
            if not field.is_zero(m[i_row][piv_c]):
                break
        else:
            continue
        m[piv_r], m[i_row] = m[i_row], m[piv_r]
        inv = field.inv(m[piv_r][piv_c])
        m[piv_r] = [field.mul(inv, x) for x in m[piv_r]]
        pivot_row = m[piv_r]
        for r in range(len(m)):
            if r == piv_r:
                continue
            fr = m[r][piv_c]
            if field.is_zero(fr):
                continue
            m[r] = [field.sub(x, field.mul(fr, y)) for x, y in zip(m[r], pivot_row)]
        pivots.append(piv_c)
        piv_r += 1
        if piv_r == len(m):
            break
    return [tuple(r) for r in m[:piv_r]], piv_r, tuple(pivots)


def rref(m: Matrix) -> Tuple[Matrix, int]:
    reduced, rank, _ = m.rref()
    return reduced, rank


class Subspace:
    """A subspace of field^n held by its canonical RREF basis."""

    def __init__(self, field: Field, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        self.field = field
        self.ambient_dim = ambient_dim
        basis, rank, pivots = _rref_rows(field, vectors, ambient_dim)
        self.basis = tuple(basis)
        self.pivots = pivots

    @classmethod
    def zero(cls, field: Field, n: int) -> 'Subspace':
        return cls(field, n)

    @classmethod
    def whole(cls, field: Field, n: int) -> 'Subspace':
        return cls(field, n, Matrix.identity(field, n).entries)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def is_whole(self) -> bool:
        return self.dim == self.ambient_dim

    def matrix(self) -> Matrix:
        return Matrix(self.field, self.basis, self.ambient_dim)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.field == other.field
                and self.ambient_dim == other.ambient_dim and self.basis == other.basis)

    def __hash__(self):
        return hash((self.field, self.ambient_dim, self.basis))

    def __repr__(self):
        rows = ', '.join('(' + ','.join(self.field.format(x) for x in row) + ')' for row in self.basis)
        return f"Subspace(dim={self.dim}, [{rows}])"

    def _check(self, other: 'Subspace') -> None:
        if other.ambient_dim != self.ambient_dim or other.field != self.field:
            raise AmbientMismatch(f"ambient {self.field}^{self.ambient_dim} vs {other.field}^{other.ambient_dim}")

    def reduce(self, v: Sequence) -> Vector:
        """Remainder of v after clearing the pivot columns against the basis."""
        f = self.field
        v = list(v)
        for row, p in zip(self.basis, self.pivots):
            c = v[p]
            if not f.is_zero(c):
                v = [f.sub(x, f.mul(c, y)) for x, y in zip(v, row)]
        return tuple(v)

    def contains(self, v: Sequence) -> bool:
        return all(self.field.is_zero(x) for x in self.reduce(v))

    __contains__ = contains

    def coordinates(self, v: Sequence) -> Vector:
        if not self.contains(v):
            raise ValueError("vector is not in the subspace")
        return tuple(v[p] for p in self.pivots)

    def from_coordinates(self, coords: Sequence) -> Vector:
        f = self.field
        out = [f.zero] * self.ambient_dim
        for c, row in zip(coords, self.basis):
            if f.is_zero(c):
                continue
            out = [f.add(x, f.mul(c, y)) for x, y in zip(out, row)]
        return tuple(out)

    def includes(self, other: 'Subspace') -> bool:
        self._check(other)
        return all(self.contains(v) for v in other.basis)

    def __add__(self, other: 'Subspace') -> 'Subspace':
        self._check(other)
        return Subspace(self.field, self.ambient_dim, self.basis + other.basis)

    def span_with(self, vectors: Iterable[Sequence]) -> 'Subspace':
        return Subspace(self.field, self.ambient_dim, list(self.basis) + list(vectors))

    def annihilator(self) -> Matrix:
        """Rows cutting out the subspace: v is inside iff annihilator @ v = 0."""
        return kernel(self.matrix()).matrix()

    def intersection(self, other: 'Subspace') -> 'Subspace':
        self._check(other)
        system = Matrix.stack(self.field, [self.annihilator(), other.annihilator()], self.ambient_dim)
        result = kernel(system)
        assert self.dim + other.dim == (self + other).dim + result.dim
        return result

    __and__ = intersection

    def complement(self) -> 'Subspace':
        """Span of the standard basis vectors at the non-pivot columns."""
        f = self.field
        free = [j for j in range(self.ambient_dim) if j not in self.pivots]
        return Subspace(f, self.ambient_dim, [unit_vector(f, self.ambient_dim, j) for j in free])

    def image_under(self, op: Matrix) -> 'Subspace':
        return Subspace(self.field, op.rows, [op.apply(v) for v in self.basis])

    def to_strings(self) -> List[List[str]]:
        return [[self.field.format(x) for x in row] for row in self.basis]


def unit_vector(field: Field, n: int, j: int) -> Vector:
    return tuple(field.one if i == j else field.zero for i in range(n))


def zero_vector(field: Field, n: int) -> Vector:
    return tuple([field.zero] * n)


def kernel(m: Matrix) -> Subspace:
    f = m.field
    reduced, rank, pivots = _rref_rows(f, m.entries, m.cols)
    free = [j for j in range(m.cols) if j not in pivots]
    vectors = []
    for j in free:
        v = [f.zero] * m.cols
        v[j] = f.one
        for row, p in zip(reduced, pivots):
            v[p] = f.neg(row[j])
        vectors.append(v)
    result = Subspace(f, m.cols, vectors)
    assert result.dim + rank == m.cols
    return result


def image(m: Matrix) -> Subspace:
    return Subspace(m.field, m.rows, [m.column(j) for j in range(m.cols)])


def generalized_nullspace(m: Matrix) -> Subspace:
    return kernel(m.power(m.rows))


def fitting_image(m: Matrix) -> Subspace:
    return image(m.power(m.rows))


def solve(m: Matrix, rhs: Sequence) -> Optional[Vector]:
    """One solution x of m @ x = rhs (free variables set to zero), or None."""
    f = m.field
    augmented = [tuple(row) + (b,) for row, b in zip(m.entries, rhs)]
    reduced, rank, pivots = _rref_rows(f, augmented, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [f.zero] * m.cols
    for row, p in zip(reduced, pivots):
        x[p] = row[-1]
    return tuple(x)


# Enumeration over prime fields

def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def count_subspaces(n: int, q: int, dim_filter: Optional[int] = None) -> int:
    if dim_filter is not None:
        return gaussian_binomial(n, dim_filter, q)
    return sum(gaussian_binomial(n, k, q) for k in range(n + 1))


def enumerate_subspaces(ambient_dim: int, field: Field, dim_filter: Optional[int] = None,
                        budget: int = 10**6) -> Iterator[Subspace]:
    """Every subspace of F_p^n exactly once, by RREF shape.

    Order: by dimension, then pivot columns lexicographically, then the free
    entries in product order over the residues.
    """
    if not field.is_finite:
        raise InfiniteField(f"cannot enumerate subspaces over {field}")
    total = count_subspaces(ambient_dim, field.characteristic, dim_filter)
    if total > budget:
        raise BudgetExceeded(f"{total} subspaces of {field}^{ambient_dim} exceed budget {budget}")
    dims = [dim_filter] if dim_filter is not None else range(ambient_dim + 1)
    values = list(field.elements())
    for k in dims:
        for pivots in combinations(range(ambient_dim), k):
            free = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, ambient_dim) if j not in pivots]
            for assignment in product(values, repeat=len(free)):
                rows = [[field.zero] * ambient_dim for _ in range(k)]
                for i, p in enumerate(pivots):
                    rows[i][p] = field.one
                for (i, j), value in zip(free, assignment):
                    rows[i][j] = value
                yield Subspace(field, ambient_dim, rows)


def subspaces_within(space: Subspace, dim_filter: Optional[int] = None, budget: int = 10**6) -> Iterator[Subspace]:
    """Every subspace of a given subspace, pushed into the ambient space."""
    for inner in enumerate_subspaces(space.dim, space.field, dim_filter, budget):
        yield Subspace(space.field, space.ambient_dim, [space.from_coordinates(row) for row in inner.basis])


def projective_points(space: Subspace, budget: int = 10**6) -> Iterator[Vector]:
    """One normalized spanning vector per line of the subspace."""
    for line in subspaces_within(space, 1, budget):
        yield line.basis[0]


def enumerate_vectors(field: Field, n: int, budget: int = 10**6) -> Iterator[Vector]:
    if not field.is_finite:
        raise InfiniteField(f"cannot enumerate all vectors over {field}")
    if field.characteristic ** n > budget:
        raise BudgetExceeded(f"{field.characteristic}^{n} vectors exceed budget {budget}")
    yield from product(list(field.elements()), repeat=n)


def element_stream(field: Field, n: int) -> Iterator[Vector]:
    """Deterministic vector stream: unit vectors, then vectors over growing
    prefixes of the field enumeration (each vector once)."""
    for j in range(n):
        yield unit_vector(field, n, j)
    if n == 0:
        return
    seen_units = {unit_vector(field, n, j) for j in range(n)}
    values = []
    for value in field.elements():
        values.append(value)
        if len(values) < 2:
            continue
        newest = len(values) - 1
        for idx in product(range(len(values)), repeat=n):
            if newest not in idx:
                continue
            v = tuple(values[i] for i in idx)
            if v not in seen_units:
                yield v
