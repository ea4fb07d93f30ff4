"""Leibniz bimodules as pairs (S, T) of operator-valued linear maps.

T_a(m) = a m and S_a(m) = m a. The axioms, on algebra basis pairs:
    T_a T_b = T_ab + T_b T_a
    T_a S_b = S_b T_a + S_ab
    S_ab    = S_b S_a + T_a S_b
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from backend.core import LeibnizAlgebra
from backend.errors import HypothesisViolated, NotBimodule, NotLie, PreconditionViolated, TheoremViolated
from backend.exactfield import Field
from backend.linalg import Matrix, Vector, kernel
from backend.sampling import hypothesis_elements, random_scalars

logger = logging.getLogger('LeibnizBimodules')

AXIOMS = (
    'T_a T_b = T_ab + T_b T_a',
    'T_a S_b = S_b T_a + S_ab',
    'S_ab = S_b S_a + T_a S_b',
)


class SMode(str, Enum):
    ZERO = 'zero'
    MINUS_T = 'minus-t'


@dataclass(frozen=True)
class BimoduleVerdict:
    passed: bool
    axiom: Optional[str] = None
    pair: Optional[Tuple[int, int]] = None  # 1-based


class Bimodule:
    def __init__(self, algebra: LeibnizAlgebra, module_dim: int, t_ops: Sequence[Matrix],
                 s_ops: Sequence[Matrix], verify: bool = True):
        """t_ops[i] and s_ops[i] are T and S of the i-th algebra basis vector."""
        if len(t_ops) != algebra.dim or len(s_ops) != algebra.dim:
            raise ValueError(f"need {algebra.dim} T and S operators")
        for op in list(t_ops) + list(s_ops):
            if op.rows != module_dim or op.cols != module_dim:
                raise ValueError(f"operator of shape {op.rows}x{op.cols}, module has dim {module_dim}")
        self.algebra = algebra
        self.module_dim = module_dim
        self.t_ops = list(t_ops)
        self.s_ops = list(s_ops)
        if verify:
            verdict = verify_bimodule(self)
            if not verdict.passed:
                i, j = verdict.pair
                raise NotBimodule(f"{verdict.axiom} fails for a = e{i}, b = e{j}")

    @property
    def field(self) -> Field:
        return self.algebra.field

    def _combine(self, a: Sequence, ops: List[Matrix]) -> Matrix:
        f = self.field
        result = Matrix.zeros(f, self.module_dim, self.module_dim)
        for c, op in zip(a, ops):
            if not f.is_zero(c):
                result = result + op.scale(c)
        return result

    def t(self, a: Sequence) -> Matrix:
        return self._combine(self.algebra.element(list(a)), self.t_ops)

    def s(self, a: Sequence) -> Matrix:
        return self._combine(self.algebra.element(list(a)), self.s_ops)


def verify_bimodule(b: Bimodule) -> BimoduleVerdict:
    algebra = b.algebra
    for i in range(algebra.dim):
        ta, sa = b.t_ops[i], b.s_ops[i]
        for j in range(algebra.dim):
            tb, sb = b.t_ops[j], b.s_ops[j]
            ab = algebra.basis_product(i, j)
            t_ab, s_ab = b.t(ab), b.s(ab)
            checks = (
                ta @ tb == t_ab + tb @ ta,
                ta @ sb == sb @ ta + s_ab,
                s_ab == sb @ sa + ta @ sb,
            )
            for axiom, ok in zip(AXIOMS, checks):
                if not ok:
                    logger.info(f"Bimodule axiom {axiom} fails at (e{i + 1}, e{j + 1})")
                    return BimoduleVerdict(False, axiom, (i + 1, j + 1))
    return BimoduleVerdict(True)


def regular_bimodule(algebra: LeibnizAlgebra) -> Bimodule:
    """A acting on itself: T = L, S = R."""
    n = algebra.dim
    t_ops = [algebra.left_mult(algebra.basis_vector(i)) for i in range(n)]
    s_ops = [algebra.right_mult(algebra.basis_vector(i)) for i in range(n)]
    return Bimodule(algebra, n, t_ops, s_ops)


def lie_bimodule(lie: LeibnizAlgebra, t_ops: Sequence[Matrix], s_mode: SMode = SMode.ZERO,
                 module_dim: Optional[int] = None) -> Bimodule:
    """A Lie module made into a Leibniz bimodule with S = 0 or S = -T."""
    if not lie.is_lie():
        raise NotLie(f"{lie!r} is not a Lie algebra")
    if module_dim is None:
        module_dim = t_ops[0].rows if t_ops else 0
    if SMode(s_mode) == SMode.ZERO:
        s_ops = [Matrix.zeros(lie.field, module_dim, module_dim) for _ in t_ops]
    else:
        s_ops = [-op for op in t_ops]
    return Bimodule(lie, module_dim, t_ops, s_ops)


def nil_bimodule(field: Field, algebra_dim: int, module_dim: int, seed: int = 0,
                 s_mode: SMode = SMode.ZERO) -> Bimodule:
    """An abelian algebra acting through polynomials without constant term in
    one random strictly upper triangular matrix, so every T_a is nilpotent."""
    rng = np.random.default_rng(seed)
    shift = Matrix.zeros(field, module_dim, module_dim)
    rows = [list(r) for r in shift.entries]
    for r in range(module_dim):
        values = random_scalars(field, module_dim, rng)
        for c in range(r + 1, module_dim):
            rows[r][c] = field.coerce(values[c])
    shift = Matrix(field, rows, module_dim)
    powers = [shift.power(k) for k in range(1, module_dim + 1)]
    t_ops = []
    for _ in range(algebra_dim):
        coeffs = random_scalars(field, len(powers), rng)
        op = Matrix.zeros(field, module_dim, module_dim)
        for c, p in zip(coeffs, powers):
            op = op + p.scale(field.coerce(c))
        t_ops.append(op)
    abelian = LeibnizAlgebra(field, algebra_dim)
    return lie_bimodule(abelian, t_ops, s_mode, module_dim)


def engel_witness(b: Bimodule, samples: int = 20, seed: int = 0, exhaustive_limit: int = 4096) -> Vector:
    """A nonzero m with T_a(m) = S_a(m) = 0 for all a, given every T_a nilpotent.

    "Every T_a" is checked on all elements when the algebra is small and
    finite, and on the basis plus `samples` seeded random elements otherwise,
    so over Q the check can miss a non-nilpotent T_a.
    """
    if b.module_dim < 1:
        raise PreconditionViolated("the module is zero")
    algebra = b.algebra
    for a in hypothesis_elements(b.field, algebra.dim, samples, seed, exhaustive_limit):
        if not b.t(a).is_nilpotent():
            raise HypothesisViolated(f"T_a is not nilpotent for a = {algebra.format_element(algebra.element(list(a)))}")
    for i, op in enumerate(b.s_ops):
        if not op.is_nilpotent():
            raise TheoremViolated(f"S_e{i + 1} is not nilpotent although every T_a is")
    joint = kernel(Matrix.stack(b.field, b.t_ops + b.s_ops, b.module_dim))
    if joint.is_zero():
        raise TheoremViolated("T and S have no common null vector")
    return joint.basis[0]
