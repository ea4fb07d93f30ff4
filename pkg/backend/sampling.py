"""Seeded random elements, and the element sets used to test "for all a" hypotheses."""
from fractions import Fraction
from typing import List

import numpy as np

from backend.exactfield import Field
from backend.linalg import Vector, enumerate_vectors, unit_vector

# Rational samples stay small so exact row reduction stays cheap
RATIONAL_NUMERATORS = (-3, 4)
RATIONAL_DENOMINATORS = (1, 4)


def random_scalars(field: Field, count: int, rng: np.random.Generator) -> list:
    if field.is_finite:
        return [int(x) for x in rng.integers(0, field.characteristic, size=count)]
    nums = rng.integers(*RATIONAL_NUMERATORS, size=count)
    dens = rng.integers(*RATIONAL_DENOMINATORS, size=count)
    return [Fraction(int(n), int(d)) for n, d in zip(nums, dens)]


def random_vectors(field: Field, n: int, count: int, seed: int = 0) -> List[Vector]:
    rng = np.random.default_rng(seed)
    return [tuple(random_scalars(field, n, rng)) for _ in range(count)]


def exhaustive_elements(field: Field, n: int) -> List[Vector]:
    return list(enumerate_vectors(field, n))


def hypothesis_elements(field: Field, n: int, samples: int, seed: int = 0,
                        exhaustive_limit: int = 4096) -> List[Vector]:
    """Every element when the field is finite and small enough, otherwise the
    basis vectors plus `samples` random elements."""
    if field.is_finite and field.characteristic ** n <= exhaustive_limit:
        return exhaustive_elements(field, n)
    basis = [unit_vector(field, n, j) for j in range(n)]
    return basis + random_vectors(field, n, samples, seed)
