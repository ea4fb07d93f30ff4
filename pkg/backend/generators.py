"""Constructions of verified Leibniz algebras for the test corpus."""
import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence

import numpy as np

from backend.core import LeibnizAlgebra
from backend.errors import NotLeibniz, NotLie, ParseError, RetryBudgetExceeded
from backend.exactfield import Field
from backend.linalg import Matrix, zero_vector
from backend.representations import SMode, lie_bimodule
from backend.structure import StructureAnalyzer

logger = logging.getLogger('AlgebraGenerator')

FLAGS = ('nilpotent', 'soluble', 'lie', 'primitive')


@dataclass
class CorpusEntry:
    name: str
    algebra: LeibnizAlgebra
    provenance: Dict = dc_field(default_factory=dict)
    known_flags: Dict[str, bool] = dc_field(default_factory=dict)


def _verified(algebra: LeibnizAlgebra, what: str) -> LeibnizAlgebra:
    verdict = algebra.verify_leibniz()
    if not verdict.passed:
        raise NotLeibniz(f"{what} fails the Leibniz identity at {verdict.triple}", verdict.triple)
    return algebra


def split_extension(lie: LeibnizAlgebra, t_ops: Sequence[Matrix], s_mode: SMode = SMode.ZERO,
                    module_labels: Optional[Sequence[str]] = None) -> LeibnizAlgebra:
    """L + M with (l, m)(l', m') = (l l', T_l m' + S_l' m)."""
    if not lie.is_lie():
        raise NotLie(f"{lie!r} is not a Lie algebra")
    bimodule = lie_bimodule(lie, t_ops, s_mode)
    f = lie.field
    d, m = lie.dim, bimodule.module_dim
    n = d + m
    products = {}
    for (i, j), out in lie.nonzero_products():
        products[(i, j)] = tuple(out) + zero_vector(f, m)
    for i in range(d):
        t_op, s_op = bimodule.t_ops[i], bimodule.s_ops[i]
        for j in range(m):
            products[(i, d + j)] = zero_vector(f, d) + t_op.column(j)
            products[(d + j, i)] = zero_vector(f, d) + s_op.column(j)
    labels = None
    if lie.labels is not None:
        labels = list(lie.labels) + list(module_labels or [f"m{j + 1}" for j in range(m)])
    return _verified(LeibnizAlgebra(f, n, products, labels), "split extension")


def cyclic_algebra(k: int, field: Field) -> LeibnizAlgebra:
    """Basis a, a^2, ..., a^k with a a^i = a^(i+1) and every other product zero."""
    if k < 1:
        raise ValueError("cyclic algebra needs k >= 1")
    products = {}
    for i in range(k - 1):
        out = [field.zero] * k
        out[i + 1] = field.one
        products[(0, i)] = out
    labels = ['a'] + [f"a{i}" for i in range(2, k + 1)]
    return _verified(LeibnizAlgebra(field, k, products, labels), "cyclic algebra")


def _nonzero_scalar(field: Field, rng: np.random.Generator):
    if field.is_finite:
        return int(rng.integers(1, field.characteristic))
    value = int(rng.integers(1, 4))
    return value if rng.integers(0, 2) else -value


def random_nilpotent(dim: int, field: Field, seed: int = 0, retry_budget: int = 2000) -> LeibnizAlgebra:
    """Sparse random constants with e_i e_j inside span{e_k : k > max(i, j)},
    resampled until the Leibniz identity holds. The grading forces nilpotency."""
    rng = np.random.default_rng(seed)
    slots = [(i, j, k) for i in range(dim) for j in range(dim) for k in range(max(i, j) + 1, dim)]
    for attempt in range(1, retry_budget + 1):
        products: Dict = {}
        if slots:
            count = int(rng.integers(1, max(2, dim)))
            for idx in rng.choice(len(slots), size=min(count, len(slots)), replace=False):
                i, j, k = slots[int(idx)]
                out = list(products.get((i, j), [field.zero] * dim))
                out[k] = field.coerce(_nonzero_scalar(field, rng))
                products[(i, j)] = out
        algebra = LeibnizAlgebra(field, dim, products)
        if algebra.verify_leibniz().passed:
            logger.debug(f"random nilpotent dim {dim} over {field} accepted after {attempt} attempts")
            return algebra
    raise RetryBudgetExceeded(f"no Leibniz tensor of dim {dim} over {field} in {retry_budget} attempts")


def four_dim_example(field: Optional[Field] = None) -> LeibnizAlgebra:
    """u n = u, n u = -u + k, u n2 = k, n n = n2, n k = -k; k and n2 multiply
    everything to zero from the left."""
    field = field or Field.rationals()
    products = {
        (0, 1): [1, 0, 0, 0],
        (0, 3): [0, 0, 1, 0],
        (1, 0): [-1, 0, 1, 0],
        (1, 1): [0, 0, 0, 1],
        (1, 2): [0, 0, -1, 0],
    }
    return _verified(LeibnizAlgebra(field, 4, products, ['u', 'n', 'k', 'n2']), "four-dimensional example")


def abelian(n: int, field: Optional[Field] = None) -> LeibnizAlgebra:
    field = field or Field.rationals()
    return LeibnizAlgebra(field, n, labels=[f"e{i + 1}" for i in range(n)])


def sl2(field: Optional[Field] = None) -> LeibnizAlgebra:
    field = field or Field.rationals()
    products = {
        (1, 0): [2, 0, 0],
        (0, 1): [-2, 0, 0],
        (1, 2): [0, 0, -2],
        (2, 1): [0, 0, 2],
        (0, 2): [0, 1, 0],
        (2, 0): [0, -1, 0],
    }
    return _verified(LeibnizAlgebra(field, 3, products, ['e', 'h', 'f']), "sl2")


def _one_dim_lie(field: Field) -> LeibnizAlgebra:
    return LeibnizAlgebra(field, 1, labels=['h'])


def lie_two_dim(field: Optional[Field] = None) -> LeibnizAlgebra:
    """h x = x, x h = -x."""
    field = field or Field.rationals()
    return split_extension(_one_dim_lie(field), [Matrix.identity(field, 1)], SMode.MINUS_T, ['x'])


def irreducible_action(field: Field, degree: int) -> Matrix:
    """Companion matrix of the first monic polynomial without roots in the field.

    Degree 1 gives the identity; degree 2 searches x^2 + b x + c.
    """
    if degree == 1:
        return Matrix.identity(field, 1)
    if degree != 2:
        raise ValueError("only actions of degree 1 and 2 are built")
    if not field.is_finite:
        return Matrix(field, [[field.zero, field.coerce(-1)], [field.one, field.zero]], 2)
    p = field.characteristic
    for c in range(1, p):
        for b in range(p):
            if all((x * x + b * x + c) % p for x in range(p)):
                return Matrix(field, [[0, (-c) % p], [1, (-b) % p]], 2)
    raise ValueError(f"no irreducible quadratic over {field}")


def primitive_split_extension(field: Field, module_dim: int = 1, s_mode: SMode = SMode.ZERO) -> LeibnizAlgebra:
    """span{h} + M with h acting irreducibly and invertibly on M."""
    return split_extension(_one_dim_lie(field), [irreducible_action(field, module_dim)], s_mode)


def flag_value(algebra: LeibnizAlgebra, flag: str, budget: int = 10**6) -> bool:
    if flag == 'nilpotent':
        return algebra.is_nilpotent()
    if flag == 'soluble':
        return algebra.is_soluble()
    if flag == 'lie':
        return algebra.is_lie()
    if flag == 'primitive':
        return StructureAnalyzer(algebra, budget).is_primitive() is not None
    raise ValueError(f"Unknown flag: {flag}")


def check_flags(entry: CorpusEntry, budget: int = 10**6) -> None:
    for flag, expected in entry.known_flags.items():
        actual = flag_value(entry.algebra, flag, budget)
        if actual != expected:
            raise ParseError(f"{entry.name}: recorded {flag}={expected} but computed {actual}")


def make_entry(name: str, algebra: LeibnizAlgebra, kind: str, params: Dict, seed: Optional[int] = None,
           **flags) -> CorpusEntry:
    provenance = {'kind': kind, 'params': params, 'field': algebra.field.descriptor()}
    if seed is not None:
        provenance['seed'] = seed
    return CorpusEntry(name, algebra, provenance, dict(flags))


def default_corpus(settings=None) -> List[CorpusEntry]:
    """The corpus used when no directory is given."""
    seed = settings.seed if settings is not None else 0
    retries = settings.retry_budget if settings is not None else 2000
    q = Field.rationals()
    f2, f3, f5, f7 = (Field.prime(p) for p in (2, 3, 5, 7))
    corpus = []
    for fld in (q, f3, f5, f7):
        corpus.append(make_entry(f"four-dim-example-{fld}", four_dim_example(fld), 'four-dim-example', {},
                             nilpotent=False, soluble=True, lie=False))
    for k, fld in ((1, q), (2, q), (3, q), (4, q), (5, q), (2, f2), (3, f2), (2, f3), (3, f3), (4, f3),
                   (2, f5), (3, f5), (4, f5), (2, f7), (3, f7)):
        corpus.append(make_entry(f"cyclic-{k}-{fld}", cyclic_algebra(k, fld), 'cyclic', {'dim': k},
                             nilpotent=True, lie=(k == 1)))
    for n, fld in ((1, q), (2, q), (3, q), (2, f2), (3, f2), (1, f3), (2, f5), (1, f7)):
        corpus.append(make_entry(f"abelian-{n}-{fld}", abelian(n, fld), 'abelian', {'dim': n},
                             nilpotent=True, lie=True))
    for fld in (q, f3, f5):
        corpus.append(make_entry(f"lie-two-dim-{fld}", lie_two_dim(fld), 'split',
                             {'module_dim': 1, 's_mode': SMode.MINUS_T.value}, nilpotent=False, lie=True))
    for fld in (f3, f5):
        for module_dim in (1, 2):
            for mode in (SMode.ZERO, SMode.MINUS_T):
                if module_dim == 1 and mode == SMode.MINUS_T:
                    continue
                corpus.append(make_entry(f"primitive-{module_dim}-{mode.value}-{fld}",
                                     primitive_split_extension(fld, module_dim, mode), 'split',
                                     {'module_dim': module_dim, 's_mode': mode.value},
                                     primitive=True, lie=(mode == SMode.MINUS_T)))
    for fld in (q, f5):
        corpus.append(make_entry(f"sl2-{fld}", sl2(fld), 'sl2', {}, lie=True, soluble=False))
    shapes = ((3, q), (4, q), (3, f3), (4, f3), (4, f5), (3, f7), (5, q),
              (2, q), (3, q), (4, q), (3, f2), (4, f2), (2, f3), (3, f3), (3, f5), (2, f5), (3, f7),
              (2, f7), (3, q), (4, q), (3, f2), (3, f3), (4, f3), (3, f5), (2, q), (3, f7), (4, f2),
              (2, f3), (4, q))
    for i, (n, fld) in enumerate(shapes):
        s = seed + i
        corpus.append(make_entry(f"random-nilpotent-{n}-{fld}-{s}", random_nilpotent(n, fld, s, retries),
                             'random-nilpotent', {'dim': n}, seed=s, nilpotent=True))
    logger.info(f"Built default corpus with {len(corpus)} algebras")
    return corpus
