import os

import pytest

from backend.exactfield import Field
from backend.generators import cyclic_algebra, four_dim_example, lie_two_dim, primitive_split_extension
from backend.representations import SMode

SHIPPED_EXAMPLE = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'algebras', 'four_dim_example.json')


@pytest.fixture
def q():
    return Field.rationals()


@pytest.fixture
def f3():
    return Field.prime(3)


@pytest.fixture
def f5():
    return Field.prime(5)


@pytest.fixture
def four_dim():
    """u, n, k, n2 over Q."""
    return four_dim_example()


@pytest.fixture
def four_dim_f5():
    return four_dim_example(Field.prime(5))


@pytest.fixture
def lie2_f3():
    """h x = x, x h = -x over F3."""
    return lie_two_dim(Field.prime(3))


@pytest.fixture
def hm_f3():
    """h m = m, m h = 0 over F3: primitive and not Lie."""
    return primitive_split_extension(Field.prime(3), 1, SMode.ZERO)


@pytest.fixture
def cyclic3_f3():
    return cyclic_algebra(3, Field.prime(3))


@pytest.fixture
def quiet_env(monkeypatch):
    """No log file, default knobs."""
    monkeypatch.setenv('LEIBNIZ_LOG_FILE', '')
    for var in ('LEIBNIZ_BUDGET', 'LEIBNIZ_SEED', 'LEIBNIZ_RANDOM_SAMPLES', 'LEIBNIZ_RETRY_BUDGET',
                'LEIBNIZ_EXHAUSTIVE_LIMIT', 'LEIBNIZ_LOG_LEVEL'):
        monkeypatch.delenv(var, raising=False)
