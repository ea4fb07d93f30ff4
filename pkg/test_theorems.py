import json
import re

import pytest

from backend.config import Settings
from backend.exactfield import Field
from backend.generators import (
    CorpusEntry,
    cyclic_algebra,
    default_corpus,
    four_dim_example,
    lie_two_dim,
    primitive_split_extension,
)
from backend.representations import SMode
from backend.theorems import ERROR, FAIL, PASS, SKIP, STATEMENTS, TheoremSuite

SETTINGS = Settings(random_samples=5, log_file=None)


@pytest.fixture(scope='module')
def small_corpus():
    f3, f5 = Field.prime(3), Field.prime(5)
    return [
        CorpusEntry('four-dim-example-Q', four_dim_example()),
        CorpusEntry('four-dim-example-F5', four_dim_example(f5)),
        CorpusEntry('lie-two-dim-F3', lie_two_dim(f3)),
        CorpusEntry('cyclic-3-Q', cyclic_algebra(3, Field.rationals())),
        CorpusEntry('primitive-1-zero-F3', primitive_split_extension(f3, 1, SMode.ZERO)),
    ]


@pytest.fixture(scope='module')
def suite_run(small_corpus):
    suite = TheoremSuite(SETTINGS)
    df = suite.run_suite(small_corpus)
    return suite, df


def test_every_check_is_registered():
    suite = TheoremSuite(SETTINGS)
    assert list(suite.checks) == list(STATEMENTS)
    assert len(STATEMENTS) == 22


def test_no_check_fails(suite_run):
    _, df = suite_run
    bad = df[df['status'].isin([FAIL, ERROR])]
    assert bad.empty, bad[['algebra', 'check', 'detail']].to_string()


def test_result_table_shape(suite_run, small_corpus):
    suite, df = suite_run
    assert len(df) == len(small_corpus) * len(STATEMENTS)
    matrix = suite.status_matrix(df, *suite.order)
    assert list(matrix.index) == [e.name for e in small_corpus]
    assert list(matrix.columns) == list(STATEMENTS)


def test_enumeration_checks_skip_over_q(suite_run):
    _, df = suite_run
    row = df[(df['algebra'] == 'four-dim-example-Q') & (df['check'] == 'frattini-right-ideals')].iloc[0]
    assert row['status'] == SKIP


def test_small_field_is_skipped_not_failed():
    entry = CorpusEntry('four-dim-example-F3', four_dim_example(Field.prime(3)))
    result = TheoremSuite(SETTINGS).run_check(entry, 'cartan-search')
    assert result['status'] == SKIP
    assert result['detail'].startswith('FieldTooSmall')


def test_primitive_splitting_runs(suite_run):
    _, df = suite_run
    statuses = df[df['check'] == 'primitive-splitting'].set_index('algebra')['status']
    assert statuses['lie-two-dim-F3'] == PASS
    assert statuses['primitive-1-zero-F3'] == PASS
    assert statuses['four-dim-example-F5'] == SKIP


def test_json_report_is_deterministic(small_corpus):
    first = TheoremSuite(SETTINGS)
    second = TheoremSuite(SETTINGS)
    names = ['leibniz-identity', 'left-centre', 'cartan-search']
    text = first.to_json(first.run_suite(small_corpus, names))
    assert text == second.to_json(second.run_suite(small_corpus, names))
    report = json.loads(text)
    assert report['checks'] == names
    assert sum(report['summary'].values()) == len(small_corpus) * len(names)


def test_text_report(suite_run):
    suite, df = suite_run
    text = suite.to_text(df)
    assert 'Timing by check' in text
    assert 'four-dim-example-Q' in text


def test_unknown_check_rejected(small_corpus):
    with pytest.raises(ValueError):
        TheoremSuite(SETTINGS).run_suite(small_corpus, ['no-such-check'])


VOLUME_CHECKS = ['powers', 'fitting-decomposition', 'engel-representative', 'bimodule-engel', 'intravariance']


@pytest.fixture(scope='module')
def default_run():
    settings = Settings(log_file=None)
    corpus = default_corpus(settings)
    return corpus, TheoremSuite(settings).run_suite(corpus, VOLUME_CHECKS)


def _reported_counts(df, check, pattern):
    details = df[(df['check'] == check) & (df['status'] == PASS)]['detail']
    return [int(m.group(1)) for m in (re.search(pattern, d) for d in details) if m]


def test_default_corpus_has_enough_nilpotent_algebras(default_run):
    corpus, _ = default_run
    assert sum(1 for entry in corpus if entry.algebra.is_nilpotent()) >= 50


def test_default_corpus_volumes_pass(default_run):
    _, df = default_run
    bad = df[df['status'].isin([FAIL, ERROR])]
    assert bad.empty, bad[['algebra', 'check', 'detail']].to_string()
    assert sum(_reported_counts(df, 'powers', r'of (\d+) elements')) >= 200
    assert sum(_reported_counts(df, 'fitting-decomposition', r'^(\d+) elements')) >= 200
    assert sum(_reported_counts(df, 'engel-representative', r'^(\d+) elements')) >= 200
    assert sum(_reported_counts(df, 'intravariance', r'^(\d+) ideals')) >= 30


def test_default_corpus_bimodule_volumes(default_run):
    _, df = default_run
    rows = df[df['check'] == 'bimodule-engel'].set_index('algebra')['detail']
    regular = [d for d in rows if 'regular witness found' in d]
    nil = [d for d in rows if 'nil bimodules witnessed' in d]
    assert len(regular) >= 50
    # two constructed nil bimodules per algebra
    assert 2 * len(nil) >= 20
    assert 'regular module rejected' in rows['four-dim-example-Q']
