import json
import os

import pytest

from backend.algebra_io import dump_algebra
from backend.cli import main, parse_field
from backend.exactfield import Field
from backend.results_store import ResultsStore
from conftest import SHIPPED_EXAMPLE

pytestmark = pytest.mark.usefixtures('quiet_env')


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def bad_file(tmp_path):
    path = tmp_path / 'bad.json'
    path.write_text('{"field": {"kind": "Q"}, "dim": 1, "products": [{"i": 1, "j": 1, "out": ["1"]}]}')
    return str(path)


def test_parse_field_forms():
    assert parse_field('Q') == Field.rationals()
    assert parse_field('F5') == Field.prime(5)
    assert parse_field('7') == Field.prime(7)


def test_verify_example(capsys):
    code, out, _ = run(capsys, 'verify', SHIPPED_EXAMPLE)
    assert code == 0
    assert 'holds' in out


def test_verify_reports_failing_triple(capsys, bad_file):
    code, out, _ = run(capsys, '--json', 'verify', bad_file)
    assert code == 1
    data = json.loads(out)
    assert data['passed'] is False
    assert data['triple'] == [1, 1, 1]


def test_unreadable_file_exit_code(capsys, tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{"field": ')
    code, out, err = run(capsys, 'verify', str(path))
    assert code == 2
    assert out == ''
    assert 'line 1' in err


def test_analyze_rejects_non_leibniz(capsys, bad_file):
    code, _, _ = run(capsys, 'analyze', bad_file)
    assert code == 2


def test_analyze_json(capsys):
    code, out, _ = run(capsys, '--json', 'analyze', SHIPPED_EXAMPLE, '--series', '--centres',
                       '--engel', 'n', '--cartan', '--normalizer', 'n;n2')
    assert code == 0
    report = json.loads(out)
    props = report['properties']
    assert report['algebra'] == {'dim': 4, 'field': 'Q', 'labels': ['u', 'n', 'k', 'n2']}
    assert props['nilpotent'] is False
    assert props['soluble'] is True
    assert props['lower_central_series'] == [4, 3, 2]
    assert props['derived_series'] == [4, 3, 1, 0]
    assert props['left_centre']['span'] == 'span{k, n2}'
    assert props['lie_quotient'] is True
    assert props['engel']['subalgebra']['span'] == 'span{n, n2}'
    assert props['cartan']['subalgebra']['dim'] == 2
    assert props['normalizer']['full']['span'] == 'span{n, n2}'


def test_analyze_json_is_deterministic(capsys):
    first = run(capsys, '--json', 'analyze', SHIPPED_EXAMPLE, '--series', '--cartan')[1]
    second = run(capsys, '--json', 'analyze', SHIPPED_EXAMPLE, '--series', '--cartan')[1]
    assert first == second


def test_analyze_text(capsys):
    code, out, _ = run(capsys, 'analyze', SHIPPED_EXAMPLE, '--centres')
    assert code == 0
    assert 'left_centre: span{k, n2} (dim 2)' in out


def test_finite_field_analyses_gated_over_q(capsys):
    code, out, err = run(capsys, 'analyze', SHIPPED_EXAMPLE, '--frattini')
    assert code == 3
    assert out == ''
    assert 'prime field' in err


def test_bad_element_is_usage_error(capsys):
    code, _, _ = run(capsys, 'analyze', SHIPPED_EXAMPLE, '--engel', '1,2')
    assert code == 2


def test_generate_four_dim_example(capsys, tmp_path):
    out_dir = str(tmp_path / 'gen')
    code, out, _ = run(capsys, 'generate', 'four-dim-example', '--out', out_dir)
    assert code == 0
    with open(os.path.join(out_dir, 'four_dim_example.json'), 'r', encoding='utf-8') as f:
        generated = f.read()
    with open(SHIPPED_EXAMPLE, 'r', encoding='utf-8') as f:
        assert generated == f.read()


def test_generate_then_analyze_prime_field(capsys, tmp_path):
    out_dir = str(tmp_path / 'gen')
    assert run(capsys, 'generate', 'split', '--field', 'F3', '--module-dim', '2', '--out', out_dir)[0] == 0
    path = os.path.join(out_dir, 'split-2-zero-F3.json')
    code, out, _ = run(capsys, '--json', 'analyze', path, '--socle', '--frattini', '--primitive')
    assert code == 0
    props = json.loads(out)['properties']
    assert props['socle']['dim'] == 2
    assert props['primitive']['primitive'] is True
    assert props['primitive']['complement_count'] == 1


def test_generate_random_nilpotent_uses_seed(capsys, tmp_path):
    out_dir = str(tmp_path / 'gen')
    code, out, _ = run(capsys, '--seed', '4', 'generate', 'random-nilpotent', '--dim', '4', '--field', '5',
                       '--out', out_dir)
    assert code == 0
    assert out.strip().endswith('random-nilpotent-4-F5-4.json')


def test_theorems_on_corpus_dir(capsys, tmp_path):
    corpus = str(tmp_path / 'corpus')
    run(capsys, 'generate', 'cyclic', '--dim', '3', '--field', '3', '--out', corpus)
    code, out, _ = run(capsys, '--json', 'theorems', corpus, '--filter', 'leibniz-identity,powers',
                       '--filter', 'engel-nilpotency')
    assert code == 0
    report = json.loads(out)
    assert report['algebras'] == ['cyclic-3-F3']
    assert report['checks'] == ['leibniz-identity', 'powers', 'engel-nilpotency']
    assert report['summary']['pass'] == 3
    assert 'time' not in report['results'][0]


def test_theorems_unknown_check(capsys):
    code, _, err = run(capsys, 'theorems', '--filter', 'no-such-check')
    assert code == 2
    assert 'no-such-check' in err


def test_theorems_store_results(capsys, tmp_path):
    corpus = str(tmp_path / 'corpus')
    db = str(tmp_path / 'results.db')
    run(capsys, 'generate', 'cyclic', '--dim', '2', '--field', 'Q', '--out', corpus)
    code, _, _ = run(capsys, 'theorems', corpus, '--filter', 'leibniz-identity', '--db', db)
    assert code == 0
    store = ResultsStore(db)
    runs = store.list_runs()
    assert len(runs) == 1
    assert store.status_counts(runs[0]) == {'pass': 1}


def test_argparse_usage_error():
    with pytest.raises(SystemExit) as info:
        main(['analyze'])
    assert info.value.code == 2


def test_verify_zero_dimensional(capsys, tmp_path):
    path = tmp_path / 'zero.json'
    path.write_text('{"field": {"kind": "Fp", "p": 7}, "dim": 0}')
    assert run(capsys, 'verify', str(path))[0] == 0


def test_cartan_gated_on_small_field(capsys, tmp_path):
    out_dir = str(tmp_path / 'gen')
    run(capsys, 'generate', 'four-dim-example', '--field', 'F3', '--out', out_dir)
    code, _, err = run(capsys, 'analyze', os.path.join(out_dir, 'four_dim_example.json'), '--cartan')
    assert code == 3
    assert 'fewer than 5 elements' in err


def test_theorems_names_bad_corpus_file(capsys, tmp_path, bad_file):
    corpus = tmp_path / 'corpus'
    corpus.mkdir()
    (corpus / 'broken.json').write_text(open(bad_file, encoding='utf-8').read())
    code, _, err = run(capsys, 'theorems', str(corpus))
    assert code == 2
    assert 'broken.json' in err


def test_full_theorems_report_is_byte_identical(capsys):
    first_code, first, _ = run(capsys, '--json', 'theorems')
    second_code, second, _ = run(capsys, '--json', 'theorems')
    assert first_code == second_code == 0
    assert first == second
    report = json.loads(first)
    assert report['summary']['fail'] == 0
    assert report['summary']['error'] == 0


def test_theorems_filter_runs_only_minimal_engel_suite(capsys, tmp_path):
    corpus = str(tmp_path / 'corpus')
    run(capsys, 'generate', 'four-dim-example', '--field', 'F5', '--out', corpus)
    code, out, _ = run(capsys, '--json', 'theorems', corpus, '--filter', 'minimal-engel-cartan')
    assert code == 0
    report = json.loads(out)
    assert report['checks'] == ['minimal-engel-cartan']
    assert [r['check'] for r in report['results']] == ['minimal-engel-cartan']
    assert report['results'][0]['status'] == 'pass'
