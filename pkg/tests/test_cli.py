import json
import shutil

import pytest

from causalabs.cli import main
from causalabs.modelio import FIXTURE_DIR, fixture_path, load_model


def _run(capsys, *argv, config='no-such-config.json'):
    code = main([str(arg) for arg in argv] + ['--config', str(config)])
    out, err = capsys.readouterr()
    return code, out, err


def _json(capsys, *argv):
    code, out, _ = _run(capsys, *argv, '--output', 'json')
    assert code == 0
    return json.loads(out)


M = fixture_path('model_M.json')
M_PRIME = fixture_path('model_Mprime.json')
ALPHA = fixture_path('abs_alpha.json')


class TestValidate:

    def test_valid_model(self, capsys):
        code, out, _ = _run(capsys, 'validate', M)
        assert code == 0
        assert out.strip() == 'ok: 3 variables'

    def test_violations(self, capsys, tmp_path):
        document = json.loads(M.read_text(encoding='utf-8'))
        document['mechanisms'][2]['matrix'][1] = [0.2, 0.6, 0.2, 0.7]
        path = tmp_path / 'bad.json'
        path.write_text(json.dumps(document), encoding='utf-8')
        code, out, _ = _run(capsys, 'validate', path)
        assert code == 1
        assert out.strip() == 'φ_C column 1 sums to 1.1, not 1 (column sum ≠ 1)'

    def test_schema_error(self, capsys, tmp_path):
        path = tmp_path / 'bad.json'
        path.write_text('{"format_version": "1.0", "variables": []}', encoding='utf-8')
        code, out, _ = _run(capsys, 'validate', path)
        assert code == 1
        assert 'mechanisms' in out

    def test_unparsable_document(self, capsys, tmp_path):
        path = tmp_path / 'bad.json'
        path.write_text('{"format_version": ', encoding='utf-8')
        code, _, err = _run(capsys, 'validate', path)
        assert code == 2
        assert err.startswith('error: line 1 column ')

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = _run(capsys, 'joint', tmp_path / 'nope.json')
        assert code == 2
        assert 'nope.json' in err


class TestDistributions:

    def test_joint_table(self, capsys):
        code, out, _ = _run(capsys, 'joint', M)
        lines = out.splitlines()
        assert code == 0
        assert lines[0].split() == ['E', 'S', 'C', 'P']
        assert lines[1].split() == ['0', '0', '0', '0.576000']
        assert lines[-1].split() == ['1', '1', '1', '0.056000']

    def test_precision(self, capsys):
        _, out, _ = _run(capsys, 'joint', M, '--precision', '2')
        assert out.splitlines()[1].split() == ['0', '0', '0', '0.58']

    def test_joint_json(self, capsys):
        document = _json(capsys, 'joint', M_PRIME)
        assert document['variables'] == ["S'", "C'"]
        assert document['outcomes'][1] == ['0', '1']
        assert document['probabilities'] == pytest.approx([0.176, 0.024, 0.304, 0.496])

    def test_marginal(self, capsys):
        document = _json(capsys, 'marginal', M, '--vars', 'S')
        assert document['probabilities'] == pytest.approx([0.76, 0.24])

    def test_conditional(self, capsys):
        document = _json(capsys, 'conditional', M, '--targets', 'S', '--given', 'C')
        assert document['rows'] == ['S=0', 'S=1']
        assert document['columns'] == ['C=0', 'C=1']
        assert document['matrix'][0] == pytest.approx([0.672 / 0.76, 0.088 / 0.24])

    def test_virtual(self, capsys):
        document = _json(capsys, 'virtual', M, '--from', 'S', '--to', 'C')
        assert document['matrix'] == pytest.approx([[0.88, 0.38], [0.12, 0.62]])

    def test_labels_with_separators(self, capsys, tmp_path):
        document = {
            'format_version': '1.0',
            'variables': [{'name': 'a=b', 'outcomes': ['low,ish', 'high']}],
            'mechanisms': [{'target': 'a=b', 'parents': [], 'matrix': [[0.3], [0.7]]}],
        }
        path = tmp_path / 'labels.json'
        path.write_text(json.dumps(document), encoding='utf-8')

        code, out, _ = _run(capsys, 'joint', path)
        lines = out.splitlines()
        assert code == 0
        assert lines[0].split() == ['a=b', 'P']
        assert lines[1].split() == ['low,ish', '0.300000']
        assert lines[2].split() == ['high', '0.700000']

        result = _json(capsys, 'joint', path)
        assert result['variables'] == ['a=b']
        assert result['outcomes'] == [['low,ish'], ['high']]

    def test_unknown_variable(self, capsys):
        code, _, err = _run(capsys, 'marginal', M, '--vars', 'X')
        assert code == 1
        assert "unknown variable 'X'" in err


class TestIntervene:

    def test_json_is_a_model_document(self, capsys):
        code, out, _ = _run(capsys, 'intervene', M, '--do', 'S=1', '--output', 'json')
        assert code == 0
        scm = load_model(out)
        assert scm.parents('S') == ()
        assert scm.mechanism('S').matrix.tolist() == [[0.0], [1.0]]

    def test_table(self, capsys):
        code, out, _ = _run(capsys, 'intervene', M, '--do', 'E=0', '--do', 'S=0')
        rows = [line.split() for line in out.splitlines()[1:]]
        assert code == 0
        assert rows[0] == ['0', '0', '0', '0.900000']
        assert rows[1] == ['0', '0', '1', '0.100000']

    def test_unknown_outcome(self, capsys):
        code, _, err = _run(capsys, 'intervene', M, '--do', 'S=7')
        assert code == 1
        assert 'unknown outcome' in err

    def test_malformed_assignment(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            _run(capsys, 'intervene', M, '--do', 'S')
        assert excinfo.value.code == 2


class TestAbstractions:

    def test_assess_json(self, capsys):
        document = _json(capsys, 'assess', M, M_PRIME, ALPHA)
        assert document['e'] == pytest.approx(0.0, abs=1e-9)
        assert document['i'] == pytest.approx(0.4432, abs=5e-4)
        assert document['objective'] == pytest.approx(document['e'] + document['i'])

    def test_assess_lambda(self, capsys):
        document = _json(capsys, 'assess', M, M_PRIME, ALPHA, '--lambda', '0')
        assert document['lambda'] == 0.0
        assert document['objective'] == pytest.approx(0.0, abs=1e-9)

    def test_assess_table(self, capsys):
        code, out, _ = _run(capsys, 'assess', M, fixture_path('model_Mdprime.json'),
                            fixture_path('abs_alpha_dprime.json'))
        assert code == 0
        assert 'do(S=0)' in out
        assert "S''" in out

    def test_negative_lambda(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            _run(capsys, 'assess', M, M_PRIME, ALPHA, '--lambda', '-1')
        assert excinfo.value.code == 2

    def test_inverse(self, capsys):
        document = _json(capsys, 'inverse', M, M_PRIME, ALPHA)
        assert len(document['rows']) == 8
        assert document['columns'][0] == "S'=0,C'=0"
        assert document['matrix'][0] == pytest.approx([0.5, 0.0, 0.0, 0.0])
        assert document['reconstruction'] == pytest.approx(
            [0.088, 0.012, 0.152, 0.248, 0.088, 0.012, 0.152, 0.248])


class TestLearn:

    def test_json(self, capsys):
        document = _json(capsys, 'learn', fixture_path('problem_completion.json'))
        assert document['candidates_evaluated'] == 4
        assert document['exhaustive'] is True
        assert [c['report']['rank'] for c in document['ranked']] == [1, 2, 3, 4]
        assert document['ranked'][0]['report']['objective'] == pytest.approx(0.0, abs=1e-9)

    def test_overrides(self, capsys):
        document = _json(capsys, 'learn', '--problem', fixture_path('problem_completion.json'),
                         '--lambda', '1', '--top-k', '2', '--budget', '3')
        assert document['lambda'] == 1.0
        assert document['candidates_evaluated'] == 3
        assert document['exhaustive'] is False
        assert len(document['ranked']) == 2

    def test_pareto_and_sweep(self, capsys):
        code, out, _ = _run(capsys, 'learn', fixture_path('problem_completion.json'),
                            '--pareto', '--sweep', '0,1')
        assert code == 0
        assert 'candidates evaluated: 4 (exhaustive)' in out
        assert 'pareto front' in out
        assert 'lambda sweep' in out

    def test_sweep_json(self, capsys):
        document = _json(capsys, 'learn', fixture_path('problem_completion.json'), '--sweep', '0,0.5')
        assert [row['lambda'] for row in document['sweep']] == [0.0, 0.5]
        assert document['sweep'][0]['objective'] == pytest.approx(0.0, abs=1e-9)

    def test_inconsistent_problem(self, capsys, tmp_path):
        document = json.loads(fixture_path('problem_assessment.json').read_text(encoding='utf-8'))
        document['base_ref'] = str(M)
        document['givens']['high_ref'] = str(M_PRIME)
        document['givens']['outcome_maps'][0]['matrix'] = [[1, 1], [0, 0]]
        path = tmp_path / 'problem.json'
        path.write_text(json.dumps(document), encoding='utf-8')
        code, _, err = _run(capsys, 'learn', path)
        assert code == 1
        assert err.startswith('error: ')

    @pytest.mark.parametrize('argv', [
        ['learn'],
        ['learn', 'a.json', '--problem', 'b.json'],
        ['learn', 'a.json', '--sweep', '1,x'],
        ['learn', 'a.json', '--top-k', '0'],
    ])
    def test_usage_errors(self, capsys, argv):
        with pytest.raises(SystemExit) as excinfo:
            _run(capsys, *argv)
        assert excinfo.value.code == 2


class TestReportPaper:

    def test_bundled_fixtures(self, capsys):
        code, out, _ = _run(capsys, 'report-paper')
        assert code == 0
        assert out.strip().endswith('24/24 checks passed')

    def test_json(self, capsys):
        document = _json(capsys, 'report-paper', '--lambda', '0')
        assert document['lambda'] == 0.0
        assert all(check['passed'] for check in document['checks'])

    def test_perturbed_fixture(self, capsys, tmp_path):
        directory = tmp_path / 'fixtures'
        shutil.copytree(FIXTURE_DIR, directory)
        path = directory / 'model_Mdprime.json'
        document = json.loads(path.read_text(encoding='utf-8'))
        document['mechanisms'][1]['matrix'] = [[0.88, 0.38], [0.12, 0.62]]
        path.write_text(json.dumps(document), encoding='utf-8')
        code, out, _ = _run(capsys, 'report-paper', '--fixtures', directory)
        assert code == 1
        assert '22/24 checks passed' in out
        assert 'FAIL' in out


def test_config_file_is_used(capsys, tmp_path):
    path = tmp_path / 'config.json'
    path.write_text(json.dumps({'precision': 3}), encoding='utf-8')
    _, out, _ = _run(capsys, 'joint', M, config=path)
    assert out.splitlines()[1].split() == ['0', '0', '0', '0.576']


def test_bad_config_value(capsys, tmp_path):
    path = tmp_path / 'config.json'
    path.write_text(json.dumps({'top_k': 'all'}), encoding='utf-8')
    code, _, err = _run(capsys, 'joint', M, config=path)
    assert code == 2
    assert 'top_k' in err


def test_unknown_command(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(['simulate'])
    assert excinfo.value.code == 2
