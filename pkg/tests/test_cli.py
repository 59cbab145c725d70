import json

import pandas as pd

from app import cli


def test_config_command(invoke):
    result, payload = invoke('config')
    assert result.exit_code == 0
    assert set(payload['data']) >= {'ring', 'bound', 'seed', 'workers'}


class TestFreehedra:

    def test_fvector(self, invoke, tmp_path):
        csv_path = tmp_path / 'f.csv'
        result, payload = invoke('freehedra', 'fvector', 3, '--csv', csv_path)
        assert result.exit_code == 0
        assert payload['data']['f_vector'] == [12, 18, 8, 1]
        assert payload['data']['codim_one'] == 8
        assert pd.read_csv(csv_path)['n'].tolist() == [0, 1, 2, 3]

    def test_fvector_range_is_a_usage_error(self, runner):
        assert runner.invoke(cli, ['freehedra', 'fvector', '9']).exit_code == 2

    def test_diagonal(self, invoke):
        result, payload = invoke('freehedra', 'diagonal', 2)
        assert result.exit_code == 0
        assert payload['data']['count'] == 6

    def test_verify(self, invoke):
        result, payload = invoke('freehedra', 'verify', '--m', 1, '--n', 1)
        assert result.exit_code == 0
        assert payload['data']['verdict'] == 'pass'
        assert 'duration' not in payload['data']

    def test_verify_with_fault_exits_one(self, invoke):
        result, payload = invoke('freehedra', 'verify', '--m', 1, '--n', 1, '--fault', 'eta_to_front')
        assert result.exit_code == 1
        assert payload['data']['verdict'] == 'fail'
        assert payload['data']['witnesses']

    def test_verify_empty_table(self, invoke, json_file):
        path = json_file('empty.json', {'elements': []})
        result, payload = invoke('freehedra', 'verify', '--table', path)
        assert result.exit_code == 0
        assert payload['data']['verdict'] == 'pass'

    def test_malformed_table(self, invoke, json_file):
        path = json_file('bad.json', {'d0': {}})
        result, payload = invoke('freehedra', 'verify', '--table', path)
        assert result.exit_code == 2
        assert not payload['success']
        assert 'elements' in payload['error']

    def test_svg(self, invoke, tmp_path):
        result, payload = invoke('freehedra', 'svg', 2, '--output-dir', tmp_path)
        assert result.exit_code == 0
        assert len(payload['data']['files']) == 3
        assert (tmp_path / 'freehedron_2.svg').exists()

    def test_svg_beyond_three(self, invoke, tmp_path):
        result, payload = invoke('freehedra', 'svg', 4, '--output-dir', tmp_path)
        assert result.exit_code == 2
        assert not payload['success']


class TestLoopModel:

    def test_identify(self, invoke):
        result, payload = invoke('loopmodel', 'identify', 's2', '--bound', 4)
        assert result.exit_code == 0
        assert payload['data']['verdict'] == 'pass'
        assert payload['data']['details']['cells'] > 0

    def test_identify_with_sign_fault(self, invoke):
        result, payload = invoke('loopmodel', 'identify', 's2', '--bound', 4, '--fault', 'boundary_sign')
        assert result.exit_code == 1
        assert payload['data']['verdict'] == 'fail'

    def test_unknown_space(self, invoke):
        result, payload = invoke('loopmodel', 'identify', 'nowhere', '--bound', 3)
        assert result.exit_code == 2
        assert 'nowhere' in payload['error']

    def test_cartier_homology(self, invoke):
        result, payload = invoke('loopmodel', 'homology', 's2', '--bound', 3)
        assert result.exit_code == 0
        assert payload['data']['ring'] == 'Z'
        assert payload['data']['groups'][0] == {'degree': 0, 'rank': 1, 'torsion': []}

    def test_homology_of_json_complex(self, invoke, json_file, tmp_path):
        path = json_file('interval.json', {
            'degrees': {'0': ['a', 'b'], '1': ['e']},
            'differentials': {'1': [[0, 0, -1], [1, 0, 1]]}
        })
        csv_path = tmp_path / 'h.csv'
        result, payload = invoke('loopmodel', 'homology', '--complex', path, '--csv', csv_path)
        assert result.exit_code == 0
        assert payload['data']['groups'] == [
            {'degree': 0, 'rank': 1, 'torsion': []},
            {'degree': 1, 'rank': 0, 'torsion': []},
        ]
        assert pd.read_csv(csv_path)['rank'].tolist() == [1, 0]

    def test_complex_must_square_to_zero(self, invoke, json_file):
        path = json_file('bad.json', {
            'degrees': {'0': ['a'], '1': ['e'], '2': ['f']},
            'differentials': {'1': [[0, 0, 1]], '2': [[0, 0, 1]]}
        })
        result, payload = invoke('loopmodel', 'homology', '--complex', path)
        assert result.exit_code == 2
        assert 'square to zero' in payload['error']

    def test_homology_needs_one_source(self, invoke):
        result, payload = invoke('loopmodel', 'homology')
        assert result.exit_code == 2


class TestHochschild:

    def test_ring_of_algebra(self, invoke, json_file):
        path = json_file('sx.json', {'generators': [{'label': 'x', 'degree': 2}]})
        result, payload = invoke('hochschild', 'ring', '--algebra', path, '--bound', 4)
        assert result.exit_code == 0
        assert payload['data']['poincare'] == [1, 1, 1, 1, 1]
        assert payload['data']['flags']['well_defined']

    def test_ring_needs_one_source(self, invoke):
        result, payload = invoke('hochschild', 'ring')
        assert result.exit_code == 2
        assert not payload['success']

    def test_theorem1(self, invoke):
        result, payload = invoke('hochschild', 'theorem1', '--generator', 'x:2', '--bound', 6)
        assert result.exit_code == 0
        assert payload['data']['verdict'] == 'pass'

    def test_theorem1_odd_generator_over_integers(self, invoke):
        result, payload = invoke('hochschild', 'theorem1', '--generator', 'x:3', '--ring', 'Z', '--bound', 4)
        assert result.exit_code == 2
        assert not payload['success']

    def test_theorem1_bad_generator(self, invoke):
        result, payload = invoke('hochschild', 'theorem1', '--generator', 'x:')
        assert result.exit_code == 2
        assert 'generators' in payload['error']

    def test_example1(self, invoke):
        result, payload = invoke('hochschild', 'example1', '--bound', 4)
        assert result.exit_code == 0
        assert payload['data']['ring_distinguished']
        assert not payload['data']['additive_match']


class TestSuite:

    def test_list(self, invoke):
        result, payload = invoke('suite', 'list')
        assert 'theorem1' in payload['data']
        assert 'lambda_chain_map' in payload['data']

    def test_run_writes_json_and_csv(self, invoke, tmp_path):
        json_path, csv_path = tmp_path / 'out.json', tmp_path / 'out.csv'
        result, payload = invoke('suite', 'run', '--check', 'f_vectors', '--check', 'diagonal_display',
                                 '--bound', 3, '--json', json_path, '--csv', csv_path)
        assert result.exit_code == 0
        assert payload['success']
        assert payload['summary'] == {'total': 3, 'passed': 3, 'failed': []}
        assert json.loads(json_path.read_text()) == payload
        assert all('duration' not in c for c in payload['data'])
        assert pd.read_csv(csv_path)['verdict'].tolist() == ['pass', 'pass', 'pass']

    def test_report_reads_csv_back(self, invoke, tmp_path):
        csv_path = tmp_path / 'out.csv'
        invoke('suite', 'run', '--check', 'f_vectors', '--bound', 3, '--csv', csv_path)
        result, payload = invoke('suite', 'report', csv_path)
        assert result.exit_code == 0
        assert payload['data'] == {'total': 1, 'passed': 1, 'failed': []}

    def test_report_of_failing_run_exits_one(self, invoke, tmp_path):
        csv_path = tmp_path / 'out.csv'
        invoke('suite', 'run', '--check', 'freehedra_identities', '--bound', 2, '--fault', 'eta_to_front',
               '--csv', csv_path)
        result, payload = invoke('suite', 'report', csv_path)
        assert result.exit_code == 1
        assert payload['data']['failed'] == ['freehedra_identities']

    def test_report_rejects_bad_csv(self, invoke, tmp_path):
        csv_path = tmp_path / 'bad.csv'
        csv_path.write_text('name,params\nx,{}\n')
        result, payload = invoke('suite', 'report', csv_path)
        assert result.exit_code == 2
        assert 'verdict' in payload['error']

    def test_output_is_byte_identical(self, runner):
        args = ['suite', 'run', '--check', 'f_vectors', '--check', 'loop_model', '--space', 's2', '--bound', 3,
                '--workers', 2]
        args = [str(a) for a in args]
        assert runner.invoke(cli, args).output == runner.invoke(cli, args).output

    def test_timings(self, invoke):
        result, payload = invoke('suite', 'run', '--check', 'f_vectors', '--bound', 3, '--timings')
        assert 'duration' in payload['data'][0]

    def test_fault_exits_one(self, invoke):
        result, payload = invoke('suite', 'run', '--check', 'freehedra_identities', '--bound', 2,
                                 '--fault', 'eta_to_front')
        assert result.exit_code == 1
        assert not payload['success']
        assert payload['summary']['failed'] == ['freehedra_identities']

    def test_unknown_check_exits_two(self, invoke):
        result, payload = invoke('suite', 'run', '--check', 'moon_phase')
        assert result.exit_code == 2
        assert 'moon_phase' in payload['error']

    def test_empty_config(self, invoke, json_file):
        result, payload = invoke('suite', 'run', '--config', json_file('empty.json', {'checks': []}))
        assert result.exit_code == 0
        assert payload['data'] == []

    def test_flags_override_config(self, invoke, json_file):
        path = json_file('config.json', {'checks': ['f_vectors'], 'bound': 40})
        result, payload = invoke('suite', 'run', '--config', path, '--bound', 3)
        assert result.exit_code == 0
        assert payload['data'][0]['params'] == {'max_n': 3}
