import argparse
import io
import json

import pandas as pd
import pytest

from boolmac.cli import main
from boolmac.cli import parse_decoder
from boolmac.cli import parse_int_list
from boolmac.codebook import load


def test_bound(capsys):
    assert main(['bound', '-N', '500', '-K', '3', '-C', '10']) == 0
    record = json.loads(capsys.readouterr().out)
    assert record['lemma1_T'] == 37
    assert record['lemma2_T'] == 37
    assert 'error_probability_bound' not in record


def test_bound_with_length(capsys):
    assert main(['bound', '-N', '500', '-K', '3', '-C', '10', '--delta', '0.1', '-T', '200']) == 0
    record = json.loads(capsys.readouterr().out)
    assert record['lemma2_T'] == 41
    assert 0.0 <= record['error_probability_bound'] <= 1.0


def test_gen(tmp_path):
    path = str(tmp_path / 'book.txt')
    assert main(['gen', '-N', '20', '-K', '2', '-C', '2', '-T', '30', '--seed', '1', '--out', path]) == 0
    with open(path) as fp:
        codebook = load(fp)
    assert codebook.params.n_sensors == 20
    assert codebook.params.seed == 1
    assert codebook.bits.shape == (40, 30)


def test_gen_subbins_from_delta(tmp_path):
    path = str(tmp_path / 'book.txt')
    assert main(['gen', '-N', '5', '-K', '3', '-C', '1', '-T', '130', '--delta', '0.1', '--seed', '1',
                 '--out', path]) == 0
    with open(path) as fp:
        assert load(fp).params.n_subcodewords == 32


def test_simulate(tmp_path, capsys):
    config = tmp_path / 'session.json'
    config.write_text(json.dumps({'activation': {'entries': [[3, 1], [40, 0]]}}))
    assert main(['simulate', '-N', '50', '-K', '2', '-C', '2', '-T', '100', '--seed', '2',
                 '--config', str(config)]) == 0
    lines = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    summary = lines[-1]
    assert summary['summary']
    assert [e[:2] for e in summary['truth']] == [[3, 1], [40, 0]]
    assert summary['success']
    assert summary['rounds_used'] == len(lines) - 1 == 1
    assert lines[0]['participants'] == [3, 40]


def test_library_errors_exit_2(capsys):
    code = main(['simulate', '-N', '20', '-K', '2', '-C', '2', '-T', '30', '--seed', '0', '--decoder', 'nope'])
    assert code == 2
    assert capsys.readouterr().err.startswith('boolmac: ')


def test_missing_code_flags():
    with pytest.raises(SystemExit) as e:
        main(['gen', '-N', '5', '--seed', '0'])
    assert e.value.code == 2


def test_cdf_csv(tmp_path):
    path = str(tmp_path / 'cdf.csv')
    assert main(['cdf', '-N', '20', '-K', '2', '-C', '2', '-T', '20:40:20', '--trials', '5', '--seed', '1',
                 '--out', path]) == 0
    frame = pd.read_csv(path)
    assert frame['code_length'].tolist() == [20, 40]
    assert (frame['trials'] == 5).all()


def test_sweep_bounds(capsys):
    assert main(['sweep', '--experiment', 'bounds', '-N', '100,200', '-K', '2', '--seed', '0']) == 0
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert frame['n_sensors'].tolist() == [100, 200]


def test_multihop(capsys):
    assert main(['multihop', '--clusters', '2', '--depth', '2', '--cluster-size', '5', '-K', '2',
                 '--trials', '5', '--seed', '1']) == 0
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert frame['scheme'].tolist() == ['combine_forward', 'encode_decode_forward']
    assert (frame['n_sensors'] == 10).all()


def test_parse_int_list():
    assert parse_int_list('60:70:5') == [60, 65, 70]
    assert parse_int_list('1:3') == [1, 2, 3]
    assert parse_int_list('30,35') == [30, 35]
    with pytest.raises(argparse.ArgumentTypeError):
        parse_int_list('1:5:0')
    with pytest.raises(argparse.ArgumentTypeError):
        parse_int_list('a,b')


def test_parse_decoder():
    assert parse_decoder('coma') == {'type': 'coma'}
    assert parse_decoder('{"type": "ml", "prefilter": false}') == {'type': 'ml', 'prefilter': False}
    with pytest.raises(argparse.ArgumentTypeError):
        parse_decoder('{"prefilter": false}')
    with pytest.raises(argparse.ArgumentTypeError):
        parse_decoder('{oops')


def test_multihop_default_sizing_recovers(capsys):
    assert main(['multihop', '--clusters', '3', '--depth', '2', '--cluster-size', '6', '-K', '3', '-C', '2',
                 '--trials', '40', '--seed', '2']) == 0
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert (frame['success_rate'] >= 0.9).all()
    assert (frame['sink_code_length'] >= 30).all()
