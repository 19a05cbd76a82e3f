import json
import re

import pytest

from graph_wiener.cli import main
from graph_wiener.settings import load_settings


def gen_grid(tmp_path, rows=4, cols=4, name='grid.txt'):
    path = tmp_path / name
    assert main(['graph-gen', '--kind', 'grid', '--rows', str(rows), '--cols', str(cols), '--out', str(path)]) == 0
    return path


def write_config(tmp_path, **overrides):
    data = {
        'name': 'cli',
        'graphs': [{'kind': 'grid', 'rows': 4, 'cols': 4}],
        'noise': [0.3],
        'methods': ['unc', 'pre'],
        'trials': 2,
        'base_seed': 3,
    }
    data.update(overrides)
    path = tmp_path / 'config.json'
    path.write_text(json.dumps(data))
    return path


def parse_mse(text):
    match = re.search(r'empirical_mse=(\S+) analytic_mse=(\S+)', text)
    return float(match.group(1)), float(match.group(2))


# ---------- graph-gen ----------

def test_graph_gen_grid(tmp_path, capsys):
    gen_grid(tmp_path, 2, 2)
    assert 'vertices=4 edges=4' in capsys.readouterr().out


def test_graph_gen_is_deterministic(tmp_path):
    a, b = tmp_path / 'a.txt', tmp_path / 'b.txt'
    for path in (a, b):
        assert main(['graph-gen', '--kind', 'er', '--n', '64', '--p', '0.3', '--seed', '7', '--out', str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_graph_gen_usage_errors(tmp_path):
    out = str(tmp_path / 'g.txt')
    assert main(['graph-gen', '--kind', 'sensor', '--out', out]) == 2
    assert main(['graph-gen', '--n', '10', '--out', out]) == 2
    assert main(['graph-gen', '--kind', 'ring', '--n', '10', '--out', out]) == 2


# ---------- kernels-dump ----------

def test_kernels_dump_cosine(tmp_path):
    graph = gen_grid(tmp_path)
    out = tmp_path / 'cos.csv'
    assert main(['kernels-dump', '--graph', str(graph), '--kernel', 'cosine', '--out', str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == 'index,lambda,value'
    assert lines[1] == '0,0.0,1.0'
    assert len(lines) == 17


def test_kernels_dump_fullband_to_stdout(tmp_path, capsys):
    graph = gen_grid(tmp_path)
    capsys.readouterr()
    assert main(['kernels-dump', '--graph', str(graph), '--kernel', 'fullband']) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[-1].endswith(',1.0')
    assert lines[1].endswith(',2.0')


def test_kernels_dump_unknown_kernel(tmp_path):
    graph = gen_grid(tmp_path)
    assert main(['kernels-dump', '--graph', str(graph), '--kernel', 'sinc']) == 2


def test_kernels_dump_missing_graph(tmp_path):
    assert main(['kernels-dump', '--graph', str(tmp_path / 'none.txt'), '--kernel', 'cosine']) == 2


# ---------- recover ----------

def test_recover_identity_is_exact(tmp_path, capsys):
    graph = gen_grid(tmp_path)
    out = tmp_path / 'rec.csv'
    capsys.readouterr()
    code = main(['recover', '--graph', str(graph), '--domain', 'vertex', '--method', 'identity', '--out', str(out)])
    assert code == 0
    assert parse_mse(capsys.readouterr().out) == (0.0, 0.0)
    lines = out.read_text().splitlines()
    assert lines[0] == 'index,x,y,x_tilde'
    assert len(lines) == 17


def test_recover_bad_ratio(tmp_path):
    graph = gen_grid(tmp_path, 16, 16)
    code = main(['recover', '--graph', str(graph), '--domain', 'spectral', '--method', 'pre',
                 '--ratio', '3', '--out', str(tmp_path / 'rec.csv')])
    assert code == 2


def test_recover_negative_noise(tmp_path):
    graph = gen_grid(tmp_path)
    code = main(['recover', '--graph', str(graph), '--domain', 'spectral', '--method', 'pre',
                 '--sigma2', '-1', '--out', str(tmp_path / 'rec.csv')])
    assert code == 2


@pytest.mark.parametrize('domain', ['vertex', 'spectral'])
def test_recover_unconstrained_beats_predefined(tmp_path, capsys, domain):
    graph = gen_grid(tmp_path, 8, 8)
    analytic = {}
    for method in ('unc', 'pre'):
        capsys.readouterr()
        code = main(['recover', '--graph', str(graph), '--domain', domain, '--method', method,
                     '--sigma2', '0.3', '--seed', '4', '--out', str(tmp_path / f'{method}.csv')])
        assert code == 0
        analytic[method] = parse_mse(capsys.readouterr().out)[1]
    assert analytic['unc'] <= analytic['pre'] * (1 + 1e-5)


def test_recover_is_deterministic(tmp_path):
    graph = gen_grid(tmp_path)
    outs = [tmp_path / 'r1.csv', tmp_path / 'r2.csv']
    for out in outs:
        assert main(['recover', '--graph', str(graph), '--domain', 'vertex', '--method', 'unc',
                     '--sigma2', '0.3', '--seed', '9', '--out', str(out)]) == 0
    assert outs[0].read_bytes() == outs[1].read_bytes()


def test_recover_subspace_method(tmp_path, capsys):
    graph = gen_grid(tmp_path, 8, 8)
    capsys.readouterr()
    code = main(['recover', '--graph', str(graph), '--domain', 'spectral', '--method', 'sub',
                 '--sigma2', '0.3', '--out', str(tmp_path / 'sub.csv')])
    assert code == 0
    assert 'method=sub' in capsys.readouterr().out

    generator = tmp_path / 'a.csv'
    generator.write_text('1,0\n0,1\n')
    code = main(['recover', '--graph', str(graph), '--domain', 'spectral', '--method', 'sub',
                 '--subspace-generator', str(generator), '--out', str(tmp_path / 'sub.csv')])
    assert code == 2



# ---------- experiment ----------

def test_experiment_empty_methods(tmp_path):
    config = write_config(tmp_path, methods=[])
    assert main(['experiment', '--config', str(config), '--no-progress']) == 2


def test_experiment_bad_json(tmp_path):
    config = tmp_path / 'bad.json'
    config.write_text('{"graphs": ')
    assert main(['experiment', '--config', str(config), '--no-progress']) == 2


def test_experiment_is_deterministic(tmp_path):
    config = write_config(tmp_path)
    outs = [tmp_path / 'a.csv', tmp_path / 'b.csv']
    for out, workers in zip(outs, ('1', '4')):
        assert main(['experiment', '--config', str(config), '--out', str(out),
                     '--workers', workers, '--no-progress']) == 0
    assert outs[0].read_bytes() == outs[1].read_bytes()
    assert len(outs[0].read_text().splitlines()) == 1 + 2 * 2


def test_experiment_extra_columns(tmp_path, capsys):
    config = write_config(tmp_path, domains=['spectral'])
    capsys.readouterr()
    assert main(['experiment', '--config', str(config), '--extra', '--no-progress']) == 0
    header = capsys.readouterr().out.splitlines()[0]
    assert header == 'graph,noise,band,domain,method,mse_db,std_db,trials,analytic_db,failed'


def test_experiment_all_trials_failed(tmp_path):
    config = write_config(tmp_path, methods=['pre'], max_condition=1.001)
    assert main(['experiment', '--config', str(config), '--no-progress']) == 3


# ---------- selftest / settings ----------

def test_selftest_passes(capsys):
    assert main(['selftest']) == 0
    assert 'checks passed' in capsys.readouterr().out


def test_missing_subcommand():
    assert main([]) == 2


def test_load_settings_from_env(monkeypatch):
    monkeypatch.setenv('GRAPH_WIENER_LOG_LEVEL', 'debug')
    monkeypatch.setenv('GRAPH_WIENER_WORKERS', '3')
    monkeypatch.setenv('GRAPH_WIENER_PROGRESS', 'off')
    settings = load_settings()
    assert settings.log_level == 'DEBUG'
    assert settings.workers == 3
    assert settings.progress is False


def test_load_settings_ignores_bad_workers(monkeypatch):
    monkeypatch.setenv('GRAPH_WIENER_WORKERS', 'many')
    assert load_settings().workers == 1
