#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Tests de l'interface en ligne de commande et de ses codes de sortie
"""

import json

import pytest

from crnldp.cli import main


def test_examples_lists_builtins(capsys):
    assert main(['examples']) == 0
    names = [line.split('\t')[0] for line in capsys.readouterr().out.splitlines()]
    assert 'ex2' in names
    assert 'schlogl_bistable' in names


def test_examples_export(tmp_path, capsys):
    assert main(['examples', '--dest', str(tmp_path / 'crn')]) == 0
    assert (tmp_path / 'crn' / 'tetra.crn').is_file()


def test_validate(tmp_path, capsys):
    assert main(['validate', 'ex2']) == 0
    assert json.loads(capsys.readouterr().out)['ok']

    invalid = tmp_path / 'zero.crn'
    invalid.write_text("A -> B ; k = 0\n", encoding='utf-8')
    assert main(['validate', str(invalid)]) == 2
    issues = json.loads(capsys.readouterr().out)['issues']
    assert issues[0]['code'] == 'nonpositive rate constant'

    broken = tmp_path / 'broken.crn'
    broken.write_text("A -> B\n", encoding='utf-8')
    assert main(['validate', str(broken)]) == 2


def test_analyze_writes_report(tmp_path):
    target = tmp_path / 'report.json'
    assert main(['analyze', 'ex2', '--json', str(target)]) == 0
    report = json.loads(target.read_text(encoding='utf-8'))
    assert report['ase'] is True
    assert report['tool_version'] == '1.0.0'


def test_analyze_require_ase(capsys):
    assert main(['analyze', 'ex31', '--require-ase']) == 3


def test_analyze_rejects_wrong_weight_dimension(capsys):
    assert main(['analyze', 'ex2', '--a', '1,2,3']) == 2


def test_simulate_ode_csv(capsys):
    assert main(['simulate-ode', 'dimer', '--x0', '2', '--T', '1']) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == 't,A'
    assert len(lines) > 2


def test_simulate_ode_dense_output(capsys):
    assert main(['simulate-ode', 'dimer', '--x0', '2', '--T', '1', '--dense', '11']) == 0
    assert len(capsys.readouterr().out.splitlines()) == 12


def test_simulate_ode_blow_up(capsys):
    assert main(['simulate-ode', 'explosive', '--x0', '1', '--T', '2']) == 4


def test_simulate_ode_dimension_mismatch(capsys):
    assert main(['simulate-ode', 'ex2', '--x0', '1', '--T', '1']) == 2


def test_simulate_ssa_is_deterministic(capsys):
    args = ['simulate-ssa', 'tetra', '--v', '20', '--x0', '1,1,1', '--T', '2', '--seed', '3']
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    record = json.loads(first.splitlines()[0])
    assert record == {'counts': [20, 20, 20], 'reaction': None, 't': 0.0}


def test_usage_errors():
    with pytest.raises(SystemExit) as excinfo:
        main(['simulate-ode', 'dimer', '--T', '1'])
    assert excinfo.value.code == 1
    with pytest.raises(SystemExit) as excinfo:
        main(['--version'])
    assert excinfo.value.code == 0


def test_action_of_equilibrium_path(tmp_path, capsys):
    path = tmp_path / 'path.csv'
    path.write_text("t,A\n0,1\n1,1\n2,1\n", encoding='utf-8')
    assert main(['action', 'dimer', '--path', str(path)]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result['finite']
    assert result['value'] == pytest.approx(0.0, abs=1e-9)


def test_quasipotential_same_point(capsys):
    assert main(['quasipotential', 'schlogl_bistable', '--from', '1', '--to', '1',
                 '--domain', '0.5:3.5', '--oracle']) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload['value'] == 0.0
    assert payload['birth_death_oracle'] == 0.0


def test_lyapunov_sweep(capsys):
    assert main(['lyapunov', 'ex2', '--log-radius', '100', '--grid', '90']) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == 'w1,w2,sign,log_magnitude'
    assert len(lines) == 91
    assert all(line.split(',')[2] == '-1' for line in lines[1:])
