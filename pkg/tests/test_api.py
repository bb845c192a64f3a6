#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Tests de l'API HTTP
"""

from crnldp.services import network_service


def ex2_text():
    return network_service.builtin_text('ex2')


def test_health(client):
    response = client.get('/health')
    assert response.status_code == 200
    assert response.json['status'] == 'healthy'
    assert response.json['builtin_networks'] == 15


def test_validate_ok(client):
    response = client.post('/api/validate', json={'network': ex2_text()})
    assert response.status_code == 200
    assert response.json['validation']['ok']
    assert response.json['network']['species'] == ['A', 'B']


def test_validate_reports_issues(client):
    response = client.post('/api/validate', json={'network': "A -> B ; k = 0\n"})
    assert response.status_code == 200
    assert not response.json['validation']['ok']
    assert response.json['network'] is None


def test_validate_requires_network(client):
    assert client.post('/api/validate', json={}).status_code == 400


def test_analyze(client):
    response = client.post('/api/analyze', json={'network': ex2_text()})
    assert response.status_code == 200
    report = response.json
    assert report['ase'] is True
    assert report['schema_version'] == 1
    assert report['siphons']


def test_analyze_invalid_network(client):
    response = client.post('/api/analyze', json={'network': "A -> A ; k = 1\n"})
    assert response.status_code == 400
    assert 'validation' in response.json


def test_analyze_syntax_error(client):
    response = client.post('/api/analyze', json={'network': "A -> B\n"})
    assert response.status_code == 400


def test_examples(client):
    response = client.get('/api/examples')
    assert response.status_code == 200
    assert response.json['count'] == 15


def test_example_detail(client):
    response = client.get('/api/examples/ex2')
    assert response.status_code == 200
    assert response.json['text'] == ex2_text()
    assert response.json['report']['ase'] is True
    assert client.get('/api/examples/absent').status_code == 404


def test_simulate_ode(client):
    response = client.post('/api/simulate', json={
        'network': "species: A\n2A <-> 0 ; kf = 1, kr = 1\n", 'x0': [2.0], 'T': 1.0})
    assert response.status_code == 200
    assert response.json['species'] == ['A']
    assert abs(response.json['states'][-1][0] - 1.0) < 0.1


def test_simulate_ssa(client):
    body = {'network': ex2_text(), 'x0': [1.0, 1.0], 'T': 0.5, 'mode': 'ssa', 'v': 20, 'seed': 4}
    first = client.post('/api/simulate', json=body)
    second = client.post('/api/simulate', json=body)
    assert first.status_code == 200
    assert first.json == second.json
    assert first.json['records'][0]['counts'] == [20, 20]


def test_simulate_rejects_bad_requests(client):
    text = ex2_text()
    assert client.post('/api/simulate', json={
        'network': text, 'x0': [1.0, 1.0], 'T': 1.0, 'mode': 'ssa', 'v': 1e5}).status_code == 400
    assert client.post('/api/simulate', json={
        'network': text, 'x0': [1.0, 1.0], 'T': 1.0, 'mode': 'tau'}).status_code == 400
    assert client.post('/api/simulate', json={
        'network': text, 'x0': [1.0], 'T': 1.0}).status_code == 400


def test_status_and_cache(client):
    client.post('/api/analyze', json={'network': ex2_text()})
    status = client.get('/api/status').json
    assert status['tool_version'] == '1.0.0'
    assert status['cache']['total_entries'] >= 1
    cleared = client.post('/api/cache/clear')
    assert cleared.status_code == 200
    assert client.get('/api/status').json['cache']['total_entries'] == 0


def test_unknown_route(client):
    response = client.get('/api/absent')
    assert response.status_code == 404
    assert 'error' in response.json
