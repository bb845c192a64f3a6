#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Interface en ligne de commande

Codes de sortie: 0 succès, 1 usage, 2 lecture/validation, 3 verdict négatif
avec --require-ase, 4 échec numérique. Les diagnostics vont sur stderr, les
données sur stdout ou dans le fichier demandé.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from config.config import get_config

from . import configure_logging
from .errors import NetworkValidationError, NumericalError
from .models import PathOptimizationProblem, WeightVector, validate
from .services import (
    dynamics_service, ldp_service, network_service, quasipotential_service, report_service,
)
from .utils.formatters import CSVFormatter, JSONFormatter, JSONLFormatter

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_VERDICT = 3
EXIT_NUMERICAL = 4


class _Parser(argparse.ArgumentParser):
    """argparse avec le code de sortie 1 pour les erreurs d'usage"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: erreur: {message}\n")


def _floats(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(',') if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"liste de nombres attendue: '{text}'")


def _domain(text: str):
    """'lo:hi,lo:hi,...' en bornes inférieures et supérieures"""
    lower, upper = [], []
    for part in text.split(','):
        lo, sep, hi = part.partition(':')
        if not sep:
            raise argparse.ArgumentTypeError(f"intervalle 'lo:hi' attendu: '{part}'")
        try:
            lower.append(float(lo))
            upper.append(float(hi))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bornes numériques attendues: '{part}'")
    return np.array(lower), np.array(upper)


def _emit(text: str, target: Optional[str]) -> None:
    if target:
        Path(target).write_text(text, encoding='utf-8')
        logger.info(f"Résultat écrit dans {target}")
    else:
        sys.stdout.write(text)
        if not text.endswith('\n'):
            sys.stdout.write('\n')


def _check_dimension(values, network, option: str):
    if len(values) != network.dimension:
        raise ValueError(f"{option}: {len(values)} valeurs pour {network.dimension} espèces")
    return values


# Sous-commandes

def cmd_validate(args) -> int:
    network = network_service.parse(network_service.source_text(args.file), check=False)
    report = validate(network)
    _emit(JSONFormatter.dumps(report.to_api_dict()), None)
    return EXIT_OK if report.ok else EXIT_INPUT


def cmd_analyze(args) -> int:
    network = network_service.resolve(args.file)
    weight = WeightVector.parse(args.a) if args.a else None
    report = report_service.analyze(network, weight, use_cache=False)
    _emit(JSONFormatter.dumps(report), args.json)
    if args.require_ase and not report['ase']:
        logger.warning("Le réseau n'est pas ASE")
        return EXIT_VERDICT
    return EXIT_OK


def cmd_simulate_ode(args) -> int:
    network = network_service.resolve(args.file)
    x0 = _check_dimension(args.x0, network, '--x0')
    trajectory = dynamics_service.integrate_ode(network, x0, args.T, rel_tol=args.tol)
    if args.dense:
        times = np.linspace(0.0, trajectory.times[-1], args.dense)
        rows = [[t] + list(x) for t, x in zip(times, trajectory.at(times))]
    else:
        rows = trajectory.rows()
    _emit(CSVFormatter.table(['t'] + list(network.species), rows), args.csv)
    return EXIT_OK


def cmd_simulate_ssa(args) -> int:
    network = network_service.resolve(args.file)
    x0 = _check_dimension(args.x0, network, '--x0')
    lines = []
    if args.trials == 1:
        path = dynamics_service.ssa_simulate(network, args.v, x0, args.T, args.seed, snap=True)
        lines.extend(JSONLFormatter.lines(path.records()))
    else:
        counts0 = dynamics_service.lattice_counts(args.v, x0, snap=True)
        tasks = [(network, float(args.v), counts0, args.T, args.seed, k,
                  get_config().SSA_MAX_JUMPS, False, None, None) for k in range(args.trials)]
        results = dynamics_service.run_tasks(tasks, args.threads)
        for k, (times, history, _, reason, _) in enumerate(results):
            lines.extend(JSONLFormatter.lines([{
                'trial': k, 'final_time': times[-1], 'final_counts': list(history[-1]),
                'stop_reason': reason,
            }]))
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_lyapunov(args) -> int:
    network = network_service.resolve(args.file)
    weight = WeightVector.parse(args.a) if args.a else WeightVector.ones(network.dimension)
    if weight.dimension != network.dimension:
        raise ValueError(f"--a: {weight.dimension} poids pour {network.dimension} espèces")
    if args.radii:
        radius = ldp_service.empirical_stability_radius(network, weight, args.radii, count=args.grid)
        _emit(JSONFormatter.dumps({'candidates': args.radii, 'rho0': radius}), args.csv)
        return EXIT_OK
    sweep = ldp_service.absorption_sweep(network, weight, args.log_radius, count=args.grid)
    header = [f"w{i + 1}" for i in range(network.dimension)] + ['sign', 'log_magnitude']
    rows = [list(w) + [s.sign, s.log_magnitude] for w, s in sweep]
    _emit(CSVFormatter.table(header, rows), args.csv)
    return EXIT_OK


def cmd_action(args) -> int:
    network = network_service.resolve(args.file)
    times, states = CSVFormatter.read_path(Path(args.path).read_text(encoding='utf-8'))
    if states.shape[1] != network.dimension:
        raise ValueError(f"Le chemin a {states.shape[1]} colonnes d'état pour {network.dimension} espèces")
    result = ldp_service.action(network, times, states)
    _emit(JSONFormatter.dumps(result.to_api_dict()), args.json)
    return EXIT_OK


def cmd_quasipotential(args) -> int:
    network = network_service.resolve(args.file)
    config = get_config()
    start = _check_dimension(args.start, network, '--from')
    end = _check_dimension(args.end, network, '--to')
    lower, upper = args.domain
    _check_dimension(lower, network, '--domain')
    problem = PathOptimizationProblem(
        start=start, end=end, domain_lower=lower, domain_upper=upper,
        n_points=args.n_points or config.QP_N_POINTS,
        restarts=args.restarts if args.restarts is not None else config.QP_RESTARTS,
        seed=args.seed, ball_radius=config.QP_BALL_RADIUS)
    estimate = quasipotential_service.minimize_action(network, problem)
    payload = estimate.to_api_dict()
    payload['path'] = estimate.path.to_api_dict()
    if args.oracle:
        birth, death = quasipotential_service.birth_death_rates(network)
        payload['birth_death_oracle'] = quasipotential_service.birth_death_quasipotential(
            birth, death, start[0], end[0])
    _emit(JSONFormatter.dumps(payload), args.json)
    return EXIT_OK


def cmd_examples(args) -> int:
    if args.dest:
        for path in network_service.export_builtins(args.dest):
            sys.stdout.write(f"{path}\n")
        return EXIT_OK
    for name in network_service.list_builtins():
        sys.stdout.write(f"{name}\t{network_service.describe_builtin(name)}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    config = get_config()
    parser = _Parser(prog='crnldp', description="Analyse topologique et grandes déviations "
                                                "des réseaux de réactions chimiques")
    parser.add_argument('--version', action='version', version=f"%(prog)s {config.APP_VERSION}")
    parser.add_argument('-v', '--verbose', action='store_true', help="journal détaillé sur stderr")
    sub = parser.add_subparsers(dest='command', required=True, parser_class=_Parser)

    p = sub.add_parser('validate', help="valide un fichier réseau")
    p.add_argument('file')
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser('analyze', help="siphons, propriété endotactique, ASE, constantes")
    p.add_argument('file')
    p.add_argument('--a', help="poids rationnels 'p/q,...'")
    p.add_argument('--json', help="fichier de sortie du rapport")
    p.add_argument('--require-ase', action='store_true', help="code 3 si le réseau n'est pas ASE")
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser('simulate-ode', help="intégration de l'EDO d'action de masse")
    p.add_argument('file')
    p.add_argument('--x0', type=_floats, required=True)
    p.add_argument('--T', type=float, required=True)
    p.add_argument('--tol', type=float, default=config.ODE_REL_TOL)
    p.add_argument('--dense', type=int, default=0, help="nombre de points de sortie régulièrement espacés")
    p.add_argument('--csv', help="fichier de sortie")
    p.set_defaults(handler=cmd_simulate_ode)

    p = sub.add_parser('simulate-ssa', help="algorithme de Gillespie (JSONL)")
    p.add_argument('file')
    p.add_argument('--v', type=float, required=True)
    p.add_argument('--x0', type=_floats, required=True)
    p.add_argument('--T', type=float, required=True)
    p.add_argument('--seed', type=int, required=True)
    p.add_argument('--trials', type=int, default=1)
    p.add_argument('--threads', type=int, default=config.THREADS)
    p.add_argument('--output', help="fichier de sortie")
    p.set_defaults(handler=cmd_simulate_ssa)

    p = sub.add_parser('lyapunov', help="signe de dU_a/dt sur une grille de directions")
    p.add_argument('file')
    p.add_argument('--a')
    p.add_argument('--log-radius', type=float, default=10.0)
    p.add_argument('--grid', type=int, default=720)
    p.add_argument('--radii', type=_floats, help="rayons log candidats pour ρ₀ empirique")
    p.add_argument('--csv', help="fichier de sortie")
    p.set_defaults(handler=cmd_lyapunov)

    p = sub.add_parser('action', help="action discrétisée d'un chemin CSV")
    p.add_argument('file')
    p.add_argument('--path', required=True)
    p.add_argument('--json', help="fichier de sortie")
    p.set_defaults(handler=cmd_action)

    p = sub.add_parser('quasipotential', help="minimisation de l'action entre deux points")
    p.add_argument('file')
    p.add_argument('--from', dest='start', type=_floats, required=True)
    p.add_argument('--to', dest='end', type=_floats, required=True)
    p.add_argument('--domain', type=_domain, required=True, help="'lo:hi,...' par espèce")
    p.add_argument('--n-points', type=int)
    p.add_argument('--restarts', type=int)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--oracle', action='store_true', help="intégrale de naissance-mort (d = 1)")
    p.add_argument('--json', help="fichier de sortie")
    p.set_defaults(handler=cmd_quasipotential)

    p = sub.add_parser('examples', help="réseaux intégrés")
    p.add_argument('--dest', help="répertoire où copier les fichiers .crn")
    p.set_defaults(handler=cmd_examples)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = get_config()
    configure_logging('DEBUG' if args.verbose else 'WARNING', config.LOG_FORMAT)

    try:
        return args.handler(args)
    except NetworkValidationError as e:
        for issue in e.report.issues:
            logger.error(f"{issue}")
        return EXIT_INPUT
    except NumericalError as e:
        logger.error(f"Échec numérique: {e}")
        return EXIT_NUMERICAL
    except (ValueError, OSError) as e:
        logger.error(f"{e}")
        return EXIT_INPUT
