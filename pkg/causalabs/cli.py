#!/usr/bin/env python3
"""
Command-line front end.

Exit codes: 0 success, 1 domain failure (invalid model, failed check,
inconsistent problem), 2 usage or I/O failure (unknown flags, missing
files, unparsable documents).
"""

import argparse
import dataclasses
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .abstraction import evaluate, global_inverse, reconstruct
from .config import DEFAULT_CONFIG, load_config
from .errors import CausalAbstractionError, ConfigError, ModelFormatError
from .log import configure_logging
from .modelio import (
    FIXTURE_DIR,
    dump_candidate,
    dump_model,
    json_number,
    load_abstraction_file,
    load_model_file,
    load_problem_file,
    parse_model,
)
from .report import run_checks
from .scm import (
    conditional,
    configuration_labels,
    decode_configuration,
    intervene,
    joint_distribution,
    marginal,
    validate,
    virtual_mechanism,
)
from .solver import lambda_sweep, pareto_front, solve

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FILE = 'config/causalabs.json'


# Output helpers

def _fmt(value, precision):
    return f'{value:.{precision}f}'


def _table(header, rows):
    widths = [max(len(str(cell)) for cell in column) for column in zip(header, *rows)]
    lines = ['  '.join(str(cell).ljust(width) for cell, width in zip(line, widths)).rstrip()
             for line in [header] + rows]
    return '\n'.join(lines)


def _json_value(value):
    if value is None:
        return None
    array = np.asarray(value, dtype=float)
    if array.ndim == 0:
        return json_number(float(array))
    return [_json_value(item) for item in array]


def _emit_json(document):
    print(json.dumps(document, indent=2, ensure_ascii=False))


def _outcomes(scm, names, count):
    return [list(decode_configuration(scm, names, k).values()) for k in range(count)]


def _emit_distribution(scm, names, vector, args):
    outcomes = _outcomes(scm, names, len(vector))
    if args.output == 'json':
        _emit_json({
            'variables': list(names),
            'outcomes': outcomes,
            'probabilities': [json_number(p) for p in vector],
        })
        return
    rows = [labels + [_fmt(p, args.precision)] for labels, p in zip(outcomes, vector)]
    print(_table(list(names) + ['P'], rows))


def _emit_matrix(row_labels, col_labels, matrix, args, title=None):
    if args.output == 'json':
        _emit_json({
            'rows': list(row_labels),
            'columns': list(col_labels),
            'matrix': [[json_number(x) for x in row] for row in matrix.tolist()],
        })
        return
    if title:
        print(title)
    rows = [[label] + [_fmt(x, args.precision) for x in row]
            for label, row in zip(row_labels, matrix.tolist())]
    print(_table([''] + list(col_labels), rows))


# Subcommands

def cmd_validate(args, config):
    try:
        scm = parse_model(Path(args.model).read_text(encoding='utf-8'))
    except ModelFormatError as e:
        if e.is_parse_error:
            raise
        print(e)
        return 1
    violations = validate(scm)
    for violation in violations:
        print(violation)
    if violations:
        return 1
    print(f'ok: {len(scm.variables)} variables')
    return 0


def cmd_joint(args, config):
    scm = load_model_file(args.model)
    _emit_distribution(scm, scm.variable_names, joint_distribution(scm), args)
    return 0


def cmd_marginal(args, config):
    scm = load_model_file(args.model)
    _emit_distribution(scm, args.vars, marginal(scm, args.vars), args)
    return 0


def cmd_conditional(args, config):
    scm = load_model_file(args.model)
    matrix = conditional(scm, args.targets, args.given)
    _emit_matrix(configuration_labels(scm, args.targets), configuration_labels(scm, args.given), matrix, args)
    return 0


def cmd_virtual(args, config):
    scm = load_model_file(args.model)
    matrix = virtual_mechanism(scm, args.sources, args.targets)
    _emit_matrix(configuration_labels(scm, args.targets), configuration_labels(scm, args.sources), matrix, args)
    return 0


def cmd_intervene(args, config):
    scm = load_model_file(args.model)
    intervened = intervene(scm, dict(args.do))
    if args.output == 'json':
        sys.stdout.write(dump_model(intervened))
        return 0
    _emit_distribution(intervened, intervened.variable_names, joint_distribution(intervened), args)
    return 0


def _load_abstraction(args):
    base = load_model_file(args.base)
    high = load_model_file(args.high)
    return load_abstraction_file(args.abstraction, base, high)


def cmd_assess(args, config):
    lam = args.lam if args.lam is not None else config['lambda']
    report = evaluate(_load_abstraction(args), lam)
    if args.output == 'json':
        _emit_json(report.as_dict())
        return 0
    p = args.precision
    print(_table(['quantity', 'value'], [
        ['e', _fmt(report.e, p)],
        ['i', _fmt(report.i, p)],
        ['lambda', _fmt(report.lam, p)],
        ['objective', _fmt(report.objective, p)],
    ]))
    if report.per_diagram:
        print()
        rows = []
        for diagram in report.per_diagram:
            assignment = ','.join(f'{k}={v}' for k, v in diagram.worst_intervention.items())
            rows.append([','.join(diagram.sources), ','.join(diagram.targets),
                         _fmt(diagram.value, p), f'do({assignment})'])
        print(_table(['sources', 'targets', 'error', 'worst intervention'], rows))
    return 0


def cmd_inverse(args, config):
    abstraction = _load_abstraction(args)
    base, high = abstraction.base, abstraction.high
    inverse = global_inverse(abstraction)
    if args.output == 'json':
        _emit_json({
            'rows': list(configuration_labels(base, base.variable_names)),
            'columns': list(configuration_labels(high, high.variable_names)),
            'matrix': [[json_number(x) for x in row] for row in inverse.tolist()],
            'reconstruction': [json_number(x) for x in reconstruct(abstraction)],
        })
        return 0
    _emit_matrix(configuration_labels(base, base.variable_names),
                 configuration_labels(high, high.variable_names), inverse, args, title='global inverse')
    print()
    print('reconstruction')
    _emit_distribution(base, base.variable_names, reconstruct(abstraction), args)
    return 0


def _candidate_row(rank, candidate, p):
    r = candidate.report
    return [str(rank), _fmt(r.objective, p), _fmt(r.e, p), _fmt(r.i, p), candidate.encoding]


def cmd_learn(args, config):
    problem = load_problem_file(args.problem, defaults=config)
    overrides = {}
    if args.lam is not None:
        overrides['lam'] = args.lam
    if args.top_k is not None:
        overrides['top_k'] = args.top_k
    if args.budget is not None:
        overrides['caps'] = dataclasses.replace(problem.caps, budget=args.budget)
    if overrides:
        problem = dataclasses.replace(problem, **overrides)
    workers = args.workers if args.workers is not None else config['workers']
    result = solve(problem, workers=workers, progress=args.progress or args.debug >= 1)
    front = pareto_front(result) if args.pareto else None
    sweep = lambda_sweep(result, args.sweep) if args.sweep else None

    if args.output == 'json':
        document = {
            'problem_class': result.problem_class,
            'lambda': result.lam,
            'candidates_evaluated': result.candidates_evaluated,
            'exhaustive': result.exhaustive,
            'ranked': [dump_candidate(c, rank) for rank, c in enumerate(result.ranked, 1)],
        }
        if front is not None:
            document['pareto_front'] = [dump_candidate(c) for c in front]
        if sweep is not None:
            document['sweep'] = [
                {'lambda': lam, 'objective': json_number(obj), 'encoding': c.encoding}
                for lam, c, obj in sweep
            ]
        _emit_json(document)
        return 0

    p = args.precision
    flag = 'exhaustive' if result.exhaustive else 'budget exhausted, not exhaustive'
    print(f'problem class: {result.problem_class}')
    print(f'lambda: {_fmt(result.lam, p)}')
    print(f'candidates evaluated: {result.candidates_evaluated} ({flag})')
    print()
    header = ['rank', 'objective', 'e', 'i', 'encoding']
    print(_table(header, [_candidate_row(k, c, p) for k, c in enumerate(result.ranked, 1)]))
    if front is not None:
        print()
        print('pareto front')
        print(_table(header, [_candidate_row(k, c, p) for k, c in enumerate(front, 1)]))
    if sweep is not None:
        print()
        print('lambda sweep')
        print(_table(['lambda', 'objective', 'e', 'i', 'encoding'], [
            [_fmt(lam, p), _fmt(obj, p), _fmt(c.report.e, p), _fmt(c.report.i, p), c.encoding]
            for lam, c, obj in sweep
        ]))
    return 0


def _format_value(value, precision):
    if value is None:
        return '-'
    if isinstance(value, (int, float)):
        return _fmt(value, precision)
    flat = np.asarray(value, dtype=float).ravel()
    return '[' + ', '.join(_fmt(x, precision) for x in flat) + ']'


def cmd_report_paper(args, config):
    lam = args.lam if args.lam is not None else config['lambda']
    results = run_checks(args.fixtures, lam, config=config)
    p = args.precision
    rows = [[r.check.id, _format_value(r.expected, 3), _format_value(r.computed, p),
             f'{r.tolerance:.0e}', 'PASS' if r.passed else 'FAIL']
            for r in results]
    if args.output == 'json':
        _emit_json({
            'lambda': lam,
            'checks': [
                {
                    'id': r.check.id,
                    'quantity': r.check.quantity,
                    'expected': r.expected,
                    'computed': _json_value(r.computed),
                    'tolerance': r.tolerance,
                    'passed': r.passed,
                    'note': r.check.note,
                }
                for r in results
            ],
        })
    else:
        print(_table(['check', 'expected', 'computed', 'tolerance', 'result'], rows))
        failed = sum(not r.passed for r in results)
        print()
        print(f'{len(results) - failed}/{len(results)} checks passed')
    return 0 if all(r.passed for r in results) else 1


# Argument parsing

def _assignment(text):
    name, sep, label = text.partition('=')
    if not sep or not name or not label:
        raise argparse.ArgumentTypeError(f'expected VAR=OUTCOME, got {text!r}')
    return name, label


def _lambda_list(text):
    try:
        values = [float(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected comma-separated numbers, got {text!r}') from None
    if not values or any(v < 0 for v in values):
        raise argparse.ArgumentTypeError('lambda values must be non-negative')
    return values


def _non_negative(text):
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError('lambda must be non-negative')
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError('must be a positive integer')
    return value


def parse_arguments(argv=None):
    """Parse command-line arguments."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--precision', '-p', type=int, default=None,
                        help=f'Decimals printed (default: {DEFAULT_CONFIG["precision"]})')
    common.add_argument('--output', '-o', choices=['text', 'json'], default='text',
                        help='Output format (default: text)')
    common.add_argument('--debug', '-d', type=int, choices=[0, 1, 2], default=0,
                        help='Debug level (0=none, 1=basic, 2=verbose, default: 0)')
    common.add_argument('--config', '-c', type=str, default=DEFAULT_CONFIG_FILE,
                        help=f'Path to configuration file (default: {DEFAULT_CONFIG_FILE})')

    parser = argparse.ArgumentParser(
        prog='abstraction-learner',
        description='Evaluate and learn abstractions between finite causal models')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    subparsers = parser.add_subparsers(dest='command', required=True)

    def add(name, handler, help_text):
        sub = subparsers.add_parser(name, parents=[common], help=help_text, description=help_text)
        sub.set_defaults(handler=handler)
        return sub

    sub = add('validate', cmd_validate, 'Check a model document and list violations')
    sub.add_argument('model', help='Model document')

    sub = add('joint', cmd_joint, 'Print the joint distribution of a model')
    sub.add_argument('model', help='Model document')

    sub = add('marginal', cmd_marginal, 'Print the marginal distribution of some variables')
    sub.add_argument('model', help='Model document')
    sub.add_argument('--vars', '-v', nargs='+', required=True, help='Variables, in output order')

    sub = add('conditional', cmd_conditional, 'Print P(targets | givens) as a stochastic matrix')
    sub.add_argument('model', help='Model document')
    sub.add_argument('--targets', '-t', nargs='+', required=True, help='Target variables')
    sub.add_argument('--given', '-g', nargs='*', default=[], help='Conditioning variables')

    sub = add('virtual', cmd_virtual, 'Print the virtual mechanism P(targets | do(sources))')
    sub.add_argument('model', help='Model document')
    sub.add_argument('--from', dest='sources', nargs='+', required=True, help='Intervened variables')
    sub.add_argument('--to', dest='targets', nargs='+', required=True, help='Target variables')

    sub = add('intervene', cmd_intervene, 'Apply do(VAR=OUTCOME) and print the result')
    sub.add_argument('model', help='Model document')
    sub.add_argument('--do', type=_assignment, action='append', required=True,
                     help='Intervention VAR=OUTCOME (repeatable)')

    for name, handler, help_text in (
            ('assess', cmd_assess, 'Score an abstraction: abstraction error, information loss, objective'),
            ('inverse', cmd_inverse, 'Print the global inverse of an abstraction and the reconstruction')):
        sub = add(name, handler, help_text)
        sub.add_argument('base', help='Base model document')
        sub.add_argument('high', help='Abstracted model document')
        sub.add_argument('abstraction', help='Abstraction document')
        if name == 'assess':
            sub.add_argument('--lambda', '-l', dest='lam', type=_non_negative, default=None,
                             help=f'Trade-off weight of information loss (default: {DEFAULT_CONFIG["lambda"]})')

    sub = add('learn', cmd_learn, 'Solve an abstraction learning problem')
    sub.add_argument('problem', nargs='?', help='Problem document')
    sub.add_argument('--problem', dest='problem_flag', help='Problem document (alternative to the positional)')
    sub.add_argument('--lambda', '-l', dest='lam', type=_non_negative, default=None,
                     help='Override the problem lambda')
    sub.add_argument('--top-k', '-k', type=_positive_int, default=None, help='Override the problem top_k')
    sub.add_argument('--budget', '-b', type=_positive_int, default=None,
                     help='Override the candidate budget')
    sub.add_argument('--workers', '-w', type=int, default=None,
                     help='Parallel scoring processes (<= 0 for all cores, default: from config)')
    sub.add_argument('--progress', action='store_true', help='Show a progress bar on stderr')
    sub.add_argument('--pareto', action='store_true', help='Also print the Pareto front over (e, i)')
    sub.add_argument('--sweep', type=_lambda_list, default=None,
                     help='Comma-separated lambdas; print the best front candidate for each')

    sub = add('report-paper', cmd_report_paper, 'Reproduce the reference values of the worked example')
    sub.add_argument('--fixtures', '-f', default=str(FIXTURE_DIR),
                     help='Directory holding the fixture documents (default: bundled fixtures)')
    sub.add_argument('--lambda', '-l', dest='lam', type=_non_negative, default=None,
                     help=f'Lambda for the objective rows (default: {DEFAULT_CONFIG["lambda"]})')

    args = parser.parse_args(argv)
    if args.command == 'learn':
        if args.problem and args.problem_flag:
            parser.error('give the problem document once')
        args.problem = args.problem or args.problem_flag
        if not args.problem:
            parser.error('learn needs a problem document')
    return args


def main(argv=None):
    args = parse_arguments(argv)
    configure_logging(args.debug)
    try:
        config_file = args.config if os.path.exists(args.config) else None
        config = load_config(config_file)
        if args.precision is None:
            args.precision = config['precision']
        return args.handler(args, config)
    except ModelFormatError as e:
        print(f'error: {e}', file=sys.stderr)
        return 2 if e.is_parse_error else 1
    except ConfigError as e:
        print(f'error: {e}', file=sys.stderr)
        return 2
    except OSError as e:
        print(f'error: {e}', file=sys.stderr)
        return 2
    except (CausalAbstractionError, ValueError) as e:
        print(f'error: {e}', file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(main())
