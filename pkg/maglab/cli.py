# -*- coding: utf-8 -*-
"""
    maglab.cli
    ~~~~~~~~~~

    Command line front end. Every command builds a report, writes it as JSON
    (``--json``) and as a plot-ready table (``--csv``) on request, and
    prints a table derived from the same report.

    Exit codes: 0 on success, 1 on a domain error or a failed check, 2 on a
    usage error.
"""
import argparse
import json
import logging
import logging.config
import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import settings, __version__
from .analysis import (approx_magnitude, growth_bound_study, gamma_hat_1d,
    fourier_upper_bound_1d, product_counterexample_experiment, witness_search)
from .diversity import max_diversity
from .exceptions import MaglabError
from .magnitude import weighting, scale_sweep
from .metric import (FiniteMetricSpace, SpaceSpec, generate, scale_space,
    validate_metric)
from .negtype import negative_type_test, stability_scan
from .utils import io
from .utils.families import get_family_choices


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CommandResult:
    exit_code: int
    report_path: Optional[str] = None
    summary: str = ''


def parse_scales(value):
    """Parse ``a:b:n`` (linear) or ``a:b:nlog`` (logarithmic) grids."""
    log = value.endswith('log')
    body = value[:-3] if log else value
    try:
        start, stop, count = body.split(':')
        start, stop, count = float(start), float(stop), int(count)
    except ValueError:
        raise argparse.ArgumentTypeError(
            'scales must look like a:b:n or a:b:nlog, got %r' % value)
    if count < 1 or start <= 0 or stop < start:
        raise argparse.ArgumentTypeError(
            'need 0 < a <= b and n >= 1, got %r' % value)
    if log:
        return list(np.geomspace(start, stop, count))
    return list(np.linspace(start, stop, count))


def parse_levels(value):
    try:
        return [int(v) for v in value.split(',') if v]
    except ValueError:
        raise argparse.ArgumentTypeError(
            'levels must be comma separated integers, got %r' % value)


def parse_param(value):
    key, sep, raw = value.partition('=')
    if not sep or not key:
        raise argparse.ArgumentTypeError('expected key=value, got %r' % value)
    if raw == 'inf':
        return key, float('inf')
    try:
        return key, json.loads(raw)
    except ValueError:
        return key, raw


def _format_value(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if value is None:
        return 'null'
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        if len(value) > 8:
            return '[%d values]' % len(value)
        return ', '.join(_format_value(v) for v in value)
    if isinstance(value, dict):
        return '{%d keys}' % len(value)
    return str(value)


def format_table(data, prefix=''):
    """Render a report mapping as ``key: value`` lines.

    Record lists become one line per record.
    """
    lines = []
    for key in sorted(data):
        if key in ('schema', 'schema_version'):
            continue
        value = data[key]
        name = prefix + key
        if isinstance(value, dict):
            lines.extend(format_table(value, name + '.'))
        elif isinstance(value, list) and value and \
                all(isinstance(v, dict) for v in value):
            columns = sorted(value[0])
            lines.append('%s: %s' % (name, '  '.join(columns)))
            for row in value:
                lines.append('  ' + '  '.join(_format_value(row.get(c))
                                              for c in columns))
        else:
            lines.append('%s: %s' % (name, _format_value(value)))
    return lines


def _load_space(args):
    if args.matrix:
        dist = io.load_matrix(args.matrix)
        if args.force:
            logger.warning('skipping metric validation for %s', args.matrix)
        space = FiniteMetricSpace(dist, validate=not args.force)
    else:
        space = generate(io.load_spec(args.spec))
    if args.scale is not None:
        space = scale_space(space, args.scale)
    return space


def _spec_from_args(args):
    params = dict(args.param or [])
    return SpaceSpec(family=args.family, params=params,
                     scale=args.scale or 1.0, snowflake=args.snowflake,
                     seed=args.seed)


def _emit(args, report, summary, ok=True):
    data = io.to_jsonable(report)
    path = getattr(args, 'json', None)
    if path:
        io.dump_json(data, path)
    csv_path = getattr(args, 'csv', None)
    if csv_path and hasattr(report, 'rows'):
        io.dump_csv(report.header, report.rows(), csv_path)
    for line in format_table(data):
        print(line)
    return CommandResult(exit_code=0 if ok else 1, report_path=path,
                         summary=summary)


def cmd_validate(args):
    report = validate_metric(io.load_matrix(args.matrix_file))
    summary = 'metric ok' if report.ok else \
        'metric axioms fail (%d triangle violations)' % report.violation_count
    return _emit(args, report, summary, ok=report.ok)


def cmd_generate(args):
    space = generate(io.load_spec(args.spec_file))
    if args.output:
        io.save_matrix(space.dist, args.output)
    report = io.report_dict('space', points=len(space),
                            diameter=space.diameter,
                            labels=[str(label) for label in space.labels],
                            spec=space.provenance.as_dict())
    return _emit(args, report, 'generated %d points' % len(space))


def cmd_magnitude(args):
    report = weighting(_load_space(args), strict=args.strict)
    return _emit(args, report, 'magnitude %r' % report.magnitude)


def cmd_diversity(args):
    report = max_diversity(_load_space(args), tol=args.tol,
                           max_iters=args.max_iters, strict=args.strict)
    return _emit(args, report, 'maximum diversity %r' % report.diversity)


def cmd_sweep(args):
    sweep = scale_sweep(_load_space(args), args.scales,
                        with_diversity=args.diversity)
    return _emit(args, sweep, 'swept %d scales' % len(sweep.records))


def cmd_negtype(args):
    space = _load_space(args)
    if args.scales:
        report = stability_scan(space, args.scales)
        return _emit(args, report, report.classification.value,
                     ok=report.consistent)
    report = negative_type_test(space, args.basepoint)
    return _emit(args, report, 'negative type: %s' % report.negative_type)


def cmd_approx(args):
    study = approx_magnitude(_spec_from_args(args), args.levels,
                             quadrature=args.quadrature)
    return _emit(args, study, 'extrapolated limit %r'
                 % study.extrapolated_limit)


def cmd_growth(args):
    study = growth_bound_study(_spec_from_args(args), args.scales)
    return _emit(args, study, 'lower bound satisfied: %s' % study.satisfied,
                 ok=study.satisfied)


def cmd_fourier(args):
    if args.upper_bound:
        report = fourier_upper_bound_1d(args.ell, args.p, args.alpha,
                                        args.radius, t=args.t,
                                        half_width=args.half_width,
                                        nodes=args.nodes)
        return _emit(args, report, 'upper bound %r' % report.bound)
    report = gamma_hat_1d(args.p, half_width=args.half_width,
                          nodes=args.nodes)
    return _emit(args, report, 'positive: %s' % report.positive)


def cmd_experiment(args):
    if args.experiment == 'product-counterexample':
        report = product_counterexample_experiment()
        return _emit(args, report, report.classification.value)
    p = float('inf') if args.p == 'inf' else float(args.p)
    report = witness_search(p, args.n, budget=args.budget, seed=args.seed,
                            lattice=args.lattice)
    return _emit(args, report, 'witness found: %s' % report.found)


def _positive_float(value):
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError('not a number: %r' % value)
    if not number > 0 or math.isinf(number):
        raise argparse.ArgumentTypeError('must be a positive real: %r'
                                         % value)
    return number


def _add_space_arguments(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument('--matrix', help='comma separated distance matrix')
    group.add_argument('--spec', help='JSON space spec')
    parser.add_argument('--scale', type=_positive_float,
                        help='multiply every distance by this factor')
    parser.add_argument('--force', action='store_true',
                        help='skip metric validation of --matrix')


def _add_output_arguments(parser, csv=False):
    parser.add_argument('--json', help='write the report to this file')
    if csv:
        parser.add_argument('--csv', help='write a table to this file')


def _add_family_arguments(parser, choices):
    parser.add_argument('--family', required=True, choices=choices)
    parser.add_argument('--param', type=parse_param, action='append',
                        metavar='KEY=VALUE', help='family parameter')
    parser.add_argument('--scale', type=_positive_float, default=None)
    parser.add_argument('--snowflake', type=float, default=1.0)
    parser.add_argument('--seed', type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(
        prog='maglab',
        description='Magnitude, maximum diversity and positive '
                    'definiteness of metric spaces.')
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + __version__)
    parser.add_argument('-v', '--verbose', action='count', default=0)
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    p = sub.add_parser('validate', help='check the metric axioms')
    p.add_argument('matrix_file')
    _add_output_arguments(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser('generate', help='build a space from a spec')
    p.add_argument('spec_file')
    p.add_argument('--output', help='write the distance matrix here')
    _add_output_arguments(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser('magnitude', help='weighting and magnitude')
    _add_space_arguments(p)
    p.add_argument('--strict', action='store_true',
                   help='fail on ill-conditioned similarity matrices')
    _add_output_arguments(p)
    p.set_defaults(func=cmd_magnitude)

    p = sub.add_parser('diversity', help='maximum diversity')
    _add_space_arguments(p)
    p.add_argument('--tol', type=_positive_float, default=None)
    p.add_argument('--max-iters', type=int, default=None)
    p.add_argument('--strict', action='store_true',
                   help='fail when the iteration limit is hit')
    _add_output_arguments(p)
    p.set_defaults(func=cmd_diversity)

    p = sub.add_parser('sweep', help='magnitude function over scales')
    _add_space_arguments(p)
    p.add_argument('--scales', type=parse_scales, required=True,
                   metavar='A:B:N[log]')
    p.add_argument('--diversity', action='store_true')
    _add_output_arguments(p, csv=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser('negtype', help='negative type and stability scan')
    _add_space_arguments(p)
    p.add_argument('--basepoint', type=int, default=0)
    p.add_argument('--scales', type=parse_scales, metavar='A:B:N[log]',
                   help='also scan the similarity matrix over these scales')
    _add_output_arguments(p, csv=True)
    p.set_defaults(func=cmd_negtype)

    families = [name for name, _ in get_family_choices()]
    p = sub.add_parser('approx', help='magnitude through refining nets')
    _add_family_arguments(p, families)
    p.add_argument('--levels', type=parse_levels, required=True)
    p.add_argument('--quadrature', action='store_true')
    _add_output_arguments(p, csv=True)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser('growth', help='volume lower bound against nets')
    _add_family_arguments(p, ['interval_net', 'grid_net'])
    p.add_argument('--scales', type=parse_scales, required=True,
                   metavar='A:B:N[log]')
    _add_output_arguments(p, csv=True)
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser('fourier', help='transform of exp(-|x|^p)')
    p.add_argument('--p', type=float, required=True)
    p.add_argument('--upper-bound', action='store_true')
    p.add_argument('--ell', type=float, default=1.0)
    p.add_argument('--alpha', type=float, default=1.0)
    p.add_argument('--radius', type=float, default=None,
                   help='mollifier radius, defaults to ell + 1')
    p.add_argument('--t', type=_positive_float, default=1.0)
    p.add_argument('--half-width', type=_positive_float, default=None)
    p.add_argument('--nodes', type=int, default=None)
    _add_output_arguments(p, csv=True)
    p.set_defaults(func=cmd_fourier)

    p = sub.add_parser('experiment', help='counterexample experiments')
    p.add_argument('experiment',
                   choices=['product-counterexample', 'witness-search'])
    p.add_argument('--p', default='inf')
    p.add_argument('--n', type=int, default=3)
    p.add_argument('--budget', type=int, default=1000)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--lattice', action='store_true')
    _add_output_arguments(p, csv=True)
    p.set_defaults(func=cmd_experiment)
    return parser


def _report_error(exc):
    print('error: %s: %s' % (type(exc).__name__, exc), file=sys.stderr)
    for name in ('diagnostics', 'report'):
        detail = getattr(exc, name, None)
        if detail is not None and hasattr(detail, 'as_dict'):
            for line in format_table(io.to_jsonable(detail), name + '.'):
                print(line, file=sys.stderr)


def run(argv):
    """Run one command and return its :class:`CommandResult`."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        return CommandResult(exit_code=code, summary='usage')
    if getattr(args, 'radius', 'unset') is None:
        args.radius = args.ell + 1.0
    if args.verbose:
        logging.getLogger('maglab').setLevel(
            logging.DEBUG if args.verbose > 1 else logging.INFO)
    try:
        result = args.func(args)
    except OSError as exc:
        print('error: %s' % exc, file=sys.stderr)
        return CommandResult(exit_code=2, summary=str(exc))
    except MaglabError as exc:
        _report_error(exc)
        return CommandResult(exit_code=1, summary=str(exc))
    logger.info('%s: %s', args.command, result.summary)
    return result


def main(argv=None):
    logging.config.dictConfig(settings.LOGGING)
    result = run(sys.argv[1:] if argv is None else argv)
    sys.exit(result.exit_code)
