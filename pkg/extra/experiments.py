#!/usr/bin/env python
#-*- coding: utf-8 -*-
"""Run the longer studies and write their reports to a directory.

    ./extra/experiments.py [OUTPUT_DIR] [--quick]
"""
import logging.config
import os
import sys

from maglab import settings
from maglab.analysis import (approx_magnitude, growth_bound_study,
    fourier_upper_bound_1d, gamma_hat_1d, product_counterexample_experiment,
    witness_search)
from maglab.magnitude import bisect_threshold
from maglab.metric import SpaceSpec, generate
from maglab.utils import io


def k32_threshold():
    def make(r):
        return generate(SpaceSpec('complete_bipartite',
                                  {'m': 3, 'n': 2, 'r': r}))
    return {'schema': 'threshold', 'family': 'complete_bipartite',
            'threshold': bisect_threshold(make, 0.2, 0.5, tol=1e-9)}


def studies(quick):
    interval = [11, 101, 1001] if quick else [11, 101, 1001, 2001]
    chebyshev = [17, 129, 1025] if quick else [17, 129, 1025, 2049]
    cantor = list(range(3, 9 if quick else 11))
    yield 'interval', lambda: approx_magnitude(
        SpaceSpec('interval_net', {'length': 2.0}), interval, quadrature=True)
    yield 'chebyshev', lambda: approx_magnitude(
        SpaceSpec('chebyshev_net', {'length': 2.0}), chebyshev)
    yield 'cantor', lambda: approx_magnitude(
        SpaceSpec('cantor_net', {'length': 1.0}), cantor)
    yield 'circle', lambda: approx_magnitude(
        SpaceSpec('circle_net', {'circumference': 2.0}), [16, 64, 256])
    yield 'growth_square', lambda: growth_bound_study(
        SpaceSpec('grid_net', {'n': 2, 'm': 21 if quick else 41, 'p': 1}),
        [2.0, 4.0, 8.0, 16.0])
    yield 'k32_threshold', k32_threshold
    yield 'fourier_half', lambda: gamma_hat_1d(0.5, half_width=600.0,
                                               nodes=2 ** 20)
    yield 'fourier_bound', lambda: fourier_upper_bound_1d(2.0, 1.0, 1.0, 3.0)
    yield 'product_counterexample', product_counterexample_experiment
    yield 'witness_search', lambda: witness_search(
        float('inf'), 3, budget=200 if quick else 5000, seed=1)


def run_all(output, quick=False):
    if not os.path.isdir(output):
        os.makedirs(output)
    for name, study in studies(quick):
        print('Run %s...' % name)
        path = os.path.join(output, name + '.json')
        report = study()
        io.dump_json(report, path)
        if hasattr(report, 'rows'):
            io.dump_csv(report.header, report.rows(),
                        os.path.join(output, name + '.csv'))
    print('Reports written to %s' % output)


if __name__ == '__main__':
    logging.config.dictConfig(settings.LOGGING)
    args = [a for a in sys.argv[1:] if not a.startswith('--')]
    run_all(args[0] if args else 'reports', quick='--quick' in sys.argv)
