# -*- coding: utf-8 -*-
"""
    maglab.settings
    ~~~~~~~~~~~~~~~

    Tolerances, defaults and logging configuration. Modules read these at
    call time via ``from maglab import settings`` so a value can be
    overridden for a single run or test.
"""
import os


def _env_int(name, default):
    value = os.environ.get(name)
    if not value:
        return default
    try:
        return max(1, int(value))
    except ValueError:
        return default


# Number of joblib workers used by sweeps, scans, studies and searches.
THREADS = _env_int('MAGLAB_THREADS', 1)

# Largest matrix handled by the dense symmetric eigensolver. Above this the
# extremal eigenvalues come from a Lanczos iteration.
DENSE_EIGEN_LIMIT = _env_int('MAGLAB_DENSE_EIGEN_LIMIT', 4096)
LANCZOS_MAX_ITERATIONS = 20000

# metric axioms: relative to the largest distance
TRIANGLE_SLACK = 1e-9
MAX_REPORTED_TRIPLES = 100

# PSD band: tau = PSD_TOLERANCE * max(1, lambda_max)
PSD_TOLERANCE = 1e-9
# weighting sign: tau_w = WEIGHT_TOLERANCE * max|w|
WEIGHT_TOLERANCE = 1e-10
ILL_CONDITIONED = 1e12
DEGENERATE_FORM = 1e-14

# Frank-Wolfe
DIVERSITY_TOLERANCE = 1e-8
DIVERSITY_MAX_ITERATIONS = 100000
SUPPORT_THRESHOLD = 1e-9
POSITIVE_WEIGHT_TOLERANCE = 1e-7

DEFAULT_STABILITY_SCALES = tuple(2.0 ** k for k in range(-10, 5))

# Fourier quadrature on [-L, L] with N nodes per half line
QUADRATURE_HALF_WIDTH = 40.0
QUADRATURE_NODES = 2 ** 16
QUADRATURE_TAIL_TOLERANCE = 1e-8
FOURIER_MAX_FREQUENCY = 10.0
FOURIER_FREQUENCIES = 401
# upper bound search: frequencies up to BOUND_SPAN / mollifier width
FOURIER_BOUND_SPAN = 100.0
FOURIER_BOUND_FREQUENCIES = 8192

# growth studies: relative slack added to the lower bound
GROWTH_MARGIN = 0.05

# convergence studies
FIT_WINDOW = 3
MONOTONE_TOLERANCE = 1e-10

# witness search
WITNESS_MAX_POINTS = 8

SCHEMA_VERSION = 1

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '%(levelname)s %(asctime)s %(module)s %(process)d '
                      '%(thread)d %(message)s'
        },
        'simple': {
            'format': '%(levelname)s %(message)s'
        },
    },
    'handlers': {
        'console': {
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'formatter': 'simple'
        },
    },
    'loggers': {
        'maglab': {
            'handlers': ['console'],
            'level': os.environ.get('MAGLAB_LOG_LEVEL', 'WARNING'),
            'propagate': True,
        },
    }
}
