# -*- coding: utf-8 -*-
"""
    maglab.utils.io
    ~~~~~~~~~~~~~~~

    Reading distance matrices and space specs, writing reports as JSON and
    CSV.
"""
import csv
import enum
import json
import logging
import math

import numpy as np

from .. import settings
from ..exceptions import InvalidParams, NonSquareMatrix


logger = logging.getLogger(__name__)


def to_jsonable(value):
    """Convert numpy values, enums and tuples to plain JSON types.

    Non-finite floats are written as the strings ``inf``, ``-inf`` and
    ``nan``.
    """
    if hasattr(value, 'as_dict'):
        return to_jsonable(value.as_dict())
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, dict):
        return dict((str(k), to_jsonable(v)) for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if math.isnan(value):
            return 'nan'
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    return value


def report_dict(schema, **fields):
    """A report mapping tagged with its schema name and version."""
    data = {'schema': schema, 'schema_version': settings.SCHEMA_VERSION}
    data.update(fields)
    return to_jsonable(data)


def dump_json(data, path):
    with open(path, 'w') as fobj:
        json.dump(to_jsonable(data), fobj, indent=2, sort_keys=True)
    logger.info('wrote %s', path)


def load_json(path):
    try:
        with open(path) as fobj:
            return json.load(fobj)
    except ValueError as exc:
        raise InvalidParams('%s is not valid JSON: %s' % (path, exc))


def load_report(path):
    """Load a report written by :func:`dump_json` and check its schema."""
    data = load_json(path)
    if not isinstance(data, dict) or 'schema' not in data:
        raise InvalidParams('%s is not a maglab report' % path)
    if data.get('schema_version') != settings.SCHEMA_VERSION:
        raise InvalidParams('%s has schema version %r, expected %d'
                            % (path, data.get('schema_version'),
                               settings.SCHEMA_VERSION))
    return data


def dump_csv(header, rows, path):
    with open(path, 'w', newline='') as fobj:
        writer = csv.writer(fobj)
        writer.writerow(header)
        for row in rows:
            writer.writerow([to_jsonable(v) for v in row])
    logger.info('wrote %s', path)


def load_matrix(path):
    """Read a square distance matrix from a comma separated file."""
    try:
        matrix = np.loadtxt(path, delimiter=',', ndmin=2)
    except ValueError as exc:
        raise NonSquareMatrix('could not read matrix from %s: %s'
                              % (path, exc))
    return matrix


def save_matrix(matrix, path):
    np.savetxt(path, np.asarray(matrix), delimiter=',', fmt='%.17g')
    logger.info('wrote %s', path)


def load_spec(path):
    """Read a :class:`~maglab.metric.SpaceSpec` from a JSON file."""
    from ..metric import SpaceSpec
    data = load_json(path)
    params = dict(data.get('params') or {}) if isinstance(data, dict) else {}
    for key, value in params.items():
        if value == 'inf':
            params[key] = float('inf')
    if isinstance(data, dict):
        data = dict(data, params=params)
    return SpaceSpec.from_dict(data)
