# -*- coding: utf-8 -*-
"""
    maglab.metric
    ~~~~~~~~~~~~~

    Finite metric spaces, the recipes that generate them, and the metric
    transforms (scaling, snowflakes, l_q products, Hausdorff distance) the
    engines are built on.
"""
import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Tuple

import numpy as np
from scipy.sparse.csgraph import shortest_path

from . import settings
from .exceptions import (InvalidMetric, NonSquareMatrix, NonFiniteEntry,
    InvalidParams, NonpositiveScale, ExponentOutOfRange, EmptySubset)
from .utils.families import get_family


@dataclass(frozen=True)
class SpaceSpec:
    """Declarative recipe for a generated space.

    The generated metric is ``scale * d_base ** snowflake``.
    """
    family: str
    params: Dict[str, Any] = field(default_factory=dict)
    scale: float = 1.0
    snowflake: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not self.scale > 0 or math.isinf(self.scale):
            raise NonpositiveScale('scale must be a positive real, got %r'
                                   % (self.scale,))
        if not 0 < self.snowflake <= 1:
            raise ExponentOutOfRange('snowflake exponent must lie in (0, 1], '
                                     'got %r' % (self.snowflake,))
        get_family(self.family)

    def with_params(self, **params):
        merged = dict(self.params)
        merged.update(params)
        return replace(self, params=merged)

    def as_dict(self):
        params = {}
        for key, value in self.params.items():
            if isinstance(value, float) and math.isinf(value):
                value = 'inf'
            params[key] = value
        return {'family': self.family, 'params': params,
                'scale': self.scale, 'snowflake': self.snowflake,
                'seed': self.seed}

    @classmethod
    def from_dict(cls, data):
        try:
            family = data['family']
        except (KeyError, TypeError):
            raise InvalidParams('a space spec needs a "family" entry')
        return cls(family=family, params=dict(data.get('params') or {}),
                   scale=float(data.get('scale', 1.0)),
                   snowflake=float(data.get('snowflake', 1.0)),
                   seed=int(data.get('seed', 0)))


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    worst_triangle_violation: float
    worst_asymmetry: float
    offending_triples: List[Tuple[int, int, int]]
    worst_diagonal: float = 0.0
    nonpositive_pairs: int = 0
    violation_count: int = 0

    def as_dict(self):
        return {'ok': self.ok,
                'worst_triangle_violation': self.worst_triangle_violation,
                'worst_asymmetry': self.worst_asymmetry,
                'offending_triples': [list(t) for t in self.offending_triples],
                'worst_diagonal': self.worst_diagonal,
                'nonpositive_pairs': self.nonpositive_pairs,
                'violation_count': self.violation_count}


def _as_square(dist):
    d = np.array(dist, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] < 1:
        raise NonSquareMatrix('distance matrix must be square and nonempty, '
                              'got shape %r' % (d.shape,))
    if not np.all(np.isfinite(d)):
        raise NonFiniteEntry('distance matrix has non-finite entries')
    return d


def validate_metric(dist):
    """Check the metric axioms of a square matrix.

    Asymmetry and triangle violations are measured against a slack of
    ``settings.TRIANGLE_SLACK`` times the largest entry; the diagonal must be
    exactly zero and off-diagonal entries strictly positive.
    """
    d = _as_square(dist)
    n = d.shape[0]
    slack = settings.TRIANGLE_SLACK * float(np.abs(d).max())

    worst_asymmetry = float(np.abs(d - d.T).max())
    worst_diagonal = float(np.abs(np.diag(d)).max())
    upper = np.triu_indices(n, 1)
    nonpositive = int(np.count_nonzero((d[upper] <= 0) | (d.T[upper] <= 0)))

    worst = 0.0
    count = 0
    triples = []
    off = ~np.eye(n, dtype=bool)
    for k in range(n if n > 2 else 0):
        excess = d - (d[:, k:k + 1] + d[k:k + 1, :])
        excess[k, :] = -np.inf
        excess[:, k] = -np.inf
        excess[~off] = -np.inf
        peak = float(excess.max())
        if peak > worst:
            worst = peak
        if peak > slack:
            rows, cols = np.nonzero(np.triu(excess > slack, 1))
            count += len(rows)
            room = settings.MAX_REPORTED_TRIPLES - len(triples)
            triples.extend((int(i), int(j), k)
                           for i, j in list(zip(rows, cols))[:max(room, 0)])

    ok = (worst_asymmetry <= slack and worst_diagonal == 0 and
          nonpositive == 0 and worst <= slack)
    return ValidationReport(ok=ok, worst_triangle_violation=worst,
                            worst_asymmetry=worst_asymmetry,
                            offending_triples=triples,
                            worst_diagonal=worst_diagonal,
                            nonpositive_pairs=nonpositive,
                            violation_count=count)


class FiniteMetricSpace(object):
    """A validated finite metric space.

    The matrix is stored symmetrized from its upper triangle with an exact
    zero diagonal and is read-only afterwards.

    :param dist: square matrix of distances.
    :param labels: point identifiers, defaults to ``0..n-1``.
    :param provenance: the :class:`SpaceSpec` that generated the space.
    :param validate: run :func:`validate_metric` (cubic cost) and refuse
                     matrices that fail it.
    """

    def __init__(self, dist, labels=None, provenance=None, validate=True):
        d = _as_square(dist)
        if validate:
            report = validate_metric(d)
            if not report.ok:
                raise InvalidMetric('matrix violates the metric axioms',
                                    report)
        d = np.triu(d, 1)
        d = d + d.T
        n = d.shape[0]
        if n > 1 and not np.all(d[np.triu_indices(n, 1)] > 0):
            raise InvalidMetric('distinct points must be at positive distance')
        d.flags.writeable = False
        if labels is None:
            labels = list(range(n))
        elif len(labels) != n:
            raise InvalidParams('got %d labels for %d points'
                                % (len(labels), n))
        self.dist = d
        self.labels = list(labels)
        self.provenance = provenance

    def __len__(self):
        return self.dist.shape[0]

    def __repr__(self):
        return '<FiniteMetricSpace: {} points, diameter {:.6g}>'.format(
            len(self), self.diameter)

    @property
    def diameter(self):
        return float(self.dist.max())

    def subspace(self, indices):
        indices = list(indices)
        if not indices:
            raise EmptySubset('a subspace needs at least one point')
        sub = self.dist[np.ix_(indices, indices)]
        return FiniteMetricSpace(sub, [self.labels[i] for i in indices],
                                 validate=False)

    def without(self, index):
        return self.subspace(i for i in range(len(self)) if i != index)


def generate(spec):
    """Build the space a :class:`SpaceSpec` describes.

    Randomized families draw from a Philox generator keyed by the spec's
    seed, so identical specs give bit-identical matrices.
    """
    family = get_family(spec.family)
    params = family.clean(spec.params)
    rng = np.random.Generator(np.random.Philox(spec.seed))
    base, labels = family.distances(params, rng)
    dist = np.asarray(base, dtype=float)
    if spec.snowflake != 1:
        dist = dist ** spec.snowflake
    if spec.scale != 1:
        dist = spec.scale * dist
    return FiniteMetricSpace(dist, labels, provenance=spec, validate=False)


def scale_space(space, t):
    """Return ``tA``: every distance multiplied by t."""
    if not t > 0 or math.isinf(t):
        raise NonpositiveScale('scale must be a positive real, got %r' % (t,))
    provenance = None
    if space.provenance is not None:
        provenance = replace(space.provenance,
                             scale=space.provenance.scale * t)
    return FiniteMetricSpace(space.dist * t, space.labels, provenance,
                             validate=False)


def snowflake_space(space, alpha):
    """Return ``A^alpha``: every distance raised to the power alpha.

    Exponents above one are refused since the result can fail the triangle
    inequality.
    """
    if not 0 < alpha <= 1:
        raise ExponentOutOfRange('snowflake exponent must lie in (0, 1], '
                                 'got %r' % (alpha,))
    provenance = None
    if space.provenance is not None:
        spec = space.provenance
        provenance = replace(spec, scale=spec.scale ** alpha,
                             snowflake=spec.snowflake * alpha)
    return FiniteMetricSpace(space.dist ** alpha, space.labels, provenance,
                             validate=False)


def lp_product(first, second, q):
    """The l_q product ``A x B``.

    Point ``(a, b)`` sits at index ``i * len(B) + j``; labels are pairs.
    """
    try:
        q = float(q)
    except (TypeError, ValueError):
        raise ExponentOutOfRange('product exponent must be a real >= 1')
    if not q >= 1:
        raise ExponentOutOfRange('product exponent must be >= 1, got %r'
                                 % (q,))
    da = first.dist[:, None, :, None]
    db = second.dist[None, :, None, :]
    if q == 1:
        d = da + db
    elif math.isinf(q):
        d = np.maximum(da, db)
    else:
        d = (da ** q + db ** q) ** (1.0 / q)
    size = len(first) * len(second)
    labels = [(a, b) for a in first.labels for b in second.labels]
    return FiniteMetricSpace(d.reshape(size, size), labels, validate=False)


def hausdorff_from_cross(cross):
    """Hausdorff distance given the distances between two point sets."""
    cross = np.asarray(cross, dtype=float)
    if cross.size == 0:
        raise EmptySubset('Hausdorff distance needs two nonempty sets')
    return float(max(cross.min(axis=1).max(), cross.min(axis=0).max()))


def hausdorff_distance(first, second, space):
    """Hausdorff distance between two index subsets of a common space."""
    first, second = list(first), list(second)
    if not first or not second:
        raise EmptySubset('Hausdorff distance needs two nonempty subsets')
    n = len(space)
    if any(not 0 <= i < n for i in first + second):
        raise InvalidParams('subset index out of range')
    return hausdorff_from_cross(space.dist[np.ix_(first, second)])


def random_metric(n, rng, low=0.5, high=1.5):
    """Seeded random metric on n points.

    Random symmetric edge weights closed under shortest paths.
    """
    if n < 1:
        raise InvalidParams('a metric space needs at least one point')
    weights = rng.uniform(low, high, size=(n, n))
    weights = np.triu(weights, 1)
    weights = weights + weights.T
    dist = shortest_path(weights, method='FW', directed=False)
    return FiniteMetricSpace(dist, validate=False)
