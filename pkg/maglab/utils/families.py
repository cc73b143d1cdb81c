# -*- coding: utf-8 -*-
"""
    maglab.utils.families
    ~~~~~~~~~~~~~~~~~~~~~

    Registry of the space families a :class:`~maglab.metric.SpaceSpec` can
    name. A family turns cleaned parameters into a base distance matrix;
    families living in a coordinate space also expose their points and the
    ambient metric so nets of different resolution can be compared.
"""
import math

import networkx as nx
import numpy as np
from scipy.spatial.distance import cdist

from ..exceptions import InvalidParams, UnsupportedFamily


def lp_distances(X, Y, p):
    """Distances of ``(R^n, ||x - y||_p^min(1, p))`` between rows of X and Y.

    :param p: exponent in ``(0, inf]``.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if p == 1:
        return cdist(X, Y, 'cityblock')
    if p == 2:
        return cdist(X, Y, 'euclidean')
    if math.isinf(p):
        return cdist(X, Y, 'chebyshev')
    diff = np.abs(X[:, None, :] - Y[None, :, :]) ** p
    total = diff.sum(axis=-1)
    if p < 1:
        # the p-th power of the quasinorm is the metric below p = 1
        return total
    return total ** (1.0 / p)


def line_cells(xs):
    """Voronoi cell lengths of sorted points on a segment."""
    xs = np.asarray(xs, dtype=float).ravel()
    if xs.size == 1:
        return np.ones(1)
    mid = (xs[1:] + xs[:-1]) / 2.0
    edges = np.concatenate(([xs[0]], mid, [xs[-1]]))
    return np.diff(edges)


def _positive(params, key, integer=False, minimum=None):
    value = params[key]
    try:
        value = int(value) if integer else float(value)
    except (TypeError, ValueError):
        raise InvalidParams('parameter {} must be a number, got {!r}'
                            .format(key, value))
    if minimum is not None:
        if value < minimum:
            raise InvalidParams('parameter {} must be >= {}, got {}'
                                .format(key, minimum, value))
    elif not value > 0:
        raise InvalidParams('parameter {} must be positive, got {}'
                            .format(key, value))
    params[key] = value
    return value


def _exponent(params, key='p'):
    value = params[key]
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise InvalidParams('exponent {} must be a number, got {!r}'
                            .format(key, value))
    if not value > 0 or math.isnan(value):
        raise InvalidParams('exponent {} must lie in (0, inf], got {}'
                            .format(key, value))
    params[key] = value
    return value


class BaseFamily(object):
    """Common behaviour of all space families.

    Subclasses set `name`, `title` and `defaults`. Coordinate families
    implement :meth:`points` and :meth:`cross_distances`; graph families
    override :meth:`distances` directly.
    """
    name = None
    title = None
    defaults = {}
    #: parameter that controls the resolution of a net, if any
    refinement_param = None
    #: whether increasing the refinement parameter yields supersets
    nested = False

    def clean(self, params):
        unknown = set(params) - set(self.defaults)
        if unknown:
            raise InvalidParams('unknown parameters for {}: {}'.format(
                self.name, ', '.join(sorted(unknown))))
        cleaned = dict(self.defaults)
        cleaned.update(params)
        self.check(cleaned)
        return cleaned

    def check(self, params):
        pass

    def distances(self, params, rng):
        points = self.points(params, rng)
        return self.cross_distances(points, points, params), \
            list(range(len(points)))

    def points(self, params, rng):
        raise NotImplementedError

    def cross_distances(self, X, Y, params):
        raise NotImplementedError

    @property
    def has_points(self):
        return type(self).points is not BaseFamily.points

    def quadrature_weights(self, points, params):
        return np.full(len(points), 1.0 / len(points))

    def volume(self, params):
        raise InvalidParams('{} has no volume'.format(self.name))

    def dimension(self, params):
        raise InvalidParams('{} has no ambient dimension'.format(self.name))

    def exponent(self, params):
        return 2.0


class _LineFamily(BaseFamily):

    def cross_distances(self, X, Y, params):
        return np.abs(np.asarray(X)[:, None, 0] - np.asarray(Y)[None, :, 0])

    def quadrature_weights(self, points, params):
        return line_cells(points[:, 0])

    def dimension(self, params):
        return 1


class IntervalNet(_LineFamily):
    name = 'interval_net'
    title = 'Uniform net of [0, length]'
    defaults = {'length': 1.0, 'n': 11}
    refinement_param = 'n'

    def check(self, params):
        _positive(params, 'length', minimum=0.0)
        _positive(params, 'n', integer=True, minimum=1)
        if params['n'] > 1 and params['length'] == 0:
            raise InvalidParams('a net of a degenerate interval has one point')

    def points(self, params, rng):
        return np.linspace(0.0, params['length'], params['n'])[:, None]

    def volume(self, params):
        return params['length']


class ChebyshevNet(IntervalNet):
    name = 'chebyshev_net'
    title = 'Chebyshev-Lobatto net of [0, length]'
    defaults = {'length': 1.0, 'n': 9}

    def points(self, params, rng):
        n, length = params['n'], params['length']
        if n == 1:
            return np.zeros((1, 1))
        j = np.arange(n)
        xs = length / 2.0 * (1.0 - np.cos(np.pi * j / (n - 1)))
        xs[0], xs[-1] = 0.0, length
        return xs[:, None]


class CircleNet(BaseFamily):
    name = 'circle_net'
    title = 'Equally spaced points on a circle, geodesic metric'
    defaults = {'circumference': 2 * math.pi, 'n': 12}
    refinement_param = 'n'

    def check(self, params):
        _positive(params, 'circumference')
        _positive(params, 'n', integer=True, minimum=1)

    def points(self, params, rng):
        n = params['n']
        return (params['circumference'] * np.arange(n) / n)[:, None]

    def cross_distances(self, X, Y, params):
        length = params['circumference']
        delta = np.abs(np.asarray(X)[:, None, 0] - np.asarray(Y)[None, :, 0])
        delta = np.mod(delta, length)
        return np.minimum(delta, length - delta)

    def volume(self, params):
        return params['circumference']

    def dimension(self, params):
        return 1


class CantorNet(_LineFamily):
    name = 'cantor_net'
    title = 'Endpoints of the middle-thirds construction'
    defaults = {'length': 1.0, 'k': 3}
    refinement_param = 'k'
    nested = True

    def check(self, params):
        _positive(params, 'length')
        _positive(params, 'k', integer=True, minimum=0)

    def points(self, params, rng):
        intervals = [(0.0, params['length'])]
        for _ in range(params['k']):
            refined = []
            for a, b in intervals:
                third = (b - a) / 3.0
                refined.append((a, a + third))
                refined.append((b - third, b))
            intervals = refined
        xs = np.array([x for interval in intervals for x in interval])
        return xs[:, None]

    def quadrature_weights(self, points, params):
        # the Cantor measure splits evenly between endpoints
        return np.full(len(points), 1.0 / len(points))

    def volume(self, params):
        return 0.0


class GridNet(BaseFamily):
    name = 'grid_net'
    title = 'Lattice m^n in the unit cube under l_p'
    defaults = {'n': 2, 'm': 11, 'p': 1.0}
    refinement_param = 'm'

    def check(self, params):
        _positive(params, 'n', integer=True, minimum=1)
        _positive(params, 'm', integer=True, minimum=1)
        _exponent(params)

    def points(self, params, rng):
        axis = np.linspace(0.0, 1.0, params['m'])
        mesh = np.meshgrid(*([axis] * params['n']), indexing='ij')
        return np.stack([c.ravel() for c in mesh], axis=1)

    def cross_distances(self, X, Y, params):
        return lp_distances(X, Y, params['p'])

    def quadrature_weights(self, points, params):
        axis = line_cells(np.linspace(0.0, 1.0, params['m']))
        weights = axis
        for _ in range(params['n'] - 1):
            weights = np.outer(weights, axis).ravel()
        return weights

    def volume(self, params):
        return 1.0

    def dimension(self, params):
        return params['n']

    def exponent(self, params):
        return params['p']


class SphereFibonacciNet(BaseFamily):
    name = 'sphere_fibonacci_net'
    title = 'Fibonacci lattice on a round sphere, great-circle metric'
    defaults = {'radius': 1.0, 'n': 50}
    refinement_param = 'n'

    def check(self, params):
        _positive(params, 'radius')
        _positive(params, 'n', integer=True, minimum=1)

    def points(self, params, rng):
        n, radius = params['n'], params['radius']
        i = np.arange(n)
        z = 1.0 - 2.0 * (i + 0.5) / n
        rho = np.sqrt(1.0 - z ** 2)
        theta = i * math.pi * (3.0 - math.sqrt(5.0))
        return radius * np.stack(
            [rho * np.cos(theta), rho * np.sin(theta), z], axis=1)

    def cross_distances(self, X, Y, params):
        radius = params['radius']
        chord = cdist(X, Y, 'euclidean')
        return 2.0 * radius * np.arcsin(np.minimum(1.0, chord / (2 * radius)))

    def volume(self, params):
        return 4 * math.pi * params['radius'] ** 2

    def dimension(self, params):
        return 2


class HyperbolicDiskNet(BaseFamily):
    """Polar grid of a hyperbolic disk; ring j carries `sectors * j` points."""
    name = 'hyperbolic_disk_net'
    title = 'Polar grid in the real hyperbolic plane'
    defaults = {'radius': 1.0, 'rings': 4, 'sectors': 8}
    refinement_param = 'rings'

    def check(self, params):
        _positive(params, 'radius')
        _positive(params, 'rings', integer=True, minimum=0)
        _positive(params, 'sectors', integer=True, minimum=1)

    def points(self, params, rng):
        rings, sectors = params['rings'], params['sectors']
        polar = [(0.0, 0.0)]
        for j in range(1, rings + 1):
            r = params['radius'] * j / rings
            count = sectors * j
            polar.extend((r, 2 * math.pi * s / count) for s in range(count))
        return np.array(polar)

    def cross_distances(self, X, Y, params):
        r1, t1 = X[:, None, 0], X[:, None, 1]
        r2, t2 = Y[None, :, 0], Y[None, :, 1]
        # cosh d = cosh r1 cosh r2 - sinh r1 sinh r2 cos(dt), rewritten
        # through half-angle identities to stay accurate for close points
        half = np.sinh((r1 - r2) / 2.0) ** 2 + \
            np.sinh(r1) * np.sinh(r2) * np.sin((t1 - t2) / 2.0) ** 2
        return 2.0 * np.arcsinh(np.sqrt(np.maximum(half, 0.0)))

    def volume(self, params):
        return 2 * math.pi * (math.cosh(params['radius']) - 1.0)

    def dimension(self, params):
        return 2


class PointCloudLp(BaseFamily):
    name = 'point_cloud_lp'
    title = 'Explicit or seeded random points under l_p'
    defaults = {'p': 2.0, 'points': None, 'count': 10, 'dim': 2}

    def check(self, params):
        _exponent(params)
        if params['points'] is None:
            _positive(params, 'count', integer=True, minimum=1)
            _positive(params, 'dim', integer=True, minimum=1)
        else:
            points = np.atleast_2d(np.asarray(params['points'], dtype=float))
            if points.size == 0 or not np.all(np.isfinite(points)):
                raise InvalidParams('points must be a nonempty finite array')
            params['points'] = points.tolist()

    def points(self, params, rng):
        if params['points'] is not None:
            return np.atleast_2d(np.asarray(params['points'], dtype=float))
        return rng.uniform(0.0, 1.0, size=(params['count'], params['dim']))

    def cross_distances(self, X, Y, params):
        return lp_distances(X, Y, params['p'])

    def exponent(self, params):
        return params['p']


class CompleteBipartite(BaseFamily):
    name = 'complete_bipartite'
    title = 'Complete bipartite graph K_{m,n}, shortest-path metric'
    defaults = {'m': 3, 'n': 2, 'r': 1.0}

    def check(self, params):
        m = _positive(params, 'm', integer=True, minimum=0)
        n = _positive(params, 'n', integer=True, minimum=0)
        _positive(params, 'r')
        if m + n < 1 or (m + n > 1 and min(m, n) == 0):
            raise InvalidParams('K_{m,n} needs m, n >= 1 to be connected')

    def distances(self, params, rng):
        m, n = params['m'], params['n']
        graph = nx.complete_bipartite_graph(m, n)
        nx.set_edge_attributes(graph, params['r'], 'weight')
        nodes = list(range(m + n))
        dist = nx.floyd_warshall_numpy(graph, nodelist=nodes, weight='weight')
        labels = ['a%d' % i for i in range(m)] + ['b%d' % j for j in range(n)]
        return np.asarray(dist, dtype=float), labels


class UltrametricTree(BaseFamily):
    """Leaves of a seeded random binary tree.

    Internal nodes sit strictly higher than their children and two leaves
    are at twice the height of their lowest common ancestor.
    """
    name = 'ultrametric_tree'
    title = 'Leaves of a random binary tree with increasing heights'
    defaults = {'leaves': 8, 'min_step': 0.1, 'max_step': 1.0}

    def check(self, params):
        _positive(params, 'leaves', integer=True, minimum=1)
        low = _positive(params, 'min_step')
        if _positive(params, 'max_step') < low:
            raise InvalidParams('max_step must be >= min_step')

    def distances(self, params, rng):
        n = params['leaves']
        dist = np.zeros((n, n))

        def build(leaves):
            if len(leaves) == 1:
                return 0.0
            order = rng.permutation(leaves)
            cut = int(rng.integers(1, len(order)))
            left, right = order[:cut], order[cut:]
            height = max(build(left), build(right)) + \
                rng.uniform(params['min_step'], params['max_step'])
            dist[np.ix_(left, right)] = 2.0 * height
            dist[np.ix_(right, left)] = 2.0 * height
            return height

        build(np.arange(n))
        return dist, list(range(n))


class WeightedTree(BaseFamily):
    name = 'weighted_tree'
    title = 'Seeded random recursive tree with random edge lengths'
    defaults = {'nodes': 8, 'min_weight': 0.1, 'max_weight': 1.0}

    def check(self, params):
        _positive(params, 'nodes', integer=True, minimum=1)
        low = _positive(params, 'min_weight')
        if _positive(params, 'max_weight') < low:
            raise InvalidParams('max_weight must be >= min_weight')

    def distances(self, params, rng):
        n = params['nodes']
        graph = nx.Graph()
        graph.add_nodes_from(range(n))
        for node in range(1, n):
            parent = int(rng.integers(0, node))
            weight = rng.uniform(params['min_weight'], params['max_weight'])
            graph.add_edge(parent, node, weight=weight)
        dist = nx.floyd_warshall_numpy(graph, nodelist=list(range(n)),
                                       weight='weight')
        return np.asarray(dist, dtype=float), list(range(n))


def get_family(name):
    for family in FAMILIES:
        if family.name == name:
            return family()
    raise UnsupportedFamily('Family %s does not exist' % name)


def get_family_choices():
    return [(family.name, family.title) for family in FAMILIES]


FAMILIES = [IntervalNet, ChebyshevNet, CircleNet, CantorNet, GridNet,
            SphereFibonacciNet, HyperbolicDiskNet, CompleteBipartite,
            UltrametricTree, WeightedTree, PointCloudLp]
