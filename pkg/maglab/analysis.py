# -*- coding: utf-8 -*-
"""
    maglab.analysis
    ~~~~~~~~~~~~~~~

    Studies built on the engines: magnitude of compact spaces through nets
    of increasing resolution, volume growth bounds, Fourier transforms of
    ``exp(-|x|^p)`` with the upper bounds they yield, and the experiments
    that exhibit spaces failing stable positive definiteness.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.special import gamma, gammaln

from . import settings
from .exceptions import (InvalidParams, ExponentOutOfRange, NonpositiveScale,
    LevelNotPD, QuadratureDivergence, NegativeRatioOnly, InsufficientRecords)
from .magnitude import (diagnose, similarity, weighting_from_similarity,
    rayleigh, scale_sweep, magnitude_dimension_estimate, classify)
from .metric import FiniteMetricSpace, SpaceSpec, generate, lp_product, \
    hausdorff_from_cross
from .negtype import stability_scan
from .utils import fourier
from .utils.families import get_family, lp_distances
from .utils.io import report_dict
from .utils.linalg import extremal_eigenvalues
from .utils.parallel import parallel_map


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LevelRecord:
    level: int
    points: int
    gap: float
    magnitude: Optional[float]
    lambda_min: float
    condition_estimate: float
    quadrature_bound: Optional[float] = None
    error: Optional[str] = None

    def as_dict(self):
        return {'level': self.level, 'points': self.points, 'gap': self.gap,
                'magnitude': self.magnitude, 'lambda_min': self.lambda_min,
                'condition_estimate': self.condition_estimate,
                'quadrature_bound': self.quadrature_bound,
                'error': self.error}


@dataclass(frozen=True)
class ConvergenceStudy:
    template: SpaceSpec
    records: Tuple[LevelRecord, ...]
    extrapolated_limit: Optional[float]
    fit_residual: float
    monotone: bool
    nested: bool

    header = ('level', 'points', 'gap', 'magnitude', 'quadrature_bound',
              'error')

    def rows(self):
        for record in self.records:
            data = record.as_dict()
            yield [data[key] for key in self.header]

    def as_dict(self):
        return report_dict('convergence', template=self.template.as_dict(),
                           records=[r.as_dict() for r in self.records],
                           extrapolated_limit=self.extrapolated_limit,
                           fit_residual=self.fit_residual,
                           monotone=self.monotone, nested=self.nested)


def _transform_gap(gap, spec):
    # t * d^alpha is increasing in d, so it commutes with sup-inf
    return spec.scale * gap ** spec.snowflake


def _level(family, spec, finest, quadrature):
    params = family.clean(spec.params)
    rng = np.random.Generator(np.random.Philox(spec.seed))
    points = family.points(params, rng)
    space = generate(spec)
    gap = _transform_gap(hausdorff_from_cross(
        family.cross_distances(points, finest, params)), spec)
    level = spec.params[family.refinement_param]
    z = similarity(space).z
    diagnostics = diagnose(z)
    if not diagnostics.is_positive_definite:
        error = LevelNotPD(level, diagnostics)
        logger.warning('%s', error)
        return LevelRecord(level=level, points=len(space), gap=gap,
                           magnitude=None,
                           lambda_min=diagnostics.lambda_min,
                           condition_estimate=diagnostics.condition_estimate,
                           error=str(error))
    report = weighting_from_similarity(z, diagnostics)
    bound = None
    if quadrature:
        bound = rayleigh(space, family.quadrature_weights(points, params))
    return LevelRecord(level=level, points=len(space), gap=gap,
                       magnitude=report.magnitude,
                       lambda_min=diagnostics.lambda_min,
                       condition_estimate=diagnostics.condition_estimate,
                       quadrature_bound=bound)


def _extrapolate(records, window):
    usable = [r for r in records if r.magnitude is not None][-window:]
    if not usable:
        return None, 0.0
    gaps = np.array([r.gap for r in usable])
    values = np.array([r.magnitude for r in usable])
    if len(usable) < 2 or np.ptp(gaps) == 0:
        return float(values[-1]), 0.0
    slope, intercept = np.polyfit(gaps, values, 1)
    residual = values - (slope * gaps + intercept)
    return float(intercept), float(np.sqrt(np.mean(residual ** 2)))


def _is_monotone(records):
    usable = [r for r in records if r.magnitude is not None]
    eps = np.finfo(float).eps
    for coarse, fine in zip(usable, usable[1:]):
        condition = max(coarse.condition_estimate, fine.condition_estimate)
        tol = max(settings.MONOTONE_TOLERANCE,
                  condition * eps * abs(fine.magnitude))
        if fine.magnitude < coarse.magnitude - tol:
            return False
    return True


def approx_magnitude(template, levels, quadrature=False, fit_window=None):
    """Magnitude of a compact space through nets of increasing resolution.

    Every level sets the family's refinement parameter. The Hausdorff gap
    of each net to the finest one is measured in the ambient metric, and
    the limit is extrapolated from the trailing levels with the model
    ``m = m_inf - c * gap``.

    :param template: :class:`SpaceSpec` of a net family.
    :param levels: strictly increasing refinement parameters.
    :param quadrature: also evaluate the Rayleigh lower bound of the
                       family's cell-measure weights.
    """
    family = get_family(template.family)
    if family.refinement_param is None or not family.has_points:
        raise InvalidParams('family %s has no refinement parameter'
                            % family.name)
    levels = [int(k) for k in levels]
    if not levels:
        raise InvalidParams('no levels given')
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise InvalidParams('levels must be strictly increasing')
    window = fit_window or settings.FIT_WINDOW

    specs = [template.with_params(**{family.refinement_param: k})
             for k in levels]
    finest_spec = specs[-1]
    finest_params = family.clean(finest_spec.params)
    finest = family.points(
        finest_params, np.random.Generator(np.random.Philox(finest_spec.seed)))
    records = tuple(parallel_map(
        lambda spec: _level(family, spec, finest, quadrature), specs))
    limit, residual = _extrapolate(records, window)
    monotone = _is_monotone(records)
    if family.nested and not monotone:
        logger.warning('magnitudes of nested %s nets decrease', family.name)
    logger.info('study of %s finished with %d levels, limit %s',
                family.name, len(records), limit)
    return ConvergenceStudy(template=template, records=records,
                            extrapolated_limit=limit, fit_residual=residual,
                            monotone=monotone, nested=family.nested)


def lp_ball_volume(n, p):
    """Volume of the unit ball ``{||x||_p <= 1}`` in ``R^n``."""
    if int(n) != n or n < 1:
        raise InvalidParams('dimension must be a positive integer, got %r'
                            % (n,))
    if not p > 0:
        raise ExponentOutOfRange('p must be positive, got %r' % (p,))
    n = int(n)
    if math.isinf(p):
        return 2.0 ** n
    try:
        value = (2.0 * gamma(1.0 + 1.0 / p)) ** n / gamma(1.0 + n / p)
    except OverflowError:
        value = float('inf')
    if not math.isfinite(value) or value == 0:
        value = math.exp(n * (math.log(2.0) + gammaln(1.0 + 1.0 / p))
                         - gammaln(1.0 + n / p))
    return float(value)


def _homogeneity(p, alpha):
    if not 0 < p <= 2:
        raise ExponentOutOfRange('p must lie in (0, 2], got %r' % (p,))
    if not 0 < alpha <= 1:
        raise ExponentOutOfRange('alpha must lie in (0, 1], got %r'
                                 % (alpha,))
    return alpha * min(1.0, p)


def growth_lower_bound(n, p, alpha, vol, t):
    """Lower bound for the magnitude of ``tA`` in ``(l_p^n)^alpha``.

    ``vol(A) t^n / (Gamma(n / beta + 1) vol(B))`` with ``beta = alpha *
    min(1, p)`` and B the unit ball; t dilates the set.
    """
    beta = _homogeneity(p, alpha)
    if not vol > 0:
        raise InvalidParams('volume must be positive, got %r' % (vol,))
    if t < 0 or math.isinf(t):
        raise NonpositiveScale('t must be a nonnegative real, got %r' % (t,))
    if t == 0:
        return 0.0
    log_bound = (math.log(vol) + n * math.log(t) - gammaln(n / beta + 1.0)
                 - math.log(lp_ball_volume(n, p)))
    return math.exp(log_bound)


@dataclass(frozen=True)
class BoundCheck:
    t: float
    lower_bound: float
    net_magnitude: Optional[float]
    margin: float
    satisfied: bool

    def as_dict(self):
        return {'t': self.t, 'lower_bound': self.lower_bound,
                'net_magnitude': self.net_magnitude, 'margin': self.margin,
                'satisfied': self.satisfied}


@dataclass(frozen=True)
class GrowthStudy:
    template: SpaceSpec
    checks: Tuple[BoundCheck, ...]
    slope: Optional[float]
    slope_stderr: Optional[float]

    @property
    def satisfied(self):
        return all(check.satisfied for check in self.checks)

    header = ('t', 'net_magnitude', 'lower_bound', 'margin', 'satisfied')

    def rows(self):
        for check in self.checks:
            data = check.as_dict()
            yield [data[key] for key in self.header]

    def as_dict(self):
        return report_dict('growth', template=self.template.as_dict(),
                           checks=[c.as_dict() for c in self.checks],
                           slope=self.slope, slope_stderr=self.slope_stderr,
                           satisfied=self.satisfied)


def growth_bound_study(template, t_grid, window=None):
    """Compare net magnitudes of ``tA`` with the volume lower bound.

    ``template`` is an ``interval_net`` or ``grid_net`` spec; t scales the
    metric, which for a metric homogeneous of degree beta is the dilation
    ``t^(1/beta)`` of the set. The margin is 5% of the bound plus the bound
    times the dimension times the relative covering radius of the net.
    """
    if template.family not in ('interval_net', 'grid_net'):
        raise InvalidParams('growth studies need an interval or grid net, '
                            'got %s' % template.family)
    family = get_family(template.family)
    params = family.clean(template.params)
    n = family.dimension(params)
    p = family.exponent(params)
    beta = _homogeneity(p, template.snowflake)
    vol = family.volume(params)
    count = params['m'] if template.family == 'grid_net' else params['n']
    radius = 0.5 if count == 1 else 1.0 / (2 * (count - 1))

    space = generate(template)
    sweep = scale_sweep(space, t_grid)
    checks = []
    for record in sweep.records:
        dilation = (template.scale * record.t) ** (1.0 / beta)
        lower = growth_lower_bound(n, p, template.snowflake, vol, dilation)
        margin = lower * (settings.GROWTH_MARGIN + n * radius)
        satisfied = record.magnitude is not None and \
            record.magnitude >= lower - margin
        checks.append(BoundCheck(t=record.t, lower_bound=lower,
                                 net_magnitude=record.magnitude,
                                 margin=margin, satisfied=satisfied))
    window = window or (sweep.grid[0], sweep.grid[-1])
    try:
        slope, stderr = magnitude_dimension_estimate(sweep, window)
    except InsufficientRecords:
        slope = stderr = None
    return GrowthStudy(template=template, checks=tuple(checks), slope=slope,
                       slope_stderr=stderr)


@dataclass(frozen=True)
class FourierReport:
    p: float
    grid: np.ndarray
    values: np.ndarray
    positive: bool
    radially_decreasing: bool
    fitted_c: float
    tail: float
    error_estimate: float

    header = ('omega', 'value')

    def rows(self):
        return zip(self.grid, self.values)

    def as_dict(self):
        return report_dict('fourier', p=self.p, grid=self.grid,
                           values=self.values, positive=self.positive,
                           radially_decreasing=self.radially_decreasing,
                           fitted_c=self.fitted_c, tail=self.tail,
                           error_estimate=self.error_estimate)


def _gamma_transform(beta, frequencies, half_width, nodes):
    tail = fourier.gamma_tail(beta, half_width)
    if tail > settings.QUADRATURE_TAIL_TOLERANCE:
        raise QuadratureDivergence(
            'tail mass %.3g beyond L=%g exceeds %.1g, raise L'
            % (tail, half_width, settings.QUADRATURE_TAIL_TOLERANCE), tail)
    samples = fourier.gamma_samples(beta, half_width, nodes)
    values = fourier.cosine_transform(samples, half_width, frequencies)
    error = tail + fourier.discretization_error(beta, half_width, nodes)
    return values, tail, error


def gamma_hat_1d(p, half_width=None, nodes=None, frequencies=None):
    """Sample the Fourier transform of ``exp(-|x|^p)``.

    Trapezoid quadrature of the cosine transform over ``[0, L]``.

    :param p: exponent in (0, 2].
    :param frequencies: defaults to 401 points on ``[0, 10]``.
    :raises QuadratureDivergence: the mass beyond L exceeds the tolerance.
    """
    if not 0 < p <= 2:
        raise ExponentOutOfRange('p must lie in (0, 2], got %r' % (p,))
    half_width = half_width or settings.QUADRATURE_HALF_WIDTH
    nodes = nodes or settings.QUADRATURE_NODES
    if frequencies is None:
        frequencies = np.linspace(0.0, settings.FOURIER_MAX_FREQUENCY,
                                  settings.FOURIER_FREQUENCIES)
    grid = np.asarray(frequencies, dtype=float)
    values, tail, error = _gamma_transform(p, grid, half_width, nodes)
    positive = bool(np.all(values > 0))
    order = np.argsort(np.abs(grid))
    decreasing = bool(np.all(np.diff(values[order]) <= 0))
    fitted_c = 0.0
    if positive:
        fitted_c = float(np.min(values * (1.0 + np.abs(grid)) ** (1.0 + p)))
    return FourierReport(p=float(p), grid=grid, values=values,
                         positive=positive, radially_decreasing=decreasing,
                         fitted_c=fitted_c, tail=tail, error_estimate=error)


@dataclass(frozen=True)
class FourierBound:
    bound: float
    error_estimate: float
    frequency: float
    ell: float
    p: float
    alpha: float
    mollifier_radius: float
    t: float = 1.0

    def as_dict(self):
        return report_dict('fourier_bound', bound=self.bound,
                           error_estimate=self.error_estimate,
                           frequency=self.frequency, ell=self.ell, p=self.p,
                           alpha=self.alpha,
                           mollifier_radius=self.mollifier_radius, t=self.t)


def fourier_upper_bound_1d(ell, p, alpha, mollifier_radius, t=1.0,
                           half_width=None, nodes=None, frequencies=None):
    """Upper bound for the magnitude of ``t [0, ell]`` in ``(l_p^1)^alpha``.

    psi is the indicator of ``[-a, a]`` convolved with a bump, equal to one
    on ``[-t ell, t ell]`` and supported in ``[-t R, t R]``. The magnitude is
    at most the supremum of ``psi^ / F^`` where ``F = exp(-|x|^beta)``; the
    supremum is taken over a frequency grid.

    :param mollifier_radius: R > ell.
    :param t: dilation of the interval.
    """
    beta = _homogeneity(p, alpha)
    if ell < 0 or not mollifier_radius > ell:
        raise InvalidParams('need 0 <= ell < mollifier_radius, got %r, %r'
                            % (ell, mollifier_radius))
    if not t > 0:
        raise NonpositiveScale('t must be positive, got %r' % (t,))
    width = t * (mollifier_radius - ell)
    half_length = t * ell + width / 2.0
    if frequencies is None:
        frequencies = np.linspace(0.0, settings.FOURIER_BOUND_SPAN / width,
                                  settings.FOURIER_BOUND_FREQUENCIES)
    grid = np.asarray(frequencies, dtype=float)

    psi_hat = fourier.interval_transform(half_length, grid) * \
        fourier.bump_transform(grid * width / 2.0)
    if beta == 1:
        f_hat = fourier.closed_form(1, grid)
        error = np.zeros_like(grid)
    else:
        half_width = half_width or settings.QUADRATURE_HALF_WIDTH
        nodes = nodes or settings.QUADRATURE_NODES
        f_hat, _, err = _gamma_transform(beta, grid, half_width, nodes)
        error = np.full_like(grid, err)
    usable = (f_hat > error) & (psi_hat > 0)
    if not np.any(usable):
        raise NegativeRatioOnly('psi^ / F^ has no positive value on the grid')
    ratio = np.where(usable, psi_hat / np.where(usable, f_hat, 1.0), -np.inf)
    best = int(np.argmax(ratio))
    if best == len(grid) - 1:
        logger.warning('supremum of the Fourier ratio sits at the end of '
                       'the frequency grid')
    bound = float(ratio[best])
    relative = error[best] / (f_hat[best] - error[best])
    return FourierBound(bound=bound, error_estimate=bound * relative,
                        frequency=float(grid[best]), ell=float(ell),
                        p=float(p), alpha=float(alpha),
                        mollifier_radius=float(mollifier_radius), t=float(t))


CROSS = [[0.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]


def product_counterexample_space():
    """``A x A`` in the l_2 sum of two copies of l_1^2,
    ``A = {0, +-e1, +-e2}``."""
    cross = generate(SpaceSpec('point_cloud_lp', {'p': 1.0, 'points': CROSS}))
    return lp_product(cross, cross, 2)


def product_counterexample_experiment(scales=None):
    """Scan the 25 point product space over ``t = 2^-k``, k = 0..12."""
    if scales is None:
        scales = [2.0 ** -k for k in range(13)]
    report = stability_scan(product_counterexample_space(), scales)
    logger.info('product experiment: %s, failing scales %s',
                report.classification.value, report.failing_scales)
    return report


@dataclass(frozen=True)
class Witness:
    points: np.ndarray
    scale: float
    lambda_min: float
    trial: int

    def space(self, p):
        return FiniteMetricSpace(lp_distances(self.points, self.points, p),
                                 validate=False)

    def as_dict(self):
        return {'points': self.points, 'scale': self.scale,
                'lambda_min': self.lambda_min, 'trial': self.trial}


@dataclass(frozen=True)
class WitnessSearch:
    p: float
    n: int
    witness: Optional[Witness]
    trials: int
    smallest_lambda: Optional[float]
    smallest_scale: Optional[float]

    @property
    def found(self):
        return self.witness is not None

    def as_dict(self):
        return report_dict('witness_search', p=self.p, n=self.n,
                           found=self.found, witness=self.witness,
                           trials=self.trials,
                           smallest_lambda=self.smallest_lambda,
                           smallest_scale=self.smallest_scale)


def sample_cloud(rng, n, max_points, lattice=False):
    """Draw between 5 and ``max_points`` distinct points of ``R^n``.

    Uniform in the cube ``[-1, 1]^n``, or from the lattice ``{-1, 0, 1}^n``.
    """
    size = int(rng.integers(min(5, max_points), max_points + 1))
    if lattice:
        cube = np.array(np.meshgrid(*([[-1.0, 0.0, 1.0]] * n),
                                    indexing='ij')).reshape(n, -1).T
        size = min(size, len(cube))
        return cube[rng.choice(len(cube), size=size, replace=False)]
    return rng.uniform(-1.0, 1.0, size=(size, n))


def _trial(p, n, scales, seed, trial, max_points, lattice):
    rng = np.random.Generator(
        np.random.Philox(np.random.SeedSequence([seed, trial])))
    points = sample_cloud(rng, n, max_points, lattice)
    dist = lp_distances(points, points, p)
    best = None
    for t in scales:
        low, high, _ = extremal_eigenvalues(np.exp(-t * dist))
        verdict, tau = classify(low, high)
        if best is None or low < best[1]:
            best = (t, low, low < -tau)
        if low < -tau:
            break
    return points, best


def witness_search(p, n, scales=None, budget=1000, seed=0, max_points=None,
                   lattice=False):
    """Look for a finite subset of ``l_p^n`` that is not positive definite.

    Trial i draws its cloud from ``Philox(SeedSequence([seed, i]))`` and
    scans the scales; the first trial with an indefinite similarity matrix
    is returned. The result does not depend on the number of threads.
    """
    if budget < 0:
        raise InvalidParams('budget must be >= 0')
    scales = sorted(settings.DEFAULT_STABILITY_SCALES if scales is None
                    else scales)
    max_points = max_points or settings.WITNESS_MAX_POINTS
    chunk = max(1, settings.THREADS) * 16
    smallest = None
    for start in range(0, budget, chunk):
        trials = range(start, min(budget, start + chunk))
        results = parallel_map(
            lambda i: _trial(p, n, scales, seed, i, max_points, lattice),
            trials)
        for i, (points, (t, low, failing)) in zip(trials, results):
            if smallest is None or low < smallest[1]:
                smallest = (t, low)
            if failing:
                logger.info('witness found in trial %d at t=%g', i, t)
                return WitnessSearch(
                    p=p, n=n, witness=Witness(points=points, scale=t,
                                              lambda_min=low, trial=i),
                    trials=i + 1, smallest_lambda=low, smallest_scale=t)
    return WitnessSearch(p=p, n=n, witness=None, trials=budget,
                         smallest_lambda=smallest[1] if smallest else None,
                         smallest_scale=smallest[0] if smallest else None)
