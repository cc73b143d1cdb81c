# -*- coding: utf-8 -*-
"""
    maglab.magnitude
    ~~~~~~~~~~~~~~~~

    Similarity matrices, their spectral diagnostics, weightings and the
    magnitude of finite metric spaces, plus sweeps over the scale parameter.

    The similarity matrix of ``A`` is ``Z[i, j] = exp(-d(a_i, a_j))``. When
    ``Z`` is positive definite the unique solution of ``Z w = 1`` is the
    weighting and its sum is the magnitude ``|A|``.
"""
import enum
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import stats

from . import settings
from .exceptions import (NotPositiveDefinite, IllConditioned,
    DegenerateQuadraticForm, InsufficientRecords, InvalidParams,
    NonpositiveScale, MaglabError)
from .metric import scale_space
from .utils.io import report_dict
from .utils.linalg import extremal_eigenvalues, solve_spd
from .utils.parallel import parallel_map


logger = logging.getLogger(__name__)


class Verdict(enum.Enum):
    POSITIVE_DEFINITE = 'PositiveDefinite'
    POSITIVE_SEMIDEFINITE = 'PositiveSemidefinite'
    INDEFINITE = 'Indefinite'


@dataclass(frozen=True)
class SimilarityMatrix:
    z: np.ndarray
    source: object

    def __len__(self):
        return self.z.shape[0]


@dataclass(frozen=True)
class SpectrumDiagnostics:
    lambda_min: float
    lambda_max: float
    condition_estimate: float
    verdict: Verdict
    tolerance_used: float
    method: str = 'dense'

    @property
    def is_positive_definite(self):
        return self.verdict is Verdict.POSITIVE_DEFINITE

    def as_dict(self):
        return report_dict('spectrum', lambda_min=self.lambda_min,
                           lambda_max=self.lambda_max,
                           condition_estimate=self.condition_estimate,
                           verdict=self.verdict,
                           tolerance_used=self.tolerance_used,
                           method=self.method)


@dataclass(frozen=True)
class MagnitudeReport:
    magnitude: float
    weighting: np.ndarray
    residual: float
    positively_weighted: bool
    diagnostics: SpectrumDiagnostics
    ill_conditioned: bool = False
    method: str = 'cholesky'

    @property
    def min_weight(self):
        return float(self.weighting.min())

    def as_dict(self):
        return report_dict('magnitude', magnitude=self.magnitude,
                           weighting=self.weighting,
                           residual=self.residual,
                           positively_weighted=self.positively_weighted,
                           min_weight=self.min_weight,
                           ill_conditioned=self.ill_conditioned,
                           method=self.method,
                           diagnostics=self.diagnostics)


@dataclass(frozen=True)
class SweepRecord:
    t: float
    lambda_min: float
    verdict: Verdict
    magnitude: Optional[float] = None
    diversity: Optional[float] = None
    error: Optional[str] = None

    def as_dict(self):
        return {'t': self.t, 'lambda_min': self.lambda_min,
                'verdict': self.verdict.value, 'magnitude': self.magnitude,
                'diversity': self.diversity, 'error': self.error}


@dataclass(frozen=True)
class ScaleSweep:
    records: Tuple[SweepRecord, ...]
    size: int
    space: Optional[dict] = None

    @property
    def grid(self):
        return tuple(r.t for r in self.records)

    header = ('t', 'lambda_min', 'verdict', 'magnitude', 'diversity', 'error')

    def rows(self):
        for record in self.records:
            data = record.as_dict()
            yield [data[key] for key in self.header]

    def as_dict(self):
        return report_dict('scale_sweep', size=self.size, grid=self.grid,
                           space=self.space,
                           records=[r.as_dict() for r in self.records])


def classify(lambda_min, lambda_max):
    """Verdict and tolerance for a symmetric spectrum.

    ``tau = PSD_TOLERANCE * max(1, lambda_max)``; PD above tau, PSD within
    the band ``[-tau, tau]``, indefinite below it.
    """
    tau = settings.PSD_TOLERANCE * max(1.0, lambda_max)
    if lambda_min > tau:
        verdict = Verdict.POSITIVE_DEFINITE
    elif lambda_min >= -tau:
        verdict = Verdict.POSITIVE_SEMIDEFINITE
    else:
        verdict = Verdict.INDEFINITE
    return verdict, tau


def diagnose(matrix):
    """:class:`SpectrumDiagnostics` of a symmetric matrix."""
    low, high, method = extremal_eigenvalues(matrix)
    verdict, tau = classify(low, high)
    condition = high / low if low > 0 else float('inf')
    return SpectrumDiagnostics(lambda_min=low, lambda_max=high,
                               condition_estimate=condition, verdict=verdict,
                               tolerance_used=tau, method=method)


def similarity(space):
    """The similarity matrix ``exp(-d)`` of a space."""
    z = np.exp(-space.dist)
    z.flags.writeable = False
    return SimilarityMatrix(z=z, source=space)


def spectrum_diagnostics(space):
    return diagnose(similarity(space).z)


def weighting_from_similarity(z, diagnostics, strict=False):
    n = z.shape[0]
    w, method = solve_spd(z, np.ones(n))
    residual = float(np.abs(z @ w - 1.0).max())
    tau_w = settings.WEIGHT_TOLERANCE * float(np.abs(w).max())
    ill = diagnostics.condition_estimate > settings.ILL_CONDITIONED
    report = MagnitudeReport(magnitude=float(w.sum()), weighting=w,
                             residual=residual,
                             positively_weighted=bool(w.min() >= -tau_w),
                             diagnostics=diagnostics, ill_conditioned=ill,
                             method=method)
    if ill:
        logger.warning('similarity matrix on %d points is ill conditioned '
                       '(condition estimate %.3g)', n,
                       diagnostics.condition_estimate)
        if strict:
            raise IllConditioned(report)
    return report


def weighting(space, strict=False):
    """Solve ``Z w = 1`` for a space with positive definite similarity.

    :param strict: raise :class:`IllConditioned` instead of flagging the
                   report when the condition estimate exceeds
                   ``settings.ILL_CONDITIONED``.
    :raises NotPositiveDefinite: the verdict is not PositiveDefinite.
    """
    z = similarity(space).z
    diagnostics = diagnose(z)
    if not diagnostics.is_positive_definite:
        raise NotPositiveDefinite(diagnostics)
    return weighting_from_similarity(z, diagnostics, strict)


def magnitude(space, strict=False):
    """``|A|``, the sum of the weighting."""
    return weighting(space, strict).magnitude


def rayleigh(space, mu):
    """``(sum mu)^2 / mu^T Z mu``, a lower bound for the magnitude.

    :raises DegenerateQuadraticForm: the denominator vanishes relative to
                                     ``|mu|^2``.
    """
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (len(space),):
        raise InvalidParams('measure has shape %r, expected (%d,)'
                            % (mu.shape, len(space)))
    z = similarity(space).z
    denominator = float(mu @ z @ mu)
    if abs(denominator) <= settings.DEGENERATE_FORM * float(mu @ mu):
        raise DegenerateQuadraticForm('mu^T Z mu vanishes for this measure')
    return float(mu.sum()) ** 2 / denominator


def line_magnitude(xs):
    """Closed form magnitude of a finite subset of the real line.

    ``1 + sum tanh(g / 2)`` over consecutive gaps g.
    """
    xs = np.sort(np.asarray(xs, dtype=float))
    if xs.size == 0:
        raise InvalidParams('empty point set')
    return 1.0 + float(np.tanh(np.diff(xs) / 2.0).sum())


def _sweep_record(space, t, with_diversity):
    scaled = scale_space(space, t)
    z = similarity(scaled).z
    diagnostics = diagnose(z)
    value = diversity = error = None
    if diagnostics.is_positive_definite:
        try:
            value = weighting_from_similarity(z, diagnostics).magnitude
        except MaglabError as exc:
            error = str(exc)
    if with_diversity and diagnostics.verdict is not Verdict.INDEFINITE:
        from .diversity import max_diversity
        try:
            diversity = max_diversity(scaled).diversity
        except MaglabError as exc:
            error = str(exc)
    return SweepRecord(t=float(t), lambda_min=diagnostics.lambda_min,
                       verdict=diagnostics.verdict, magnitude=value,
                       diversity=diversity, error=error)


def _describe(space):
    spec = space.provenance
    return {'points': len(space), 'diameter': space.diameter,
            'spec': spec.as_dict() if spec is not None else None}


def scale_sweep(space, grid, with_diversity=False):
    """Evaluate the magnitude function ``t -> |tA|`` on a grid of scales.

    Records come back sorted by t. Scales where the similarity matrix is
    not positive definite keep their spectrum but no magnitude.
    """
    grid = sorted(set(float(t) for t in grid))
    if not grid:
        raise InvalidParams('empty scale grid')
    if grid[0] <= 0 or math.isinf(grid[-1]):
        raise NonpositiveScale('scales must be positive reals')
    logger.debug('sweeping %d scales on %d points', len(grid), len(space))
    records = parallel_map(
        lambda t: _sweep_record(space, t, with_diversity), grid)
    return ScaleSweep(records=tuple(records), size=len(space),
                      space=_describe(space))


def magnitude_dimension_estimate(sweep, window):
    """Slope of ``log |tA|`` against ``log t`` inside a window of scales.

    Ordinary least squares over the positive definite records with
    ``window[0] <= t <= window[1]``. Returns ``(slope, stderr)``.

    :raises InsufficientRecords: fewer than three usable records.
    """
    low, high = window
    usable = [r for r in sweep.records
              if low <= r.t <= high and r.magnitude is not None
              and r.magnitude > 0]
    if len(usable) < 3:
        raise InsufficientRecords('need three positive definite records in '
                                  '[%g, %g], got %d' % (low, high,
                                                        len(usable)))
    x = np.log([r.t for r in usable])
    y = np.log([r.magnitude for r in usable])
    if np.ptp(y) == 0:
        return 0.0, 0.0
    fit = stats.linregress(x, y)
    return float(fit.slope), float(fit.stderr)


def lambda_min(space):
    return spectrum_diagnostics(space).lambda_min


def bisect_threshold(make_space, low, high, tol=1e-6, max_steps=200):
    """Locate the parameter where the similarity matrix loses definiteness.

    ``make_space(x)`` builds a space for parameter x; the smallest
    eigenvalue of its similarity matrix must change sign between ``low``
    and ``high``.
    """
    f_low = lambda_min(make_space(low))
    f_high = lambda_min(make_space(high))
    if (f_low > 0) == (f_high > 0):
        raise InvalidParams('smallest eigenvalue has the same sign at both '
                            'ends (%.3g, %.3g)' % (f_low, f_high))
    for _ in range(max_steps):
        if high - low <= tol:
            break
        middle = 0.5 * (low + high)
        if (lambda_min(make_space(middle)) > 0) == (f_low > 0):
            low = middle
        else:
            high = middle
    return 0.5 * (low + high)
