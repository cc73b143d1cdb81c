# -*- coding: utf-8 -*-
"""
    maglab.diversity
    ~~~~~~~~~~~~~~~~

    Maximum diversity: the largest value of ``1 / mu^T Z mu`` over
    probability measures on a space whose similarity matrix is positive
    semidefinite. Computed with the away-step Frank-Wolfe method on the
    simplex.
"""
import enum
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import settings
from .exceptions import IndefiniteForm, NotConverged, Inconsistent
from .magnitude import Verdict, diagnose, similarity, weighting
from .utils.io import report_dict


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiversityReport:
    diversity: float
    upper_bound: float
    measure: np.ndarray
    support: Tuple[int, ...]
    fw_gap: float
    iterations: int
    converged: bool
    objective_trace: Optional[Tuple[float, ...]] = None

    @property
    def objective(self):
        return 1.0 / self.diversity

    def as_weight_measure(self, space):
        """The measure ``diversity * mu`` and its largest deviation
        ``max |Z (diversity * mu) - 1|`` over the support.

        For a positively weighted space this is the weighting itself.
        """
        scaled = self.diversity * self.measure
        support = list(self.support) or list(range(len(scaled)))
        residual = float(np.abs(
            similarity(space).z[support] @ scaled - 1.0).max())
        return scaled, residual

    def as_dict(self):
        return report_dict('diversity', diversity=self.diversity,
                           upper_bound=self.upper_bound,
                           measure=self.measure, support=self.support,
                           fw_gap=self.fw_gap, iterations=self.iterations,
                           converged=self.converged,
                           objective_trace=self.objective_trace)


def _polish(z, mu, q):
    """Exact minimizer on the face spanned by the current support.

    Returns ``(mu, q)`` of the better of the two points.
    """
    support = np.flatnonzero(mu > 0)
    try:
        w = np.linalg.solve(z[np.ix_(support, support)],
                            np.ones(len(support)))
    except np.linalg.LinAlgError:
        return mu, q
    if not np.all(w > 0):
        return mu, q
    candidate = np.zeros_like(mu)
    candidate[support] = w / w.sum()
    value = float(candidate @ z @ candidate)
    if value < q:
        return candidate, value
    return mu, q


def max_diversity(space, tol=None, max_iters=None, strict=False,
                  trace=False, polish_every=50):
    """Maximize diversity over probability measures on ``space``.

    Starts from the uniform measure. Each iteration takes the better of a
    Frank-Wolfe step towards the vertex with the smallest gradient entry and
    an away step from the support vertex with the largest, using exact line
    search on the quadratic objective ``q(mu) = mu^T Z mu``. Every
    ``polish_every`` iterations the exact optimum on the current support
    face is tried. Stops when the duality gap falls below ``tol * q``.

    :param strict: raise :class:`NotConverged` when ``max_iters`` is hit.
    :param trace: keep the objective value of every iteration.
    :raises IndefiniteForm: the similarity matrix is indefinite.
    """
    tol = settings.DIVERSITY_TOLERANCE if tol is None else tol
    max_iters = settings.DIVERSITY_MAX_ITERATIONS if max_iters is None \
        else max_iters
    z = similarity(space).z
    diagnostics = diagnose(z)
    if diagnostics.verdict is Verdict.INDEFINITE:
        raise IndefiniteForm(diagnostics)

    n = z.shape[0]
    mu = np.full(n, 1.0 / n)
    g = z @ mu
    q = float(mu @ g)
    history = [q] if trace else None
    gap = float('inf')
    converged = False
    iteration = 0
    while True:
        s = int(np.argmin(g))
        gap = 2.0 * (q - float(g[s]))
        if gap <= tol * q:
            converged = True
            break
        if iteration >= max_iters:
            break
        iteration += 1

        active = mu > 0
        a = int(np.argmax(np.where(active, g, -np.inf)))
        away_gap = 2.0 * (float(g[a]) - q)
        if gap >= away_gap or mu[a] >= 1.0:
            # towards vertex s: d = e_s - mu
            slope = float(g[s]) - q
            curvature = float(z[s, s]) - 2.0 * float(g[s]) + q
            step = 1.0
            if curvature > 0:
                step = min(1.0, -slope / curvature)
            mu *= 1.0 - step
            mu[s] += step
            g = (1.0 - step) * g + step * z[s]
        else:
            # away from vertex a: d = mu - e_a
            step_max = mu[a] / (1.0 - mu[a])
            slope = q - float(g[a])
            curvature = q - 2.0 * float(g[a]) + float(z[a, a])
            step = step_max
            if curvature > 0:
                step = min(step_max, -slope / curvature)
            mu *= 1.0 + step
            mu[a] -= step
            if step == step_max:
                mu[a] = 0.0
            g = (1.0 + step) * g - step * z[a]
        np.maximum(mu, 0.0, out=mu)

        if polish_every and iteration % polish_every == 0:
            mu /= mu.sum()
            mu, _ = _polish(z, mu, float(mu @ z @ mu))
            g = z @ mu
        q = float(mu @ g)
        if trace:
            history.append(q)

    mu = mu / mu.sum()
    q = float(mu @ z @ mu)
    if not converged:
        logger.warning('Frank-Wolfe hit %d iterations on %d points with gap '
                       '%.3g', iteration, n, gap)
    upper = 1.0 / (q - gap) if q - gap > 0 else float('inf')
    report = DiversityReport(
        diversity=1.0 / q, upper_bound=max(upper, 1.0 / q), measure=mu,
        support=tuple(int(i) for i in
                      np.flatnonzero(mu > settings.SUPPORT_THRESHOLD)),
        fw_gap=gap, iterations=iteration, converged=converged,
        objective_trace=tuple(history) if trace else None)
    if strict and not converged:
        raise NotConverged(report)
    return report


class Certificate(enum.Enum):
    WEIGHTING = 'weighting'
    CROSS_CHECKED = 'weighting+diversity'


def is_positively_weighted(space, tol=None, cross_check=True):
    """Decide whether the weighting of ``space`` is nonnegative.

    The sign of the weighting decides. With ``cross_check`` the answer is
    confirmed against maximum diversity, which equals the magnitude exactly
    when the weighting is nonnegative. Returns ``(flag, certificate)``.

    :raises NotPositiveDefinite: the weighting does not exist.
    :raises Inconsistent: the sign test and the cross-check disagree.
    """
    tol = settings.POSITIVE_WEIGHT_TOLERANCE if tol is None else tol
    report = weighting(space)
    positive = report.positively_weighted
    if not cross_check:
        return positive, Certificate.WEIGHTING
    diversity = max_diversity(space,
                              tol=min(settings.DIVERSITY_TOLERANCE,
                                      tol * 1e-2)).diversity
    agree = abs(report.magnitude - diversity) <= tol * abs(report.magnitude)
    if agree != positive:
        raise Inconsistent(
            'weighting sign test says %s but |A| = %.12g and diversity = '
            '%.12g' % (positive, report.magnitude, diversity),
            min_weight=report.min_weight, magnitude=report.magnitude,
            diversity=diversity)
    return positive, Certificate.CROSS_CHECKED


def diversity_diameter_check(space, slack=1e-9):
    """Check that the maximum diversity is at most ``exp(diam A) + slack``."""
    diversity = max_diversity(space).diversity
    return diversity <= np.exp(space.diameter) + slack
