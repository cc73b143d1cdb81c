# -*- coding: utf-8 -*-
"""
    maglab.negtype
    ~~~~~~~~~~~~~~

    Negative type and stable positive definiteness.

    A space is of negative type when its half-snowflake embeds isometrically
    in a Hilbert space, which holds exactly when the Gram matrix
    ``G[i, j] = (d(0, i) + d(0, j) - d(i, j)) / 2`` is positive semidefinite.
    This is equivalent to ``tA`` being positive definite for every t > 0.
"""
import enum
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import settings
from .exceptions import InvalidParams
from .magnitude import Verdict, classify, diagnose, similarity
from .metric import scale_space
from .utils.io import report_dict
from .utils.linalg import smallest_eigenpair
from .utils.parallel import parallel_map


logger = logging.getLogger(__name__)


class Classification(enum.Enum):
    STABLY_POSITIVE_DEFINITE = 'StablyPositiveDefinite'
    NOT_STABLY_PD = 'NotStablyPD'
    UNDETERMINED = 'Undetermined'


@dataclass(frozen=True)
class NegativeTypeReport:
    negative_type: bool
    gram_lambda_min: float
    witness_vector: Optional[np.ndarray]
    basepoint: int
    tolerance_used: float

    def witness_value(self, space):
        """``x^T D x`` for the witness, positive when it refutes."""
        if self.witness_vector is None:
            return None
        x = self.witness_vector
        return float(x @ space.dist @ x)

    def as_dict(self):
        return report_dict('negative_type', negative_type=self.negative_type,
                           gram_lambda_min=self.gram_lambda_min,
                           witness_vector=self.witness_vector,
                           basepoint=self.basepoint,
                           tolerance_used=self.tolerance_used)


@dataclass(frozen=True)
class StabilityRecord:
    t: float
    lambda_min: float
    verdict: Verdict

    def as_dict(self):
        return {'t': self.t, 'lambda_min': self.lambda_min,
                'verdict': self.verdict.value}


@dataclass(frozen=True)
class StabilityReport:
    records: Tuple[StabilityRecord, ...]
    classification: Classification
    negative_type: NegativeTypeReport
    consistent: bool = True

    @property
    def failing_scales(self):
        return tuple(r.t for r in self.records
                     if r.verdict is Verdict.INDEFINITE)

    header = ('t', 'lambda_min', 'verdict')

    def rows(self):
        for record in self.records:
            yield [record.t, record.lambda_min, record.verdict.value]

    def as_dict(self):
        return report_dict('stability', classification=self.classification,
                           consistent=self.consistent,
                           failing_scales=self.failing_scales,
                           records=[r.as_dict() for r in self.records],
                           negative_type=self.negative_type)


def gram_matrix(space, basepoint=0):
    n = len(space)
    if not 0 <= basepoint < n:
        raise InvalidParams('basepoint %r out of range for %d points'
                            % (basepoint, n))
    d = space.dist
    d0 = d[basepoint]
    return 0.5 * (d0[:, None] + d0[None, :] - d)


def negative_type_test(space, basepoint=0):
    """Decide negative type with the Gram test.

    On failure the eigenvector of the most negative Gram eigenvalue, with
    the basepoint entry set to minus the sum of the others, is a mean-zero
    vector x with ``x^T D x > 0``.
    """
    gram = gram_matrix(space, basepoint)
    low, vector, high = smallest_eigenpair(gram)
    verdict, tau = classify(low, high)
    negative = verdict is not Verdict.INDEFINITE
    witness = None
    if not negative:
        witness = np.array(vector, dtype=float)
        witness[basepoint] = 0.0
        witness[basepoint] = -witness.sum()
        logger.debug('negative type fails on %d points, gram lambda_min '
                     '%.3g', len(space), low)
    return NegativeTypeReport(negative_type=negative, gram_lambda_min=low,
                              witness_vector=witness, basepoint=basepoint,
                              tolerance_used=tau)


def _scan_record(space, t):
    diagnostics = diagnose(similarity(scale_space(space, t)).z)
    return StabilityRecord(t=float(t), lambda_min=diagnostics.lambda_min,
                           verdict=diagnostics.verdict)


def stability_scan(space, scales=None):
    """Scan ``lambda_min`` of the similarity matrix of ``tA`` over scales.

    Any indefinite scale refutes stable positive definiteness. Otherwise
    only the Gram test can certify it; a scan without that certificate is
    ``Undetermined``. Scales within the PSD band do not refute.
    """
    scales = settings.DEFAULT_STABILITY_SCALES if scales is None else scales
    scales = sorted(set(float(t) for t in scales))
    if not scales:
        raise InvalidParams('empty scale list')
    records = tuple(parallel_map(lambda t: _scan_record(space, t), scales))
    report = negative_type_test(space)
    failing = any(r.verdict is Verdict.INDEFINITE for r in records)
    if failing:
        classification = Classification.NOT_STABLY_PD
    elif report.negative_type:
        classification = Classification.STABLY_POSITIVE_DEFINITE
    else:
        classification = Classification.UNDETERMINED
    consistent = not (failing and report.negative_type)
    if not consistent:
        logger.warning('space passes the Gram test but is indefinite at '
                       'scales %s', [r.t for r in records
                                     if r.verdict is Verdict.INDEFINITE])
    return StabilityReport(records=records, classification=classification,
                           negative_type=report, consistent=consistent)
