# -*- coding: utf-8 -*-
"""
    maglab.exceptions
    ~~~~~~~~~~~~~~~~~

    Error types raised by the engines. Errors about bad input also derive
    from :class:`ValueError`.
"""


class MaglabError(Exception):
    """Base class of every error raised by maglab."""


class InvalidMetric(MaglabError, ValueError):
    """A distance matrix violates the metric axioms."""

    def __init__(self, message, report=None):
        super(InvalidMetric, self).__init__(message)
        self.report = report


class NonSquareMatrix(InvalidMetric):
    pass


class NonFiniteEntry(InvalidMetric):
    pass


class InvalidParams(MaglabError, ValueError):
    pass


class UnsupportedFamily(InvalidParams):
    pass


class NonpositiveScale(InvalidParams):
    pass


class ExponentOutOfRange(InvalidParams):
    pass


class EmptySubset(InvalidParams):
    pass


class EigensolverFailure(MaglabError):

    def __init__(self, message, iterations=None):
        super(EigensolverFailure, self).__init__(message)
        self.iterations = iterations


class NotPositiveDefinite(MaglabError):
    """The similarity matrix is not positive definite.

    :param diagnostics: the :class:`~maglab.magnitude.SpectrumDiagnostics`
                        that decided the verdict.
    """

    def __init__(self, diagnostics):
        self.diagnostics = diagnostics
        super(NotPositiveDefinite, self).__init__(
            'similarity matrix is {} (lambda_min={:.6g}, tau={:.3g})'.format(
                diagnostics.verdict.value, diagnostics.lambda_min,
                diagnostics.tolerance_used))


class IllConditioned(MaglabError):

    def __init__(self, report):
        self.report = report
        super(IllConditioned, self).__init__(
            'condition estimate {:.3g} exceeds limit'.format(
                report.diagnostics.condition_estimate))


class DegenerateQuadraticForm(MaglabError):
    pass


class IndefiniteForm(MaglabError):

    def __init__(self, diagnostics):
        self.diagnostics = diagnostics
        super(IndefiniteForm, self).__init__(
            'quadratic form is indefinite (lambda_min={:.6g}), the '
            'diversity problem is not convex'.format(diagnostics.lambda_min))


class NotConverged(MaglabError):

    def __init__(self, report):
        self.report = report
        super(NotConverged, self).__init__(
            'Frank-Wolfe stopped after {} iterations with gap {:.3g}'.format(
                report.iterations, report.fw_gap))


class Inconsistent(MaglabError):
    """The weighting sign test and the diversity cross-check disagree."""

    def __init__(self, message, min_weight=None, magnitude=None,
                 diversity=None):
        super(Inconsistent, self).__init__(message)
        self.min_weight = min_weight
        self.magnitude = magnitude
        self.diversity = diversity


class InsufficientRecords(MaglabError):
    pass


class LevelNotPD(MaglabError):

    def __init__(self, level, diagnostics):
        self.level = level
        self.diagnostics = diagnostics
        super(LevelNotPD, self).__init__(
            'level {} is {}'.format(level, diagnostics.verdict.value))


class QuadratureDivergence(MaglabError):

    def __init__(self, message, tail=None):
        super(QuadratureDivergence, self).__init__(message)
        self.tail = tail


class NegativeRatioOnly(MaglabError):
    pass
