# -*- coding: utf-8 -*-
"""
    maglab.utils.linalg
    ~~~~~~~~~~~~~~~~~~~

    Symmetric eigenvalue and positive definite solve helpers.
"""
import logging

import scipy.linalg as la
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .. import settings
from ..exceptions import EigensolverFailure


logger = logging.getLogger(__name__)


def _dense_eigh(matrix, vectors=False, iterations=0):
    """Full symmetric eigendecomposition.

    :param iterations: Lanczos iterations already spent on this matrix,
                       reported if the dense solver fails as well.
    """
    try:
        if vectors:
            return la.eigh(matrix, check_finite=False)
        return la.eigvalsh(matrix, check_finite=False), None
    except (la.LinAlgError, ValueError) as exc:
        raise EigensolverFailure(
            'eigensolver failed after %d Lanczos iterations: %s'
            % (iterations, exc), iterations=iterations)


def _lanczos(matrix, which):
    try:
        values, vectors = eigsh(matrix, k=1, which=which,
                                maxiter=settings.LANCZOS_MAX_ITERATIONS)
    except ArpackNoConvergence as exc:
        logger.warning('Lanczos iteration for %s eigenvalue did not converge '
                       'in %d iterations, using the dense solver',
                       which, settings.LANCZOS_MAX_ITERATIONS)
        raise exc
    return values[0], vectors[:, 0]


def extremal_eigenvalues(matrix):
    """Smallest and largest eigenvalue of a symmetric matrix.

    Returns ``(lambda_min, lambda_max, method)`` where method is ``dense``
    or ``lanczos``.
    """
    n = matrix.shape[0]
    spent = 0
    if n > settings.DENSE_EIGEN_LIMIT:
        try:
            low, _ = _lanczos(matrix, 'SA')
            high, _ = _lanczos(matrix, 'LA')
            return float(low), float(high), 'lanczos'
        except ArpackNoConvergence:
            spent = settings.LANCZOS_MAX_ITERATIONS
    values, _ = _dense_eigh(matrix, iterations=spent)
    return float(values[0]), float(values[-1]), 'dense'


def smallest_eigenpair(matrix):
    """Smallest eigenvalue with a unit eigenvector, and the largest value.

    Returns ``(lambda_min, vector, lambda_max)``.
    """
    n = matrix.shape[0]
    spent = 0
    if n > settings.DENSE_EIGEN_LIMIT:
        try:
            low, vector = _lanczos(matrix, 'SA')
            high, _ = _lanczos(matrix, 'LA')
            return float(low), vector, float(high)
        except ArpackNoConvergence:
            spent = settings.LANCZOS_MAX_ITERATIONS
    values, vectors = _dense_eigh(matrix, vectors=True, iterations=spent)
    return float(values[0]), vectors[:, 0], float(values[-1])


def solve_spd(matrix, rhs):
    """Solve ``matrix x = rhs`` for a symmetric positive definite matrix.

    Uses a Cholesky factorization followed by one step of iterative
    refinement. If the factorization breaks down the least-squares solution
    is returned instead. Returns ``(x, method)``.
    """
    try:
        factor = la.cho_factor(matrix, lower=True, check_finite=False)
    except la.LinAlgError:
        logger.warning('Cholesky factorization failed, falling back to '
                       'least squares')
        x = la.lstsq(matrix, rhs, check_finite=False)[0]
        return x, 'lstsq'
    x = la.cho_solve(factor, rhs, check_finite=False)
    x = x + la.cho_solve(factor, rhs - matrix @ x, check_finite=False)
    return x, 'cholesky'
