# -*- coding: utf-8 -*-
"""
    maglab.utils.parallel
    ~~~~~~~~~~~~~~~~~~~~~

    Thread pool used by sweeps, scans, studies and searches.
"""
from joblib import Parallel, delayed

from .. import settings


def parallel_map(func, items, n_jobs=None):
    """Apply ``func`` to every item and return the results in input order.

    Runs on ``settings.THREADS`` joblib threads; numpy and LAPACK release
    the GIL so the heavy calls overlap. With one worker the items are mapped
    inline.
    """
    items = list(items)
    n_jobs = n_jobs or settings.THREADS
    if n_jobs <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    return Parallel(n_jobs=n_jobs, prefer='threads')(
        delayed(func)(item) for item in items)
