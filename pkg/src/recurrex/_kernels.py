"""Compiled inner loops for the O(M^2) scans.

These are deliberately written as plain index loops so they read like the
reference definitions; numba compiles them once per process (with on-disk
caching) and the tests compare their output bit-for-bit against the naive
pure-Python enumerators.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def diag_hist(r, include_loi):
    """Histogram of maximal 1-run lengths along every diagonal.

    ``r`` is a uint8 square matrix.  Returns counts indexed by length
    (index 0 unused).  When ``include_loi`` is false the main diagonal is
    left out of the scan entirely.
    """
    m = r.shape[0]
    counts = np.zeros(m + 1, dtype=np.int64)
    for offset in range(-(m - 1), m):
        if offset == 0 and not include_loi:
            continue
        i = -offset if offset < 0 else 0
        j = i + offset
        run = 0
        while i < m and j < m:
            if r[i, j]:
                run += 1
            elif run:
                counts[run] += 1
                run = 0
            i += 1
            j += 1
        if run:
            counts[run] += 1
    return counts


@njit(cache=True)
def vert_hists(r):
    """Histograms of maximal 1-runs and 0-runs along every column."""
    m = r.shape[0]
    ones = np.zeros(m + 1, dtype=np.int64)
    zeros = np.zeros(m + 1, dtype=np.int64)
    for j in range(m):
        run1 = 0
        run0 = 0
        for i in range(m):
            if r[i, j]:
                run1 += 1
                if run0:
                    zeros[run0] += 1
                    run0 = 0
            else:
                run0 += 1
                if run1:
                    ones[run1] += 1
                    run1 = 0
        if run1:
            ones[run1] += 1
        if run0:
            zeros[run0] += 1
    return ones, zeros


def warmup():
    """Force-compile every kernel (used before timing-sensitive runs)."""
    r = np.eye(4, dtype=np.uint8)
    diag_hist(r, True)
    diag_hist(r, False)
    vert_hists(r)
