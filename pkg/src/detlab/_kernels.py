"""Compiled inner loops for exhaustive counting.

Every kernel takes the field as ``(p, q, addt, mult, negt)``.  When the
tables are non-empty (q <= 256) arithmetic is a flat table lookup at index
``a*q + b``; with empty tables the field is prime and arithmetic is mod p.

Kernels work on a contiguous range ``[lo, hi)`` of first-row indices so the
caller can split work across threads; outputs are integer histograms merged
by addition.
"""

import numpy as np
from numba import njit


@njit(inline="always", cache=True)
def _add(a, b, p, q, addt):
    if addt.shape[0] > 0:
        return np.int64(addt[a * q + b])
    return (a + b) % p


@njit(inline="always", cache=True)
def _mul(a, b, p, q, mult):
    if mult.shape[0] > 0:
        return np.int64(mult[a * q + b])
    return (a * b) % p


@njit(inline="always", cache=True)
def _neg(a, p, negt):
    if negt.shape[0] > 0:
        return np.int64(negt[a])
    return (p - a) % p


@njit(cache=True, nogil=True)
def det_histogram(rows, d, lo, hi, p, q, addt, mult, negt, perms, signs):
    """Histogram of det over all d x d matrices whose first row is in [lo, hi).

    ``rows`` lists every admissible row vector (the Cartesian power A^d in
    odometer order).  The determinant is the Leibniz sum over ``perms``; the
    products over the first d-1 rows are hoisted out of the last-row loop.
    """
    nr = rows.shape[0]
    nperm = perms.shape[0]
    hist = np.zeros(q, np.int64)
    ntop = 1
    for _ in range(d - 2):
        ntop *= nr
    idx = np.zeros(d - 1, np.int64)
    part = np.zeros(nperm, np.int64)
    lastcol = perms[:, d - 1].copy()
    for r0 in range(lo, hi):
        idx[0] = r0
        for j in range(1, d - 1):
            idx[j] = 0
        for _c in range(ntop):
            for s in range(nperm):
                v = np.int64(1)
                for i in range(d - 1):
                    v = _mul(v, np.int64(rows[idx[i], perms[s, i]]), p, q, mult)
                if signs[s] < 0:
                    v = _neg(v, p, negt)
                part[s] = v
            for r in range(nr):
                acc = np.int64(0)
                for s in range(nperm):
                    acc = _add(acc, _mul(part[s], np.int64(rows[r, lastcol[s]]), p, q, mult), p, q, addt)
                hist[acc] += 1
            j = d - 2
            while j >= 1:
                idx[j] += 1
                if idx[j] < nr:
                    break
                idx[j] = 0
                j -= 1
    return hist


@njit(cache=True, nogil=True)
def cofactor_points(rows, d, lo, hi, p, q, addt, mult, negt, minor_cols, mperms, msigns, coord_neg):
    """Odometer index of the signed-minor vector of every (d-1) x d matrix.

    The first row ranges over ``rows[lo:hi]`` and the remaining d-2 rows over
    all of ``rows``.  ``minor_cols[i]`` lists the columns kept when column i
    is deleted; ``coord_neg[i]`` flips the sign of coordinate i.
    """
    nr = rows.shape[0]
    m = d - 1
    ntail = 1
    for _ in range(m - 1):
        ntail *= nr
    out = np.empty((hi - lo) * ntail, np.int64)
    idx = np.zeros(m, np.int64)
    pos = 0
    for r0 in range(lo, hi):
        idx[0] = r0
        for j in range(1, m):
            idx[j] = 0
        for _c in range(ntail):
            point = np.int64(0)
            for i in range(d):
                acc = np.int64(0)
                for s in range(mperms.shape[0]):
                    v = np.int64(1)
                    for rr in range(m):
                        v = _mul(v, np.int64(rows[idx[rr], minor_cols[i, mperms[s, rr]]]), p, q, mult)
                    if msigns[s] < 0:
                        v = _neg(v, p, negt)
                    acc = _add(acc, v, p, q, addt)
                if coord_neg[i]:
                    acc = _neg(acc, p, negt)
                point = point * q + acc
            out[pos] = point
            pos += 1
            j = m - 1
            while j >= 1:
                idx[j] += 1
                if idx[j] < nr:
                    break
                idx[j] = 0
                j -= 1
    return out


@njit(cache=True, nogil=True)
def bilinear_histogram(us, wf, ys, wg, p, q, addt, mult):
    """hist[t] = sum of wf[x] * wg[y] over pairs with u_x . y = t.

    ``us`` holds the precomputed row vectors x^T B, so u_x . y = B(x, y).
    Caller guarantees sum(wf) * sum(wg) < 2^63.
    """
    hist = np.zeros(q, np.int64)
    d = us.shape[1]
    for a in range(us.shape[0]):
        w = wf[a]
        for b in range(ys.shape[0]):
            t = np.int64(0)
            for j in range(d):
                t = _add(t, _mul(us[a, j], ys[b, j], p, q, mult), p, q, addt)
            hist[t] += w * wg[b]
    return hist
