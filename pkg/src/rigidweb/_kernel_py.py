"""Pure-Python row-reduction kernel over the Gaussian integers.

Rows are flat integer lists ``[re0, im0, re1, im1, ...]`` of length
``2 * ncols``.  Elimination is fraction-free Gauss-Jordan in Bareiss form:
every update is divided exactly by the previous pivot, which keeps all
intermediate entries equal to minors of the input.

This module is the reference implementation; ``_kernel.pyx`` mirrors it with a
machine-integer fast path and falls back here on overflow.
"""

from math import gcd

__all__ = ["rref", "rank"]


def _load(rows, ncols):
    work = []
    for r in rows:
        if len(r) != 2 * ncols:
            raise ValueError("row length does not match column count")
        g = gcd(*r)
        if g == 0:
            continue
        work.append([x // g for x in r] if g != 1 else list(r))
    return work


def _pick_pivot(work, start, cr):
    best = -1
    bestn = 0
    ci = cr + 1
    for i in range(start, len(work)):
        row = work[i]
        a = row[cr]
        b = row[ci]
        if a or b:
            nn = a * a + b * b
            if best < 0 or nn < bestn:
                best = i
                bestn = nn
                if nn == 1:
                    break
    return best


def _eliminate(row, prow, p, q, dr, di, start, width, cr):
    # row <- ((p + qi) row - (x + yi) prow) / (dr + di i), division exact
    x = row[cr]
    y = row[cr + 1]
    if di == 0:
        for j in range(start, width, 2):
            u = row[j]
            v = row[j + 1]
            s = prow[j]
            t = prow[j + 1]
            row[j] = (p * u - q * v - x * s + y * t) // dr
            row[j + 1] = (p * v + q * u - x * t - y * s) // dr
        return
    nn = dr * dr + di * di
    for j in range(start, width, 2):
        u = row[j]
        v = row[j + 1]
        s = prow[j]
        t = prow[j + 1]
        nr = p * u - q * v - x * s + y * t
        ni = p * v + q * u - x * t - y * s
        row[j] = (nr * dr + ni * di) // nn
        row[j + 1] = (ni * dr - nr * di) // nn


def _forward(work, ncols, full):
    width = 2 * ncols
    m = len(work)
    pivots = []
    pr = 0
    dr, di = 1, 0
    for c in range(ncols):
        if pr == m:
            break
        cr = 2 * c
        best = _pick_pivot(work, pr, cr)
        if best < 0:
            continue
        work[pr], work[best] = work[best], work[pr]
        prow = work[pr]
        p = prow[cr]
        q = prow[cr + 1]
        if full:
            # every other row is rescaled, even with a zero in this column
            for i in range(pr):
                _eliminate(work[i], prow, p, q, dr, di, 0, width, cr)
        for i in range(pr + 1, m):
            _eliminate(work[i], prow, p, q, dr, di, cr, width, cr)
        dr, di = p, q
        pivots.append(c)
        pr += 1
    return pr, pivots


def rref(rows, ncols):
    """Canonical reduced row-echelon form of the row space.

    Returns ``(basis, pivots)``: ``basis`` is a tuple of int tuples, one per
    pivot, each the unique primitive integer multiple of the corresponding
    reduced-echelon row whose pivot entry is a positive integer.
    """
    width = 2 * ncols
    work = _load(rows, ncols)
    pr, pivots = _forward(work, ncols, True)
    basis = []
    for r, c in zip(work[:pr], pivots):
        p = r[2 * c]
        q = r[2 * c + 1]
        if q != 0 or p < 0:
            # multiply by conj(pivot) so the pivot becomes |pivot|^2 > 0
            out = [0] * width
            for j in range(0, width, 2):
                u = r[j]
                v = r[j + 1]
                out[j] = p * u + q * v
                out[j + 1] = p * v - q * u
            r = out
        g = gcd(*r)
        basis.append(tuple(x // g for x in r) if g != 1 else tuple(r))
    return tuple(basis), tuple(pivots)


def rank(rows, ncols):
    """Rank by forward elimination only (no normalization)."""
    return _forward(_load(rows, ncols), ncols, False)[0]
