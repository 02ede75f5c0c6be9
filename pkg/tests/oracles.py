"""Independent reference computations used by the tests.

Nothing here imports the package's linear algebra: scalars are pairs of
Fractions and row reduction is textbook Gauss-Jordan over them.
"""

from fractions import Fraction


def cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def cinv(a):
    nn = a[0] * a[0] + a[1] * a[1]
    return (a[0] / nn, -a[1] / nn)


def csub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def to_pairs(row):
    """Flat [re0, im0, ...] ints to a list of (Fraction, Fraction)."""
    return [(Fraction(row[j]), Fraction(row[j + 1])) for j in range(0, len(row), 2)]


def gauss_jordan(rows):
    """Reduced row-echelon form with pivots equal to 1; returns (rows, pivots)."""
    work = [list(r) for r in rows]
    m = len(work)
    ncols = len(work[0]) if work else 0
    pivots = []
    pr = 0
    for c in range(ncols):
        sel = next((i for i in range(pr, m) if work[i][c] != (0, 0)), None)
        if sel is None:
            continue
        work[pr], work[sel] = work[sel], work[pr]
        inv = cinv(work[pr][c])
        work[pr] = [cmul(x, inv) for x in work[pr]]
        for i in range(m):
            if i != pr and work[i][c] != (0, 0):
                f = work[i][c]
                work[i] = [csub(x, cmul(f, y)) for x, y in zip(work[i], work[pr])]
        pivots.append(c)
        pr += 1
    return work[:pr], pivots


def rank(rows):
    return len(gauss_jordan(rows)[1])


def normalize_int_row(row, pivot):
    """Turn a kernel output row into the pivot-1 Fraction form for comparison."""
    pairs = to_pairs(row)
    inv = cinv(pairs[pivot])
    return [cmul(x, inv) for x in pairs]


def nullspace(rows, ncols):
    """Basis of {x : sum_j r_j x_j = 0 for all rows r} (bilinear)."""
    red, piv = gauss_jordan(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        v = [(Fraction(0), Fraction(0))] * ncols
        v[f] = (Fraction(1), Fraction(0))
        for r, p in zip(red, piv):
            v[p] = (-r[f][0], -r[f][1])
        out.append(v)
    return out
