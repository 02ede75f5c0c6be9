# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled row-reduction kernel over the Gaussian integers.

Same algorithm and output as ``_kernel_py``.  Two tiers:

* entries in 64-bit integers (bounded by ``2**62``), each Bareiss update
  formed in 128 bits and divided exactly;
* GMP integers, used when an input does not fit or the first tier overflows.

The output is canonical, so results never depend on which tier ran.
"""

from libc.stdlib cimport malloc, free

cdef extern from "gmp.h":
    ctypedef struct __mpz_struct:
        pass
    ctypedef __mpz_struct mpz_t[1]
    void mpz_init(__mpz_struct *)
    void mpz_clear(__mpz_struct *)
    void mpz_set(__mpz_struct *, const __mpz_struct *)
    void mpz_set_si(__mpz_struct *, long)
    int mpz_set_str(__mpz_struct *, const char *, int)
    long mpz_get_si(const __mpz_struct *)
    char *mpz_get_str(char *, int, const __mpz_struct *)
    int mpz_fits_slong_p(const __mpz_struct *)
    void mpz_mul(__mpz_struct *, const __mpz_struct *, const __mpz_struct *)
    void mpz_addmul(__mpz_struct *, const __mpz_struct *, const __mpz_struct *)
    void mpz_submul(__mpz_struct *, const __mpz_struct *, const __mpz_struct *)
    void mpz_divexact(__mpz_struct *, const __mpz_struct *, const __mpz_struct *)
    void mpz_gcd(__mpz_struct *, const __mpz_struct *, const __mpz_struct *)
    int mpz_sgn(const __mpz_struct *)
    int mpz_cmp_ui(const __mpz_struct *, unsigned long)
    size_t mpz_sizeinbase(const __mpz_struct *, int)
    void mpz_swap(__mpz_struct *, __mpz_struct *)

cdef extern from *:
    """
    typedef __int128 rw_i128;
    #define RW_LIMIT (((long long)1) << 62)

    /* row <- ((p + qi) row - (x + yi) prow) / (dr + di i); returns 1 on overflow */
    static int rw_eliminate(long long *row, const long long *prow,
                            long long p, long long q, long long dr, long long di,
                            int start, int width, int cr)
    {
        long long x = row[cr], y = row[cr + 1];
        rw_i128 nn = (rw_i128)dr * dr + (rw_i128)di * di;
        for (int j = start; j < width; j += 2) {
            long long u = row[j], v = row[j + 1], s = prow[j], t = prow[j + 1];
            rw_i128 nr = (rw_i128)p * u - (rw_i128)q * v - (rw_i128)x * s + (rw_i128)y * t;
            rw_i128 ni = (rw_i128)p * v + (rw_i128)q * u - (rw_i128)x * t - (rw_i128)y * s;
            rw_i128 qr, qi;
            if (di == 0) {
                qr = nr / dr;
                qi = ni / dr;
            } else {
                rw_i128 a, b, sr, si;
                if (__builtin_mul_overflow(nr, (rw_i128)dr, &a) ||
                    __builtin_mul_overflow(ni, (rw_i128)di, &b) ||
                    __builtin_add_overflow(a, b, &sr))
                    return 1;
                if (__builtin_mul_overflow(ni, (rw_i128)dr, &a) ||
                    __builtin_mul_overflow(nr, (rw_i128)di, &b) ||
                    __builtin_sub_overflow(a, b, &si))
                    return 1;
                qr = sr / nn;
                qi = si / nn;
            }
            if (qr >= RW_LIMIT || qr <= -RW_LIMIT || qi >= RW_LIMIT || qi <= -RW_LIMIT)
                return 1;
            row[j] = (long long)qr;
            row[j + 1] = (long long)qi;
        }
        return 0;
    }

    /* row <- conj(p + qi) * row; returns 1 on overflow */
    static int rw_conj_scale(long long *row, long long p, long long q, int width)
    {
        for (int j = 0; j < width; j += 2) {
            rw_i128 a = (rw_i128)p * row[j] + (rw_i128)q * row[j + 1];
            rw_i128 b = (rw_i128)p * row[j + 1] - (rw_i128)q * row[j];
            if (a >= RW_LIMIT || a <= -RW_LIMIT || b >= RW_LIMIT || b <= -RW_LIMIT)
                return 1;
            row[j] = (long long)a;
            row[j + 1] = (long long)b;
        }
        return 0;
    }
    """
    long long RW_LIMIT
    int rw_eliminate(long long *row, const long long *prow, long long p, long long q,
                     long long dr, long long di, int start, int width, int cr) nogil
    int rw_conj_scale(long long *row, long long p, long long q, int width) nogil


cdef inline long long _gcd(long long a, long long b) nogil:
    cdef long long t
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef void _reduce_content(long long *row, int width) nogil:
    cdef long long g = 0
    cdef int j
    for j in range(width):
        if row[j]:
            g = _gcd(g, row[j])
            if g == 1:
                return
    if g > 1:
        for j in range(width):
            row[j] = row[j] // g


cdef int _pick_pivot(long long **work, int start, int m, int cr) nogil:
    cdef int best = -1
    cdef int i
    cdef long long a, b
    cdef double nn, bestn = 0.0
    for i in range(start, m):
        a = work[i][cr]
        b = work[i][cr + 1]
        if a or b:
            # doubles only rank magnitudes; the final form is pivot-independent
            nn = <double>a * <double>a + <double>b * <double>b
            if best < 0 or nn < bestn:
                best = i
                bestn = nn
                if nn == 1.0:
                    break
    return best


cdef int _forward(long long **work, int m, int ncols, int full, int *pivots) nogil:
    """Bareiss Gauss-Jordan in place.  Returns rank, or -1 on overflow."""
    cdef int width = 2 * ncols
    cdef int pr = 0
    cdef int c, cr, best, i
    cdef long long *tmp
    cdef long long p, q
    cdef long long dr = 1, di = 0
    for c in range(ncols):
        if pr == m:
            break
        cr = 2 * c
        best = _pick_pivot(work, pr, m, cr)
        if best < 0:
            continue
        tmp = work[pr]
        work[pr] = work[best]
        work[best] = tmp
        p = work[pr][cr]
        q = work[pr][cr + 1]
        if full:
            for i in range(pr):
                if rw_eliminate(work[i], work[pr], p, q, dr, di, 0, width, cr):
                    return -1
        for i in range(pr + 1, m):
            if rw_eliminate(work[i], work[pr], p, q, dr, di, cr, width, cr):
                return -1
        dr = p
        di = q
        pivots[pr] = c
        pr += 1
    return pr


cdef class _Workspace:
    cdef long long *data
    cdef long long **rows
    cdef int *pivots
    cdef int m

    def __cinit__(self, int m, int width, int ncols):
        self.m = m
        self.data = <long long *> malloc(max(m * width, 1) * sizeof(long long))
        self.rows = <long long **> malloc(max(m, 1) * sizeof(long long *))
        self.pivots = <int *> malloc(max(ncols, 1) * sizeof(int))
        if self.data == NULL or self.rows == NULL or self.pivots == NULL:
            raise MemoryError()
        cdef int i
        for i in range(m):
            self.rows[i] = self.data + i * width

    def __dealloc__(self):
        free(self.data)
        free(self.rows)
        free(self.pivots)


cdef _Workspace _load(rows, int ncols):
    """Copy nonzero rows into a workspace; None if an entry is too large."""
    cdef int width = 2 * ncols
    cdef list kept = []
    for r in rows:
        if len(r) != width:
            raise ValueError("row length does not match column count")
        for x in r:
            if x:
                kept.append(r)
                break
    cdef _Workspace ws = _Workspace(len(kept), width, ncols)
    cdef int i = 0, j
    cdef long long *dst
    for r in kept:
        dst = ws.rows[i]
        for j in range(width):
            x = r[j]
            if x >= RW_LIMIT or x <= -RW_LIMIT:
                return None
            dst[j] = x
        _reduce_content(dst, width)
        i += 1
    return ws


def rref(rows, int ncols):
    cdef int width = 2 * ncols
    cdef _Workspace ws = _load(rows, ncols)
    if ws is None:
        return _big_rref(rows, ncols)
    cdef int rk, i, j, c
    cdef long long *row
    rk = _forward(ws.rows, ws.m, ncols, 1, ws.pivots)
    if rk < 0:
        return _big_rref(rows, ncols)
    for i in range(rk):
        row = ws.rows[i]
        c = ws.pivots[i]
        if row[2 * c + 1] != 0 or row[2 * c] < 0:
            if rw_conj_scale(row, row[2 * c], row[2 * c + 1], width):
                return _big_rref(rows, ncols)
        _reduce_content(row, width)
    basis = tuple(
        tuple([ws.rows[i][j] for j in range(width)]) for i in range(rk)
    )
    return basis, tuple([ws.pivots[i] for i in range(rk)])


def rank(rows, int ncols):
    cdef _Workspace ws = _load(rows, ncols)
    if ws is None:
        return _big_rank(rows, ncols)
    cdef int rk = _forward(ws.rows, ws.m, ncols, 0, ws.pivots)
    if rk < 0:
        return _big_rank(rows, ncols)
    return rk


# ---------------------------------------------------------------------------
# GMP tier


cdef class _BigWorkspace:
    cdef __mpz_struct *data
    cdef __mpz_struct **rows
    cdef int *pivots
    cdef int m, width

    def __cinit__(self, int m, int width, int ncols):
        self.m = m
        self.width = width
        self.data = <__mpz_struct *> malloc(max(m * width, 1) * sizeof(__mpz_struct))
        self.rows = <__mpz_struct **> malloc(max(m, 1) * sizeof(__mpz_struct *))
        self.pivots = <int *> malloc(max(ncols, 1) * sizeof(int))
        if self.data == NULL or self.rows == NULL or self.pivots == NULL:
            raise MemoryError()
        cdef int i
        for i in range(m * width):
            mpz_init(&self.data[i])
        for i in range(m):
            self.rows[i] = self.data + i * width

    def __dealloc__(self):
        cdef int i
        if self.data != NULL:
            for i in range(self.m * self.width):
                mpz_clear(&self.data[i])
        free(self.data)
        free(self.rows)
        free(self.pivots)


cdef void _set_py(__mpz_struct *z, x):
    if -RW_LIMIT < x < RW_LIMIT:
        mpz_set_si(z, <long> x)
    else:
        mpz_set_str(z, format(x, "x").encode("ascii"), 16)


cdef object _get_py(const __mpz_struct *z):
    if mpz_fits_slong_p(z):
        return mpz_get_si(z)
    cdef char *buf = mpz_get_str(NULL, 16, z)
    try:
        return int(buf.decode("ascii"), 16)
    finally:
        free(buf)


cdef void _big_content(__mpz_struct *row, int width, __mpz_struct *g):
    cdef int j
    mpz_set_si(g, 0)
    for j in range(width):
        if mpz_sgn(&row[j]):
            mpz_gcd(g, g, &row[j])
            if mpz_cmp_ui(g, 1) == 0:
                return
    if mpz_cmp_ui(g, 1) > 0:
        for j in range(width):
            mpz_divexact(&row[j], &row[j], g)


cdef _BigWorkspace _big_load(rows, int ncols):
    cdef int width = 2 * ncols
    kept = []
    for r in rows:
        if len(r) != width:
            raise ValueError("row length does not match column count")
        if any(r):
            kept.append(r)
    cdef _BigWorkspace ws = _BigWorkspace(len(kept), width, ncols)
    cdef int i = 0, j
    cdef mpz_t g
    mpz_init(g)
    for r in kept:
        for j in range(width):
            _set_py(&ws.rows[i][j], r[j])
        _big_content(ws.rows[i], width, g)
        i += 1
    mpz_clear(g)
    return ws


cdef int _big_forward(__mpz_struct **work, int m, int ncols, int full, int *pivots):
    cdef int width = 2 * ncols
    cdef int pr = 0, c, cr, best, i, j, start
    cdef size_t bits, bestbits
    cdef __mpz_struct *tmp
    cdef __mpz_struct *row
    cdef __mpz_struct *prow
    cdef mpz_t p, q, dr, di, x, y, nr, ni, nn, t
    mpz_init(p); mpz_init(q); mpz_init(dr); mpz_init(di); mpz_init(x); mpz_init(y)
    mpz_init(nr); mpz_init(ni); mpz_init(nn); mpz_init(t)
    mpz_set_si(dr, 1)
    mpz_set_si(di, 0)
    for c in range(ncols):
        if pr == m:
            break
        cr = 2 * c
        best = -1
        bestbits = 0
        for i in range(pr, m):
            if mpz_sgn(&work[i][cr]) or mpz_sgn(&work[i][cr + 1]):
                bits = mpz_sizeinbase(&work[i][cr], 2) + mpz_sizeinbase(&work[i][cr + 1], 2)
                if best < 0 or bits < bestbits:
                    best = i
                    bestbits = bits
        if best < 0:
            continue
        tmp = work[pr]
        work[pr] = work[best]
        work[best] = tmp
        prow = work[pr]
        mpz_set(p, &prow[cr])
        mpz_set(q, &prow[cr + 1])
        if mpz_sgn(di):
            mpz_mul(nn, dr, dr)
            mpz_addmul(nn, di, di)
        for i in range(m):
            if i == pr or (i < pr and not full):
                continue
            row = work[i]
            start = 0 if i < pr else cr
            mpz_set(x, &row[cr])
            mpz_set(y, &row[cr + 1])
            for j in range(start, width, 2):
                # nr = p u - q v - x s + y t ; ni = p v + q u - x t - y s
                mpz_mul(nr, p, &row[j])
                mpz_submul(nr, q, &row[j + 1])
                mpz_submul(nr, x, &prow[j])
                mpz_addmul(nr, y, &prow[j + 1])
                mpz_mul(ni, p, &row[j + 1])
                mpz_addmul(ni, q, &row[j])
                mpz_submul(ni, x, &prow[j + 1])
                mpz_submul(ni, y, &prow[j])
                if mpz_sgn(di) == 0:
                    mpz_divexact(&row[j], nr, dr)
                    mpz_divexact(&row[j + 1], ni, dr)
                else:
                    mpz_mul(t, nr, dr)
                    mpz_addmul(t, ni, di)
                    mpz_divexact(&row[j], t, nn)
                    mpz_mul(t, ni, dr)
                    mpz_submul(t, nr, di)
                    mpz_divexact(&row[j + 1], t, nn)
        mpz_set(dr, p)
        mpz_set(di, q)
        pivots[pr] = c
        pr += 1
    mpz_clear(p); mpz_clear(q); mpz_clear(dr); mpz_clear(di); mpz_clear(x); mpz_clear(y)
    mpz_clear(nr); mpz_clear(ni); mpz_clear(nn); mpz_clear(t)
    return pr


def _big_rref(rows, int ncols):
    cdef int width = 2 * ncols
    cdef _BigWorkspace ws = _big_load(rows, ncols)
    cdef int rk = _big_forward(ws.rows, ws.m, ncols, 1, ws.pivots)
    cdef int i, j, c
    cdef __mpz_struct *row
    cdef mpz_t p, q, a, b
    mpz_init(p); mpz_init(q); mpz_init(a); mpz_init(b)
    for i in range(rk):
        row = ws.rows[i]
        c = ws.pivots[i]
        if mpz_sgn(&row[2 * c + 1]) != 0 or mpz_sgn(&row[2 * c]) < 0:
            # multiply by conj(pivot) so the pivot becomes |pivot|^2 > 0
            mpz_set(p, &row[2 * c])
            mpz_set(q, &row[2 * c + 1])
            for j in range(0, width, 2):
                mpz_mul(a, p, &row[j])
                mpz_addmul(a, q, &row[j + 1])
                mpz_mul(b, p, &row[j + 1])
                mpz_submul(b, q, &row[j])
                mpz_swap(&row[j], a)
                mpz_swap(&row[j + 1], b)
        _big_content(row, width, a)
    mpz_clear(p); mpz_clear(q); mpz_clear(a); mpz_clear(b)
    basis = tuple(
        tuple([_get_py(&ws.rows[i][j]) for j in range(width)]) for i in range(rk)
    )
    return basis, tuple([ws.pivots[i] for i in range(rk)])


def _big_rank(rows, int ncols):
    cdef _BigWorkspace ws = _big_load(rows, ncols)
    return _big_forward(ws.rows, ws.m, ncols, 0, ws.pivots)
