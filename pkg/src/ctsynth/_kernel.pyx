# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lattice-point enumeration kernel.

Implements the same region enumeration as _pyenum.py, in double-double
(~106-bit) arithmetic: per coset representative, rotate the target vector,
build the whitened 8x8 basis, LLL-reduce it (tracking an integer unimodular
transform, warm-started from the previous coset), run Schnorr-Euchner
enumeration, and apply the exact integer filters.  Raises OverflowError if
the unimodular transform leaves the int64 safety range; callers fall back to
the pure-Python backend in that case.
"""

from libc.math cimport fma, sqrt, floor, ceil, fabs, ldexp
from libc.string cimport memcpy, memset
from cpython.mem cimport PyMem_Malloc, PyMem_Realloc, PyMem_Free
from posix.time cimport clock_gettime, timespec, CLOCK_MONOTONIC

cdef double _sect[8]

cdef inline double _now() noexcept nogil:
    cdef timespec ts
    clock_gettime(CLOCK_MONOTONIC, &ts)
    return ts.tv_sec + 1e-9 * ts.tv_nsec

def _section_times(reset=False):
    global _sect
    vals = [_sect[i] for i in range(8)]
    if reset:
        for i in range(8):
            _sect[i] = 0.0
    return vals

ctypedef long long i64
ctypedef unsigned long long u64
cdef extern from *:
    ctypedef long long i128 "__int128"

cdef object _i128_to_py(i128 v):
    cdef int neg = v < 0
    if neg:
        v = -v
    cdef u64 hi = <u64> (v >> 64)
    cdef u64 lo = <u64> (v & <i128> 0xFFFFFFFFFFFFFFFF)
    obj = (int(hi) << 64) | int(lo)
    return -obj if neg else obj

# ---------------------------------------------------------------------------
# double-double arithmetic
# ---------------------------------------------------------------------------

cdef struct dd:
    double hi
    double lo

cdef inline dd dd_make(double hi, double lo) noexcept nogil:
    cdef dd r
    r.hi = hi
    r.lo = lo
    return r

cdef inline dd dd_from(double x) noexcept nogil:
    return dd_make(x, 0.0)

cdef inline dd quick_two_sum(double a, double b) noexcept nogil:
    cdef double s = a + b
    return dd_make(s, b - (s - a))

cdef inline dd two_sum(double a, double b) noexcept nogil:
    cdef double s = a + b
    cdef double bb = s - a
    return dd_make(s, (a - (s - bb)) + (b - bb))

cdef inline dd dd_add(dd a, dd b) noexcept nogil:
    cdef dd s = two_sum(a.hi, b.hi)
    cdef dd t = two_sum(a.lo, b.lo)
    s.lo += t.hi
    s = quick_two_sum(s.hi, s.lo)
    s.lo += t.lo
    return quick_two_sum(s.hi, s.lo)

cdef inline dd dd_neg(dd a) noexcept nogil:
    return dd_make(-a.hi, -a.lo)

cdef inline dd dd_sub(dd a, dd b) noexcept nogil:
    return dd_add(a, dd_neg(b))

cdef inline dd dd_mul(dd a, dd b) noexcept nogil:
    cdef double p1 = a.hi * b.hi
    cdef double p2 = fma(a.hi, b.hi, -p1)
    p2 += a.hi * b.lo + a.lo * b.hi
    return quick_two_sum(p1, p2)

cdef inline dd dd_mul_d(dd a, double b) noexcept nogil:
    cdef double p1 = a.hi * b
    cdef double p2 = fma(a.hi, b, -p1) + a.lo * b
    return quick_two_sum(p1, p2)

cdef inline dd dd_div(dd a, dd b) noexcept nogil:
    cdef double q1 = a.hi / b.hi
    cdef dd r = dd_sub(a, dd_mul_d(b, q1))
    cdef double q2 = r.hi / b.hi
    r = dd_sub(r, dd_mul_d(b, q2))
    cdef double q3 = r.hi / b.hi
    cdef dd s = quick_two_sum(q1, q2)
    return dd_add(s, dd_from(q3))

cdef inline dd dd_sqrt(dd a) noexcept nogil:
    if a.hi <= 0.0:
        return dd_from(0.0)
    cdef double x = 1.0 / sqrt(a.hi)
    cdef double ax = a.hi * x
    cdef double p1 = ax * ax
    cdef double p2 = fma(ax, ax, -p1)
    cdef dd err = dd_sub(a, dd_make(p1, p2))
    return quick_two_sum(ax, err.hi * (x * 0.5))

cdef inline int dd_lt(dd a, dd b) noexcept nogil:
    return a.hi < b.hi or (a.hi == b.hi and a.lo < b.lo)

cdef inline dd two_prod(double a, double b) noexcept nogil:
    cdef double p = a * b
    return dd_make(p, fma(a, b, -p))

# ---------------------------------------------------------------------------
# quad-double (~212-bit) arithmetic, for the ill-conditioned small-eps regime:
# the whitened lattice has condition ~ 4/eps^2, so Gram-Schmidt data needs
# about 4*log2(1/eps) bits -- beyond double-double once eps < ~3e-7.
# ---------------------------------------------------------------------------

cdef struct qd:
    double x0
    double x1
    double x2
    double x3

cdef inline qd qd_make(double a, double b, double c, double d) noexcept nogil:
    cdef qd r
    r.x0 = a
    r.x1 = b
    r.x2 = c
    r.x3 = d
    return r

cdef inline qd qd_from_d(double a) noexcept nogil:
    return qd_make(a, 0.0, 0.0, 0.0)

cdef inline qd qd_from_dd(dd a) noexcept nogil:
    return qd_make(a.hi, a.lo, 0.0, 0.0)

cdef inline dd dd_from_qd(qd a) noexcept nogil:
    cdef dd s = two_sum(a.x0, a.x1)
    s.lo += a.x2 + a.x3
    return quick_two_sum(s.hi, s.lo)

cdef inline double qd_to_d(qd a) noexcept nogil:
    return a.x0 + a.x1

cdef inline qd qd_renorm(double c0, double c1, double c2, double c3,
                         double c4) noexcept nogil:
    cdef dd t
    t = quick_two_sum(c3, c4); c3 = t.hi; c4 = t.lo
    t = quick_two_sum(c2, c3); c2 = t.hi; c3 = t.lo
    t = quick_two_sum(c1, c2); c1 = t.hi; c2 = t.lo
    t = quick_two_sum(c0, c1); c0 = t.hi; c1 = t.lo
    t = quick_two_sum(c1, c2); c1 = t.hi; c2 = t.lo
    t = quick_two_sum(c2, c3); c2 = t.hi; c3 = t.lo
    return qd_make(c0, c1, c2, c3 + c4)

cdef inline qd qd_add(qd a, qd b) noexcept nogil:
    # merge the two expansions by decreasing magnitude, then distill with
    # exact two_sum passes; exactness of two_sum makes the total invariant,
    # so the only loss is the final truncation to four components
    cdef double m[8]
    cdef double av[4]
    cdef double bv[4]
    cdef dd t
    cdef int i = 0, j = 0, k, idx
    av[0] = a.x0; av[1] = a.x1; av[2] = a.x2; av[3] = a.x3
    bv[0] = b.x0; bv[1] = b.x1; bv[2] = b.x2; bv[3] = b.x3
    for k in range(8):
        if i < 4 and (j >= 4 or fabs(av[i]) >= fabs(bv[j])):
            m[k] = av[i]; i += 1
        else:
            m[k] = bv[j]; j += 1
    for idx in range(6, -1, -1):
        t = two_sum(m[idx], m[idx + 1])
        m[idx] = t.hi
        m[idx + 1] = t.lo
    for idx in range(6, -1, -1):
        t = two_sum(m[idx], m[idx + 1])
        m[idx] = t.hi
        m[idx + 1] = t.lo
    return qd_renorm(m[0], m[1], m[2], m[3],
                     m[4] + m[5] + m[6] + m[7])

cdef inline qd qd_neg(qd a) noexcept nogil:
    return qd_make(-a.x0, -a.x1, -a.x2, -a.x3)

cdef inline qd qd_sub(qd a, qd b) noexcept nogil:
    return qd_add(a, qd_neg(b))

cdef inline qd qd_mul(qd a, qd b) noexcept nogil:
    cdef dd p00 = two_prod(a.x0, b.x0)
    cdef dd p01 = two_prod(a.x0, b.x1)
    cdef dd p10 = two_prod(a.x1, b.x0)
    cdef dd p02 = two_prod(a.x0, b.x2)
    cdef dd p11 = two_prod(a.x1, b.x1)
    cdef dd p20 = two_prod(a.x2, b.x0)
    cdef dd o1 = two_sum(p01.hi, p10.hi)
    cdef dd t = two_sum(o1.hi, p00.lo)
    cdef dd o2 = two_sum(p02.hi, p11.hi)
    cdef double e2 = o2.lo
    o2 = two_sum(o2.hi, p20.hi); e2 += o2.lo
    o2 = two_sum(o2.hi, p01.lo); e2 += o2.lo
    o2 = two_sum(o2.hi, p10.lo); e2 += o2.lo
    o2 = two_sum(o2.hi, o1.lo);  e2 += o2.lo
    o2 = two_sum(o2.hi, t.lo);   e2 += o2.lo
    cdef double o3 = e2 + p02.lo + p11.lo + p20.lo \
        + a.x0 * b.x3 + a.x1 * b.x2 + a.x2 * b.x1 + a.x3 * b.x0
    return qd_renorm(p00.hi, t.hi, o2.hi, o3, 0.0)

cdef inline qd qd_mul_d(qd a, double b) noexcept nogil:
    cdef dd p0 = two_prod(a.x0, b)
    cdef dd p1 = two_prod(a.x1, b)
    cdef dd p2 = two_prod(a.x2, b)
    cdef dd t = two_sum(p1.hi, p0.lo)
    cdef dd s2 = two_sum(t.lo, p1.lo)
    cdef dd o2 = two_sum(p2.hi, s2.hi)
    return qd_renorm(p0.hi, t.hi, o2.hi,
                     a.x3 * b + p2.lo + o2.lo + s2.lo, 0.0)

cdef inline qd qd_div(qd a, qd b) noexcept nogil:
    cdef double q0 = a.x0 / b.x0
    cdef qd r = qd_sub(a, qd_mul_d(b, q0))
    cdef double q1 = r.x0 / b.x0
    r = qd_sub(r, qd_mul_d(b, q1))
    cdef double q2 = r.x0 / b.x0
    r = qd_sub(r, qd_mul_d(b, q2))
    cdef double q3 = r.x0 / b.x0
    r = qd_sub(r, qd_mul_d(b, q3))
    return qd_renorm(q0, q1, q2, q3, r.x0 / b.x0)

cdef inline qd qd_sqrt(qd a) noexcept nogil:
    if a.x0 <= 0.0:
        return qd_from_d(0.0)
    cdef dd y0 = dd_sqrt(dd_from_qd(a))
    cdef qd y = qd_from_dd(y0)
    cdef qd err = qd_sub(a, qd_mul(y, y))
    return qd_add(y, qd_div(err, qd_add(y, y)))

cdef inline int qd_lt(qd a, qd b) noexcept nogil:
    if a.x0 != b.x0:
        return a.x0 < b.x0
    if a.x1 != b.x1:
        return a.x1 < b.x1
    if a.x2 != b.x2:
        return a.x2 < b.x2
    return a.x3 < b.x3

cdef inline i64 dd_floor_ll(dd a) noexcept nogil:
    # when hi is itself an integer (always the case above 2^53) the floor is
    # decided by lo; combine in integer arithmetic, as the double sum rounds
    cdef double f = floor(a.hi)
    if f == a.hi:
        return (<i64> f) + (<i64> floor(a.lo))
    return <i64> f

cdef inline i128 dd_floor_i128(dd a) noexcept nogil:
    cdef double f = floor(a.hi)
    if f == a.hi:
        return (<i128> f) + (<i128> floor(a.lo))
    return <i128> f

cdef inline i128 dd_nint_i128(dd a) noexcept nogil:
    return dd_floor_i128(dd_add(a, dd_from(0.5)))

cdef inline i64 dd_ceil_ll(dd a) noexcept nogil:
    return -dd_floor_ll(dd_neg(a))

cdef inline i64 dd_nint_ll(dd a) noexcept nogil:
    return dd_floor_ll(dd_add(a, dd_from(0.5)))

# ---------------------------------------------------------------------------
# Gram-Schmidt / LLL / Schnorr-Euchner over 8x8 double-double matrices
# ---------------------------------------------------------------------------

cdef void gso8(dd b[8][8], dd star[8][8], dd mu[8][8], dd norms[8]) noexcept nogil:
    cdef int i, j, r
    cdef dd acc
    for i in range(8):
        for r in range(8):
            star[i][r] = b[i][r]
        for j in range(i):
            acc = dd_from(0.0)
            for r in range(8):
                acc = dd_add(acc, dd_mul(b[i][r], star[j][r]))
            mu[i][j] = dd_div(acc, norms[j])
            for r in range(8):
                star[i][r] = dd_sub(star[i][r], dd_mul(mu[i][j], star[j][r]))
        acc = dd_from(0.0)
        for r in range(8):
            acc = dd_add(acc, dd_mul(star[i][r], star[i][r]))
        norms[i] = acc

cdef i128 _U128_LIMIT = (<i128> 1) << 120
cdef i128 _U_FINAL = (<i128> 1) << 100
cdef i128 _I64_LIMIT = (<i128> 1) << 62

cdef inline dd dd_from_i128(i128 c) noexcept nogil:
    cdef double hi = <double> c
    cdef double lo = <double> (c - <i128> hi)
    return dd_make(hi, lo)


cdef inline int red_step(dd b[8][8], i128 u[8][8], dd mu[8][8],
                         int i, int j) except -1:
    """Size-reduce column i against column j (possibly in several rounds when
    the rounded coefficient exceeds double precision)."""
    cdef double q, a
    cdef i128 t
    cdef int r, rounds, changed = 0
    for rounds in range(4):
        a = mu[i][j].hi
        if -0.5001 <= a <= 0.5001:
            return changed
        q = floor(mu[i][j].hi + mu[i][j].lo + 0.5)
        if q == 0.0:
            return changed
        for r in range(8):
            b[i][r] = dd_sub(b[i][r], dd_mul_d(b[j][r], q))
            t = u[r][i] - (<i128> q) * u[r][j]
            if t > _U128_LIMIT or t < -_U128_LIMIT:
                raise OverflowError("unimodular transform overflow")
            u[r][i] = t
        changed = 1
        for r in range(j):
            mu[i][r] = dd_sub(mu[i][r], dd_mul_d(mu[j][r], q))
        mu[i][j] = dd_sub(mu[i][j], dd_from(q))
    return changed

cdef int lll8(dd b[8][8], i128 u[8][8]) except -1:
    """In-place LLL (delta = 0.99) on columns b, accumulating the unimodular
    transform into u.  Incremental-update passes are restarted from a freshly
    recomputed Gram-Schmidt orthogonalization until a pass makes no change,
    which bounds the damage from floating-point drift in the updates."""
    cdef int rounds
    for rounds in range(32):
        if lll_pass(b, u) == 0:
            break
    return 0

cdef int lll_pass(dd b[8][8], i128 u[8][8]) except -1:
    """One LLL sweep with incrementally maintained mu / squared GSO norms,
    starting from an exact GSO recompute.  Returns nonzero if it changed b."""
    cdef dd star[8][8]
    cdef dd mu[8][8]
    cdef dd norms[8]
    cdef dd tmp, cond, mu_, bnew, t_
    cdef i128 ti
    cdef int i, j, r, iters = 0, changed = 0
    gso8(b, star, mu, norms)
    i = 1
    while i < 8:
        iters += 1
        if iters > 100000:
            raise OverflowError("LLL iteration limit exceeded")
        changed |= red_step(b, u, mu, i, i - 1)
        cond = dd_mul(dd_sub(dd_from(0.99), dd_mul(mu[i][i - 1], mu[i][i - 1])),
                      norms[i - 1])
        if dd_lt(norms[i], cond):
            changed = 1
            for r in range(8):
                tmp = b[i][r]
                b[i][r] = b[i - 1][r]
                b[i - 1][r] = tmp
                ti = u[r][i]
                u[r][i] = u[r][i - 1]
                u[r][i - 1] = ti
            for r in range(i - 1):
                tmp = mu[i][r]
                mu[i][r] = mu[i - 1][r]
                mu[i - 1][r] = tmp
            mu_ = mu[i][i - 1]
            bnew = dd_add(norms[i], dd_mul(dd_mul(mu_, mu_), norms[i - 1]))
            mu[i][i - 1] = dd_div(dd_mul(mu_, norms[i - 1]), bnew)
            norms[i] = dd_div(dd_mul(norms[i - 1], norms[i]), bnew)
            norms[i - 1] = bnew
            for r in range(i + 1, 8):
                t_ = mu[r][i]
                mu[r][i] = dd_sub(mu[r][i - 1], dd_mul(mu_, t_))
                mu[r][i - 1] = dd_add(t_, dd_mul(mu[i][i - 1], mu[r][i]))
            if i > 1:
                i -= 1
        else:
            for j in range(i - 2, -1, -1):
                changed |= red_step(b, u, mu, i, j)
            i += 1
    return changed

# ---------------------------------------------------------------------------
# Quad-double mirrors of GSO / LLL for the small-eps regime, where the
# whitened basis condition exceeds double-double range.  The double-double
# LLL is still run first as a cheap warm start; these routines then rebuild
# the reduced basis exactly from the integer transform, recompute a trusted
# GSO, and finish the reduction where the warm start's fine scales were lost
# to rounding.
# ---------------------------------------------------------------------------

cdef inline qd qd_from_i128(i128 c) noexcept nogil:
    cdef double c0 = <double> c
    c -= <i128> c0
    cdef double c1 = <double> c
    c -= <i128> c1
    cdef double c2 = <double> c
    c -= <i128> c2
    return qd_renorm(c0, c1, c2, <double> c, 0.0)

cdef void gso8_q(qd b[8][8], qd star[8][8], qd mu[8][8],
                 qd norms[8]) noexcept nogil:
    cdef int i, j, r
    cdef qd acc
    for i in range(8):
        for r in range(8):
            star[i][r] = b[i][r]
        for j in range(i):
            acc = qd_from_d(0.0)
            for r in range(8):
                acc = qd_add(acc, qd_mul(b[i][r], star[j][r]))
            mu[i][j] = qd_div(acc, norms[j])
            for r in range(8):
                star[i][r] = qd_sub(star[i][r], qd_mul(mu[i][j], star[j][r]))
        acc = qd_from_d(0.0)
        for r in range(8):
            acc = qd_add(acc, qd_mul(star[i][r], star[i][r]))
        norms[i] = acc

cdef inline int red_step_q(qd b[8][8], i128 u[8][8], qd mu[8][8],
                           int i, int j) except -1:
    cdef double q, a
    cdef i128 t
    cdef int r, rounds, changed = 0
    for rounds in range(4):
        a = mu[i][j].x0
        if -0.5001 <= a <= 0.5001:
            return changed
        q = floor(mu[i][j].x0 + mu[i][j].x1 + 0.5)
        if q == 0.0:
            return changed
        for r in range(8):
            b[i][r] = qd_sub(b[i][r], qd_mul_d(b[j][r], q))
            t = u[r][i] - (<i128> q) * u[r][j]
            if t > _U128_LIMIT or t < -_U128_LIMIT:
                raise OverflowError("unimodular transform overflow")
            u[r][i] = t
        changed = 1
        for r in range(j):
            mu[i][r] = qd_sub(mu[i][r], qd_mul_d(mu[j][r], q))
        mu[i][j] = qd_sub(mu[i][j], qd_from_d(q))
    return changed

cdef int lll_pass_q(qd b[8][8], i128 u[8][8]) except -1:
    cdef qd star[8][8]
    cdef qd mu[8][8]
    cdef qd norms[8]
    cdef qd tmp, cond, mu_, bnew, t_
    cdef i128 ti
    cdef int i, j, r, iters = 0, changed = 0
    gso8_q(b, star, mu, norms)
    i = 1
    while i < 8:
        iters += 1
        if iters > 100000:
            raise OverflowError("LLL iteration limit exceeded")
        changed |= red_step_q(b, u, mu, i, i - 1)
        cond = qd_mul(qd_sub(qd_from_d(0.99),
                             qd_mul(mu[i][i - 1], mu[i][i - 1])),
                      norms[i - 1])
        if qd_lt(norms[i], cond):
            changed = 1
            for r in range(8):
                tmp = b[i][r]
                b[i][r] = b[i - 1][r]
                b[i - 1][r] = tmp
                ti = u[r][i]
                u[r][i] = u[r][i - 1]
                u[r][i - 1] = ti
            for r in range(i - 1):
                tmp = mu[i][r]
                mu[i][r] = mu[i - 1][r]
                mu[i - 1][r] = tmp
            mu_ = mu[i][i - 1]
            bnew = qd_add(norms[i], qd_mul(qd_mul(mu_, mu_), norms[i - 1]))
            mu[i][i - 1] = qd_div(qd_mul(mu_, norms[i - 1]), bnew)
            norms[i] = qd_div(qd_mul(norms[i - 1], norms[i]), bnew)
            norms[i - 1] = bnew
            for r in range(i + 1, 8):
                t_ = mu[r][i]
                mu[r][i] = qd_sub(mu[r][i - 1], qd_mul(mu_, t_))
                mu[r][i - 1] = qd_add(t_, qd_mul(mu[i][i - 1], mu[r][i]))
            if i > 1:
                i -= 1
        else:
            for j in range(i - 2, -1, -1):
                changed |= red_step_q(b, u, mu, i, j)
            i += 1
    return changed

cdef int lll8_q(qd b[8][8], i128 u[8][8]) except -1:
    cdef int rounds
    for rounds in range(32):
        if lll_pass_q(b, u) == 0:
            break
    return 0

cdef inline int gso_reduced_q(qd mu[8][8], qd norms[8]) noexcept nogil:
    """Check (with slack) that a GSO corresponds to an LLL-reduced basis."""
    cdef int i, j
    cdef double m
    for i in range(1, 8):
        for j in range(i):
            m = mu[i][j].x0
            if m > 0.9 or m < -0.9:
                return 0
        m = mu[i][i - 1].x0
        if norms[i].x0 < 0.8 * (0.99 - m * m) * norms[i - 1].x0:
            return 0
    return 1

cdef inline int gso_reduced_dd(dd mu[8][8], dd norms[8]) noexcept nogil:
    cdef int i, j
    cdef double m
    for i in range(1, 8):
        for j in range(i):
            m = mu[i][j].hi
            if m > 0.9 or m < -0.9:
                return 0
        m = mu[i][i - 1].hi
        if norms[i].hi < 0.8 * (0.99 - m * m) * norms[i - 1].hi:
            return 0
    return 1

cdef struct FpCtx:
    # plain doubles: the search is recentered on a Babai-rounded lattice
    # point first, so every quantity here is O(1)-scale and the 2^-16 slack
    # dwarfs double rounding error (false positives die in the exact filters)
    double mu[8][8]
    double norms[8]
    double y[8]
    double r2
    double slack
    i64 x[8]
    i64 nodes
    i64 *sols
    int nsol
    int cap

cdef int fp_rec(FpCtx *ctx, int level, double partial) except -1:
    cdef double c, budget, half, term, diff
    cdef double flo, fhi
    cdef i64 lo, hi, xi
    cdef int j
    cdef i64 *grown
    if level < 0:
        if ctx.nsol >= ctx.cap:
            ctx.cap *= 2
            grown = <i64 *> PyMem_Realloc(ctx.sols, ctx.cap * 8 * sizeof(i64))
            if grown == NULL:
                raise MemoryError()
            ctx.sols = grown
        memcpy(ctx.sols + ctx.nsol * 8, ctx.x, 8 * sizeof(i64))
        ctx.nsol += 1
        return 0
    c = ctx.y[level]
    for j in range(level + 1, 8):
        c -= ctx.mu[j][level] * (<double> ctx.x[j])
    budget = (ctx.r2 - partial) / ctx.norms[level] + ctx.slack
    if budget < 0.0:
        return 0
    half = sqrt(budget)
    flo = ceil(c - half - ctx.slack)
    fhi = floor(c + half + ctx.slack)
    if flo < -8388608.0 or fhi > 8388608.0:
        raise OverflowError("enumeration interval out of range")
    lo = <i64> flo
    hi = <i64> fhi
    xi = lo
    while xi <= hi:
        ctx.nodes += 1
        diff = (<double> xi) - c
        term = diff * diff * ctx.norms[level]
        if term <= ctx.r2 - partial + ctx.slack:
            ctx.x[level] = xi
            fp_rec(ctx, level - 1, partial + term)
        xi += 1
    return 0

# ---------------------------------------------------------------------------
# Region construction helpers
# ---------------------------------------------------------------------------

cdef void sigma8(dd r, dd sig[8][8]) noexcept nogil:
    """Rows of Sigma: integer coordinates -> (u, u-bullet) real 8-vector."""
    cdef dd z = dd_from(0.0)
    cdef dd one = dd_from(1.0)
    cdef dd nr = dd_neg(r)
    cdef int i, j
    for i in range(8):
        for j in range(8):
            sig[i][j] = z
    sig[0][0] = one; sig[0][1] = r;  sig[0][3] = nr
    sig[1][1] = r;   sig[1][2] = one; sig[1][3] = r
    sig[2][4] = one; sig[2][5] = r;  sig[2][7] = nr
    sig[3][5] = r;   sig[3][6] = one; sig[3][7] = r
    sig[4][0] = one; sig[4][1] = nr; sig[4][3] = r
    sig[5][1] = nr;  sig[5][2] = one; sig[5][3] = nr
    sig[6][4] = one; sig[6][5] = nr; sig[6][7] = r
    sig[7][5] = nr;  sig[7][6] = one; sig[7][7] = nr

cdef void completion4(dd v[4], dd comp[3][4]) noexcept nogil:
    """Gram-Schmidt completion of the unit 4-vector v."""
    cdef dd basis[4][4]
    cdef dd w[4]
    cdef dd c, nrm
    cdef int nb = 1, i, j, r, pivot = 0
    cdef double best = 0.0, a
    for i in range(4):
        basis[0][i] = v[i]
        a = v[i].hi
        if a < 0.0:
            a = -a
        if a > best:
            best = a
            pivot = i
    for i in range(4):
        if i == pivot:
            continue
        for r in range(4):
            w[r] = dd_from(1.0 if r == i else 0.0)
        for j in range(nb):
            c = dd_from(0.0)
            for r in range(4):
                c = dd_add(c, dd_mul(w[r], basis[j][r]))
            for r in range(4):
                w[r] = dd_sub(w[r], dd_mul(c, basis[j][r]))
        nrm = dd_from(0.0)
        for r in range(4):
            nrm = dd_add(nrm, dd_mul(w[r], w[r]))
        nrm = dd_sqrt(nrm)
        for r in range(4):
            basis[nb][r] = dd_div(w[r], nrm)
        nb += 1
    for i in range(3):
        for r in range(4):
            comp[i][r] = basis[i + 1][r]

cdef void sigma8_q(qd r, qd sig[8][8]) noexcept nogil:
    cdef qd z = qd_from_d(0.0)
    cdef qd one = qd_from_d(1.0)
    cdef qd nr = qd_neg(r)
    cdef int i, j
    for i in range(8):
        for j in range(8):
            sig[i][j] = z
    sig[0][0] = one; sig[0][1] = r;  sig[0][3] = nr
    sig[1][1] = r;   sig[1][2] = one; sig[1][3] = r
    sig[2][4] = one; sig[2][5] = r;  sig[2][7] = nr
    sig[3][5] = r;   sig[3][6] = one; sig[3][7] = r
    sig[4][0] = one; sig[4][1] = nr; sig[4][3] = r
    sig[5][1] = nr;  sig[5][2] = one; sig[5][3] = nr
    sig[6][4] = one; sig[6][5] = nr; sig[6][7] = r
    sig[7][5] = nr;  sig[7][6] = one; sig[7][7] = nr

cdef void completion4_q(qd v[4], qd comp[3][4]) noexcept nogil:
    cdef qd basis[4][4]
    cdef qd w[4]
    cdef qd c, nrm
    cdef int nb = 1, i, j, r, pivot = 0
    cdef double best = 0.0, a
    for i in range(4):
        basis[0][i] = v[i]
        a = v[i].x0
        if a < 0.0:
            a = -a
        if a > best:
            best = a
            pivot = i
    for i in range(4):
        if i == pivot:
            continue
        for r in range(4):
            w[r] = qd_from_d(1.0 if r == i else 0.0)
        for j in range(nb):
            c = qd_from_d(0.0)
            for r in range(4):
                c = qd_add(c, qd_mul(w[r], basis[j][r]))
            for r in range(4):
                w[r] = qd_sub(w[r], qd_mul(c, basis[j][r]))
        nrm = qd_from_d(0.0)
        for r in range(4):
            nrm = qd_add(nrm, qd_mul(w[r], w[r]))
        nrm = qd_sqrt(nrm)
        for r in range(4):
            basis[nb][r] = qd_div(w[r], nrm)
        nb += 1
    for i in range(3):
        for r in range(4):
            comp[i][r] = basis[i + 1][r]

def _debug_coset(int k, double eps, vdd, ph16, row=None, int odd=0):
    """Testing hook: qd-path internals for one coset (identity by default).

    Returns (cols, ucomb, red, mu, norms, y) with qd values rounded to
    floats."""
    cdef qd v4q[4]
    cdef qd phcq[16]
    cdef qd phsq[16]
    cdef int i, j, r
    for i in range(4):
        v4q[i] = qd_renorm(float(vdd[i][0]), float(vdd[i][1]),
                           float(vdd[i][2]), float(vdd[i][3]), 0.0)
    for i in range(16):
        phcq[i] = qd_renorm(float(ph16[i][0]), float(ph16[i][1]),
                            float(ph16[i][2]), float(ph16[i][3]), 0.0)
        phsq[i] = qd_renorm(float(ph16[16 + i][0]), float(ph16[16 + i][1]),
                            float(ph16[16 + i][2]), float(ph16[16 + i][3]), 0.0)
    cdef qd oneq = qd_from_d(1.0)
    cdef qd rt2invq = qd_div(oneq, qd_sqrt(qd_from_d(2.0)))
    cdef qd epsq = qd_from_d(eps)
    cdef qd thetaq = qd_sqrt(qd_sub(oneq, qd_mul(epsq, epsq)))
    cdef qd a_slabq = qd_mul_d(qd_sub(oneq, thetaq), 0.5)
    cdef qd c0q = qd_mul_d(qd_add(oneq, thetaq), 0.5)
    cdef qd scaleq = oneq
    for i in range(k):
        scaleq = qd_mul(scaleq, rt2invq)
    cdef qd inv_a_slabq = qd_div(oneq, a_slabq)
    cdef qd inv_epsq = qd_div(oneq, epsq)
    cdef qd sigq[8][8]
    sigma8_q(rt2invq, sigq)
    cdef qd compq[3][4]
    cdef qd colsq[8][8]
    cdef qd redq[8][8]
    cdef qd starq[8][8]
    cdef qd muq[8][8]
    cdef qd normsq[8]
    cdef qd srowq, accq
    cdef qd w4q[4]
    cdef qd scaleLq, re1q, im1q, re2q, im2q, t1q, t2q
    cdef qd w1rq, w1iq, w2rq, w2iq, prq, piq
    cdef i64 row10[10]
    cdef int kL, mL, rot_idx, ph_idx
    if row is None:
        for i in range(4):
            w4q[i] = v4q[i]
    else:
        for i in range(10):
            row10[i] = row[i]
        kL = <int> row10[8]
        mL = <int> row10[9]
        rot_idx = ((-2 * mL) % 16 + 16) % 16
        ph_idx = (mL + odd) % 16
        scaleLq = oneq
        for i in range(kL):
            scaleLq = qd_mul(scaleLq, rt2invq)
        re1q = qd_mul(qd_add(qd_from_d(<double> row10[0]),
                             qd_mul_d(rt2invq, <double> (row10[1] - row10[3]))), scaleLq)
        im1q = qd_mul(qd_add(qd_from_d(<double> row10[2]),
                             qd_mul_d(rt2invq, <double> (row10[1] + row10[3]))), scaleLq)
        re2q = qd_mul(qd_add(qd_from_d(<double> row10[4]),
                             qd_mul_d(rt2invq, <double> (row10[5] - row10[7]))), scaleLq)
        im2q = qd_mul(qd_add(qd_from_d(<double> row10[6]),
                             qd_mul_d(rt2invq, <double> (row10[5] + row10[7]))), scaleLq)
        w1rq = qd_add(qd_add(qd_mul(re1q, v4q[0]), qd_mul(im1q, v4q[1])),
                      qd_add(qd_mul(re2q, v4q[2]), qd_mul(im2q, v4q[3])))
        w1iq = qd_add(qd_sub(qd_mul(re1q, v4q[1]), qd_mul(im1q, v4q[0])),
                      qd_sub(qd_mul(re2q, v4q[3]), qd_mul(im2q, v4q[2])))
        t1q = qd_sub(qd_sub(qd_mul(re1q, v4q[2]), qd_mul(im1q, v4q[3])),
                     qd_sub(qd_mul(re2q, v4q[0]), qd_mul(im2q, v4q[1])))
        t2q = qd_sub(qd_add(qd_mul(re1q, v4q[3]), qd_mul(im1q, v4q[2])),
                     qd_add(qd_mul(re2q, v4q[1]), qd_mul(im2q, v4q[0])))
        w2rq = qd_sub(qd_mul(phcq[rot_idx], t1q), qd_mul(phsq[rot_idx], t2q))
        w2iq = qd_add(qd_mul(phsq[rot_idx], t1q), qd_mul(phcq[rot_idx], t2q))
        prq = phcq[ph_idx]
        piq = phsq[ph_idx]
        w4q[0] = qd_sub(qd_mul(prq, w1rq), qd_mul(piq, w1iq))
        w4q[1] = qd_add(qd_mul(piq, w1rq), qd_mul(prq, w1iq))
        w4q[2] = qd_sub(qd_mul(prq, w2rq), qd_mul(piq, w2iq))
        w4q[3] = qd_add(qd_mul(piq, w2rq), qd_mul(prq, w2iq))
    completion4_q(w4q, compq)
    for j in range(8):
        srowq = qd_from_d(0.0)
        for i in range(4):
            srowq = qd_add(srowq, qd_mul(w4q[i], sigq[i][j]))
        srowq = qd_mul(srowq, scaleq)
        colsq[j][0] = qd_mul(srowq, inv_a_slabq)
        for r in range(3):
            accq = qd_from_d(0.0)
            for i in range(4):
                accq = qd_add(accq, qd_mul(compq[r][i], sigq[i][j]))
            colsq[j][r + 1] = qd_mul(qd_mul(accq, scaleq), inv_epsq)
        for r in range(4):
            colsq[j][r + 4] = qd_mul(sigq[r + 4][j], scaleq)
    cdef i128 u2[8][8]
    memset(u2, 0, sizeof(u2))
    for i in range(8):
        u2[i][i] = 1
    for i in range(8):
        for j in range(8):
            redq[i][j] = colsq[i][j]
    lll8_q(redq, u2)
    gso8_q(redq, starq, muq, normsq)
    cols_out = [[(colsq[i][j].x0, colsq[i][j].x1) for j in range(8)]
                for i in range(8)]
    u_out = [[int(u2[i][j]) for j in range(8)] for i in range(8)]
    red_out = [[(redq[i][j].x0, redq[i][j].x1) for j in range(8)]
               for i in range(8)]
    mu_out = [[(muq[i][j].x0, muq[i][j].x1) for j in range(i)]
              for i in range(8)]
    norms_out = [(normsq[i].x0, normsq[i].x1) for i in range(8)]
    cdef qd cen0q = qd_mul(c0q, inv_a_slabq)
    y_out = [qd_to_d(qd_div(qd_mul(cen0q, starq[i][0]), normsq[i]))
             for i in range(8)]
    return cols_out, u_out, red_out, mu_out, norms_out, y_out


def _qd_op(str op, a, b=None):
    """Testing hook: run one quad-double operation on 4-way splits."""
    cdef qd x = qd_renorm(a[0], a[1], a[2], a[3], 0.0)
    cdef qd y
    cdef qd r
    if b is not None:
        y = qd_renorm(b[0], b[1], b[2], b[3], 0.0)
    if op == "add":
        r = qd_add(x, y)
    elif op == "sub":
        r = qd_sub(x, y)
    elif op == "mul":
        r = qd_mul(x, y)
    elif op == "div":
        r = qd_div(x, y)
    elif op == "sqrt":
        r = qd_sqrt(x)
    else:
        raise ValueError(op)
    return (r.x0, r.x1, r.x2, r.x3)

# ---------------------------------------------------------------------------
# Public entry point
# ---------------------------------------------------------------------------

# Below this the double-double GSO data of the whitened basis (condition
# ~ 4/eps^2, and its square shows up in the normal equations) is no longer
# trustworthy, so the quad-double path takes over.
DEF _QD_EPS_THRESHOLD = 3e-7

def enumerate_cosets(int k, double eps, vdd, coset_rows, int odd, ph16):
    """Enumerate region points for a batch of coset representatives.

    vdd: target 4-vector as four 4-way double splits (x0, x1, x2, x3).
    coset_rows: sequence of 10-int rows (x1 coeffs, x2 coeffs, kL, mL).
    odd: 1 if the sub-T-count is odd (adds an extra pi/8 target rotation).
    ph16: 32 4-way splits: cos(pi*j/8) for j=0..15, then sin(pi*j/8).

    Returns (rows, nodes) where each row is (coset_index, a1,b1,c1,d1,
    a2,b2,c2,d2) and nodes is the total lattice node count.
    """
    cdef qd v4q[4]
    cdef qd phcq[16]
    cdef qd phsq[16]
    cdef int i, j, r, idx
    cdef int use_qd = 1 if eps < _QD_EPS_THRESHOLD else 0
    for i in range(4):
        v4q[i] = qd_renorm(float(vdd[i][0]), float(vdd[i][1]),
                           float(vdd[i][2]), float(vdd[i][3]), 0.0)
    for i in range(16):
        phcq[i] = qd_renorm(float(ph16[i][0]), float(ph16[i][1]),
                            float(ph16[i][2]), float(ph16[i][3]), 0.0)
        phsq[i] = qd_renorm(float(ph16[16 + i][0]), float(ph16[16 + i][1]),
                            float(ph16[16 + i][2]), float(ph16[16 + i][3]), 0.0)
    cdef dd v4[4]
    cdef dd phc[16]
    cdef dd phs[16]
    for i in range(4):
        v4[i] = dd_from_qd(v4q[i])
    for i in range(16):
        phc[i] = dd_from_qd(phcq[i])
        phs[i] = dd_from_qd(phsq[i])

    # shared scalar constants, computed in quad-double and rounded down for
    # the double-double path (a_slab = (1-theta)/2 ~ eps^2/4 suffers heavy
    # cancellation, so even the dd path benefits from the qd intermediate)
    cdef qd oneq = qd_from_d(1.0)
    cdef qd rt2invq = qd_div(oneq, qd_sqrt(qd_from_d(2.0)))
    cdef qd epsq = qd_from_d(eps)
    cdef qd thetaq = qd_sqrt(qd_sub(oneq, qd_mul(epsq, epsq)))
    cdef qd a_slabq = qd_mul_d(qd_sub(oneq, thetaq), 0.5)
    cdef qd c0q = qd_mul_d(qd_add(oneq, thetaq), 0.5)
    cdef qd scaleq = oneq
    for i in range(k):
        scaleq = qd_mul(scaleq, rt2invq)
    cdef qd inv_a_slabq = qd_div(oneq, a_slabq)
    cdef qd inv_epsq = qd_div(oneq, epsq)
    cdef qd sigq[8][8]
    sigma8_q(rt2invq, sigq)

    cdef dd one = dd_from(1.0)
    cdef dd rt2inv = dd_from_qd(rt2invq)
    cdef dd eps_dd = dd_from(eps)
    cdef dd theta = dd_from_qd(thetaq)
    cdef dd a_slab = dd_from_qd(a_slabq)
    cdef dd c0 = dd_from_qd(c0q)
    cdef dd r2 = dd_mul(dd_from(3.0), dd_add(one, dd_from(2.0 ** -16)))
    cdef dd slab_thresh = dd_sub(theta, dd_from(2.0 ** -40))
    cdef dd scale = dd_from_qd(scaleq)
    cdef dd sig[8][8]
    sigma8(rt2inv, sig)

    cdef FpCtx ctx
    ctx.cap = 256
    ctx.sols = <i64 *> PyMem_Malloc(ctx.cap * 8 * sizeof(i64))
    if ctx.sols == NULL:
        raise MemoryError()
    ctx.slack = 2.0 ** -16

    # warm-start unimodular transform carried between cosets
    cdef i128 uinit[8][8]
    cdef i128 ucur[8][8]
    cdef i128 ucomb[8][8]
    memset(uinit, 0, sizeof(uinit))
    for i in range(8):
        uinit[i][i] = 1

    cdef i64 row10[10]
    cdef dd scaleL, re1, im1, re2, im2, t1, t2, w1r, w1i, w2r, w2i, pr, pi, acc
    cdef dd w4[4]
    cdef dd comp[3][4]
    cdef dd cols[8][8]
    cdef dd bwork[8][8]
    cdef dd red[8][8]
    cdef dd slab_row[8]
    cdef dd star[8][8]
    cdef dd srow
    # quad-double counterparts used when eps < _QD_EPS_THRESHOLD
    cdef qd scaleLq, re1q, im1q, re2q, im2q, t1q, t2q
    cdef qd w1rq, w1iq, w2rq, w2iq, prq, piq, accq, srowq
    cdef qd w4q[4]
    cdef qd compq[3][4]
    cdef qd colsq[8][8]
    cdef qd cen0q = qd_mul(c0q, inv_a_slabq)
    cdef dd cen0
    cdef i128 u2[8][8]
    # recentering data: Babai-rounded lattice point near the region center
    cdef i128 x0[8]
    cdef i64 n0[8]
    cdef dd cbab, yadj
    cdef dd mu_dd[8][8]
    cdef dd norms_dd[8]
    cdef dd y_dd[8]
    cdef double ucombd[8][8]
    cdef double n0d[8]
    cdef double maxu, n0max, errn, ptol, tgtd, pd, nd
    cdef int use_pre
    cdef int kL, mL, rot_idx, ph_idx
    cdef i64 total_nodes = 0
    cdef i64 n8[8]
    cdef i128 acc128, p128, q128
    cdef i64 tgt_hi, tgt_lo
    cdef i64 sval
    cdef int neg, si
    out = []
    try:
        for idx, row in enumerate(coset_rows):
            _tmark = _now()
            for i in range(10):
                row10[i] = row[i]
            kL = <int> row10[8]
            mL = <int> row10[9]
            rot_idx = ((-2 * mL) % 16 + 16) % 16
            ph_idx = (mL + odd) % 16
            if use_qd:
                # quad-double region build; dd copies feed the warm-start LLL
                # and the exact-filter slab test
                scaleLq = oneq
                for i in range(kL):
                    scaleLq = qd_mul(scaleLq, rt2invq)
                re1q = qd_mul(qd_add(qd_from_d(<double> row10[0]),
                                     qd_mul_d(rt2invq, <double> (row10[1] - row10[3]))), scaleLq)
                im1q = qd_mul(qd_add(qd_from_d(<double> row10[2]),
                                     qd_mul_d(rt2invq, <double> (row10[1] + row10[3]))), scaleLq)
                re2q = qd_mul(qd_add(qd_from_d(<double> row10[4]),
                                     qd_mul_d(rt2invq, <double> (row10[5] - row10[7]))), scaleLq)
                im2q = qd_mul(qd_add(qd_from_d(<double> row10[6]),
                                     qd_mul_d(rt2invq, <double> (row10[5] + row10[7]))), scaleLq)
                w1rq = qd_add(qd_add(qd_mul(re1q, v4q[0]), qd_mul(im1q, v4q[1])),
                              qd_add(qd_mul(re2q, v4q[2]), qd_mul(im2q, v4q[3])))
                w1iq = qd_add(qd_sub(qd_mul(re1q, v4q[1]), qd_mul(im1q, v4q[0])),
                              qd_sub(qd_mul(re2q, v4q[3]), qd_mul(im2q, v4q[2])))
                t1q = qd_sub(qd_sub(qd_mul(re1q, v4q[2]), qd_mul(im1q, v4q[3])),
                             qd_sub(qd_mul(re2q, v4q[0]), qd_mul(im2q, v4q[1])))
                t2q = qd_sub(qd_add(qd_mul(re1q, v4q[3]), qd_mul(im1q, v4q[2])),
                             qd_add(qd_mul(re2q, v4q[1]), qd_mul(im2q, v4q[0])))
                w2rq = qd_sub(qd_mul(phcq[rot_idx], t1q), qd_mul(phsq[rot_idx], t2q))
                w2iq = qd_add(qd_mul(phsq[rot_idx], t1q), qd_mul(phcq[rot_idx], t2q))
                prq = phcq[ph_idx]
                piq = phsq[ph_idx]
                w4q[0] = qd_sub(qd_mul(prq, w1rq), qd_mul(piq, w1iq))
                w4q[1] = qd_add(qd_mul(piq, w1rq), qd_mul(prq, w1iq))
                w4q[2] = qd_sub(qd_mul(prq, w2rq), qd_mul(piq, w2iq))
                w4q[3] = qd_add(qd_mul(piq, w2rq), qd_mul(prq, w2iq))
                completion4_q(w4q, compq)
                for j in range(8):
                    srowq = qd_from_d(0.0)
                    for i in range(4):
                        srowq = qd_add(srowq, qd_mul(w4q[i], sigq[i][j]))
                    srowq = qd_mul(srowq, scaleq)
                    slab_row[j] = dd_from_qd(srowq)
                    colsq[j][0] = qd_mul(srowq, inv_a_slabq)
                    for r in range(3):
                        accq = qd_from_d(0.0)
                        for i in range(4):
                            accq = qd_add(accq, qd_mul(compq[r][i], sigq[i][j]))
                        colsq[j][r + 1] = qd_mul(qd_mul(accq, scaleq), inv_epsq)
                    for r in range(4):
                        colsq[j][r + 4] = qd_mul(sigq[r + 4][j], scaleq)
                    for r in range(8):
                        cols[j][r] = dd_from_qd(colsq[j][r])
            else:
                # u_L entries: x = a + b*zeta + c*zeta^2 + d*zeta^3,
                # zeta = exp(i pi/4)
                scaleL = one
                for i in range(kL):
                    scaleL = dd_mul(scaleL, rt2inv)
                re1 = dd_mul(dd_add(dd_from(<double> row10[0]),
                                    dd_mul_d(rt2inv, <double> (row10[1] - row10[3]))), scaleL)
                im1 = dd_mul(dd_add(dd_from(<double> row10[2]),
                                    dd_mul_d(rt2inv, <double> (row10[1] + row10[3]))), scaleL)
                re2 = dd_mul(dd_add(dd_from(<double> row10[4]),
                                    dd_mul_d(rt2inv, <double> (row10[5] - row10[7]))), scaleL)
                im2 = dd_mul(dd_add(dd_from(<double> row10[6]),
                                    dd_mul_d(rt2inv, <double> (row10[5] + row10[7]))), scaleL)
                # w1 = conj(u1) v1 + conj(u2) v2
                w1r = dd_add(dd_add(dd_mul(re1, v4[0]), dd_mul(im1, v4[1])),
                             dd_add(dd_mul(re2, v4[2]), dd_mul(im2, v4[3])))
                w1i = dd_add(dd_sub(dd_mul(re1, v4[1]), dd_mul(im1, v4[0])),
                             dd_sub(dd_mul(re2, v4[3]), dd_mul(im2, v4[2])))
                # w2 = zeta^{-mL} (u1 v2 - u2 v1)
                t1 = dd_sub(dd_sub(dd_mul(re1, v4[2]), dd_mul(im1, v4[3])),
                            dd_sub(dd_mul(re2, v4[0]), dd_mul(im2, v4[1])))
                t2 = dd_sub(dd_add(dd_mul(re1, v4[3]), dd_mul(im1, v4[2])),
                            dd_add(dd_mul(re2, v4[1]), dd_mul(im2, v4[0])))
                w2r = dd_sub(dd_mul(phc[rot_idx], t1), dd_mul(phs[rot_idx], t2))
                w2i = dd_add(dd_mul(phs[rot_idx], t1), dd_mul(phc[rot_idx], t2))
                # phase normalization exp(i pi (mL + odd)/8)
                pr = phc[ph_idx]
                pi = phs[ph_idx]
                w4[0] = dd_sub(dd_mul(pr, w1r), dd_mul(pi, w1i))
                w4[1] = dd_add(dd_mul(pi, w1r), dd_mul(pr, w1i))
                w4[2] = dd_sub(dd_mul(pr, w2r), dd_mul(pi, w2i))
                w4[3] = dd_add(dd_mul(pi, w2r), dd_mul(pr, w2i))

                completion4(w4, comp)
                # whitened rows -> columns, plus the slab row kept un-whitened
                for j in range(8):
                    srow = dd_from(0.0)
                    for i in range(4):
                        srow = dd_add(srow, dd_mul(w4[i], sig[i][j]))
                    slab_row[j] = dd_mul(srow, scale)
                    cols[j][0] = dd_div(slab_row[j], a_slab)
                    for r in range(3):
                        acc = dd_from(0.0)
                        for i in range(4):
                            acc = dd_add(acc, dd_mul(comp[r][i], sig[i][j]))
                        cols[j][r + 1] = dd_div(dd_mul(acc, scale), eps_dd)
                    for r in range(4):
                        cols[j][r + 4] = dd_mul(sig[r + 4][j], scale)

            _sect[0] += _now() - _tmark; _tmark = _now()
            # warm-started working basis bwork = cols * uinit
            for j in range(8):
                for r in range(8):
                    acc = dd_from(0.0)
                    for i in range(8):
                        if uinit[i][j] != 0:
                            acc = dd_add(acc, dd_mul(cols[i][r],
                                                     dd_from_i128(uinit[i][j])))
                    bwork[j][r] = acc
            memset(ucur, 0, sizeof(ucur))
            for i in range(8):
                ucur[i][i] = 1
            lll8(bwork, ucur)
            # compose ucomb = uinit * ucur and recompute red = cols * ucomb
            for i in range(8):
                for j in range(8):
                    acc128 = 0
                    for r in range(8):
                        acc128 += uinit[i][r] * ucur[r][j]
                    if acc128 > _U_FINAL or acc128 < -_U_FINAL:
                        raise OverflowError("unimodular transform overflow")
                    ucomb[i][j] = acc128
            _sect[1] += _now() - _tmark; _tmark = _now()
            if use_qd:
                # rebuild the reduced basis in quad-double from the exact
                # integer transform: the dd product loses ~ kappa bits to
                # cancellation, which is everything at small eps.  The rebuilt
                # basis is O(1)-scale and well conditioned, so its dd rounding
                # is accurate enough for the GSO and everything downstream
                for j in range(8):
                    for r in range(8):
                        accq = qd_from_d(0.0)
                        for i in range(8):
                            if ucomb[i][j] != 0:
                                accq = qd_add(accq, qd_mul(colsq[i][r],
                                                           qd_from_i128(ucomb[i][j])))
                        red[j][r] = dd_from_qd(accq)
                gso8(red, star, mu_dd, norms_dd)
                if not gso_reduced_dd(mu_dd, norms_dd):
                    # dd warm start on the raw basis was not enough: finish
                    # the reduction on the accurately rebuilt basis
                    memset(u2, 0, sizeof(u2))
                    for i in range(8):
                        u2[i][i] = 1
                    lll8(red, u2)
                    for i in range(8):
                        for j in range(8):
                            acc128 = 0
                            for r in range(8):
                                acc128 += ucomb[i][r] * u2[r][j]
                            if acc128 > _U_FINAL or acc128 < -_U_FINAL:
                                raise OverflowError("unimodular transform overflow")
                            ucur[i][j] = acc128
                    memcpy(ucomb, ucur, sizeof(ucomb))
                    gso8(red, star, mu_dd, norms_dd)
                memcpy(uinit, ucomb, sizeof(uinit))
                cen0 = dd_from_qd(cen0q)
                for i in range(8):
                    # center w = (c0/a_slab, 0, ..., 0)
                    y_dd[i] = dd_div(dd_mul(cen0, star[i][0]), norms_dd[i])
            else:
                for j in range(8):
                    for r in range(8):
                        acc = dd_from(0.0)
                        for i in range(8):
                            if ucomb[i][j] != 0:
                                acc = dd_add(acc, dd_mul(cols[i][r],
                                                         dd_from_i128(ucomb[i][j])))
                        red[j][r] = acc
                memcpy(uinit, ucomb, sizeof(uinit))

                # GSO of the reduced basis and projections of the center
                gso8(red, star, mu_dd, norms_dd)
                for i in range(8):
                    # center w = (c0/a_slab, 0, ..., 0)
                    acc = dd_mul(dd_div(c0, a_slab), star[i][0])
                    y_dd[i] = dd_div(acc, norms_dd[i])

            _sect[2] += _now() - _tmark; _tmark = _now()
            # recenter on the Babai-rounded lattice point nearest the region
            # center: the raw reduced-basis coordinates of the center reach
            # ~1/eps^2 and overflow the int64 coordinate arithmetic otherwise
            for i in range(7, -1, -1):
                cbab = y_dd[i]
                for j in range(i + 1, 8):
                    cbab = dd_sub(cbab, dd_mul(mu_dd[j][i],
                                               dd_from_i128(x0[j])))
                x0[i] = dd_nint_i128(cbab)
            for i in range(8):
                yadj = dd_sub(y_dd[i], dd_from_i128(x0[i]))
                for j in range(i + 1, 8):
                    yadj = dd_sub(yadj, dd_mul(mu_dd[j][i],
                                               dd_from_i128(x0[j])))
                ctx.y[i] = yadj.hi
            # after recentering everything is O(1): run the search in doubles
            for i in range(8):
                for j in range(i):
                    ctx.mu[i][j] = mu_dd[i][j].hi
                ctx.norms[i] = norms_dd[i].hi
            # base integer vector n0 = ucomb * x0, in arbitrary precision
            # (individual products can exceed 128 bits even when the result,
            # an integer point near the unit-sphere cap, is small)
            for r in range(8):
                tot = 0
                for j in range(8):
                    if x0[j] != 0:
                        tot += _i128_to_py(ucomb[r][j]) * _i128_to_py(x0[j])
                if tot > 4611686018427387904 or tot < -4611686018427387904:
                    raise OverflowError("recentered coordinate overflow")
                n0[r] = tot
            _sect[3] += _now() - _tmark; _tmark = _now()
            ctx.r2 = r2.hi
            ctx.nsol = 0
            ctx.nodes = 0
            memset(ctx.x, 0, sizeof(ctx.x))
            fp_rec(&ctx, 7, 0.0)
            total_nodes += ctx.nodes
            _sect[4] += _now() - _tmark; _tmark = _now()

            # exact filters on each solution
            tgt_hi = 0
            tgt_lo = 0
            if k >= 63:
                tgt_hi = (<i64> 1) << (k - 63)
            else:
                tgt_lo = (<i64> 1) << k
            # double-precision prefilter on the norm equation: skip the i128
            # reconstruction when the approximate |n|^2 provably misses 2^k.
            # errn bounds |nd - n| from rounding; disabled when the transform
            # is too large for the bound to be discriminating
            maxu = 0.0
            n0max = 0.0
            for r in range(8):
                n0d[r] = <double> n0[r]
                if fabs(n0d[r]) > n0max:
                    n0max = fabs(n0d[r])
                for j in range(8):
                    ucombd[r][j] = <double> ucomb[r][j]
                    if fabs(ucombd[r][j]) > maxu:
                        maxu = fabs(ucombd[r][j])
            tgtd = ldexp(1.0, k)
            errn = 16.0 * (8.0 * maxu * 8388608.0 + n0max) * 2.0 ** -52
            ptol = (16.0 * (2.0 * sqrt(tgtd) * errn + errn * errn)
                    + tgtd * 2.0 ** -48 + 1.0)
            use_pre = ptol < 0.25 * tgtd
            for si in range(ctx.nsol):
                if use_pre:
                    pd = 0.0
                    for r in range(8):
                        nd = n0d[r]
                        for j in range(8):
                            nd += ucombd[r][j] * (<double> ctx.sols[si * 8 + j])
                        pd += nd * nd
                    if fabs(pd - tgtd) > ptol:
                        continue
                for r in range(8):
                    acc128 = <i128> n0[r]
                    for j in range(8):
                        sval = ctx.sols[si * 8 + j]
                        if sval > 8388608 or sval < -8388608:
                            raise OverflowError("offset coordinate overflow")
                        acc128 += ucomb[r][j] * (<i128> sval)
                    if acc128 > _I64_LIMIT or acc128 < -_I64_LIMIT:
                        raise OverflowError("coordinate overflow")
                    n8[r] = <i64> acc128
                p128 = 0
                for r in range(8):
                    p128 += (<i128> n8[r]) * n8[r]
                if p128 != ((<i128> tgt_hi) << 63) + tgt_lo:
                    continue
                q128 = (
                    (<i128> n8[0]) * n8[1] + (<i128> n8[1]) * n8[2]
                    + (<i128> n8[2]) * n8[3] - (<i128> n8[3]) * n8[0]
                    + (<i128> n8[4]) * n8[5] + (<i128> n8[5]) * n8[6]
                    + (<i128> n8[6]) * n8[7] - (<i128> n8[7]) * n8[4]
                )
                if q128 != 0:
                    continue
                acc = dd_from(0.0)
                for j in range(8):
                    acc = dd_add(acc, dd_mul_d(slab_row[j], <double> n8[j]))
                if acc.hi < 0.0:
                    for r in range(8):
                        n8[r] = -n8[r]
                    acc = dd_neg(acc)
                if not dd_lt(acc, slab_thresh):
                    out.append((idx, n8[0], n8[1], n8[2], n8[3],
                                n8[4], n8[5], n8[6], n8[7]))
            _sect[5] += _now() - _tmark
    finally:
        PyMem_Free(ctx.sols)
    return out, total_nodes
