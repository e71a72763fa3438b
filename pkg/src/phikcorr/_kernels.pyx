# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: bivariate normal grid orthants, Patefield sampling,
batched G statistics. Semantics match ``_pykernels`` exactly."""
import numpy as np
cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport asin, sin, exp, sqrt, log, erfc, fabs, M_PI
from numpy.random cimport bitgen_t

cnp.import_array()

cdef double TWO_PI = 2.0 * M_PI
cdef double BIG = 37.0
cdef double SQRT1_2 = 0.70710678118654752440


cdef inline double phid(double z) nogil:
    return 0.5 * erfc(-z * SQRT1_2)


cdef inline double clip(double v, double lo, double hi) nogil:
    if v < lo:
        return lo
    if v > hi:
        return hi
    return v


cdef double _bvnu(double h, double k, double r,
                  const double[::1] x, const double[::1] w) nogil:
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double hk, hs, asr, sn, bvn = 0.0
    cdef double as_, a, bs, c, d, b, xs, rs, sp, ep, band

    h = clip(h, -BIG, BIG)
    k = clip(k, -BIG, BIG)
    if r == 0.0:
        return phid(-h) * phid(-k)
    hk = h * k
    if fabs(r) < 0.925:
        hs = 0.5 * (h * h + k * k)
        asr = asin(r)
        for i in range(n):
            sn = sin(asr * (x[i] + 1.0) / 2.0)
            bvn += w[i] * exp((sn * hk - hs) / (1.0 - sn * sn))
        bvn = bvn * asr / (2.0 * TWO_PI) + phid(-h) * phid(-k)
        return clip(bvn, 0.0, 1.0)

    if r < 0:
        k = -k
        hk = -hk
    if fabs(r) < 1.0:
        as_ = (1.0 - r) * (1.0 + r)
        a = sqrt(as_)
        bs = (h - k) * (h - k)
        c = (4.0 - hk) / 8.0
        d = (12.0 - hk) / 16.0
        asr = -(bs / as_ + hk) / 2.0
        if asr > -100.0:
            bvn = a * exp(asr) * (1.0 - c * (bs - as_) * (1.0 - d * bs / 5.0) / 3.0
                                  + c * d * as_ * as_ / 5.0)
        if hk > -100.0:
            b = sqrt(bs)
            bvn -= (exp(-hk / 2.0) * sqrt(TWO_PI) * phid(-b / a) * b
                    * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0))
        a = a / 2.0
        for i in range(n):
            xs = (a * (x[i] + 1.0)) * (a * (x[i] + 1.0))
            rs = sqrt(1.0 - xs)
            asr = -(bs / xs + hk) / 2.0
            if asr > -100.0:
                sp = 1.0 + c * xs * (1.0 + d * xs)
                ep = exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs
                bvn += a * w[i] * exp(asr) * (ep - sp)
        bvn = -bvn / TWO_PI
    if r > 0:
        bvn += phid(-(h if h > k else k))
    else:
        bvn = -bvn
        if k > h:
            if h < 0:
                band = phid(k) - phid(h)
            else:
                band = phid(-h) - phid(-k)
            bvn += band
    return clip(bvn, 0.0, 1.0)


def bvnu(h, k, double r):
    """Upper orthant probability P(X > h, Y > k); elementwise over broadcast h, k."""
    from ._pykernels import gauss_legendre
    hb, kb = np.broadcast_arrays(np.asarray(h, dtype=float), np.asarray(k, dtype=float))
    nodes, weights = gauss_legendre(fabs(r))
    cdef const double[::1] x = np.ascontiguousarray(nodes)
    cdef const double[::1] w = np.ascontiguousarray(weights)
    cdef double[::1] hf = np.ascontiguousarray(hb, dtype=float).ravel()
    cdef double[::1] kf = np.ascontiguousarray(kb, dtype=float).ravel()
    out = np.empty(hf.shape[0], dtype=float)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(hf.shape[0]):
            o[i] = _bvnu(hf[i], kf[i], r, x, w)
    return out.reshape(hb.shape)


def bvnu_grid(xs, ys, double r):
    """Matrix ``U[a, b] = P(X > xs[a], Y > ys[b])``."""
    from ._pykernels import gauss_legendre
    nodes, weights = gauss_legendre(fabs(r))
    cdef const double[::1] x = np.ascontiguousarray(nodes)
    cdef const double[::1] w = np.ascontiguousarray(weights)
    cdef const double[::1] xv = np.ascontiguousarray(xs, dtype=float)
    cdef const double[::1] yv = np.ascontiguousarray(ys, dtype=float)
    out = np.empty((xv.shape[0], yv.shape[0]), dtype=float)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t a, b
    with nogil:
        for a in range(xv.shape[0]):
            for b in range(yv.shape[0]):
                o[a, b] = _bvnu(xv[a], yv[b], r, x, w)
    return out


def g_stat_batch(tables):
    """G statistic of each table in a ``(n, r, k)`` stack against its own
    margin-product expectation. Empty cells are skipped."""
    cdef cnp.int64_t[:, :, ::1] t = np.ascontiguousarray(tables, dtype=np.int64)
    cdef Py_ssize_t n = t.shape[0], nr = t.shape[1], nc = t.shape[2]
    cdef Py_ssize_t s, i, j
    out = np.zeros(n, dtype=float)
    cdef double[::1] o = out
    rows_a = np.zeros(nr, dtype=float)
    cols_a = np.zeros(nc, dtype=float)
    cdef double[::1] rows = rows_a
    cdef double[::1] cols = cols_a
    cdef double total, g, obs
    with nogil:
        for s in range(n):
            rows[:] = 0.0
            cols[:] = 0.0
            total = 0.0
            for i in range(nr):
                for j in range(nc):
                    obs = <double> t[s, i, j]
                    rows[i] += obs
                    cols[j] += obs
                    total += obs
            g = 0.0
            for i in range(nr):
                for j in range(nc):
                    obs = <double> t[s, i, j]
                    if obs > 0:
                        g += obs * log(obs * total / (rows[i] * cols[j]))
            o[s] = 2.0 * g
    return out


cdef int _patefield(const cnp.int64_t[::1] nrowt, const cnp.int64_t[::1] ncolt,
                    cnp.int64_t ntotal, const double[::1] fact,
                    cnp.int64_t[:, ::1] matrix, bitgen_t *rng) nogil:
    cdef Py_ssize_t nrow = nrowt.shape[0], ncol = ncolt.shape[0]
    cdef Py_ssize_t l, m, jj
    cdef cnp.int64_t ia, ib, ic, id_, ie, ii, jc, nlm, nll, j
    cdef double dummy, x, y, sumprb
    cdef bint lsp, lsm, done
    cdef cnp.int64_t colsum

    for jj in range(ncol - 1):
        matrix[nrow - 1, jj] = ncolt[jj]  # jwork, stored in the last row
    jc = ntotal
    for l in range(nrow - 1):
        ia = nrowt[l]
        ic = jc
        jc -= ia
        for m in range(ncol - 1):
            id_ = matrix[nrow - 1, m]
            ie = ic
            ic -= id_
            ib = ie - ia
            ii = ib - id_
            if ie == 0:
                ia = 0
                break
            dummy = rng.next_double(rng.state)
            while True:
                nlm = <cnp.int64_t> (ia * (<double> id_ / <double> ie) + 0.5)
                x = exp(fact[ia] + fact[ib] + fact[ic] + fact[id_] - fact[ie] - fact[nlm]
                        - fact[id_ - nlm] - fact[ia - nlm] - fact[ii + nlm])
                if x >= dummy:
                    break
                if x == 0.0:
                    return -1
                sumprb = x
                y = x
                nll = nlm
                done = False
                while True:
                    j = (id_ - nlm) * (ia - nlm)
                    lsp = j == 0
                    if not lsp:
                        nlm += 1
                        x = x * <double> j / (<double> nlm * <double> (ii + nlm))
                        sumprb += x
                        if sumprb >= dummy:
                            done = True
                            break
                    while True:
                        j = nll * (ii + nll)
                        lsm = j == 0
                        if not lsm:
                            nll -= 1
                            y = y * <double> j / (<double> (id_ - nll) * <double> (ia - nll))
                            sumprb += y
                            if sumprb >= dummy:
                                nlm = nll
                                done = True
                                break
                            if not lsp:
                                break
                        if lsm:
                            break
                    if done or lsp:
                        break
                if done:
                    break
                dummy = sumprb * rng.next_double(rng.state)
            matrix[l, m] = nlm
            ia -= nlm
            matrix[nrow - 1, m] -= nlm
        matrix[l, ncol - 1] = ia
    colsum = 0
    for l in range(nrow - 1):
        colsum += matrix[l, ncol - 1]
    matrix[nrow - 1, ncol - 1] = ncolt[ncol - 1] - colsum
    return 0


def patefield(row_totals, col_totals, rng, fact=None):
    """Random r x c table with the given margins (Patefield, AS 159).

    ``rng`` is a ``numpy.random.Generator``; uniforms come from its bit
    generator in the same order as ``_pykernels.patefield``.
    """
    from ._pykernels import log_factorials
    nrowt_a = np.ascontiguousarray(row_totals, dtype=np.int64)
    ncolt_a = np.ascontiguousarray(col_totals, dtype=np.int64)
    cdef cnp.int64_t ntotal = int(nrowt_a.sum())
    if int(ncolt_a.sum()) != ntotal:
        raise ValueError("row and column totals disagree")
    nrow, ncol = nrowt_a.shape[0], ncolt_a.shape[0]
    matrix_a = np.zeros((nrow, ncol), dtype=np.int64)
    if nrow == 1:
        matrix_a[0] = ncolt_a
        return matrix_a
    if ncol == 1:
        matrix_a[:, 0] = nrowt_a
        return matrix_a
    if fact is None:
        fact = log_factorials(ntotal)
    cdef const double[::1] f = np.ascontiguousarray(fact, dtype=float)
    cdef cnp.int64_t[:, ::1] mat = matrix_a
    cdef const cnp.int64_t[::1] nr = nrowt_a
    cdef const cnp.int64_t[::1] nc = ncolt_a
    bit_generator = rng.bit_generator
    cdef bitgen_t *bg = <bitgen_t *> PyCapsule_GetPointer(bit_generator.capsule, "BitGenerator")
    cdef int status
    with bit_generator.lock, nogil:
        status = _patefield(nr, nc, ntotal, f, mat, bg)
    if status != 0:
        raise FloatingPointError("Patefield sampler underflow")
    return matrix_a
