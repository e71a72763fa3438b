"""Pure-Python implementations of the hot kernels.

These mirror ``_kernels.pyx`` function for function. They are used when the
compiled extension is unavailable or ``PHIKCORR_PURE_PYTHON`` is set, and serve
as the reference side in the kernel parity tests.
"""
import math

import numpy as np
from scipy.special import ndtr

TWO_PI = 2.0 * math.pi
# |h|, |k| beyond this have Phi(-|h|) below 1e-300 and are clipped.
BIG = 37.0


def gauss_legendre(abs_r):
    """Symmetric Gauss-Legendre nodes/weights on [-1, 1] sized for |r|."""
    if abs_r < 0.3:
        n = 6
    elif abs_r < 0.75:
        n = 12
    else:
        n = 20
    return np.polynomial.legendre.leggauss(n)


def bvnu(h, k, r):
    """Upper orthant probability P(X > h, Y > k) of the standard bivariate normal.

    Genz's BVNU scheme: Gauss-Legendre quadrature of Plackett's identity for
    |r| < 0.925 and the Drezner-Wesolowsky asymptotic expansion otherwise.
    ``h`` and ``k`` broadcast against each other; ``r`` is a scalar.
    """
    h, k = np.broadcast_arrays(
        np.clip(np.asarray(h, dtype=float), -BIG, BIG),
        np.clip(np.asarray(k, dtype=float), -BIG, BIG),
    )
    h = h.astype(float)
    k = k.astype(float)
    r = float(r)
    if r == 0.0:
        return ndtr(-h) * ndtr(-k)

    x, w = gauss_legendre(abs(r))
    hk = h * k
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        if abs(r) < 0.925:
            hs = 0.5 * (h * h + k * k)
            asr = math.asin(r)
            sn = np.sin(asr * (x + 1.0) / 2.0)
            expo = (sn * hk[..., None] - hs[..., None]) / (1.0 - sn * sn)
            bvn = np.exp(expo) @ w
            bvn = bvn * asr / (2.0 * TWO_PI) + ndtr(-h) * ndtr(-k)
            return np.clip(bvn, 0.0, 1.0)

        if r < 0:
            k = -k
            hk = -hk
        bvn = np.zeros_like(h)
        if abs(r) < 1.0:
            as_ = (1.0 - r) * (1.0 + r)
            a = math.sqrt(as_)
            bs = (h - k) ** 2
            c = (4.0 - hk) / 8.0
            d = (12.0 - hk) / 16.0
            asr = -(bs / as_ + hk) / 2.0
            first = a * np.exp(asr) * (
                1.0 - c * (bs - as_) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as_ * as_ / 5.0
            )
            bvn = np.where(asr > -100.0, first, 0.0)
            b = np.sqrt(bs)
            second = (
                np.exp(-hk / 2.0) * math.sqrt(TWO_PI) * ndtr(-b / a) * b
                * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0)
            )
            bvn = bvn - np.where(hk > -100.0, second, 0.0)

            a = a / 2.0
            xs = (a * (x + 1.0)) ** 2
            rs = np.sqrt(1.0 - xs)
            asr_n = -(bs[..., None] / xs + hk[..., None]) / 2.0
            sp = 1.0 + c[..., None] * xs * (1.0 + d[..., None] * xs)
            ep = np.exp(-hk[..., None] * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs
            terms = np.where(asr_n > -100.0, a * w * np.exp(asr_n) * (ep - sp), 0.0)
            bvn = -(bvn + terms.sum(axis=-1)) / TWO_PI

        if r > 0:
            bvn = bvn + ndtr(-np.maximum(h, k))
        else:
            bvn = -bvn
            band = np.where(h < 0, ndtr(k) - ndtr(h), ndtr(-h) - ndtr(-k))
            bvn = np.where(k > h, bvn + band, bvn)
    return np.clip(bvn, 0.0, 1.0)


def bvnu_grid(xs, ys, r):
    """Matrix ``U[a, b] = P(X > xs[a], Y > ys[b])``."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    return bvnu(xs[:, None], ys[None, :], r)


def g_stat_batch(tables):
    """G statistic of each table in a ``(n, r, k)`` stack against its own
    margin-product expectation. Empty cells are skipped."""
    tables = np.asarray(tables, dtype=float)
    rows = tables.sum(axis=2, keepdims=True)
    cols = tables.sum(axis=1, keepdims=True)
    total = tables.sum(axis=(1, 2), keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        expected = rows * cols / total
        terms = np.where(tables > 0, tables * np.log(tables / expected), 0.0)
    return 2.0 * terms.sum(axis=(1, 2))


def log_factorials(n):
    return np.array([math.lgamma(i + 1.0) for i in range(n + 1)])


def patefield(row_totals, col_totals, rng, fact=None):
    """Random r x c table with the given margins (Patefield, AS 159).

    Draws uniforms from ``rng.random()``; the compiled kernel consumes the same
    doubles from the bit generator in the same order, so both return identical
    tables for identical generator states.
    """
    nrowt = [int(v) for v in row_totals]
    ncolt = [int(v) for v in col_totals]
    nrow, ncol = len(nrowt), len(ncolt)
    ntotal = sum(nrowt)
    if sum(ncolt) != ntotal:
        raise ValueError("row and column totals disagree")
    if fact is None:
        fact = log_factorials(ntotal)
    matrix = np.zeros((nrow, ncol), dtype=np.int64)
    if nrow == 1:
        matrix[0] = ncolt
        return matrix
    if ncol == 1:
        matrix[:, 0] = nrowt
        return matrix

    jwork = ncolt[:-1]
    jc = ntotal
    for l in range(nrow - 1):
        ia = nrowt[l]
        ic = jc
        jc -= ia
        for m in range(ncol - 1):
            id_ = jwork[m]
            ie = ic
            ic -= id_
            ib = ie - ia
            ii = ib - id_
            if ie == 0:
                ia = 0
                break
            dummy = rng.random()
            while True:
                nlm = int(ia * (id_ / ie) + 0.5)
                x = math.exp(
                    fact[ia] + fact[ib] + fact[ic] + fact[id_] - fact[ie] - fact[nlm]
                    - fact[id_ - nlm] - fact[ia - nlm] - fact[ii + nlm]
                )
                if x >= dummy:
                    break
                if x == 0.0:
                    raise FloatingPointError("Patefield sampler underflow")
                sumprb = x
                y = x
                nll = nlm
                done = False
                while True:
                    j = (id_ - nlm) * (ia - nlm)
                    lsp = j == 0
                    if not lsp:
                        nlm += 1
                        x = x * j / (nlm * (ii + nlm))
                        sumprb += x
                        if sumprb >= dummy:
                            done = True
                            break
                    while True:
                        j = nll * (ii + nll)
                        lsm = j == 0
                        if not lsm:
                            nll -= 1
                            y = y * j / ((id_ - nll) * (ia - nll))
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
                dummy = sumprb * rng.random()
            matrix[l, m] = nlm
            ia -= nlm
            jwork[m] -= nlm
        matrix[l, ncol - 1] = ia
    matrix[nrow - 1] = np.asarray(ncolt) - matrix[: nrow - 1].sum(axis=0)
    return matrix
