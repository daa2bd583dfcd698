# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for the per-weight Hodge-Laplacian blocks.

Mirrors ``_kernels_py``.  Assembly, scaling and the LAPACK band solver
(``dsbev`` through scipy's Cython bindings) all run without the GIL.

The real form of a 1-form block is reducible: an index ``(r, p)`` only couples
to indices with the same parity of ``r + [p != 1]``.  ``delta1_eigvals`` solves
the two classes separately, each with half-bandwidth 3 instead of 6.
"""

import numpy as np

from libc.math cimport hypot, lgamma, exp, INFINITY
from libc.stdlib cimport calloc, free, malloc
from scipy.linalg.cython_lapack cimport dsbev

cdef enum:
    BW1 = 6
    BW0 = 2
    BW_SPLIT = 3

DELTA1_BANDWIDTH = BW1
DELTA0_BANDWIDTH = BW0


cdef inline int _at(int r, int p) noexcept nogil:
    return 3 * r + p - 1


cdef inline void _put(double[:, ::1] band, int i, int j, double v) noexcept nogil:
    # row-band storage: band[i, j - i + BW1] holds entry (i, j)
    band[i, j - i + BW1] = v


cdef void _fill_delta1(int k, double a, double b, double c,
                       double[:, ::1] re, double[:, ::1] im) noexcept nogil:
    cdef double x = a * a, y = b * b, z = c * c
    cdef double g1 = -a * b / c - a * c / b + b * c / a
    cdef double g2 = a * b / c - a * c / b + b * c / a
    cdef double g3 = a * b / c - a * c / b - b * c / a
    cdef double w[3]
    cdef int r, p
    cdef double base, A, B, C, E, F
    w[0] = 4.0 * y * z / x
    w[1] = 4.0 * x * z / y
    w[2] = 4.0 * x * y / z
    for r in range(k + 1):
        base = x * (k - 2 * r) * (k - 2 * r) + (y + z) * (<double>k * (2 * r + 1) - 2.0 * r * r)
        for p in range(1, 4):
            _put(re, _at(r, p), _at(r, p), base + w[p - 1])
        A = -2.0 * a * (k - 2 * r) * g1
        _put(im, _at(r, 2), _at(r, 3), A)
        _put(im, _at(r, 3), _at(r, 2), -A)
        if r + 1 <= k:
            B = 2.0 * c * (r + 1) * g3
            C = 2.0 * b * (r + 1) * g2
            _put(im, _at(r, 1), _at(r + 1, 2), B)
            _put(im, _at(r, 2), _at(r + 1, 1), -B)
            _put(re, _at(r, 1), _at(r + 1, 3), C)
            _put(re, _at(r, 3), _at(r + 1, 1), -C)
        if r >= 1:
            B = 2.0 * c * (k - r + 1) * g3
            C = -2.0 * b * (k - r + 1) * g2
            _put(im, _at(r, 1), _at(r - 1, 2), B)
            _put(im, _at(r, 2), _at(r - 1, 1), -B)
            _put(re, _at(r, 1), _at(r - 1, 3), C)
            _put(re, _at(r, 3), _at(r - 1, 1), -C)
        if r >= 2:
            E = -(y - z) * (k - r + 1) * (k - r + 2)
            for p in range(1, 4):
                _put(re, _at(r, p), _at(r - 2, p), E)
        if r + 2 <= k:
            F = -(y - z) * (r + 2) * (r + 1)
            for p in range(1, 4):
                _put(re, _at(r, p), _at(r + 2, p), F)


cdef void _band_to_dense(double[:, ::1] band, double[:, ::1] out) noexcept nogil:
    cdef int n = out.shape[0], i, j
    for i in range(n):
        for j in range(max(0, i - BW1), min(n, i + BW1 + 1)):
            out[i, j] = band[i, j - i + BW1]


cdef void _fill_delta0(int k, double a, double b, double c, double[:, ::1] out) noexcept nogil:
    cdef double x = a * a, y = b * b, z = c * c
    cdef int r
    for r in range(k + 1):
        out[r, r] = x * (k - 2 * r) * (k - 2 * r) + (y + z) * (<double>k * (2 * r + 1) - 2.0 * r * r)
        if r + 2 <= k:
            out[r, r + 2] = -(y - z) * (r + 2) * (r + 1)
        if r >= 2:
            out[r, r - 2] = -(y - z) * (k - r + 1) * (k - r + 2)


cdef void _log_scaling(int k, double* ls) noexcept nogil:
    cdef int r
    cdef double lk = lgamma(k + 1.0)
    for r in range(k + 1):
        ls[r] = 0.5 * (lgamma(r + 1.0) + lgamma(k - r + 1.0) - lk)


cdef void _realify_delta1(int k, double[:, ::1] re, double[:, ::1] im,
                          double[:, ::1] out, double* ls) noexcept nogil:
    # out_ij = Re(i^(e_j - e_i) * raw_ij) * s_i / s_j, with e(r,p) = r + [p == 3];
    # all three arrays use row-band storage
    cdef int n = 3 * (k + 1)
    cdef int i, j, ei, ej, q
    cdef double v
    for i in range(n):
        ei = i // 3 + (1 if i % 3 == 2 else 0)
        for j in range(max(0, i - BW1), i + 1):
            ej = j // 3 + (1 if j % 3 == 2 else 0)
            q = ((ej - ei) % 4 + 4) % 4
            if q == 0:
                v = re[i, j - i + BW1]
            elif q == 1:
                v = -im[i, j - i + BW1]
            elif q == 2:
                v = -re[i, j - i + BW1]
            else:
                v = im[i, j - i + BW1]
            v = v * exp(ls[i // 3] - ls[j // 3])
            out[i, j - i + BW1] = v
            out[j, i - j + BW1] = v


cdef int _dsbev(double* ab, int n, int bw, int ldab, double* w) noexcept nogil:
    """LAPACK ``dsbev`` on column-major lower band storage ``ab`` (overwritten)."""
    cdef int info = 0, one = 1
    cdef char jobz = b'N', uplo = b'L'
    cdef double dummy = 0.0
    cdef double* work = <double*> malloc(max(1, 3 * n - 2) * sizeof(double))
    if work == NULL:
        return -2
    dsbev(&jobz, &uplo, &n, &bw, ab, &ldab, w, &dummy, &one, work, &info)
    free(work)
    return info


cdef int _band_eig(double[:, ::1] A, int n, int bw, double* w) noexcept nogil:
    """Eigenvalues of the symmetric band matrix ``A[:n, :n]`` (dense storage)."""
    cdef int i, j, ldab, info
    cdef double* ab
    if n == 0:
        return 0
    if bw > n - 1:
        bw = n - 1
    ldab = bw + 1
    # column-major (ldab, n) lower band storage: ab[i - j + j*ldab] = A[i, j]
    ab = <double*> calloc(ldab * n, sizeof(double))
    if ab == NULL:
        return -2
    for j in range(n):
        for i in range(j, min(n, j + bw + 1)):
            ab[i - j + j * ldab] = A[i, j]
    info = _dsbev(ab, n, bw, ldab, w)
    free(ab)
    return info


def _solve(double[:, ::1] A, int bw):
    cdef int n = A.shape[0]
    cdef double[::1] w = np.zeros(n + 1)
    cdef int status
    with nogil:
        status = _band_eig(A, n, bw, &w[0])
    if status != 0:
        raise ArithmeticError(f"LAPACK dsbev failed (info={status})")
    return np.asarray(w[:n]).copy()


def band_eigvalsh(mat, int bw):
    """Eigenvalues (ascending) of a symmetric matrix with half-bandwidth ``bw``."""
    work = np.array(mat, dtype=np.float64, order="C", copy=True)
    if work.ndim != 2 or work.shape[0] != work.shape[1]:
        raise ValueError("expected a square matrix")
    return _solve(work, bw)


def delta1_raw(int k, double a, double b, double c):
    cdef int n = 3 * (k + 1)
    cdef double[:, ::1] re = np.zeros((n, 2 * BW1 + 1))
    cdef double[:, ::1] im = np.zeros((n, 2 * BW1 + 1))
    dre = np.zeros((n, n))
    dim = np.zeros((n, n))
    cdef double[:, ::1] rv = dre
    cdef double[:, ::1] iv = dim
    with nogil:
        _fill_delta1(k, a, b, c, re, im)
        _band_to_dense(re, rv)
        _band_to_dense(im, iv)
    return dre + 1j * dim


def delta0_raw(int k, double a, double b, double c):
    out = np.zeros((k + 1, k + 1))
    cdef double[:, ::1] ov = out
    with nogil:
        _fill_delta0(k, a, b, c, ov)
    return out


def delta1_real(int k, double a, double b, double c):
    cdef int n = 3 * (k + 1)
    cdef double[:, ::1] re = np.zeros((n, 2 * BW1 + 1))
    cdef double[:, ::1] im = np.zeros((n, 2 * BW1 + 1))
    cdef double[:, ::1] band = np.zeros((n, 2 * BW1 + 1))
    out = np.zeros((n, n))
    cdef double[:, ::1] ov = out
    cdef double[::1] ls = np.zeros(k + 1)
    with nogil:
        _fill_delta1(k, a, b, c, re, im)
        _log_scaling(k, &ls[0])
        _realify_delta1(k, re, im, band, &ls[0])
        _band_to_dense(band, ov)
    return out


def delta0_real(int k, double a, double b, double c):
    cdef int n = k + 1
    cdef double[:, ::1] raw = np.zeros((n, n))
    out = np.zeros((n, n))
    cdef double[:, ::1] ov = out
    cdef double[::1] ls = np.zeros(n)
    cdef int i, j
    with nogil:
        _fill_delta0(k, a, b, c, raw)
        _log_scaling(k, &ls[0])
        for i in range(n):
            for j in range(n):
                ov[i, j] = raw[i, j] * exp(ls[i] - ls[j])
        for i in range(n):
            for j in range(i):
                ov[i, j] = 0.5 * (ov[i, j] + ov[j, i])
                ov[j, i] = ov[i, j]
    return out


cdef inline int _parity(int i) noexcept nogil:
    return (i // 3 + (1 if i % 3 != 0 else 0)) & 1


cdef int _class_eig(double[:, ::1] band, int n, int cls, int* local, double* w) noexcept nogil:
    """Eigenvalues of one parity class, copied from row-band storage into LAPACK storage."""
    cdef int m = 0, i, j, li, lj, ldab = BW_SPLIT + 1, bw = BW_SPLIT, info
    cdef double* ab
    for i in range(n):
        if _parity(i) == cls:
            m += 1
    if m == 0:
        return 0
    if bw > m - 1:
        bw = m - 1
        ldab = bw + 1
    ab = <double*> calloc(ldab * m, sizeof(double))
    if ab == NULL:
        return -2
    for j in range(n):
        if _parity(j) != cls:
            continue
        lj = local[j]
        for i in range(j, min(n, j + BW1 + 1)):
            if _parity(i) == cls:
                li = local[i]
                if li - lj <= bw:
                    ab[li - lj + lj * ldab] = band[i, j - i + BW1]
    info = _dsbev(ab, m, bw, ldab, w)
    free(ab)
    return info


def delta1_eigvals(int k, double a, double b, double c):
    cdef int n = 3 * (k + 1)
    cdef double[:, ::1] re = np.zeros((n, 2 * BW1 + 1))
    cdef double[:, ::1] im = np.zeros((n, 2 * BW1 + 1))
    cdef double[:, ::1] band = np.zeros((n, 2 * BW1 + 1))
    cdef double[::1] ls = np.zeros(k + 1)
    cdef int[::1] local = np.zeros(n, dtype=np.intc)
    cdef double[::1] d = np.zeros(n + 2)
    cdef int i, count[2]
    cdef int status = 0
    count[0] = 0
    count[1] = 0
    with nogil:
        for i in range(n):
            local[i] = count[_parity(i)]
            count[_parity(i)] += 1
        _fill_delta1(k, a, b, c, re, im)
        _log_scaling(k, &ls[0])
        _realify_delta1(k, re, im, band, &ls[0])
        status = _class_eig(band, n, 0, &local[0], &d[0])
        if status == 0:
            status = _class_eig(band, n, 1, &local[0], &d[count[0]])
    if status != 0:
        raise ArithmeticError(f"LAPACK dsbev failed (info={status})")
    return np.sort(np.asarray(d[:n]))


def delta0_eigvals(int k, double a, double b, double c):
    return _solve(delta0_real(k, a, b, c), BW0)


def gershgorin_delta1(int k, double a, double b, double c):
    """Lower Gershgorin bound of the raw block: min_i (M_ii - sum_{j != i} |M_ij|)."""
    cdef int n = 3 * (k + 1)
    cdef double[:, ::1] re = np.zeros((n, 2 * BW1 + 1))
    cdef double[:, ::1] im = np.zeros((n, 2 * BW1 + 1))
    cdef int i, t
    cdef double best = INFINITY, rad
    with nogil:
        _fill_delta1(k, a, b, c, re, im)
        for i in range(n):
            rad = 0.0
            for t in range(2 * BW1 + 1):
                if t != BW1:
                    rad += hypot(re[i, t], im[i, t])
            if re[i, BW1] - rad < best:
                best = re[i, BW1] - rad
    return best
