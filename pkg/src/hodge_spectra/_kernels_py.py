"""Pure numpy/scipy kernels, used when the compiled extension is unavailable.

Same API as the ``_kernels`` extension.  Raw matrices use the basis
``e_(r,p) = P_r ⊗ X_p^*`` flattened as ``3*r + (p-1)``.
"""

import numpy as np
from scipy.linalg import eigvals_banded

from .su2_rep import log_scaling

DELTA1_BANDWIDTH = 6
DELTA0_BANDWIDTH = 2


def _gammas(a, b, c):
    return (
        -a * b / c - a * c / b + b * c / a,
        a * b / c - a * c / b + b * c / a,
        a * b / c - a * c / b - b * c / a,
    )


def delta1_raw(k, a, b, c):
    k = int(k)
    x, y, z = a * a, b * b, c * c
    g1, g2, g3 = _gammas(a, b, c)
    w = (4 * y * z / x, 4 * x * z / y, 4 * x * y / z)
    n = 3 * (k + 1)
    m = np.zeros((n, n), dtype=complex)

    def at(r, p):
        return 3 * r + p - 1

    for r in range(k + 1):
        base = x * (k - 2 * r) ** 2 + (y + z) * (k * (2 * r + 1) - 2 * r * r)
        for p in (1, 2, 3):
            m[at(r, p), at(r, p)] = base + w[p - 1]
        A = -2j * a * (k - 2 * r) * g1
        m[at(r, 2), at(r, 3)] = A
        m[at(r, 3), at(r, 2)] = -A
        if r + 1 <= k:
            B = 2j * c * (r + 1) * g3
            C = 2 * b * (r + 1) * g2
            m[at(r, 1), at(r + 1, 2)] = B
            m[at(r, 2), at(r + 1, 1)] = -B
            m[at(r, 1), at(r + 1, 3)] = C
            m[at(r, 3), at(r + 1, 1)] = -C
        if r - 1 >= 0:
            B = 2j * c * (k - r + 1) * g3
            C = -2 * b * (k - r + 1) * g2
            m[at(r, 1), at(r - 1, 2)] = B
            m[at(r, 2), at(r - 1, 1)] = -B
            m[at(r, 1), at(r - 1, 3)] = C
            m[at(r, 3), at(r - 1, 1)] = -C
        if r - 2 >= 0:
            E = -(y - z) * (k - r + 1) * (k - r + 2)
            for p in (1, 2, 3):
                m[at(r, p), at(r - 2, p)] = E
        if r + 2 <= k:
            F = -(y - z) * (r + 2) * (r + 1)
            for p in (1, 2, 3):
                m[at(r, p), at(r + 2, p)] = F
    return m


def delta0_raw(k, a, b, c):
    k = int(k)
    x, y, z = a * a, b * b, c * c
    m = np.zeros((k + 1, k + 1))
    for r in range(k + 1):
        m[r, r] = x * (k - 2 * r) ** 2 + (y + z) * (k * (2 * r + 1) - 2 * r * r)
        if r + 2 <= k:
            m[r, r + 2] = -(y - z) * (r + 2) * (r + 1)
        if r - 2 >= 0:
            m[r, r - 2] = -(y - z) * (k - r + 1) * (k - r + 2)
    return m


def phase_exponents(k):
    """Exponents ``e`` of the unit phases ``i**e`` that make ``Δ₁⁽ᵏ⁾`` real."""
    r = np.repeat(np.arange(k + 1), 3)
    return r + np.tile([0, 0, 1], k + 1)


def realify_delta1(raw, k):
    """Real symmetric matrix unitarily similar to the raw ``Δ₁⁽ᵏ⁾`` block."""
    ls = np.repeat(log_scaling(k), 3)
    e = phase_exponents(k)
    phase = 1j ** ((e[None, :] - e[:, None]) % 4)
    out = (phase * raw * np.exp(ls[:, None] - ls[None, :])).real
    return 0.5 * (out + out.T)


def delta1_real(k, a, b, c):
    return realify_delta1(delta1_raw(k, a, b, c), int(k))


def delta0_real(k, a, b, c):
    ls = log_scaling(int(k))
    out = delta0_raw(k, a, b, c) * np.exp(ls[:, None] - ls[None, :])
    return 0.5 * (out + out.T)


def band_eigvalsh(mat, bw):
    mat = np.asarray(mat, dtype=float)
    n = mat.shape[0]
    if n == 0:
        return np.zeros(0)
    bw = max(0, min(int(bw), n - 1))
    band = np.zeros((bw + 1, n))
    for d in range(bw + 1):
        band[d, : n - d] = np.diagonal(mat, -d)
    return np.sort(eigvals_banded(band, lower=True))


def delta1_eigvals(k, a, b, c):
    return band_eigvalsh(delta1_real(k, a, b, c), DELTA1_BANDWIDTH)


def delta0_eigvals(k, a, b, c):
    return band_eigvalsh(delta0_real(k, a, b, c), DELTA0_BANDWIDTH)


def gershgorin_delta1(k, a, b, c):
    m = delta1_raw(k, a, b, c)
    diag = m.diagonal().real
    radius = np.abs(m).sum(axis=1) - np.abs(m.diagonal())
    return float(np.min(diag - radius))
