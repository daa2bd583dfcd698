"""Irreducible representations of SU(2) on homogeneous polynomials.

``V_k`` has basis ``P_l = z^l w^(k-l)``, ``0 <= l <= k``, ordered by ascending
``l``.  Matrices act on column vectors: column ``l`` holds the image of ``P_l``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lgamma

import numpy as np

from .errors import DomainError
from .geometry import MetricParams


@dataclass(frozen=True)
class GeneratorMatrices:
    k: int
    dE1: np.ndarray
    dE2: np.ndarray
    dE3: np.ndarray
    dX1: np.ndarray
    dX2: np.ndarray
    dX3: np.ndarray
    casimir: np.ndarray
    # nonzero entries satisfy |r - s| <= bandwidth
    bandwidth: int = 2


def check_weight(k) -> int:
    if isinstance(k, bool) or int(k) != k or k < 0:
        raise DomainError(f"weight k must be a non-negative integer, got {k!r}")
    return int(k)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def basis_generators(k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Actions of ``E1, E2, E3`` on ``V_k``."""
    k = check_weight(k)
    n = k + 1
    e1 = np.zeros((n, n), dtype=complex)
    e2 = np.zeros((n, n), dtype=complex)
    e3 = np.zeros((n, n), dtype=complex)
    for l in range(n):
        e1[l, l] = 1j * (k - 2 * l)
        if l >= 1:
            e2[l - 1, l] = -l
            e3[l - 1, l] = -1j * l
        if l + 1 <= k:
            e2[l + 1, l] = k - l
            e3[l + 1, l] = -1j * (k - l)
    return e1, e2, e3


def casimir_matrix(k: int, m: MetricParams) -> np.ndarray:
    """``C = dX1² + dX2² + dX3²`` from the closed-form entries (sign-corrected)."""
    k = check_weight(k)
    x, y, z = m.squares
    c = np.zeros((k + 1, k + 1))
    for r in range(k + 1):
        c[r, r] = -(x * (k - 2 * r) ** 2 + (y + z) * (k * (2 * r + 1) - 2 * r * r))
        if r + 2 <= k:
            c[r, r + 2] = (y - z) * (r + 2) * (r + 1)
        if r - 2 >= 0:
            c[r, r - 2] = (y - z) * (k - r + 1) * (k - r + 2)
    return c


def generators(k: int, m: MetricParams) -> GeneratorMatrices:
    e1, e2, e3 = basis_generators(k)
    a, b, c = m.abc
    return GeneratorMatrices(
        k=int(k),
        dE1=_frozen(e1),
        dE2=_frozen(e2),
        dE3=_frozen(e3),
        dX1=_frozen(a * e1),
        dX2=_frozen(b * e2),
        dX3=_frozen(c * e3),
        casimir=_frozen(casimir_matrix(k, m)),
    )


def log_scaling(k: int) -> np.ndarray:
    k = check_weight(k)
    return np.array(
        [0.5 * (lgamma(r + 1) + lgamma(k - r + 1) - lgamma(k + 1)) for r in range(k + 1)]
    )


def orthonormal_scaling(k: int) -> np.ndarray:
    """Diagonal of ``S`` with ``S_rr = sqrt(r! (k-r)! / k!)``.

    ``S A S^-1`` is the matrix of ``A`` in the basis ``P_r / ||P_r||`` for the
    SU(2)-invariant inner product, so ``S dE2 S^-1`` is real skew-symmetric.
    Computed through log-factorials, so large ``k`` does not overflow.
    """
    return np.exp(log_scaling(k))


def conjugate(mat: np.ndarray, scale: np.ndarray) -> np.ndarray:
    """Return ``diag(scale) @ mat @ diag(scale)^-1``."""
    return (scale[:, None] * mat) / scale[None, :]
