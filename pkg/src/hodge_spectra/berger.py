"""Closed-form Hodge spectrum of Berger spheres ``g_(a,b,b)``.

For ``b = c`` every block of the 1-form Laplacian diagonalizes explicitly.
Three families of eigenvalues occur in block ``k``:

* ``nu(k,j)``, ``0 <= j <= k``: the function eigenvalues (exact forms);
* ``mu_edge(k,j)``, ``j in {-1, 0, k, k+1}``;
* ``mu_pm(k,j,±)``, ``1 <= j <= k-1``.

With ``kappa = b^4/a^2`` they take the compact forms
``mu(k,0) = (k a + 2 sqrt(kappa))^2`` and
``mu_pm = (sqrt(nu + kappa) ± sqrt(kappa))^2``.
The same generator covers ``k = 0`` (edge family only, ``nu(0,0) = 0`` is
not a 1-form eigenvalue) and ``k = 1`` (no mixed pairs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import Group, MetricParams
from .laplacian import assemble_delta1
from .su2_rep import check_weight

BERGER_TOL = 1e-12


@dataclass(frozen=True)
class BergerParams:
    a: float
    b: float

    def __post_init__(self):
        MetricParams(self.a, self.b, self.b)

    @property
    def kappa(self) -> float:
        return self.b**4 / self.a**2

    def metric(self, group=Group.SU2) -> MetricParams:
        return MetricParams(self.a, self.b, self.b, group)

    @classmethod
    def from_metric(cls, m: MetricParams, tol: float = BERGER_TOL) -> "BergerParams":
        if abs(m.b - m.c) > tol * max(m.b, m.c):
            raise DomainError(f"Berger metric needs b = c, got b={m.b!r}, c={m.c!r}")
        return cls(m.a, m.b)


@dataclass(frozen=True)
class BergerEigenvalue:
    family: str  # "nu", "mu_edge" or "mu_pm"
    k: int
    j: int
    sign: int  # +1 / -1 for mu_pm, 0 otherwise
    value: float
    multiplicity_in_block: int = 1

    @property
    def label(self) -> str:
        if self.family == "mu_pm":
            return f"mu_pm(k={self.k},j={self.j},{'+' if self.sign > 0 else '-'})"
        return f"{self.family}(k={self.k},j={self.j})"


def nu(k: int, j: int, p: BergerParams) -> float:
    a2, b2 = p.a**2, p.b**2
    return a2 * (k - 2 * j) ** 2 + b2 * ((4 * j + 2) * k - 4 * j * j)


def mu_edge(k: int, j: int, p: BergerParams) -> float:
    if j in (-1, k + 1):
        return (k + 2) ** 2 * p.a**2
    if j in (0, k):
        return k * k * p.a**2 + 4 * k * p.b**2 + 4 * p.kappa
    raise DomainError(f"edge index j must be -1, 0, k or k+1, got {j}")


def mu_pm(k: int, j: int, sign: int, p: BergerParams) -> float:
    """Mixed eigenvalue from the radical formula."""
    n = nu(k, j, p)
    a2, b2 = p.a**2, p.b**2
    return n + 2 * b2 * b2 / a2 + sign * 2 * (b2 / a2) * math.sqrt(a2 * n + b2 * b2)


def mu_edge_compact(k: int, p: BergerParams) -> float:
    return (k * p.a + 2 * math.sqrt(p.kappa)) ** 2


def mu_pm_compact(k: int, j: int, sign: int, p: BergerParams) -> float:
    """``(sqrt(nu + kappa) ± sqrt(kappa))^2`` without cancellation in the minus branch."""
    n = nu(k, j, p)
    hi, lo = math.sqrt(n + p.kappa), math.sqrt(p.kappa)
    return (hi + lo) ** 2 if sign > 0 else (n / (hi + lo)) ** 2


def _edge_indices(k: int) -> list[int]:
    # k = 0 collapses {0, k}; the block then has the three values -1, 0, 1
    return [-1, 0, k + 1] if k == 0 else [-1, 0, k, k + 1]


def berger_block_spectrum(k: int, p: BergerParams) -> list[BergerEigenvalue]:
    """Closed-form eigenvalues of block ``k``, sorted by value, ``3(k+1)`` in total."""
    k = check_weight(k)
    out: list[BergerEigenvalue] = []
    if k >= 1:
        out += [BergerEigenvalue("nu", k, j, 0, nu(k, j, p)) for j in range(k + 1)]
    out += [BergerEigenvalue("mu_edge", k, j, 0, mu_edge(k, j, p)) for j in _edge_indices(k)]
    for j in range(1, k):
        for s in (1, -1):
            out.append(BergerEigenvalue("mu_pm", k, j, s, mu_pm_compact(k, j, s, p)))
    out.sort(key=lambda e: (e.value, e.family, e.j, e.sign))
    return out


def berger_block_values(k: int, p: BergerParams) -> np.ndarray:
    return np.array([e.value for e in berger_block_spectrum(k, p)])


def berger_first_eigenvalue(p: BergerParams, group=Group.SU2) -> float:
    a2, b2 = p.a**2, p.b**2
    cands = [4 * p.kappa, 4 * a2]
    if Group.parse(group) is Group.SU2:
        cands.append(a2 + 2 * b2)
    return min(cands)


# -- eigenvectors -------------------------------------------------------------


@dataclass(frozen=True)
class BergerEigenvector:
    kind: str  # "v", "w" or "w_pm"
    k: int
    j: int
    sign: int
    eigenvalue: float
    coefficients: np.ndarray  # in the (r,p) index space of the block matrix

    @property
    def label(self) -> str:
        if self.kind == "w_pm":
            return f"w_pm(k={self.k},j={self.j},{'+' if self.sign > 0 else '-'})"
        return f"{self.kind}(k={self.k},j={self.j})"


class _Builder:
    """Accumulates ``P_r ⊗ X_p`` terms into a coefficient vector."""

    def __init__(self, k: int):
        self.k = k
        self.vec = np.zeros(3 * (k + 1), dtype=complex)

    def add(self, r: int, p: int, coef: complex) -> "_Builder":
        if 0 <= r <= self.k:
            self.vec[3 * r + p - 1] += coef
        return self

    def plus(self, r: int, coef: complex) -> "_Builder":
        # coef * P_r ⊗ (X2 + i X3)
        return self.add(r, 2, coef).add(r, 3, 1j * coef)

    def minus(self, r: int, coef: complex) -> "_Builder":
        # coef * P_r ⊗ (X2 - i X3)
        return self.add(r, 2, coef).add(r, 3, -1j * coef)


def mixed_coefficients(k: int, j: int, sign: int, p: BergerParams) -> tuple[float, float, float]:
    """``(alpha, beta, gamma)`` of ``w_pm(k, j, sign)``."""
    a, b = p.a, p.b
    t = (2 * k + 4 * j * (k - j)) * b * b
    root = math.sqrt(a**4 * (k - 2 * j) ** 2 + a * a * t + b**4)
    alpha = (2 * (k - 2 * j) ** 2 * a * a + t - 2 * sign * (k - 2 * j) * root) / (4 * (k - j + 1) * b * b)
    beta = (-a * a * (k - 2 * j) + b * b + sign * root) / (a * b)
    return alpha, beta, float(k - j)


def berger_eigenvectors(k: int, p: BergerParams) -> list[BergerEigenvector]:
    k = check_weight(k)
    ba = p.b / p.a
    out: list[BergerEigenvector] = []
    if k >= 1:
        for j in range(k + 1):
            v = _Builder(k).plus(j - 1, 1j * j * ba).add(j, 1, k - 2 * j).minus(j + 1, -1j * (k - j) * ba)
            out.append(BergerEigenvector("v", k, j, 0, nu(k, j, p), v.vec))
    edges = {
        -1: _Builder(k).minus(0, 1.0),
        0: _Builder(k).add(0, 1, 2 * ba).minus(1, 1j * k),
        k: _Builder(k).plus(k - 1, 1j * k).add(k, 1, 2 * ba),
        k + 1: _Builder(k).plus(k, 1.0),
    }
    for j in _edge_indices(k):
        out.append(BergerEigenvector("w", k, j, 0, mu_edge(k, j, p), edges[j].vec))
    for j in range(1, k):
        for s in (1, -1):
            al, be, ga = mixed_coefficients(k, j, s, p)
            w = _Builder(k).plus(j - 1, 1j * al).add(j, 1, be).minus(j + 1, 1j * ga)
            out.append(BergerEigenvector("w_pm", k, j, s, mu_pm_compact(k, j, s, p), w.vec))
    return out


@dataclass(frozen=True)
class ResidualReport:
    k: int
    params: BergerParams
    matrix_norm: float
    residuals: tuple[tuple[str, float], ...]  # (label, ||Mw - λw|| / ||w||)
    tol: float

    @property
    def max_residual(self) -> float:
        return max((r for _, r in self.residuals), default=0.0)

    @property
    def failures(self) -> list[tuple[str, float]]:
        return [(lab, r) for lab, r in self.residuals if r > self.tol * self.matrix_norm]

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "a": self.params.a,
            "b": self.params.b,
            "matrix_norm": self.matrix_norm,
            "max_residual": self.max_residual,
            "tol": self.tol,
            "ok": self.ok,
            "failures": [{"vector": lab, "residual": r} for lab, r in self.failures],
        }


def verify_eigenvectors(k: int, p: BergerParams, tol: float = 1e-8) -> ResidualReport:
    """Apply the assembled block to every closed-form eigenvector.

    The vectors are written with ``P_r ⊗ X_p``; their coefficients are read
    in the ``(r,p)`` index space of the covector basis, which is what the
    block matrix acts on.
    """
    mat = assemble_delta1(k, p.metric()).entries
    norm = float(np.linalg.norm(mat, 2))
    res = []
    for vec in berger_eigenvectors(k, p):
        w = vec.coefficients
        r = np.linalg.norm(mat @ w - vec.eigenvalue * w) / np.linalg.norm(w)
        res.append((vec.label, float(r)))
    return ResidualReport(k, p, norm, tuple(res), tol)


def eigenvector_rank(k: int, p: BergerParams) -> int:
    """Numerical rank of the closed-form eigenvector family (``3(k+1)`` means a basis)."""
    cols = np.column_stack([v.coefficients / np.linalg.norm(v.coefficients) for v in berger_eigenvectors(k, p)])
    return int(np.linalg.matrix_rank(cols, tol=1e-9))


def berger_records(p: BergerParams, k_max: int, group=Group.SU2) -> list[dict]:
    """Closed-form spectrum up to ``k_max`` as flat records with a family column."""
    step = 2 if Group.parse(group) is Group.SO3 else 1
    rows = []
    for k in range(0, int(k_max) + 1, step):
        for e in berger_block_spectrum(k, p):
            rows.append({
                "eigenvalue": e.value,
                "multiplicity": k + 1,
                "k": k,
                "degree": 1,
                "tag": "exact" if e.family == "nu" else "coexact",
                "family": e.label,
            })
    rows.sort(key=lambda r: (r["eigenvalue"], r["k"], r["family"]))
    return rows
