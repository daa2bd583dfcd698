"""Per-weight blocks of the Hodge-Laplacian and aggregated spectra.

By Peter-Weyl, the space of 1-forms on SU(2) splits into blocks
``V_k ⊗ su(2)*`` of dimension ``3(k+1)``; on each block the Hodge-Laplacian
acts through a ``3(k+1) x 3(k+1)`` matrix, and every block eigenvalue occurs
with global multiplicity ``k+1``.  On functions the block is ``-C_k``, the
negated Casimir matrix, of size ``k+1``.  For SO(3) only even weights occur.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import ConsistencyError, DomainError
from .geometry import Group, MetricParams
from .parallel import pmap
from .su2_rep import check_weight, conjugate, orthonormal_scaling

MERGE_TOL = 1e-9
DEFAULT_K_MAX = 25
HERMITIAN_TOL = 1e-8


class Tag(str, enum.Enum):
    EXACT = "exact"
    COEXACT = "coexact"
    HARMONIC = "harmonic"
    UNTAGGED = "untagged"


@dataclass(frozen=True, eq=False)
class WeightBlockMatrix:
    """Raw block in the basis ``e_(r,p) = P_r ⊗ X_p^*``, flattened as ``3r + p - 1``."""

    k: int
    degree: int
    metric: MetricParams
    entries: np.ndarray

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    @property
    def bandwidth(self) -> int:
        return 6 if self.degree == 1 else 2

    def scaling(self) -> np.ndarray:
        s = orthonormal_scaling(self.k)
        return np.repeat(s, 3) if self.degree == 1 else s

    def hermitian(self) -> np.ndarray:
        """``S M S^-1``: the block in an orthonormal basis, Hermitian up to rounding."""
        return conjugate(self.entries, self.scaling())

    def hermiticity_residual(self) -> float:
        h = self.hermitian()
        return float(np.linalg.norm(h - h.conj().T) / max(np.linalg.norm(h), 1e-300))

    def real_symmetric(self) -> np.ndarray:
        """A real symmetric matrix unitarily similar to the block."""
        if self.degree == 0:
            h = self.hermitian().real
            return 0.5 * (h + h.T)
        return _backend.load("python").realify_delta1(self.entries, self.k)


def _check_degree(degree) -> int:
    if degree not in (0, 1):
        raise DomainError(f"form degree must be 0 or 1, got {degree!r}")
    return int(degree)


def assemble_delta1(k: int, m: MetricParams) -> WeightBlockMatrix:
    k = check_weight(k)
    entries = _backend.kernels.delta1_raw(k, m.a, m.b, m.c)
    entries.setflags(write=False)
    return WeightBlockMatrix(k, 1, m, entries)


def assemble_delta0(k: int, m: MetricParams) -> WeightBlockMatrix:
    k = check_weight(k)
    entries = _backend.kernels.delta0_raw(k, m.a, m.b, m.c).astype(complex)
    entries.setflags(write=False)
    return WeightBlockMatrix(k, 0, m, entries)


def assemble(k: int, m: MetricParams, degree: int) -> WeightBlockMatrix:
    return assemble_delta1(k, m) if _check_degree(degree) == 1 else assemble_delta0(k, m)


def _embedding_eigenvalues(h: np.ndarray, norm: float) -> np.ndarray:
    re, im = h.real, h.imag
    big = np.block([[re, -im], [im, re]])
    vals = np.linalg.eigvalsh(0.5 * (big + big.T))
    pairs = vals.reshape(-1, 2)
    gap = float(np.max(np.abs(pairs[:, 1] - pairs[:, 0]))) if len(pairs) else 0.0
    if gap > 1e-10 * max(norm, 1.0):
        raise ConsistencyError(f"embedded eigenvalues not paired (gap {gap:.3e})")
    return pairs.mean(axis=1)


def _residual_check(block: WeightBlockMatrix, h: np.ndarray) -> float:
    vals, vecs = np.linalg.eigh(0.5 * (h + h.conj().T))
    raw = vecs / block.scaling()[:, None]
    res = block.entries @ raw - raw * vals[None, :]
    rel = np.linalg.norm(res, axis=0) / np.linalg.norm(raw, axis=0)
    return float(rel.max()) if rel.size else 0.0


def eigenvalues(block: WeightBlockMatrix, method: str = "banded", verify: bool = False) -> np.ndarray:
    """Real eigenvalues of a block, ascending.

    ``method="banded"`` runs the backend band solver on the real symmetric
    form; ``method="embedding"`` embeds the Hermitian form ``H = Re + i Im`` in
    the real symmetric ``[[Re, -Im], [Im, Re]]`` and keeps one eigenvalue of
    each duplicated pair.  With ``verify`` the Hermiticity and eigenvector
    residuals are checked against ``1e-8 * ||M||``.
    """
    norm = float(np.linalg.norm(block.entries))
    if method == "embedding" or verify:
        h = block.hermitian()
        herm = float(np.linalg.norm(h - h.conj().T))
        if herm > HERMITIAN_TOL * max(norm, 1.0):
            raise ConsistencyError(
                f"block k={block.k} degree={block.degree} is not Hermitian after scaling "
                f"(residual {herm:.3e})"
            )
        if verify:
            res = _residual_check(block, h)
            if res > HERMITIAN_TOL * max(norm, 1.0):
                raise ConsistencyError(f"eigenvector residual {res:.3e} too large")
    if method == "embedding":
        return _embedding_eigenvalues(h, norm)
    if method != "banded":
        raise DomainError(f"unknown eigenvalue method {method!r}")
    return _backend.kernels.band_eigvalsh(block.real_symmetric(), block.bandwidth)


def block_eigenvalues(k: int, m: MetricParams, degree: int = 1) -> np.ndarray:
    """Fast path: assemble and diagonalize in the active backend."""
    k = check_weight(k)
    if _check_degree(degree) == 1:
        return _backend.kernels.delta1_eigvals(k, m.a, m.b, m.c)
    return _backend.kernels.delta0_eigvals(k, m.a, m.b, m.c)


def weights(group: Group, k_max: int) -> list[int]:
    if isinstance(k_max, bool) or int(k_max) != k_max or k_max < 0:
        raise DomainError(f"k_max must be a non-negative integer, got {k_max!r}")
    step = 2 if Group.parse(group) is Group.SO3 else 1
    return list(range(0, int(k_max) + 1, step))


def _close(x: float, y: float, tol: float, scale: float) -> bool:
    return abs(x - y) <= tol * max(1.0, abs(x)) + 64 * np.finfo(float).eps * scale


def tag_block(vals1: np.ndarray, vals0: np.ndarray, tol: float = MERGE_TOL, scale: float = 1.0) -> list[Tag]:
    """Tag Δ₁ eigenvalues of one weight as exact or coexact.

    Each nonzero Δ₀ eigenvalue of the same weight claims one Δ₁ eigenvalue
    (``d`` intertwines the two Laplacians); the rest are coexact.
    """
    tags = [Tag.COEXACT] * len(vals1)
    free = list(range(len(vals1)))
    for mu in vals0:
        if _close(mu, 0.0, tol, scale):
            continue
        best = min(free, key=lambda i: abs(vals1[i] - mu), default=None)
        if best is not None and _close(vals1[best], mu, tol, scale):
            tags[best] = Tag.EXACT
            free.remove(best)
    return tags


@dataclass(frozen=True)
class SpectrumEntry:
    eigenvalue: float
    multiplicity: int
    weight: int
    degree: int
    tag: Tag

    def as_record(self) -> dict:
        return {
            "eigenvalue": self.eigenvalue,
            "multiplicity": self.multiplicity,
            "k": self.weight,
            "degree": self.degree,
            "tag": self.tag.value,
        }


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of all blocks with ``k <= k_max``, kept per weight of origin."""

    entries: tuple[SpectrumEntry, ...]
    k_max: int
    metric: MetricParams
    degree: int
    merge_tol: float = MERGE_TOL
    block_norms: dict = field(default_factory=dict, compare=False, repr=False)

    def values(self) -> np.ndarray:
        return np.array([e.eigenvalue for e in self.entries])

    def first_nonzero(self, tol: float = 1e-9) -> float:
        vals = [e.eigenvalue for e in self.entries if e.eigenvalue > tol * max(1.0, self.scale)]
        return min(vals) if vals else float("nan")

    @property
    def scale(self) -> float:
        return max(self.block_norms.values(), default=1.0)

    def at_weight(self, k: int) -> list[SpectrumEntry]:
        return [e for e in self.entries if e.weight == k]

    def merged(self) -> list[tuple[float, int]]:
        """Eigenvalues merged across weights, with total multiplicities (display only)."""
        out: list[list] = []
        for e in self.entries:
            if out and abs(e.eigenvalue - out[-1][0]) <= self.merge_tol * max(1.0, abs(out[-1][0])):
                out[-1][1] += e.multiplicity
            else:
                out.append([e.eigenvalue, e.multiplicity])
        return [(v, n) for v, n in out]

    def records(self) -> list[dict]:
        return [e.as_record() for e in self.entries]


def _group_block(vals: np.ndarray, tags: list[Tag], k: int, degree: int, tol: float) -> list[SpectrumEntry]:
    out: list[SpectrumEntry] = []
    for v, t in sorted(zip(vals, tags), key=lambda p: (p[0], p[1].value)):
        last = out[-1] if out else None
        if last is not None and last.tag == t and abs(v - last.eigenvalue) <= tol * max(1.0, abs(v)):
            out[-1] = SpectrumEntry(last.eigenvalue, last.multiplicity + (k + 1), k, degree, t)
        else:
            out.append(SpectrumEntry(float(v), k + 1, k, degree, t))
    return out


def full_spectrum(
    m: MetricParams,
    degree: int = 1,
    k_max: int = DEFAULT_K_MAX,
    merge_tol: float = MERGE_TOL,
    workers=None,
) -> Spectrum:
    degree = _check_degree(degree)
    ks = weights(m.group, k_max)

    def one(k):
        v0 = block_eigenvalues(k, m, 0)
        scale = float(np.abs(v0).max()) if len(v0) else 1.0
        if degree == 0:
            tags = [Tag.HARMONIC if k == 0 else Tag.UNTAGGED for _ in v0]
            return k, _group_block(v0, tags, k, 0, merge_tol), scale
        v1 = block_eigenvalues(k, m, 1)
        scale = max(scale, float(np.abs(v1).max()))
        return k, _group_block(v1, tag_block(v1, v0, merge_tol, scale), k, 1, merge_tol), scale

    blocks = pmap(one, ks, workers)
    entries = [e for _, es, _ in blocks for e in es]
    entries.sort(key=lambda e: (e.eigenvalue, e.weight, e.tag.value))
    return Spectrum(
        entries=tuple(entries),
        k_max=int(k_max),
        metric=m,
        degree=degree,
        merge_tol=merge_tol,
        block_norms={k: s for k, _, s in blocks},
    )
