"""First non-zero eigenvalue of the 1-form Laplacian.

``lambda1_formula`` evaluates the closed form.  ``certify_lambda1`` reproduces
the numerical evidence behind it: Gershgorin discs give a lower bound for every
block past some weight ``k0``, and the blocks below ``k0`` are diagonalized.
``stress_test`` compares the formula against numerical block minima for
seeded random metrics.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import ConjectureViolation, DomainError
from .geometry import Group, MetricParams
from .laplacian import block_eigenvalues, weights
from .parallel import pmap
from .su2_rep import check_weight

TIE_TOL = 1e-12
MATCH_TOL = 1e-8
DEFAULT_BOX = (0.1, 10.0)
DEFAULT_K_PROBE = 200
DEFAULT_MARGIN = 0.5


class Branch(str, enum.Enum):
    COEXACT_A = "coexact_a"  # 4 b^2 c^2 / a^2
    COEXACT_B = "coexact_b"  # 4 a^2 c^2 / b^2
    COEXACT_C = "coexact_c"  # 4 a^2 b^2 / c^2
    EXACT = "exact"  # a^2 + b^2 + c^2


def branch_values(m: MetricParams) -> dict[Branch, float]:
    a2, b2, c2 = m.squares
    out = {
        Branch.COEXACT_A: 4 * b2 * c2 / a2,
        Branch.COEXACT_B: 4 * a2 * c2 / b2,
        Branch.COEXACT_C: 4 * a2 * b2 / c2,
    }
    if m.group is Group.SU2:
        out[Branch.EXACT] = a2 + b2 + c2
    return out


@dataclass(frozen=True)
class GershgorinCertificate:
    k0: int
    bound_at_k0: float
    candidate_min: float
    per_k_bounds: tuple[tuple[int, float], ...]

    def as_dict(self) -> dict:
        return {
            "k0": self.k0,
            "bound_at_k0": self.bound_at_k0,
            "candidate_min": self.candidate_min,
            "per_k_bounds": [[k, b] for k, b in self.per_k_bounds],
        }


@dataclass(frozen=True)
class Lambda1Result:
    value: float
    attaining_branch: Branch
    ties: tuple[Branch, ...] = ()
    certified: bool = False
    k_searched: int = 0
    certificate: GershgorinCertificate | None = None
    numeric_min: float | None = None
    argmin_k: int | None = None

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "attaining_branch": self.attaining_branch.value,
            "ties": [t.value for t in self.ties],
            "certified": self.certified,
            "k_searched": self.k_searched,
            "numeric_min": self.numeric_min,
            "argmin_k": self.argmin_k,
            "certificate": None if self.certificate is None else self.certificate.as_dict(),
        }


def lambda1_formula(m: MetricParams) -> Lambda1Result:
    """Closed-form first eigenvalue and the branch attaining it.

    The exact branch wins a tie with a coexact one when they agree to 1e-12
    relative; every branch within that tolerance is listed in ``ties``.
    """
    vals = branch_values(m)
    lo = min(vals.values())
    ties = tuple(br for br, v in vals.items() if v - lo <= TIE_TOL * lo)
    best = Branch.EXACT if Branch.EXACT in ties else min(ties, key=lambda br: vals[br])
    return Lambda1Result(value=vals[best], attaining_branch=best, ties=ties if len(ties) > 1 else ())


@dataclass(frozen=True)
class WeightOneValues:
    """The three distinct eigenvalues of block ``k = 1``, each of multiplicity 2."""

    exact: float
    coexact_minus: float
    coexact_plus: float

    def as_array(self) -> np.ndarray:
        return np.repeat([self.exact, self.coexact_minus, self.coexact_plus], 2)


def weight_one_values(m: MetricParams) -> WeightOneValues:
    """Radical closed form of the ``k = 1`` block spectrum.

    The lower coexact value is evaluated as ``(M - S)^2 / (a^2 b^2 c^2)``; the
    expanded ``(N - 2 S M) / (a^2 b^2 c^2)`` cancels badly when one axis is
    much shorter than the others.
    """
    a2, b2, c2 = m.squares
    den = a2 * b2 * c2
    num = 2 * a2 * a2 * b2 * b2 + (2 * a2 * a2 + a2 * b2 + 2 * b2 * b2) * c2 * c2 + (a2 * a2 * b2 + a2 * b2 * b2) * c2
    big_m = a2 * b2 + (a2 + b2) * c2
    s = math.sqrt(max(weight_one_discriminant(m), 0.0))
    return WeightOneValues(a2 + b2 + c2, weight_one_coexact_minus_compact(m), (num + 2 * s * big_m) / den)


def weight_one_coexact_expanded(m: MetricParams) -> tuple[float, float]:
    """``(lambda^-, lambda^+)`` straight from the expanded radical expression."""
    a2, b2, c2 = m.squares
    den = a2 * b2 * c2
    num = 2 * a2 * a2 * b2 * b2 + (2 * a2 * a2 + a2 * b2 + 2 * b2 * b2) * c2 * c2 + (a2 * a2 * b2 + a2 * b2 * b2) * c2
    big_m = a2 * b2 + (a2 + b2) * c2
    s = math.sqrt(max(weight_one_discriminant(m), 0.0))
    return (num - 2 * s * big_m) / den, (num + 2 * s * big_m) / den


def weight_one_discriminant(m: MetricParams) -> float:
    """Radicand ``S^2``; non-negative for all metrics, zero at the round one."""
    a2, b2, c2 = m.squares
    return a2 * a2 * b2 * b2 + (a2 * a2 - a2 * b2 + b2 * b2) * c2 * c2 - (a2 * a2 * b2 + a2 * b2 * b2) * c2


def weight_one_coexact_minus_compact(m: MetricParams) -> float:
    """``(M - S)^2 / (a^2 b^2 c^2)`` with ``M = a^2 b^2 + (a^2 + b^2) c^2``."""
    a2, b2, c2 = m.squares
    big_m = a2 * b2 + (a2 + b2) * c2
    s = math.sqrt(max(weight_one_discriminant(m), 0.0))
    return (big_m - s) ** 2 / (a2 * b2 * c2)


def function_lambda1(m: MetricParams) -> float:
    """Smallest positive eigenvalue of the Laplacian on functions."""
    a2, b2, c2 = m.squares
    cands = [4 * (a2 + b2), 4 * (a2 + c2), 4 * (b2 + c2)]
    if m.group is Group.SU2:
        cands.append(a2 + b2 + c2)
    return min(cands)


def coexact_le_function_bound(m: MetricParams) -> bool:
    """min of the left-invariant coexact values <= min 4(x + y) over pairs of squares."""
    a2, b2, c2 = m.squares
    lhs = min(4 * b2 * c2 / a2, 4 * a2 * c2 / b2, 4 * a2 * b2 / c2)
    rhs = min(4 * (a2 + b2), 4 * (a2 + c2), 4 * (b2 + c2))
    return lhs <= rhs * (1 + 1e-14)


def gershgorin_bound(k: int, m: MetricParams) -> float:
    """Gershgorin lower bound for block ``k``; ``-inf`` when it is not positive."""
    k = check_weight(k)
    val = _backend.kernels.gershgorin_delta1(k, m.a, m.b, m.c)
    return val if val > 0.0 else -math.inf


def _block_min(m: MetricParams, k: int) -> float:
    return float(block_eigenvalues(k, m, 1)[0])


def _argmin(mins: list[tuple[int, float]], tol: float = 1e-9) -> tuple[int, float]:
    lo = min(v for _, v in mins)
    k = min(k for k, v in mins if v <= lo + tol * abs(lo))
    return k, lo


def certify_lambda1(
    m: MetricParams,
    k_probe: int = DEFAULT_K_PROBE,
    margin: float = DEFAULT_MARGIN,
    workers=None,
) -> Lambda1Result:
    """Certify the closed form by Gershgorin tail bounds plus exhaustive low weights.

    ``k0`` is the smallest weight from which the bound exceeds the candidate
    and is non-decreasing up to ``k_probe``, with ``bound(k_probe) >
    candidate * (1 + margin)``.  Blocks below ``k0`` are diagonalized.  If no
    such ``k0`` exists the result is uncertified and carries the minimum over
    all blocks up to ``k_probe``.
    """
    if isinstance(k_probe, bool) or int(k_probe) != k_probe or k_probe < 1:
        raise DomainError(f"k_probe must be a positive integer, got {k_probe!r}")
    k_probe = int(k_probe)
    formula = lambda1_formula(m)
    cand = formula.value
    ks = weights(m.group, k_probe)
    bounds = [(k, gershgorin_bound(k, m)) for k in ks]

    k0 = None
    if bounds[-1][1] > cand * (1 + margin):
        idx = len(bounds) - 1
        while idx > 0 and bounds[idx - 1][1] > cand and bounds[idx - 1][1] <= bounds[idx][1]:
            idx -= 1
        k0 = bounds[idx][0]

    low = 2 if m.group is Group.SU2 else 1
    limit = max(k0, low) if k0 is not None else k_probe + 1
    exhaustive = [k for k in ks if k < limit]
    mins = list(zip(exhaustive, pmap(lambda k: _block_min(m, k), exhaustive, workers)))
    argmin_k, num = _argmin(mins)

    if num < cand * (1 - MATCH_TOL):
        raise ConjectureViolation(
            f"block k={argmin_k} has eigenvalue {num!r} below the closed form {cand!r} at {m.abc}"
        )
    if num > cand * (1 + MATCH_TOL):
        raise ConjectureViolation(
            f"closed form {cand!r} not attained for k <= {exhaustive[-1]} at {m.abc} (min {num!r})"
        )
    cert = None
    if k0 is not None:
        tail = tuple((k, b) for k, b in bounds if k >= k0)
        cert = GershgorinCertificate(k0, dict(bounds)[k0], cand, tail)
    return Lambda1Result(
        value=cand,
        attaining_branch=formula.attaining_branch,
        ties=formula.ties,
        certified=cert is not None,
        k_searched=exhaustive[-1],
        certificate=cert,
        numeric_min=num,
        argmin_k=argmin_k,
    )


# -- Monte Carlo stress test ----------------------------------------------------


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Independent PCG64 stream for sample ``index`` of a run seeded with ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(index)])))


def sample_metric(seed: int, index: int, box=DEFAULT_BOX, group=Group.SU2) -> MetricParams:
    a, b, c = sample_rng(seed, index).uniform(box[0], box[1], size=3)
    return MetricParams(a, b, c, group)


def allowed_argmin(group) -> frozenset:
    return frozenset({0, 1}) if Group.parse(group) is Group.SU2 else frozenset({0})


@dataclass
class StressReport:
    seed: int
    samples: int
    box: tuple[float, float]
    k_max: int
    group: Group
    violations: list = field(default_factory=list)
    max_rel_dev: float = 0.0
    argmin_k_histogram: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "samples": self.samples,
            "box": list(self.box),
            "k_max": self.k_max,
            "group": self.group.value,
            "rng": "PCG64, SeedSequence([seed, sample_index])",
            "violations": self.violations,
            "max_rel_dev": self.max_rel_dev,
            "argmin_k_histogram": {str(k): n for k, n in sorted(self.argmin_k_histogram.items())},
        }


def _stress_one(m: MetricParams, k_max: int, tol: float):
    ks = weights(m.group, k_max)
    mins = [(k, _block_min(m, k)) for k in ks]
    argmin_k, num = _argmin(mins)
    form = lambda1_formula(m).value
    return argmin_k, num, form, abs(num - form) / form


def stress_test(
    seed: int = 1,
    samples: int = 1000,
    k_max: int = 10,
    box=DEFAULT_BOX,
    group=Group.SU2,
    workers=None,
    metrics=None,
    tol: float = MATCH_TOL,
) -> StressReport:
    """Compare block minima for ``k <= k_max`` with the closed form.

    Sample ``i`` draws ``(a, b, c)`` uniformly from ``box^3`` with its own
    generator seeded by ``(seed, i)``, so results do not depend on the worker
    count.  ``metrics`` replaces the random draws by explicit triples.
    """
    group = Group.parse(group)
    lo, hi = float(box[0]), float(box[1])
    if not 0 < lo < hi:
        raise DomainError(f"box must satisfy 0 < lo < hi, got {box!r}")
    if metrics is not None:
        ms = [MetricParams(*t, group=group) if not isinstance(t, MetricParams) else t.with_group(group) for t in metrics]
    else:
        if isinstance(samples, bool) or int(samples) != samples or samples < 1:
            raise DomainError(f"samples must be a positive integer, got {samples!r}")
        ms = [sample_metric(seed, i, (lo, hi), group) for i in range(int(samples))]
    rows = pmap(lambda m: _stress_one(m, k_max, tol), ms, workers)

    report = StressReport(int(seed), len(ms), (lo, hi), int(k_max), group)
    allowed = allowed_argmin(group)
    for i, (m, (argmin_k, num, form, dev)) in enumerate(zip(ms, rows)):
        report.argmin_k_histogram[argmin_k] = report.argmin_k_histogram.get(argmin_k, 0) + 1
        report.max_rel_dev = max(report.max_rel_dev, dev)
        reasons = []
        if dev > tol:
            reasons.append("numeric minimum differs from closed form")
        if argmin_k not in allowed:
            reasons.append("minimum attained outside the expected weights")
        if reasons:
            report.violations.append({
                "index": i, "a": m.a, "b": m.b, "c": m.c,
                "numeric": num, "formula": form, "argmin_k": argmin_k,
                "reason": "; ".join(reasons),
            })
    return report
