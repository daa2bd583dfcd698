"""Recover ``(a, b, c)`` up to permutation from volume, Scal and lambda1.

With ``x, y, z = a^2, b^2, c^2`` and elementary symmetric polynomials
``s1, s2, s3``:

* the volume gives ``s3 = (V0 / vol)^2``;
* ``Scal = 8 s1 - 2 s2^2 / s3``;
* lambda1 is either ``s1`` (exact branch, SU(2) only) or ``4 s3 / x^2`` for
  one of the squares (coexact branch).

The spectrum does not say which branch produced lambda1, so both are tried and
every candidate is checked by evaluating the forward map.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AmbiguityError, DomainError, InconsistentInvariantsError
from .geometry import Group, MetricParams, curvature, volume
from .lambda1 import lambda1_formula

VALIDATE_TOL = 1e-8
REAL_ROOT_TOL = 1e-9


class InversionBranch(str, enum.Enum):
    EXACT_MIN = "exact_min"
    COEXACT_MIN = "coexact_min"


@dataclass(frozen=True)
class SpectralInvariants:
    volume: float
    scal: float
    lambda1: float
    group: Group = Group.SU2
    normRic2: float | None = None
    normR2: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "group", Group.parse(self.group))
        for name in ("volume", "scal", "lambda1"):
            val = getattr(self, name)
            if not isinstance(val, (int, float)) or not math.isfinite(val):
                raise DomainError(f"{name} must be a finite number, got {val!r}")
        if self.volume <= 0:
            raise DomainError(f"volume must be positive, got {self.volume!r}")
        if self.lambda1 <= 0:
            raise DomainError(f"lambda1 must be positive, got {self.lambda1!r}")

    def as_dict(self) -> dict:
        return {
            "volume": self.volume,
            "scal": self.scal,
            "lambda1": self.lambda1,
            "group": self.group.value,
            "normRic2": self.normRic2,
            "normR2": self.normR2,
        }


@dataclass(frozen=True)
class HeatInvariants:
    volume: float
    scal: float
    normRic2: float
    normR2: float
    a2_functions: float  # 5/2 Scal^2 - |Ric|^2 + |R|^2
    a2_one_forms: float  # -45/2 Scal^2 + 87 |Ric|^2 - 12 |R|^2

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def heat_invariants(m: MetricParams) -> HeatInvariants:
    """Curvature combinations entering the first heat coefficients (constants omitted)."""
    cv = curvature(m)
    s2 = cv.scal**2
    return HeatInvariants(
        volume=volume(m),
        scal=cv.scal,
        normRic2=cv.normRic2,
        normR2=cv.normR2,
        a2_functions=2.5 * s2 - cv.normRic2 + cv.normR2,
        a2_one_forms=-22.5 * s2 + 87 * cv.normRic2 - 12 * cv.normR2,
    )


def forward(m: MetricParams) -> SpectralInvariants:
    cv = curvature(m)
    return SpectralInvariants(volume(m), cv.scal, lambda1_formula(m).value, m.group, cv.normRic2, cv.normR2)


def _polish(coefs, t: float, steps: int = 3) -> float:
    """Newton steps on the cubic, kept only while they reduce the residual.

    Near a repeated root the derivative vanishes and a raw step can overshoot.
    """
    s1, s2, s3 = coefs

    def f(x):
        return ((x - s1) * x + s2) * x - s3

    ft = f(t)
    for _ in range(steps):
        df = (3 * t - 2 * s1) * t + s2
        if df == 0.0 or ft == 0.0:
            break
        nt = t - ft / df
        fn = f(nt)
        if abs(fn) >= abs(ft):
            break
        t, ft = nt, fn
    return t


def vieta_roots(s1: float, s2: float, s3: float) -> list[complex]:
    """Roots of ``t^3 - s1 t^2 + s2 t - s3``; real roots are Newton-polished."""
    shift = s1 / 3.0
    p = s2 - s1 * s1 / 3.0
    q = -2.0 * s1**3 / 27.0 + s1 * s2 / 3.0 - s3
    disc = q * q / 4.0 + p**3 / 27.0
    scale = q * q / 4.0 + abs(p) ** 3 / 27.0
    if scale == 0.0:
        roots = [complex(shift)] * 3
    elif abs(disc) <= 1e-12 * scale:
        u = np.cbrt(-q / 2.0)
        roots = [complex(2 * u + shift), complex(-u + shift), complex(-u + shift)]
    elif disc < 0:
        r = 2.0 * math.sqrt(-p / 3.0)
        arg = max(-1.0, min(1.0, (3.0 * q / (2.0 * p)) * math.sqrt(-3.0 / p)))
        phi = math.acos(arg) / 3.0
        roots = [complex(r * math.cos(phi - 2 * math.pi * j / 3) + shift) for j in range(3)]
    else:
        sq = math.sqrt(disc)
        u, v = np.cbrt(-q / 2.0 + sq), np.cbrt(-q / 2.0 - sq)
        re, im = -(u + v) / 2.0 + shift, math.sqrt(3.0) / 2.0 * (u - v)
        roots = [complex(u + v + shift), complex(re, im), complex(re, -im)]
    out = []
    for z in roots:
        if abs(z.imag) <= REAL_ROOT_TOL * max(abs(z), 1e-300):
            out.append(complex(_polish((s1, s2, s3), z.real)))
        else:
            out.append(z)
    return sorted(out, key=lambda z: (z.real, z.imag))


@dataclass(frozen=True)
class InversionResult:
    abc_sorted: tuple[float, float, float]
    branch: InversionBranch
    residuals: dict
    sigmas: tuple[float, float, float]
    candidates: int = 1
    group: Group = Group.SU2

    def metric(self) -> MetricParams:
        return MetricParams(*self.abc_sorted, group=self.group)

    def as_dict(self) -> dict:
        return {
            "abc_sorted": list(self.abc_sorted),
            "branch": self.branch.value,
            "residuals": dict(self.residuals),
            "sigmas": list(self.sigmas),
            "candidates": self.candidates,
            "group": self.group.value,
        }


@dataclass
class _Candidate:
    squares: tuple[float, float, float]
    branch: InversionBranch
    residuals: dict = field(default_factory=dict)

    @property
    def abc(self) -> tuple[float, float, float]:
        return tuple(sorted((math.sqrt(v) for v in self.squares), reverse=True))


def _rel(x: float, y: float) -> float:
    return abs(x - y) / max(abs(y), 1e-300)


def _validate(cand: _Candidate, si: SpectralInvariants, tol: float) -> bool:
    if not all(v > 0 and math.isfinite(v) for v in cand.squares):
        return False
    fwd = forward(MetricParams(*cand.abc, group=si.group))
    res = {
        "volume": _rel(fwd.volume, si.volume),
        "scal": abs(fwd.scal - si.scal) / max(abs(si.scal), 1.0),
        "lambda1": _rel(fwd.lambda1, si.lambda1),
    }
    if si.normRic2 is not None:
        res["normRic2"] = _rel(fwd.normRic2, si.normRic2)
    cand.residuals = res
    return all(v <= tol for v in res.values())


def _exact_branch(si: SpectralInvariants, s3: float) -> list[_Candidate]:
    if si.group is not Group.SU2:
        return []
    s1 = si.lambda1
    rad = s3 * (8 * s1 - si.scal) / 2
    if rad <= 0:
        return []
    s2 = math.sqrt(rad)
    roots = vieta_roots(s1, s2, s3)
    if any(z.imag != 0.0 for z in roots):
        return []
    return [_Candidate(tuple(z.real for z in roots), InversionBranch.EXACT_MIN)]


def _coexact_branch(si: SpectralInvariants, s3: float) -> list[_Candidate]:
    x = 2.0 * math.sqrt(s3 / si.lambda1)
    p = s3 / x
    # Scal = 8 x + 4 s - (2x/p) s^2 - 2p/x with s = y + z
    qa, qb, qc = 2 * x / p, -4.0, si.scal - 8 * x + 2 * p / x
    disc = qb * qb - 4 * qa * qc
    if disc < 0:
        if disc < -1e-12 * qb * qb:
            return []
        disc = 0.0
    out = []
    for s in {(-qb + math.sqrt(disc)) / (2 * qa), (-qb - math.sqrt(disc)) / (2 * qa)}:
        gap = s * s - 4 * p
        if s <= 0 or gap < -1e-12 * s * s:
            continue
        r = math.sqrt(max(gap, 0.0))
        out.append(_Candidate((x, (s + r) / 2, (s - r) / 2), InversionBranch.COEXACT_MIN))
    return out


def invert(si: SpectralInvariants, tol: float = VALIDATE_TOL) -> InversionResult:
    """Reconstruct the sorted triple ``(a, b, c)`` (descending).

    Raises:
        InconsistentInvariantsError: no branch reproduces the invariants.
        AmbiguityError: two validated candidates differ beyond ``tol``.
    """
    s3 = (si.group.base_volume / si.volume) ** 2
    cands = [c for c in _exact_branch(si, s3) + _coexact_branch(si, s3) if _validate(c, si, tol)]
    if not cands:
        raise InconsistentInvariantsError(
            f"no metric reproduces volume={si.volume!r}, scal={si.scal!r}, lambda1={si.lambda1!r}"
        )
    best = cands[0]
    for other in cands[1:]:
        gap = max(abs(u - v) for u, v in zip(best.abc, other.abc)) / max(best.abc)
        if gap > math.sqrt(tol):
            raise AmbiguityError(f"invariants fit both {best.abc} and {other.abc}")
    x, y, z = best.squares
    return InversionResult(
        abc_sorted=best.abc,
        branch=best.branch,
        residuals=best.residuals,
        sigmas=(x + y + z, x * y + y * z + z * x, s3),
        candidates=len(cands),
        group=si.group,
    )
