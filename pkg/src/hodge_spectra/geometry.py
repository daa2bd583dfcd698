"""Closed-form Riemannian geometry of left-invariant metrics on SU(2).

The metric ``g_(a,b,c)`` makes ``X1 = a*E1, X2 = b*E2, X3 = c*E3`` orthonormal,
where ``[E1, E2] = 2 E3`` (and cyclic).  All quantities below are short
rational functions of ``(a, b, c)`` evaluated in double precision.

Sign convention: the curvature-operator eigenvalues ``r_ij`` follow
``R(X ^ Y) = 1/2 sum_i X_i ^ R(X, Y) X_i``, so the round metric has
``r_ij = -1`` while its sectional curvature is ``+1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# Volume of (SU(2), g_(1,1,1)) for <X, Y>_0 = -1/2 tr(XY): the unit 3-sphere.
VOLUME_SU2 = 2.0 * math.pi**2
VOLUME_SO3 = math.pi**2


class Group(str, enum.Enum):
    SU2 = "su2"
    SO3 = "so3"

    @classmethod
    def parse(cls, value: "Group | str") -> "Group":
        if isinstance(value, Group):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown group {value!r}; expected 'su2' or 'so3'") from None

    @property
    def base_volume(self) -> float:
        return VOLUME_SU2 if self is Group.SU2 else VOLUME_SO3


@dataclass(frozen=True)
class MetricParams:
    """Structure constants of ``g_(a,b,c)`` on SU(2) or SO(3)."""

    a: float
    b: float
    c: float
    group: Group = Group.SU2

    def __post_init__(self):
        for name in ("a", "b", "c"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise DomainError(f"{name} must be a real number, got {value!r}") from None
            if not math.isfinite(value) or value <= 0.0:
                raise DomainError(f"{name} must be finite and positive, got {value!r}")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "group", Group.parse(self.group))

    @property
    def abc(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)

    @property
    def squares(self) -> tuple[float, float, float]:
        return (self.a**2, self.b**2, self.c**2)

    def permuted(self, perm) -> "MetricParams":
        """Return the metric with parameters reordered by ``perm`` (an isometry)."""
        vals = self.abc
        return MetricParams(*(vals[i] for i in perm), group=self.group)

    def with_group(self, group) -> "MetricParams":
        return MetricParams(self.a, self.b, self.c, group=group)

    def as_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "group": self.group.value}


@dataclass(frozen=True)
class Christoffel:
    """Levi-Civita connection in the orthonormal frame.

    ``table[i, j, k] = X_k^*(nabla_{X_i} X_j)`` with zero-based indices.
    """

    gamma1: float
    gamma2: float
    gamma3: float
    table: np.ndarray

    def nabla(self, i: int, j: int) -> np.ndarray:
        """Coefficients of ``nabla_{X_i} X_j`` (one-based indices)."""
        return self.table[i - 1, j - 1].copy()


@dataclass(frozen=True)
class Curvature:
    r12: float
    r13: float
    r23: float
    ricci: tuple[float, float, float]
    scal: float
    normRic2: float
    normR2: float


@dataclass(frozen=True)
class GeometryTensors:
    gamma1: float
    gamma2: float
    gamma3: float
    r12: float
    r13: float
    r23: float
    ricci: tuple[float, float, float]
    cnabla: tuple[float, float, float]
    scal: float
    normRic2: float
    normR2: float
    volume: float

    def as_dict(self) -> dict:
        return {
            "gamma": [self.gamma1, self.gamma2, self.gamma3],
            "r12": self.r12,
            "r13": self.r13,
            "r23": self.r23,
            "ricci": list(self.ricci),
            "cnabla": list(self.cnabla),
            "scal": self.scal,
            "normRic2": self.normRic2,
            "normR2": self.normR2,
            "volume": self.volume,
        }


def _check(m) -> MetricParams:
    if not isinstance(m, MetricParams):
        raise DomainError(f"expected MetricParams, got {type(m).__name__}")
    return m


def bracket_coefficients(m: MetricParams) -> tuple[float, float, float]:
    """Coefficients of ``[X1,X2] = f3 X3``, ``[X2,X3] = f1 X1``, ``[X3,X1] = f2 X2``."""
    a, b, c = _check(m).abc
    return (2 * b * c / a, 2 * c * a / b, 2 * a * b / c)


def christoffel(m: MetricParams) -> Christoffel:
    a, b, c = _check(m).abc
    ab_c, ac_b, bc_a = a * b / c, a * c / b, b * c / a
    t = np.zeros((3, 3, 3))
    t[0, 1, 2] = ab_c + ac_b - bc_a  # nabla_{X1} X2 along X3
    t[1, 0, 2] = -ab_c + ac_b - bc_a
    t[0, 2, 1] = -ab_c - ac_b + bc_a  # nabla_{X1} X3 along X2
    t[2, 0, 1] = -ab_c + ac_b + bc_a
    t[1, 2, 0] = ab_c - ac_b + bc_a  # nabla_{X2} X3 along X1
    t[2, 1, 0] = ab_c - ac_b - bc_a
    t.setflags(write=False)
    return Christoffel(
        gamma1=-ab_c - ac_b + bc_a,
        gamma2=ab_c - ac_b + bc_a,
        gamma3=ab_c - ac_b - bc_a,
        table=t,
    )


def _quotients(m: MetricParams) -> tuple[float, float, float]:
    x, y, z = m.squares
    # (b^2 c^2 / a^2, a^2 c^2 / b^2, a^2 b^2 / c^2)
    return (y * z / x, x * z / y, x * y / z)


def curvature(m: MetricParams) -> Curvature:
    x, y, z = _check(m).squares
    p1, p2, p3 = _quotients(m)
    r12 = 3 * p3 - p2 - p1 - 2 * x - 2 * y + 2 * z
    r13 = -p3 + 3 * p2 - p1 - 2 * x + 2 * y - 2 * z
    r23 = -p3 - p2 + 3 * p1 + 2 * x - 2 * y - 2 * z
    ricci = (-r12 - r13, -r12 - r23, -r13 - r23)
    scal = ricci[0] + ricci[1] + ricci[2]
    norm_ric2 = ricci[0] ** 2 + ricci[1] ** 2 + ricci[2] ** 2
    # each r_ij occurs as R_ijij, R_jiji, R_ijji, R_jiij
    norm_r2 = 4.0 * (r12**2 + r13**2 + r23**2)
    return Curvature(r12, r13, r23, ricci, scal, norm_ric2, norm_r2)


def connection_casimir(m: MetricParams) -> tuple[float, float, float]:
    """Eigenvalues of ``sum_k nabla_{X_k}^2`` on ``X1^*, X2^*, X3^*``."""
    x, y, z = _check(m).squares
    q = sum(_quotients(m))
    return (-2 * (q - 2 * x), -2 * (q - 2 * y), -2 * (q - 2 * z))


def weitzenboeck_diagonal(m: MetricParams) -> np.ndarray:
    """The constant fibrewise part ``4 diag(b²c²/a², a²c²/b², a²b²/c²)``."""
    return 4.0 * np.array(_quotients(_check(m)))


def volume(m: MetricParams) -> float:
    m = _check(m)
    return m.group.base_volume / (m.a * m.b * m.c)


def geometry_tensors(m: MetricParams) -> GeometryTensors:
    ch = christoffel(m)
    cu = curvature(m)
    return GeometryTensors(
        gamma1=ch.gamma1,
        gamma2=ch.gamma2,
        gamma3=ch.gamma3,
        r12=cu.r12,
        r13=cu.r13,
        r23=cu.r23,
        ricci=cu.ricci,
        cnabla=connection_casimir(m),
        scal=cu.scal,
        normRic2=cu.normRic2,
        normR2=cu.normR2,
        volume=volume(m),
    )
