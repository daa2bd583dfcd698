"""Curl ``*_g d`` on left-invariant forms and the coexact spectral bound.

Left-invariant 1-forms are stored as coefficients on ``(E1*, E2*, E3*)``;
2-forms on ``(E2*^E3*, E3*^E1*, E1*^E2*)``, so the round Hodge star is the
identity on coefficient vectors.  With ``T = diag(a^2, b^2, c^2)`` the metric
stars are ``*_g = (1/abc) *_0 T`` on 1-forms and ``*_g = abc T^-1 *_0`` on
2-forms, giving ``Curl_g = abc T^-1 Curl_0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import MetricParams
from .laplacian import Tag, assemble_delta1, full_spectrum

CURL0_EIGENVALUE = -2.0  # dE1* = -2 E2*^E3* and *_0 maps E2*^E3* to E1*


@dataclass(frozen=True)
class LeftInvariantForm:
    """``c1 E1* + c2 E2* + c3 E3*`` (or the 2-form on the dual triple)."""

    coefficients: tuple[complex, complex, complex]
    degree: int = 1

    def __post_init__(self):
        coefs = tuple(complex(c) for c in self.coefficients)
        if len(coefs) != 3 or not all(np.isfinite(c) for c in coefs):
            raise ValueError("a left-invariant form needs three finite coefficients")
        object.__setattr__(self, "coefficients", coefs)

    @classmethod
    def basis(cls, i: int, degree: int = 1) -> "LeftInvariantForm":
        coefs = [0.0, 0.0, 0.0]
        coefs[i - 1] = 1.0
        return cls(tuple(coefs), degree)

    def array(self) -> np.ndarray:
        return np.array(self.coefficients)

    def _new(self, arr, degree=None) -> "LeftInvariantForm":
        return LeftInvariantForm(tuple(arr), self.degree if degree is None else degree)


def apply_T(f: LeftInvariantForm, m: MetricParams, inverse: bool = False) -> LeftInvariantForm:
    sq = np.array(m.squares)
    return f._new(f.array() / sq if inverse else f.array() * sq)


def d_invariant(f: LeftInvariantForm) -> LeftInvariantForm:
    """Exterior derivative of a left-invariant 1-form."""
    return f._new(CURL0_EIGENVALUE * f.array(), degree=2)


def star_round(f: LeftInvariantForm) -> LeftInvariantForm:
    return f._new(f.array(), degree=3 - f.degree)


def star(f: LeftInvariantForm, m: MetricParams) -> LeftInvariantForm:
    """Hodge star of ``g_(a,b,c)`` from the orthonormal coframe ``E_i*/a_i``.

    ``*(E1*/a) = (E2*/b)^(E3*/c)`` gives ``*E1* = a/(bc) E2*^E3*``, and on
    2-forms ``*(E2*^E3*/(bc)) = E1*/a`` gives ``*(E2*^E3*) = bc/a E1*``.
    """
    a, b, c = m.abc
    ratio = np.array([a / (b * c), b / (a * c), c / (a * b)])
    if f.degree == 1:
        return f._new(f.array() * ratio, degree=2)
    if f.degree == 2:
        return f._new(f.array() / ratio, degree=1)
    raise ValueError("star is implemented for 1-forms and 2-forms")


def star_via_T(f: LeftInvariantForm, m: MetricParams) -> LeftInvariantForm:
    """The same star written through ``T`` and the round star."""
    a, b, c = m.abc
    if f.degree == 1:
        out = star_round(apply_T(f, m))
        return out._new(out.array() / (a * b * c))
    out = apply_T(star_round(f), m, inverse=True)
    return out._new(out.array() * (a * b * c))


def curl_round(f: LeftInvariantForm) -> LeftInvariantForm:
    return star_round(d_invariant(f))


def curl_g_on_invariant(f: LeftInvariantForm, m: MetricParams) -> LeftInvariantForm:
    """``Curl_g f = abc T^-1 Curl_0 f``; on ``E1*`` this is ``-2 bc/a E1*``."""
    a, b, c = m.abc
    out = apply_T(curl_round(f), m, inverse=True)
    return out._new(a * b * c * out.array())


def curl_matrix(m: MetricParams) -> np.ndarray:
    cols = [curl_g_on_invariant(LeftInvariantForm.basis(i), m).array() for i in (1, 2, 3)]
    return np.column_stack(cols).real


def curl_squared_residual(m: MetricParams) -> float:
    """Relative gap between ``Curl_g^2`` and the assembled ``k = 0`` block."""
    c = curl_matrix(m)
    delta0 = assemble_delta1(0, m).entries.real
    return float(np.max(np.abs(c @ c - delta0)) / np.max(np.abs(delta0)))


def coexact_lower_bound(m: MetricParams) -> float:
    a2, b2, c2 = m.squares
    return min(4 * b2 * c2 / a2, 4 * a2 * c2 / b2, 4 * a2 * b2 / c2)


@dataclass(frozen=True)
class CoexactCheck:
    metric: MetricParams
    k_max: int
    bound: float
    k0_minimum: float
    violations: tuple[tuple[int, float], ...]
    attained_at_k0: bool

    @property
    def ok(self) -> bool:
        return not self.violations and self.attained_at_k0

    def as_dict(self) -> dict:
        return {
            "metric": self.metric.as_dict(),
            "k_max": self.k_max,
            "bound": self.bound,
            "k0_minimum": self.k0_minimum,
            "attained_at_k0": self.attained_at_k0,
            "violations": [{"k": k, "eigenvalue": v} for k, v in self.violations],
            "ok": self.ok,
        }


def coexact_bound_check(m: MetricParams, k_max: int = 6, tol: float = 1e-8, workers=None) -> CoexactCheck:
    """Every coexact eigenvalue up to ``k_max`` is at least the left-invariant minimum."""
    bound = coexact_lower_bound(m)
    spec = full_spectrum(m, degree=1, k_max=k_max, workers=workers)
    floor = bound - tol * max(1.0, bound)
    bad = tuple((e.weight, e.eigenvalue) for e in spec.entries if e.tag is Tag.COEXACT and e.eigenvalue < floor)
    k0 = min(e.eigenvalue for e in spec.at_weight(0))
    attained = abs(k0 - bound) <= tol * max(1.0, bound)
    return CoexactCheck(m, int(k_max), bound, k0, bad, attained)


def round_coexact_roots(k_max: int = 10) -> list[tuple[int, float]]:
    """``(k, sqrt(lambda))`` for every coexact eigenvalue of the round metric."""
    spec = full_spectrum(MetricParams(1.0, 1.0, 1.0), degree=1, k_max=k_max)
    return [(e.weight, float(np.sqrt(e.eigenvalue))) for e in spec.entries if e.tag is Tag.COEXACT]
