"""Spectra of the Hodge-Laplacian on left-invariant metrics of SU(2) and SO(3).

The 1-form Laplacian of ``g_(a,b,c)`` splits into finite blocks, one per
irreducible representation of weight ``k``.  This package assembles and
diagonalizes those blocks (compiled kernels with a numpy fallback), evaluates
the closed forms for Berger spheres and for the first eigenvalue, certifies the
latter with Gershgorin bounds and reconstructs the metric from spectral data.
"""

__version__ = "0.1.0"

from ._backend import BACKEND
from .berger import BergerParams, berger_block_spectrum, berger_first_eigenvalue, verify_eigenvectors
from .errors import (
    AmbiguityError,
    ConjectureViolation,
    ConsistencyError,
    DomainError,
    HodgeSpectraError,
    InconsistentInvariantsError,
    InversionError,
)
from .geometry import Group, MetricParams, curvature, christoffel, connection_casimir, geometry_tensors, volume
from .inverse import SpectralInvariants, forward, heat_invariants, invert
from .lambda1 import certify_lambda1, gershgorin_bound, lambda1_formula, stress_test
from .laplacian import Spectrum, SpectrumEntry, assemble_delta0, assemble_delta1, eigenvalues, full_spectrum

__all__ = [
    "BACKEND",
    "AmbiguityError",
    "BergerParams",
    "ConjectureViolation",
    "ConsistencyError",
    "DomainError",
    "Group",
    "HodgeSpectraError",
    "InconsistentInvariantsError",
    "InversionError",
    "MetricParams",
    "SpectralInvariants",
    "Spectrum",
    "SpectrumEntry",
    "assemble_delta0",
    "assemble_delta1",
    "berger_block_spectrum",
    "berger_first_eigenvalue",
    "certify_lambda1",
    "christoffel",
    "connection_casimir",
    "curvature",
    "eigenvalues",
    "forward",
    "full_spectrum",
    "geometry_tensors",
    "gershgorin_bound",
    "heat_invariants",
    "invert",
    "lambda1_formula",
    "stress_test",
    "verify_eigenvectors",
    "volume",
]
