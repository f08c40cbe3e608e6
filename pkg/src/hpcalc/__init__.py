"""Exact computations with twisted de Rham complexes, matrix factorizations and
the localization boundary map in periodic cyclic homology."""
from __future__ import annotations

from .boundary import BoundaryClass, boundary, normalize_cycle, verify_boundary_via_fiber
from .derham import TwistedComplex, apply_D, dR, is_cycle
from .gca import (
    GradedElement,
    NonHomogeneous,
    NotDivisible,
    RingMismatch,
    RingSpec,
    degree,
    divide_exact,
    form_ring,
    format_element,
    mul,
    partial_t,
    polynomial_ring,
    substitute_zero,
    unit_inverse,
)
from .linhom import FiniteComplex, RationalMatrix, homology_dims, kernel_basis, rank, truncated_koszul_homology
from .mfkoszul import (
    KoszulModule,
    MatrixFactorization,
    canonical_contraction,
    ch0_mf,
    ch1_mf,
    ch1_unit,
    koszul_complex,
    phi_koszul_dual,
    trace_identity_check,
    verify_square,
)
from .report import Check
from .section3 import FiberElement, MComplex, NotInKernel, verify_keylemma

__version__ = "0.1.0"
