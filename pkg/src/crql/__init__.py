"""Exact engine for the chirality-graded Kohn-Rossi calculus on Heisenberg groups.

Symbolic layers (exact scalars, bigraded covectors, the enveloping algebra,
operator assembly, fiber transform) decide every identity by exact equality;
the spectral layer wraps the assembled fiber blocks in a generalized
Hermitian eigenproblem to witness the gap / zero-mode dichotomy.
"""

from .exact import ExactScalar, IndexSet, complement, eps_sign, tilde_eps
from .forms import (
    FormBasis,
    FormVector,
    gamma,
    hodge_star,
    inner_product,
    interior_iota,
    wedge_eps,
)
from .heisenberg import EnvOp, complex_frame, z_field, zbar_field
from .polyop import APoly, PolyOp, RealPolynomial, hyperquadric_f, rigid_frame
from .levi import LeviReport, levi_heisenberg, levi_rigid
from .opmatrix import (
    OpMatrix,
    build_box,
    build_dbar,
    build_dbar_star,
    build_ql,
    graded_split,
    verify_prop31,
)
from .fiber import (
    GaussianFun,
    apply_gaussian,
    fiber_envop,
    inverse_fourier_check,
    kernel_witness_check,
    oscillator_decompose,
)
from .spectra import DictionaryBasis, assemble_fiber_matrix, fiber_index, spectrum
from .verify import RunConfig, verify_all

__all__ = [
    "APoly",
    "DictionaryBasis",
    "EnvOp",
    "ExactScalar",
    "FormBasis",
    "FormVector",
    "GaussianFun",
    "IndexSet",
    "LeviReport",
    "OpMatrix",
    "PolyOp",
    "RealPolynomial",
    "RunConfig",
    "apply_gaussian",
    "assemble_fiber_matrix",
    "build_box",
    "build_dbar",
    "build_dbar_star",
    "build_ql",
    "complement",
    "complex_frame",
    "eps_sign",
    "fiber_envop",
    "fiber_index",
    "gamma",
    "graded_split",
    "hodge_star",
    "hyperquadric_f",
    "inner_product",
    "interior_iota",
    "inverse_fourier_check",
    "kernel_witness_check",
    "levi_heisenberg",
    "levi_rigid",
    "oscillator_decompose",
    "rigid_frame",
    "spectrum",
    "tilde_eps",
    "verify_all",
    "verify_prop31",
    "wedge_eps",
    "z_field",
    "zbar_field",
]

__version__ = "0.1.0"
