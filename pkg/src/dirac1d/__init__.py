"""Bound states of a neutral Dirac fermion in 1+1 dimensions.

The fermion moves in the pseudoscalar potential ``V(x) = -hbar*c*q/|x| + V0``.
The package provides closed-form spectra and spinors (:mod:`dirac1d.analytic`),
the special functions they rest on (:mod:`dirac1d.specfun`), a
finite-difference cross-check (:mod:`dirac1d.oracle`) and a command-line
front end (:mod:`dirac1d.cli`).
"""

from .analytic import (
    BoundState,
    SpinorSample,
    assemble_spinor,
    bound_state,
    dirac_residual,
    energy,
    normalize,
    position_uncertainty,
    quantization,
    spectrum,
)
from .core import (
    CaseClass,
    EffectiveParams,
    PhysicalParams,
    PotentialParams,
    Regime,
    UnboundReason,
    classify_case,
    effective_params,
    exponents,
)
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BoundState",
    "CaseClass",
    "EffectiveParams",
    "PhysicalParams",
    "PotentialParams",
    "Regime",
    "SpinorSample",
    "UnboundReason",
    "assemble_spinor",
    "bound_state",
    "classify_case",
    "dirac_residual",
    "effective_params",
    "energy",
    "exponents",
    "normalize",
    "position_uncertainty",
    "quantization",
    "spectrum",
]
