"""Soft truncation of the bosonic occupation basis with a coherent-tail
state, plus Gutzwiller and Bethe-lattice DMFT solvers for the
Bose-Hubbard model that exercise it."""

from .basis import (
    CTS,
    FOCK,
    OperatorSet,
    TruncationScheme,
    build_operators,
    cts,
    cts_moments,
    cts_norm_const,
    fock,
)
from .bdmft import (
    BdmftConfig,
    BdmftResult,
    optimize_alpha_outer,
    self_consistency_loop,
)
from .gutzwiller import GutzwillerConfig, GutzwillerResult, mott_boundary_j
from .impurity import AndersonParams, EDResult, NambuGreen
from .numerics import (
    EigenDecomposition,
    FixedPointResult,
    MultiMinResult,
    ScalarMinResult,
    eigh,
    fixed_point,
    minimize_multi,
    minimize_scalar,
)
from .sweep import ResultRecord, SweepSpec, detect_mott_boundary, run_sweep

__all__ = [
    "AndersonParams",
    "BdmftConfig",
    "BdmftResult",
    "EDResult",
    "GutzwillerConfig",
    "GutzwillerResult",
    "NambuGreen",
    "ResultRecord",
    "SweepSpec",
    "detect_mott_boundary",
    "mott_boundary_j",
    "optimize_alpha_outer",
    "run_sweep",
    "self_consistency_loop",
    "CTS",
    "FOCK",
    "OperatorSet",
    "TruncationScheme",
    "build_operators",
    "cts",
    "cts_moments",
    "cts_norm_const",
    "fock",
    "EigenDecomposition",
    "FixedPointResult",
    "MultiMinResult",
    "ScalarMinResult",
    "eigh",
    "fixed_point",
    "minimize_multi",
    "minimize_scalar",
]

__version__ = "0.1.0"
