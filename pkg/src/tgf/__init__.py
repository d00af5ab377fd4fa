"""Exact spectral moments and operator-norm estimates for generator sums.

For a finite set Y in a group with decidable word problem (Thompson's F,
free groups, lattices), this package computes the exact integer sequences
attached to h = sum(Y) -- ladder 2-norms, reduced and cyclic identity-word
counts, moments of h*h -- and turns the moments into certified norm lower
bounds, extrapolated norm estimates, and spectral density reconstructions.
"""
from .density import (
    DensityCurve,
    LegendreExpansion,
    evaluate_curve,
    free_density,
    free_density_curve,
    free_moment_vector,
    project_density,
    tail_average,
)
from .errors import (
    CorruptionError,
    NumericError,
    ResourceError,
    UsageError,
    VerificationError,
)
from .groups import (
    CanonicalElement,
    FreeGroup,
    GeneratorLetter,
    GroupBackend,
    Lattice,
    ThompsonF,
    TreePair,
    Word,
    reduce_tree_pair,
)
from .kernel import IMPLEMENTATION as KERNEL_IMPLEMENTATION
from .ladder import (
    GeneratorSet,
    LadderRun,
    MultiplicityVector,
    build_ladder,
    case1,
    case2,
    custom_f_set,
    eta_direct,
    free_set,
    ladder_levels,
    lattice_set,
)
from .sequences import (
    SequenceTable,
    brute_force_sequences,
    cogrowth_diagnostics,
    compute_table,
    group_ring_check,
    m_free,
    moebius_verify,
    table_from_ladder,
)
from .spectral import (
    FitParams,
    HankelLadder,
    JacobiCoefficients,
    MomentVector,
    NormBoundsRow,
    bounds_table,
    fit_extrapolation,
    gamma_cogrowth,
    hankel_ladder,
    jacobi_coefficients,
    lambda_max,
)

__version__ = "0.1.0"
