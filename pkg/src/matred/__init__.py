"""Reducibility of matrix-valued measures and their orthogonal polynomials.

The symmetry space ``{T : T W(x) = W(x) T^*}`` of a weight detects every
block reduction; comparing it with the Hermitian part of the commutant
separates unitary from non-unitary reducibility.
"""

__version__ = "0.1.0"

from .commutant import (  # noqa: E402
    IRREDUCIBLE,
    NON_UNITARY,
    UNITARY_ONLY,
    ReducibilityReport,
    SymSpace,
    commutant_of_weight,
    gamma_sym_space,
    hermitian_part,
    star_invariant,
    sym_space_of_weight,
    verdict,
)
from .measure import GammaSequence, MatrixWeight  # noqa: E402
from .mop import MopData, monic_mops  # noqa: E402
from .reduction import ReductionResult, full_reduce  # noqa: E402

__all__ = [
    "IRREDUCIBLE", "NON_UNITARY", "UNITARY_ONLY", "GammaSequence", "MatrixWeight", "MopData",
    "ReducibilityReport", "ReductionResult", "SymSpace", "commutant_of_weight", "full_reduce",
    "gamma_sym_space", "hermitian_part", "monic_mops", "star_invariant", "sym_space_of_weight",
    "verdict",
]
