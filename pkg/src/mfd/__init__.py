"""Distortion calculus for finite-index inclusions of multifactor von
Neumann algebras: Perron data, Markov traces, distortion extension and
classification, tower dynamics, downward constructions, Morita
rescaling, and an exact loop model for finite-dimensional inclusions.
"""

from .core import (BipartiteGraph, InclusionData, PerronData, dual_functor_hom,
                   matrices_close, perron_data, standard_distortion,
                   validate_inclusion)
from .distortion import (DistortionMatrix, ExtremalityReport, GroupoidHom,
                         as_distortion, check_cycle_condition,
                         check_extension_condition, check_extremality,
                         extend_to_complete, extend_to_groupoid, factorize,
                         square_groupoid_potential)
from .errors import (ColumnNormalizationViolation, CycleViolation, Disconnected,
                     DisconnectedSupport, ExtensionConditionViolation,
                     InconsistentDimensions, InconsistentTraces, MFDError,
                     MissingDistortionEntry, MissingEntry, NegativeEntry,
                     NonConvergence, NotCentral, NotGroupoidHom, ParseError,
                     SupportMismatch, WrongAlgebraTag, ZeroPi)
from .loopbasis import (CommutingSquareData, DensitySequence, LoopAlgebraPair,
                        LoopElement, MatrixAlgebraPresentation,
                        basic_construction_square, build_loop_algebra,
                        central_transfer, cond_expectation_N0, density_sequence,
                        include_in_N1, matrix_algebra, nondegeneracy_check,
                        pimsner_popa_basis, relative_commutant, transfer_matrix,
                        verify_pp_identity)
from .markov import (ExpectationCoefficients, ExtremalInclusionReport,
                     FiniteDimMarkov, TraceMatrices, TracePair,
                     basic_construction_trace, check_extremal_inclusion,
                     check_super_extremal_findim, distortion_from_trace,
                     distortion_from_trace_matrix, expectation_coefficients,
                     finite_dim_markov, finite_dim_trace_matrices, markov_trace,
                     trace_matrices)
from .morita import (MoritaWeights, RealizabilityResult, morita_distortion,
                     realizability_check, rescale_to_standard)
from .numbers import (DEFAULT_TOLERANCE, Scalar, close, close_all, div,
                      format_scalar, is_exact, parse_scalar, to_float)
from .tower import (FeasibilityResult, HomogeneityReport, TowerLevel, TowerTrace,
                    basic_construction_distortion, downward_distortion,
                    downward_feasibility, homogeneity_report,
                    iterate_to_fixed_point, phi_step, relative_residual)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
