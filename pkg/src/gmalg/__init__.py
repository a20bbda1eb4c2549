"""Exact construction and analysis of generalized matrix algebras.

The package builds block algebras from Morita-context data, checks the
context axioms mechanically, computes centers and derivation-type spaces
over exact scalars (rationals or odd prime fields), and decomposes n-Lie
derivations into a nested-bracket extremal part plus a centrally-valued
remainder, verifying every claimed property instead of assuming it.
"""

from .algebra_core import (BilinearTable, Element, StructureAlgebra,
                           commutator_span, is_commutative, matrix_algebra,
                           matrix_product_table, validate_algebra)
from .decompose import (Decomposition, ExtremalExistence, UniquenessProbe,
                        VerificationReport, build_extremal, decompose,
                        double_bracket_annihilator, extract_seed,
                        extremal_exists, probe_seed_uniqueness,
                        seed_annihilates_commutators, verify_decomposition)
from .errors import (BudgetExceededError, CenterStructureError,
                     DimensionMismatchError, ExtremalPreconditionError,
                     FieldMismatchError, GmalgError, InvalidContextError,
                     LieLeibnizError, SpecFileError)
from .exact_linear import (FieldSpec, Matrix, Subspace, kernel_basis,
                           kernel_of, rref, solve_particular)
from .gma import (GMAlgebra, MoritaContext, PierceParts, assemble,
                  generate_builtin, pairing_image_mn, pairing_image_nm,
                  pierce_project, validate_context)
from .multilinear import (LeibnizWitness, MultilinearMap, PredicateResult,
                          is_centrally_valued, is_n_derivation,
                          is_n_lie_derivation, is_permuting, maps_span,
                          n_lie_derivation_space, n_lie_derivation_space_direct,
                          swap_identity_check)
from .structure_analysis import (CenterData, CheckStatus, HypothesisReport,
                                 PairSpaces, all_derivations_inner, center,
                                 center_data, check_hypotheses,
                                 derivation_space, has_nonzero_central_ideal,
                                 inner_derivation_space, lie_derivation_space,
                                 pair_spaces, torsion_action_check)

__version__ = "0.1.0"
