"""lplab: a numerical laboratory for convolution operators on finite groups.

Builds finite groups from Cayley tables, materializes convolution and
crossed-product operators as dense matrices, certifies their p->p operator
norms from below (witness vectors) and above (interpolation bounds), and
checks the structural identities those norms satisfy: duality under the
coefficient involution, monotonicity and log-convexity of the norm curve,
subgroup isometry, quotient contraction, the abelian Fourier picture, and
the matrix-unit presentation of the translation crossed product.
"""

__version__ = "0.1.0"

from .algebra import GroupAlgebraElement, convolve, embed_subgroup, l1_norm, push_quotient, sharp, transport_op
from .analysis import (DEFAULT_GRID, NormCurve, check_abelian_selfduality, check_herz_monotone,
                       check_log_convexity, check_quotient_contraction, check_sharp_duality,
                       check_subgroup_isometry, norm_curve, witness_search)
from .crossed import CrossedCoefficients, check_mnp_isometry, verify_matrix_units, verify_spatiality
from .gelfand import CharacterTable, characters, check_gelfand_sandwich, fourier
from .groups import (FiniteGroup, GroupError, SubgroupHandle, direct_product, make_cyclic,
                     make_dihedral, make_quaternion, make_symmetric, opposite,
                     parse_group_spec, quotient, subgroup)
from .operators import (OperatorMatrix, averaging_projection, coset_block_structure,
                        crossed_matrix_unit, crossed_operator, quotient_compression,
                        regular_matrix)
from .pnorm import (EstimatorConfig, PNormEstimate, bruteforce_pnorm, conjugate_exponent,
                    dual_vector, estimate_pnorm, exact_norm, interpolation_upper, vec_pnorm)
from .reporting import CheckReport

__all__ = [name for name in dir() if not name.startswith("_")]
