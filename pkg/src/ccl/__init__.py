"""ccl: chamber geometry of finite reflection groups.

Builds the supported irreducible reflection groups, computes relative
angle measures of the cones attached to their chambers (exactly up to
dimension 3, by seeded Monte Carlo above), and verifies the chamber-face
angle identities with exact integer right-hand sides.
"""

__version__ = "0.1.0"

from .angles import AngleEstimate, AngleMethod, McConfig, kernel_backend, measure, mc_fraction
from .cones import (Membership, SimplicialCone, chamber, direct_sum, dual, face,
                    image_cone, map_cone, membership, quotient, quotient_dual)
from .errors import (CacheError, CclError, DegenerateConeError,
                     FeatureDisabledError, GenericityError,
                     GroupTooLargeError, InvalidArgumentError,
                     NonFiniteSystemError, SingularMatrixError,
                     UnsupportedGroupError)
from .groups import (Group, GroupElement, Subgroup, enumerate_group,
                     fixed_space_dim, group_from_perm_stack,
                     normalizer_of_span, parabolic_subgroup, regular_count,
                     solomon_check, subspace_orbits)
from .linalg import (DEFAULT_TOL, Subspace, ToleranceConfig, kernel_dimension,
                     orthogonal_projector, solve_linear)
from .roots import (SUPPORTED_TYPES, GroupType, RootSystem, build,
                    fundamental_weights, generate_roots)
from .verify import (SUITE_IDENTITIES, GenericPointSampler,
                     VerificationReport, run_suite, verify_class_sum,
                     verify_covering_count, verify_curious,
                     verify_equiv_measure, verify_face_decomposition,
                     verify_face_oplus_covering, verify_main,
                     verify_parabolic_quotient, verify_waldspurger_partition)
