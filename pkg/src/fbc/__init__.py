"""Fractional Brauer configurations: validation, walks, coverings,
and fundamental group presentations computed by two independent routes."""

from .core import (FBC, FBCClass, ConfigurationError, FbcError, RawConfig,
                   StdSeq, Violation, classify, f_degree, fbc_violations,
                   generate_group, nakayama, quotient, standard_sequence_ops,
                   sub_fbc, sub_intersection, sub_to_fbc, sub_union,
                   validate_fbc)
from .walks import (Homotopy, MsNormalForm, SpecialWalk, Walk, compose,
                    enumerate_closed_walks, homotopic, invert, ms_normal_form,
                    parse_walk, target, trivial_walk, winding)
from .coverings import (CoveringCert, FBCMorphism, MorphismError, check_covering,
                        check_morphism, covering_violations, deck_group,
                        is_regular, lift_morphism, lift_walk,
                        morphism_violations, universal_cover_truncated)
from .groups import (AbelianInvariants, GroupPresentation, abelianize,
                     groupoid_to_group, presentation, tietze_simplify)
from .quiver import (QuiverWithRelations, emit_dot, pi1_quiver, quiver_of,
                     reduce_presentation, simply_connected_check,
                     walk_to_quiver_walk)
from .pipeline import (check_admissible_union, pi1_bc, pi1_bc_both_routes,
                       pi1_bg, remove_angles, split_polygons)

__version__ = "0.1.0"
