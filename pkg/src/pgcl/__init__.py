"""pgcl: a desk-scale lab for p-groups with derived subgroup of order p.

Builds small finite groups as explicit tables, computes Schur multipliers by
exact integral homology of the normalized bar complex, decides capability via
the epicenter order criterion, and verifies the structure classification of
the class |G'| = p with G/G' elementary abelian.
"""

from .abelian import AbelianInvariants
from .construct import central_product, elementary_abelian, extraspecial
from .groups import (
    Group,
    Subgroup,
    abelian_basis,
    abelian_invariants,
    center,
    cyclic,
    derived_subgroup,
    direct_product,
    frattini,
    is_central,
    is_normal,
    make_group,
    quotient,
    subgroup_generated,
)
from .isomorphism import find_isomorphism, is_isomorphic

__all__ = [
    "AbelianInvariants",
    "Group",
    "Subgroup",
    "abelian_basis",
    "abelian_invariants",
    "center",
    "central_product",
    "cyclic",
    "derived_subgroup",
    "direct_product",
    "elementary_abelian",
    "extraspecial",
    "find_isomorphism",
    "frattini",
    "is_central",
    "is_isomorphic",
    "is_normal",
    "make_group",
    "quotient",
    "subgroup_generated",
]

__version__ = "0.1.0"
