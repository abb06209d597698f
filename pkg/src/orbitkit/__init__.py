"""Exact decision procedures for orbit problems over free and free-abelian groups."""

from .decision import SCHEMA, CapacityError, Decision, InputError, OrbitKitError
from .extension import GElement, ZnByZ, action_subgroup_od, cp_znbyz
from .matrixorbit import OrbitQuery, classify_gl2, orbit_coset_decide, orbit_equality_decide, power
from .stallings import (
    StallingsGraph,
    build_subgroup_graph,
    enumerate_subgroup_elements,
    member,
    subgroup_basis,
)
from .whitehead import (
    Automorphism,
    MoveSequence,
    WhiteheadMove,
    aut_orbit_decide,
    contains_primitive_bounded,
    cyclic_od_bounded,
    is_primitive,
    sod_aut_bounded,
    whitehead_minimize,
)
from .words import Word, conjugacy_decide, cyclic_reduce, parse_word, word_root
from .zlattice import (
    Lattice,
    content,
    hnf,
    lattice_member,
    order_mod,
    quotient_exponent,
    root_abelian,
    snf,
    sod_gl,
    tcp_abelian,
)

__version__ = "0.1.0"
