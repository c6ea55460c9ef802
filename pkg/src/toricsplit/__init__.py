"""Diagonal splittings of toric varieties: decision procedure, explicit maps, brute-force oracle."""

from .errors import (
    EmptyPolytopeError,
    EnumerationTooLarge,
    FanError,
    IncompleteFanError,
    NotDiagonallySplitError,
    NotRegularError,
    ToricSplitError,
    UnboundedPolytopeError,
)
from .fan import Completeness, Cone, Fan, build_fan, builtin, hirzebruch, load_fan, power_fan, product_fan, projective_space
from .lattice import CosetClass, FractionalPoint, coset_class, enumerate_classes, pairing
from .polytope import (
    HPolytope,
    IntegerBox,
    anticanonical_polytope,
    bounding_box,
    diagonal_splitting_polytope,
    divisor_polytope,
    interior_points,
    lattice_points,
)
from .splitting import (
    LaurentPolynomial,
    NonSplitWitness,
    SplitCertificate,
    SplittingMap,
    apply,
    canonical_splitting,
    decide_by_enumeration,
    diagonal_splitting,
    is_diagonally_split,
    make_splitting,
    restrict_semidiagonal,
    semidiagonal_splitting,
    split_q_scan,
    splitting_basis,
    telescoping_splitting,
)

__version__ = "0.1.0"
