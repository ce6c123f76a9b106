"""Linear canonical relations, the circle maps rho / rho^2 / rho-hat and extended mean indices."""
from .errors import *  # noqa: F401,F403
from .linalg import (
    RANK_TOL,
    Subspace,
    SymplecticSpace,
    TwistedSpace,
    check_symplectic,
    intersect,
    omega_complement,
    orthonormalize,
    projector_distance,
    random_symplectic,
    subspace_sum,
)
from .relations import (
    LinearRelation,
    PairInvariants,
    RelationDecomposition,
    compose,
    decompose,
    extended_graph_part,
    from_graph,
    identity_relation,
    in_exceptional_set,
    power,
    reverse,
)
from .spectral import SpectralClassification, classify_spectrum, rho, rho_hat, rho_squared

__version__ = "0.1.0"
