"""Maslov-type indices, nullities and iteration identities for paths of
finite-dimensional complex symplectic matrices."""

from .brake import BrakeSymmetry, cheb_power, split_nullity_brake, split_nullity_power
from .chebyshev import brake_return_poly, cheb_t, cheb_u
from .crossings import crossing_form
from .decompositions import polar_decompose, random_symplectic
from .frames import (
    LagrangianFrame,
    ProductSpace,
    graph_frame,
    is_lagrangian,
    pair_index,
    product_lagrangian,
    product_space,
    random_lagrangian,
    reference_lagrangian,
    souriau_unitary,
    subspace_annihilator,
)
from .iterate import AIterationSpec, a_iterate, brake_iterate, delta_k, reference_path
from .maslov import (
    CONVENTION,
    ConstantLagrangianPath,
    CrossingRecord,
    GraphLagrangianPath,
    IndexReport,
    PushedLagrangianPath,
    graph_index,
    index_vs_N,
    is_positive_path,
    iz,
    maslov_pairs,
    maslov_pairs_crossingform,
    nullities,
    winding_pair,
)
from .paths import (
    ConcatPath,
    ConjugationPath,
    ConstantPath,
    ExpPath,
    PowerPath,
    ProductPath,
    ReparamPath,
    ReversePath,
    SampledPath,
    ScaledPath,
    SymplecticPath,
    path_from_dict,
)
from .spaces import (
    NormalizedSpace,
    SymplecticSpace,
    Tolerances,
    canonical_space,
    make_space,
    normalize_space,
)
from .verify import VerdictReport, run_trial, trial_seed

__version__ = "0.1.0"
