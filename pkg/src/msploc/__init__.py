"""Decorated localization graphs for Mixed-Spin-P fields on the (3,3) complete
intersection in P2 x P2: weights, flattening, virtual dimensions, the
irregular-vanishing reduction, and exhaustive small-case certification."""

from .enumeration import Caps, canonical_form, count_by_class, enumerate_flat_graphs, pure_loops
from .flatten import balance_oracle, flatten, is_T_balanced
from .graph import (
    DecoratedGraph, Edge, EdgeClass, Leg, Level, Monodromy, Rat, Vertex, classify,
    monodromy_vector, total_degree, total_genus, validate,
)
from .lg import LGIndex, lg_admissible_m, lg_vdim, potential_index_set
from .reduce import (
    Certificate, Verdict, certify_vanishing, certify_vanishing_nmsp, decouple, forget_legs,
    remove_strings, split_components, trim,
)
from .vdim import (
    chain_contribution, chi_fields, chi_mu_nu, dim_D, maximal_chains, vdim, vdim_breakdown,
)
from .weights import (
    edge_tangent_weights, linearization_exponent, orbifold_exponent, vertex_bundle_weights,
)

__version__ = "0.1.0"
