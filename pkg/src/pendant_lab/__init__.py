"""pendant-lab: a desk-scale laboratory for pendant appearances,
structured graph classes, exact samplers and component limit laws."""

__version__ = "0.1.0"

from .graphs import Graph, Edge, from_edges, components, bridges, add_edge, delete_edge
from .canon import CanonicalForm, RootedGraph, canonical_form, is_isomorphic, aut, aut_rooted, root_orbits
from .frag import FragDecomposition, frag_decompose, frag_restricted, cross, kappa, kappa_of, kappa_in, kappa_plus
from .pendant import (
    PendantAppearance,
    VertexPendantAppearance,
    pend_rooted,
    pend_unrooted,
    pend_total,
    vpend,
    plus_root,
    attach_pendant,
    detach_pendant,
    kill_set,
)
from .classes import GraphClass, MinorSpec, has_minor, minor_closed_class, builtin

__all__ = [name for name in dir() if not name.startswith("_")]
