"""Combinatorics of pointed polyhedra from their vertex-facet incidences."""

from facetlab.boundedness import (
    BoundednessReport,
    Dim3,
    analyze_boundedness,
    detect_dim3,
    dimension_from_bounded_facet,
    facet_bounded,
    facet_boundedness,
    is_bounded,
)
from facetlab.circulant import (
    CirculantWitness,
    Realizability,
    circulant,
    circulant_realizability,
    is_simple_simplicial,
    recognize_circulant,
)
from facetlab.graph import (
    GraphClass,
    VertexGraph,
    classify_graph,
    column_graph,
    facet_subgraph,
    is_two_connected,
    vertex_graph,
)
from facetlab.incidence import (
    IncidenceMatrix,
    ValidationReport,
    facets_containing,
    parse_incidence,
    serialize_incidence,
    validate,
)
from facetlab.moebius import BOTTOM, TOP, MoebiusTable, euler_oracle, moebius_number, moebius_table
from facetlab.poset import VertexSetFamily, longest_chain, sub_family_below, vertex_set_closure
from facetlab.reconstruct import (
    Ray,
    ReconstructedFacePoset,
    face_poset_dim3,
    face_poset_simple,
    rays_simple,
)

__version__ = "0.1.0"
