"""Exact chain-level models of polyhedral products, retractile diagrams and
diagonal arrangements, with homology checks of their suspension splittings."""

from .chains import ChainComplex, Group, Homology, homology, reduced_homology, smith_normal_form
from .complexes import SimplicialComplex, from_facets, full_subcomplex, normalize_hypergraph, skeleton
from .report import HypothesisError, Report

__version__ = "0.1.0"

__all__ = [
    "ChainComplex",
    "Group",
    "Homology",
    "HypothesisError",
    "Report",
    "SimplicialComplex",
    "from_facets",
    "full_subcomplex",
    "homology",
    "normalize_hypergraph",
    "reduced_homology",
    "skeleton",
    "smith_normal_form",
]
