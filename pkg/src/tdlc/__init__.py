"""Invariants of totally disconnected locally compact groups computed on Cayley-Abels graphs.

Groups are given by finite models (tree groups, end stabilizers, finite
oracles, products) that produce exact balls and ball stabilizers; the
modular function, scale, local simple content and minimal-degree bounds are
computed from those.
"""
from .graphs import BallGraph, FiniteDigraph, FiniteGraph, GraphError, QuotientMap
from .lattice import PositiveRational, QPlusLattice
from .models import (AutPlus, BMUniversal, DirectedProduct, DirectedTree, EndStab, FiniteOracle, FullAut,
                     GroupModel, ModelError, ProductWithFinite, model_from_spec)
from .perm import PermGroup, SimpleId, composition_factors
from .report import RunConfig, run_report

__version__ = "0.1.0"

__all__ = [
    "AutPlus", "BMUniversal", "BallGraph", "DirectedProduct", "DirectedTree", "EndStab", "FiniteDigraph",
    "FiniteGraph", "FiniteOracle", "FullAut", "GraphError", "GroupModel", "ModelError", "PermGroup",
    "PositiveRational", "ProductWithFinite", "QPlusLattice", "QuotientMap", "RunConfig", "SimpleId",
    "composition_factors", "model_from_spec", "run_report",
]
