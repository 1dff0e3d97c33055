"""Computations in the finite fragment of the category of reflexive directed graphs."""

from .core import (
    BudgetExceeded,
    HomSet,
    RGraph,
    RGraphMorphism,
    ShapeError,
    ValidationError,
    complete,
    compose,
    count_hom,
    discrete,
    edge_graph,
    empty_graph,
    hom,
    identity,
    is_isomorphic,
    k2_graph,
    make_graph,
    omega_graph,
    terminal_graph,
    validate_morphism,
    validate_rgraph,
)
from .kernel import BACKEND

__version__ = "0.1.0"
