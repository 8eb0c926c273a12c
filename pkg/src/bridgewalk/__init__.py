"""Grover walks on two simple graphs joined by one weak bridge edge."""

from .asymptotics import TheoryParams, mu_theory, mu_theory_equal_arcs, r_eff, tau_formula, tau_simulated
from .graphs import (BridgedGraph, Region, SimpleGraph, bridge_graphs, build_simple_graph,
                     complete_graph, cycle_graph, parse_graph_spec, path_graph, random_graph,
                     star_graph)
from .walk import GroverOperator, ProbabilitySeries, WalkState, evolve, initial_state, step

__all__ = [
    "BridgedGraph", "GroverOperator", "ProbabilitySeries", "Region", "SimpleGraph",
    "TheoryParams", "WalkState", "bridge_graphs", "build_simple_graph", "complete_graph",
    "cycle_graph", "evolve", "initial_state", "mu_theory", "mu_theory_equal_arcs",
    "parse_graph_spec", "path_graph", "r_eff", "random_graph", "star_graph", "step",
    "tau_formula", "tau_simulated",
]
