"""Computations in right-angled Coxeter groups: normal forms, subgroup
classifiers and searches, dual van Kampen diagrams and Cayley-graph geometry."""

from .graph import DefiningGraph, load_graph
from .words import NormalForm, normalize
from .subgroups import FinGenSubgroup, ParabolicSpec

__all__ = ["DefiningGraph", "load_graph", "NormalForm", "normalize", "FinGenSubgroup", "ParabolicSpec"]
