"""Approximate dynamic global minimum cut for unweighted multigraphs."""
from .graph import Cut, DynamicGraph, GraphError, parse_graph, parse_stream
from .hierarchy import ABOVE_MAX, BELOW_MIN, VALUE, Hierarchy, InstanceAnswer
from .master import MasterState, QueryResult
from .params import Params

__all__ = [
    "ABOVE_MAX", "BELOW_MIN", "VALUE", "Cut", "DynamicGraph", "GraphError", "Hierarchy",
    "InstanceAnswer", "MasterState", "Params", "QueryResult", "parse_graph", "parse_stream",
]
__version__ = "0.1.0"
