"""Pure pairs and induced subgraphs of long branch-length in sparse graphs:
graph core, detectors, structure validators, constructive procedures,
brute-force oracles and seeded generators."""
from .graph import Graph, GraphInputError, complement, induced_subgraph, read_graph, write_graph
from .search import Budget, BudgetError, SearchOutcome, Status

__version__ = "0.1.0"

__all__ = ["Graph", "GraphInputError", "complement", "induced_subgraph", "read_graph", "write_graph",
           "Budget", "BudgetError", "SearchOutcome", "Status", "__version__"]
