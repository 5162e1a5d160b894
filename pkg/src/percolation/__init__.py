"""Percolation centrality estimation by shortest-path sampling."""

from ._backend import available as available_backends
from ._backend import name as backend_name
from ._backend import set_backend, use
from .engine import (
    CentralityEstimates,
    DifferenceSums,
    brute_force_percolation,
    estimate_percolation,
    exact_percolation,
    exclusive_sums_by_vertex,
    percolation_differences,
    sample_size,
)
from .graph import (
    Graph,
    GraphFormatError,
    PercolationStates,
    RunConfig,
    assign_random_states,
    format_edge_list,
    generate_barabasi_albert,
    load_edge_list,
    load_states,
)
from .sssp import (
    ShortestPathDAG,
    UnreachableError,
    approximate_vertex_diameter,
    sample_shortest_path,
    shortest_path_dag,
)

__all__ = [
    "CentralityEstimates",
    "DifferenceSums",
    "Graph",
    "GraphFormatError",
    "PercolationStates",
    "RunConfig",
    "ShortestPathDAG",
    "UnreachableError",
    "approximate_vertex_diameter",
    "assign_random_states",
    "available_backends",
    "backend_name",
    "brute_force_percolation",
    "estimate_percolation",
    "exact_percolation",
    "exclusive_sums_by_vertex",
    "format_edge_list",
    "generate_barabasi_albert",
    "load_edge_list",
    "load_states",
    "percolation_differences",
    "sample_shortest_path",
    "sample_size",
    "set_backend",
    "shortest_path_dag",
    "use",
]
