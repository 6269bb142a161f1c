"""Edge orderings (filtrations) and unweighted graphs built from distances.

The central object is the EdgeFiltration: every unordered pair (i, j) with a
scale value, sorted ascending. The continuous-k-nearest-neighbor ordering
assigns pair values d(i, j) / sqrt(rho_i * rho_j); thresholding it at delta
gives the graph that connects i, j whenever d(i, j) < delta * sqrt(rho_i rho_j).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .geometry import FLOAT_FMT, bandwidth_array, knn_bandwidth, validate_distance_matrix

__all__ = [
    "EdgeFiltration",
    "Graph",
    "cknn_filtration",
    "multiscale_filtration",
    "fixed_eps_filtration",
    "knn_graph",
    "graph_at_scale",
    "graph_at_count",
    "edge_count_at_scale",
    "write_edges_csv",
    "read_edges_csv",
]

RATIO_METHODS = ("cknn", "multiscale")
ALL_METHODS = RATIO_METHODS + ("fixed_eps",)


@dataclass(frozen=True)
class EdgeFiltration:
    """All N(N-1)/2 vertex pairs sorted ascending by scale value.

    edges : (E, 2) int32, each row (i, j) with i < j.
    values : (E,) float64, non-decreasing; ties are ordered by (i, j).
    method : "cknn", "multiscale" or "fixed_eps".

    The graph at scale s contains the edges with value strictly less than s;
    the graph at count M contains the first M edges.
    """

    n_vertices: int
    edges: np.ndarray
    values: np.ndarray
    method: str

    def __post_init__(self):
        if self.method not in ALL_METHODS:
            raise ValidationError(f"unknown filtration method {self.method!r}")
        edges = np.ascontiguousarray(np.asarray(self.edges, dtype=np.int32))
        values = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        if edges.ndim != 2 or edges.shape[1] != 2 or values.ndim != 1:
            raise ValidationError("edges must be (E, 2) and values (E,)")
        if edges.shape[0] != values.shape[0]:
            raise ValidationError("edges and values length mismatch")
        if edges.size and (edges.min() < 0 or edges.max() >= self.n_vertices):
            raise ValidationError("edge endpoint out of range")
        if np.any(edges[:, 0] >= edges[:, 1]):
            raise ValidationError("edges must satisfy i < j")
        if np.any(np.diff(values) < 0):
            raise ValidationError("filtration values must be non-decreasing")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValidationError("filtration values must be finite and non-negative")
        edges.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "values", values)

    @property
    def n_edges(self):
        return self.values.shape[0]

    @property
    def scale_kind(self):
        return "delta" if self.method in RATIO_METHODS else "epsilon"


@dataclass(frozen=True)
class Graph:
    """Undirected unweighted graph as a dense boolean adjacency matrix."""

    adjacency: np.ndarray

    def __post_init__(self):
        adj = np.asarray(self.adjacency, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValidationError("adjacency must be a square boolean matrix")
        if np.any(np.diagonal(adj)):
            raise ValidationError("adjacency diagonal must be empty (no self loops)")
        if not np.array_equal(adj, adj.T):
            raise ValidationError("adjacency must be symmetric")
        adj.setflags(write=False)
        object.__setattr__(self, "adjacency", adj)

    @property
    def n_vertices(self):
        return self.adjacency.shape[0]

    @property
    def n_edges(self):
        return int(np.count_nonzero(self.adjacency)) // 2


def _pair_values(d, values, method):
    n = d.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    order = np.lexsort((ju, iu, values))
    edges = np.column_stack([iu[order], ju[order]]).astype(np.int32)
    return EdgeFiltration(
        n_vertices=n, edges=edges, values=values[order], method=method
    )


def cknn_filtration(d, rho, method="cknn"):
    """Edge ordering by d(i, j) / sqrt(rho_i * rho_j).

    rho may be a BandwidthProfile (k-nearest-neighbor bandwidths give the
    classic continuous-kNN construction) or any positive per-point array
    (density-power bandwidths give the multi-scale variant).
    """
    d = validate_distance_matrix(d)
    if method not in RATIO_METHODS:
        raise ValidationError(f"ratio filtration method must be one of {RATIO_METHODS}")
    rho = bandwidth_array(rho, d.shape[0])
    iu, ju = np.triu_indices(d.shape[0], k=1)
    values = d[iu, ju] / np.sqrt(rho[iu] * rho[ju])
    return _pair_values(d, values, method)


def multiscale_filtration(d, rho):
    """cknn_filtration with the "multiscale" method tag (analytic bandwidths)."""
    return cknn_filtration(d, rho, method="multiscale")


def fixed_eps_filtration(d):
    """Edge ordering by raw distance (fixed-radius graphs)."""
    d = validate_distance_matrix(d)
    iu, ju = np.triu_indices(d.shape[0], k=1)
    return _pair_values(d, d[iu, ju], "fixed_eps")


def knn_graph(d, k, mode="or"):
    """k-nearest-neighbor graph.

    mode "or": connect when d(i, j) <= either endpoint's k-th neighbor
    distance. mode "and": require both (mutual kNN).
    """
    d = validate_distance_matrix(d)
    if mode not in ("or", "and"):
        raise ValidationError(f"mode must be 'or' or 'and', got {mode!r}")
    rho = knn_bandwidth(d, k).rho
    within = d <= rho[:, None]
    adj = (within | within.T) if mode == "or" else (within & within.T)
    np.fill_diagonal(adj, False)
    return Graph(adjacency=adj)


def _graph_from_edge_prefix(filtration, m):
    n = filtration.n_vertices
    adj = np.zeros((n, n), dtype=bool)
    e = filtration.edges[:m]
    adj[e[:, 0], e[:, 1]] = True
    adj[e[:, 1], e[:, 0]] = True
    return Graph(adjacency=adj)


def edge_count_at_scale(filtration, scale):
    """Number of edges with value strictly below the given scale."""
    if np.isnan(scale):
        raise ValidationError("scale must not be NaN")
    return int(np.searchsorted(filtration.values, scale, side="left"))


def graph_at_scale(filtration, scale):
    """Graph of all edges with value < scale (strict); scale=inf is complete."""
    return _graph_from_edge_prefix(filtration, edge_count_at_scale(filtration, scale))


def graph_at_count(filtration, m):
    """Graph of the first m edges in the ordering."""
    if not isinstance(m, (int, np.integer)) or isinstance(m, bool):
        raise ValidationError(f"edge count must be an integer, got {m!r}")
    if m < 0 or m > filtration.n_edges:
        raise ValidationError(
            f"edge count must satisfy 0 <= m <= {filtration.n_edges}, got {m}"
        )
    return _graph_from_edge_prefix(filtration, int(m))


def write_edges_csv(path, filtration):
    """Rows "i,j,value" in filtration order, 0-based endpoints."""
    with open(path, "w") as fh:
        for (i, j), v in zip(filtration.edges, filtration.values):
            fh.write(f"{i},{j},{FLOAT_FMT % v}\n")


def read_edges_csv(path, n_vertices, method):
    try:
        raw = np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
    except ValueError as exc:
        raise ValidationError(f"could not parse edges CSV {path}: {exc}") from exc
    if raw.shape[1] != 3:
        raise ValidationError("edges CSV must have rows i,j,value")
    return EdgeFiltration(
        n_vertices=n_vertices,
        edges=raw[:, :2].astype(np.int32),
        values=raw[:, 2],
        method=method,
    )
