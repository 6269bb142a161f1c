"""Connected components, component transitions, and binary-search clustering.

Given an edge ordering, the number of connected components is a non-increasing
step function of the edge count M. Binary search over M finds the largest
prefix with at least a requested number of components in O(log E) component
queries instead of a linear scan.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ValidationError
from .graphs import graph_at_count

__all__ = [
    "ComponentLabeling",
    "TransitionSequence",
    "UnionFind",
    "connected_components",
    "component_transitions",
    "components_at_count",
    "binary_search_clusters",
    "clustering_persistence_fraction",
    "labels_equal_as_partitions",
]


@dataclass(frozen=True)
class ComponentLabeling:
    """Vertex -> component labels; each label is the smallest vertex index in
    its component, so labelings are canonical and directly comparable."""

    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @property
    def n_components(self):
        return int(np.unique(self.labels).size)

    @property
    def n_vertices(self):
        return self.labels.shape[0]


@dataclass(frozen=True)
class TransitionSequence:
    """Edge counts at which the component count changes.

    counts[t] is the number of edges after which the component count becomes
    components[t]; components is strictly decreasing. The implicit first state
    is (0, n_vertices). The component count after any M edges is recovered by
    components_at_count.
    """

    n_vertices: int
    n_edges: int
    counts: np.ndarray
    components: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        comps = np.asarray(self.components, dtype=np.int64)
        if counts.shape != comps.shape or counts.ndim != 1:
            raise ValidationError("counts and components must be 1-D and equal length")
        if np.any(np.diff(counts) <= 0) or np.any(np.diff(comps) >= 0):
            raise ValidationError(
                "transition counts must increase and component counts decrease"
            )
        counts.setflags(write=False)
        comps.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "components", comps)


class UnionFind:
    """Disjoint sets over n elements with path halving and union by size."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n
        self.n_components = n

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        """Merge the sets of a and b; returns True if they were distinct."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.n_components -= 1
        return True

    def canonical_labels(self):
        """Label every element with the smallest element of its set."""
        n = len(self.parent)
        roots = np.fromiter((self.find(x) for x in range(n)), dtype=np.int64, count=n)
        smallest = np.full(n, n, dtype=np.int64)
        np.minimum.at(smallest, roots, np.arange(n, dtype=np.int64))
        return smallest[roots]


def connected_components(graph):
    """Component labeling by iterative depth-first search.

    Scanning start vertices in ascending order makes each component's label its
    smallest vertex index.
    """
    adj = graph.adjacency
    n = graph.n_vertices
    labels = np.full(n, -1, dtype=np.int64)
    for start in range(n):
        if labels[start] >= 0:
            continue
        labels[start] = start
        stack = [start]
        while stack:
            v = stack.pop()
            nbrs = np.where(adj[v] & (labels < 0))[0]
            labels[nbrs] = start
            stack.extend(nbrs.tolist())
    return ComponentLabeling(labels=labels)


def _transitions_unionfind(filtration):
    merge_ranks = _kernels.uf_merge_ranks(
        filtration.n_vertices,
        np.ascontiguousarray(filtration.edges[:, 0]),
        np.ascontiguousarray(filtration.edges[:, 1]),
    )
    n = filtration.n_vertices
    counts = merge_ranks + 1
    components = n - np.arange(1, len(merge_ranks) + 1, dtype=np.int64)
    return TransitionSequence(
        n_vertices=n, n_edges=filtration.n_edges, counts=counts, components=components
    )


def _components_by_dfs(filtration, m):
    return connected_components(graph_at_count(filtration, int(m))).n_components


def _transitions_bisect(filtration):
    """Transitions located by repeated binary search with DFS component counts."""
    n = filtration.n_vertices
    e = filtration.n_edges
    counts, comps = [], []
    final = _components_by_dfs(filtration, e)
    current = n
    lo = 0
    while current > final:
        # Largest M with component count still equal to `current`; the next
        # transition happens at M+1.
        target = current - 1
        left, right = lo, e
        # invariant: comps(left) > target, comps(right) <= target
        while left < right - 1:
            mid = (left + right) // 2
            if _components_by_dfs(filtration, mid) > target:
                left = mid
            else:
                right = mid
        new_count = _components_by_dfs(filtration, right)
        counts.append(right)
        comps.append(new_count)
        current = new_count
        lo = right
    return TransitionSequence(
        n_vertices=n,
        n_edges=e,
        counts=np.asarray(counts, dtype=np.int64),
        components=np.asarray(comps, dtype=np.int64),
    )


def component_transitions(filtration, method="unionfind"):
    """All (edge count, component count) change points of an edge ordering.

    method "unionfind" replays edges through incremental union-find;
    "bisect" locates each transition by binary search over DFS component
    counts. Both produce identical sequences.
    """
    if method == "unionfind":
        return _transitions_unionfind(filtration)
    if method == "bisect":
        return _transitions_bisect(filtration)
    raise ValidationError(f"unknown transitions method {method!r}")


def components_at_count(transitions, m):
    """Component count after the first m edges."""
    if m < 0 or m > transitions.n_edges:
        raise ValidationError(
            f"edge count must satisfy 0 <= m <= {transitions.n_edges}, got {m}"
        )
    pos = int(np.searchsorted(transitions.counts, m, side="right"))
    if pos == 0:
        return int(transitions.n_vertices)
    return int(transitions.components[pos - 1])


def binary_search_clusters(filtration, c_target):
    """Largest edge count whose prefix graph has at least c_target components.

    Runs the bisection loop L=0, R=E; M=floor((L+R)/2); keep M as the new L
    when the DFS component count is >= c_target, else as the new R. Returns
    (edge_count, labeling at that count). The result equals the linear-scan
    argmax because the component count is non-increasing in the edge count.
    """
    n = filtration.n_vertices
    if not isinstance(c_target, (int, np.integer)) or isinstance(c_target, bool):
        raise ValidationError(f"c_target must be an integer, got {c_target!r}")
    if c_target < 2 or c_target > n:
        raise ValidationError(f"c_target must satisfy 2 <= c <= N = {n}, got {c_target}")
    left, right = 0, filtration.n_edges
    if _components_by_dfs(filtration, left) < c_target:
        # Unreachable for valid c_target (the empty graph has N components);
        # kept for the documented degenerate contract.
        return 0, connected_components(graph_at_count(filtration, 0))
    if _components_by_dfs(filtration, right) >= c_target:
        left = right
    while left < right - 1:
        mid = (left + right) // 2
        if _components_by_dfs(filtration, mid) >= c_target:
            left = mid
        else:
            right = mid
    return left, connected_components(graph_at_count(filtration, left))


def labels_equal_as_partitions(a, b):
    """True when two label vectors induce the same partition of indices."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    # Canonicalize both: map each label to the smallest index carrying it.
    def canon(x):
        _, first, inv = np.unique(x, return_index=True, return_inverse=True)
        order = np.argsort(first)
        rank = np.empty_like(order)
        rank[order] = np.arange(len(order))
        return rank[inv]

    return bool(np.array_equal(canon(a), canon(b)))


def clustering_persistence_fraction(filtration, truth_labels):
    """Fraction of edge-addition states whose partition equals the truth.

    States are the edge counts M in {0, ..., E}; the returned fraction is
    (last matching M - first matching M + 1) / E, or 0.0 when the partition
    never matches. (Merges only coarsen the partition, so the matching states
    form one contiguous window; the all-singletons truth matches at M=0.)
    The denominator is E = N(N-1)/2, the number of edge additions.
    """
    truth = np.asarray(truth_labels)
    n = filtration.n_vertices
    e = filtration.n_edges
    if truth.shape != (n,):
        raise ValidationError(f"truth labels must have shape ({n},)")
    if e == 0:
        raise ValidationError("filtration has no edges")
    c = int(np.unique(truth).size)

    uf = UnionFind(n)
    edges = filtration.edges
    merge_ranks = []
    for r in range(e):
        if uf.n_components == c:
            break
        if uf.union(int(edges[r, 0]), int(edges[r, 1])):
            merge_ranks.append(r)
    if uf.n_components != c:
        return 0.0
    # First M with c components: 0 if the truth is all singletons, else one
    # past the merge that reached c.
    first = merge_ranks[-1] + 1 if merge_ranks else 0
    if not labels_equal_as_partitions(uf.canonical_labels(), truth):
        return 0.0
    # Last M with c components: the rank of the next merge (that edge is the
    # first prefix where the count has dropped), or E if no merge remains.
    last = e
    for r in range(first, e):
        if uf.union(int(edges[r, 0]), int(edges[r, 1])):
            last = r
            break
    return (last - first + 1) / e
