"""Flag complexes, Betti numbers over Z/2, and persistent homology of edge
orderings.

Persistence treats the edge ordering as a simplexwise filtration of the flag
complex on the complete vertex set: a simplex enters at the edge count of its
last boundary edge (vertices at count 0). Dimension-0 bars come from a
union-find replay; higher bars from left-to-right Z/2 column reduction of the
boundary matrices.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ResourceLimitError, ValidationError
from .geometry import FLOAT_FMT

__all__ = [
    "DEFAULT_SIMPLEX_CAP",
    "SimplicialComplex",
    "Barcode",
    "StableInterval",
    "vr_complex",
    "betti_numbers",
    "persistent_homology",
    "betti_curves",
    "betti_at_count",
    "stable_interval",
    "homology_persistence_fraction",
    "value_realizable_counts",
    "write_barcode_csv",
    "read_barcode_csv",
]

DEFAULT_SIMPLEX_CAP = 5_000_000


@dataclass(frozen=True)
class SimplicialComplex:
    """Simplices grouped by dimension.

    simplices[d] is an (S_d, d+1) int32 array, vertex ids ascending within each
    row. entry_counts[d] gives the edge count at which each simplex enters a
    filtration (all zeros for complexes built from a bare graph).
    """

    simplices: tuple
    entry_counts: tuple

    def __post_init__(self):
        if len(self.simplices) != len(self.entry_counts):
            raise ValidationError("simplices and entry_counts length mismatch")
        object.__setattr__(self, "simplices", tuple(self.simplices))
        object.__setattr__(self, "entry_counts", tuple(self.entry_counts))

    @property
    def max_dim(self):
        return len(self.simplices) - 1

    def n_simplices(self, dim=None):
        if dim is None:
            return sum(s.shape[0] for s in self.simplices)
        return self.simplices[dim].shape[0]


def vr_complex(graph, max_dim=2, simplex_cap=DEFAULT_SIMPLEX_CAP):
    """Flag (clique) complex of a graph up to the given dimension.

    Every (d+1)-clique becomes a d-simplex. Raises ResourceLimitError naming
    the running simplex count if the complex would exceed simplex_cap.
    """
    if max_dim < 0:
        raise ValidationError("max_dim must be >= 0")
    adj = graph.adjacency
    n = graph.n_vertices
    total = n
    if total > simplex_cap:
        raise ResourceLimitError(
            f"complex would hold at least {total} simplices (cap {simplex_cap})"
        )
    dims = [np.arange(n, dtype=np.int32).reshape(-1, 1)]
    if max_dim >= 1:
        iu, ju = np.nonzero(np.triu(adj, k=1))
        edges = np.column_stack([iu, ju]).astype(np.int32)
        total += edges.shape[0]
        if total > simplex_cap:
            raise ResourceLimitError(
                f"complex would hold at least {total} simplices (cap {simplex_cap})"
            )
        dims.append(edges)
    for d in range(2, max_dim + 1):
        prev = dims[d - 1]
        rows = []
        for simplex in prev:
            common = adj[simplex[0]].copy()
            for v in simplex[1:]:
                common &= adj[v]
            cands = np.where(common)[0]
            cands = cands[cands > simplex[-1]]
            if cands.size:
                block = np.empty((cands.size, d + 1), dtype=np.int32)
                block[:, :d] = simplex
                block[:, d] = cands
                total += cands.size
                if total > simplex_cap:
                    raise ResourceLimitError(
                        f"complex would hold at least {total} simplices "
                        f"(cap {simplex_cap})"
                    )
                rows.append(block)
        dims.append(
            np.vstack(rows) if rows else np.empty((0, d + 1), dtype=np.int32)
        )
    counts = tuple(np.zeros(s.shape[0], dtype=np.int64) for s in dims)
    return SimplicialComplex(simplices=tuple(dims), entry_counts=counts)


def _gf2_rank(bit_columns):
    """Rank over GF(2) of the matrix whose columns are python-int bitsets."""
    owner = {}
    rank = 0
    for bits in bit_columns:
        while bits:
            p = bits.bit_length() - 1
            other = owner.get(p)
            if other is None:
                owner[p] = bits
                rank += 1
                break
            bits ^= other
    return rank


def _boundary_bitsets(complex_, d):
    """Columns of the d-th boundary matrix as bitsets over (d-1)-simplex rows."""
    faces = complex_.simplices[d - 1]
    row_of = {tuple(s): i for i, s in enumerate(faces.tolist())}
    cols = []
    for s in complex_.simplices[d].tolist():
        bits = 0
        for drop in range(d + 1):
            facet = tuple(s[:drop] + s[drop + 1:])
            bits |= 1 << row_of[facet]
        cols.append(bits)
    return cols


def betti_numbers(complex_, up_to):
    """Betti numbers beta_0..beta_up_to of the complex over Z/2.

    beta_k = n_k - rank(boundary_k) - rank(boundary_{k+1}); when up_to equals
    the complex's top dimension the next boundary map is zero, i.e. the result
    is the Betti vector of the complex as given (truncated). Requesting more
    than the stored dimensions is an error.
    """
    if up_to < 0:
        raise ValidationError("up_to must be >= 0")
    if up_to > complex_.max_dim:
        raise ValidationError(
            f"complex holds dimensions up to {complex_.max_dim}; cannot compute "
            f"beta_{up_to} without that dimension's simplices"
        )
    ranks = {0: 0}
    for d in range(1, min(up_to + 1, complex_.max_dim) + 1):
        ranks[d] = _gf2_rank(_boundary_bitsets(complex_, d))
    betti = np.empty(up_to + 1, dtype=np.int64)
    for k in range(up_to + 1):
        betti[k] = complex_.n_simplices(k) - ranks[k] - ranks.get(k + 1, 0)
    return betti


@dataclass(frozen=True)
class Barcode:
    """Persistence bars of an edge ordering.

    Bars carry both count-level endpoints (edge counts; death E+1 marks a bar
    alive through the complete graph) and value-level endpoints (scale values;
    death +inf). pairs() reports the value-level multiset with zero-length
    bars dropped; count-level data drives snapshot/Betti-curve queries, where
    bar b is alive after M edges iff birth_count <= M < death_count.
    """

    n_vertices: int
    n_edges: int
    scale_kind: str
    up_to_dim: int
    dims: np.ndarray
    birth_counts: np.ndarray
    death_counts: np.ndarray
    birth_values: np.ndarray
    death_values: np.ndarray

    def __post_init__(self):
        for name, dtype in (
            ("dims", np.int64),
            ("birth_counts", np.int64),
            ("death_counts", np.int64),
            ("birth_values", np.float64),
            ("death_values", np.float64),
        ):
            arr = np.asarray(getattr(self, name), dtype=dtype)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_bars(self):
        return self.dims.shape[0]

    def pairs(self):
        """Value-level bars (dim, birth, death) with zero-length bars dropped."""
        keep = self.birth_values < self.death_values
        return list(
            zip(
                self.dims[keep].tolist(),
                self.birth_values[keep].tolist(),
                self.death_values[keep].tolist(),
            )
        )


def _complete_simplex_count(n, max_dim):
    return sum(math.comb(n, d + 1) for d in range(max_dim + 1))


def _require_complete(filtration):
    n = filtration.n_vertices
    expected = n * (n - 1) // 2
    if filtration.n_edges != expected:
        raise ValidationError(
            "persistence requires the complete pair ordering "
            f"({expected} edges for N={n}, got {filtration.n_edges})"
        )


def persistent_homology(filtration, max_dim=2, simplex_cap=DEFAULT_SIMPLEX_CAP):
    """Persistence bars of the flag filtration, dimensions 0..max_dim-1.

    Refuses (ResourceLimitError naming the count) when the number of simplices
    through max_dim exceeds simplex_cap.
    """
    if max_dim < 1:
        raise ValidationError("max_dim must be >= 1")
    _require_complete(filtration)
    n = filtration.n_vertices
    e = filtration.n_edges
    values = filtration.values
    total = _complete_simplex_count(n, max_dim)
    if total > simplex_cap:
        raise ResourceLimitError(
            f"filtration would hold {total} simplices through dimension "
            f"{max_dim} (cap {simplex_cap})"
        )

    dims, b_counts, d_counts, b_values, d_values = [], [], [], [], []

    def add_bar(dim, bc, dc):
        dims.append(dim)
        b_counts.append(bc)
        d_counts.append(dc)
        b_values.append(0.0 if bc == 0 else values[bc - 1])
        d_values.append(np.inf if dc > e else values[dc - 1])

    edges_i = np.ascontiguousarray(filtration.edges[:, 0])
    edges_j = np.ascontiguousarray(filtration.edges[:, 1])
    merge_ranks = _kernels.uf_merge_ranks(n, edges_i, edges_j)
    for r in merge_ranks:
        add_bar(0, 0, int(r) + 1)
    for _ in range(n - len(merge_ranks)):
        add_bar(0, 0, e + 1)

    if max_dim >= 2 and n >= 3:
        rank_matrix = np.zeros((n, n), dtype=np.int32)
        ranks = np.arange(e, dtype=np.int32)
        rank_matrix[edges_i, edges_j] = ranks
        rank_matrix[edges_j, edges_i] = ranks
        tri = _kernels.flag_triangles(rank_matrix)
        indptr = np.arange(0, 3 * (tri.shape[0] + 1), 3, dtype=np.int64)
        pairs = _kernels.reduce_z2(e, indptr, tri.reshape(-1))
        tri_entry = tri[:, 2]
        paired_edges = set()
        for p, t in pairs:
            paired_edges.add(int(p))
            bc = int(p) + 1
            dc = int(tri_entry[t]) + 1
            if bc != dc:
                add_bar(1, bc, dc)
        negative = set(int(r) for r in merge_ranks)
        for r in range(e):
            if r not in negative and r not in paired_edges:
                add_bar(1, r + 1, e + 1)
        if max_dim >= 3:
            _higher_bars(filtration, max_dim, add_bar)

    return Barcode(
        n_vertices=n,
        n_edges=e,
        scale_kind=filtration.scale_kind,
        up_to_dim=max_dim - 1,
        dims=np.asarray(dims, dtype=np.int64),
        birth_counts=np.asarray(b_counts, dtype=np.int64),
        death_counts=np.asarray(d_counts, dtype=np.int64),
        birth_values=np.asarray(b_values, dtype=np.float64),
        death_values=np.asarray(d_values, dtype=np.float64),
    )


def _higher_bars(filtration, max_dim, add_bar):
    """Bars in dimensions 2..max_dim-1 by generic boundary reduction.

    A single simplexwise order, (entry rank, vertex tuple) within each
    dimension, is used for every boundary matrix here, so the positive /
    negative classification stays consistent across dimensions. The
    dimension-2 matrix is reduced again in this order purely to classify
    triangles (its bars were already emitted by the fast path; count-level
    bar multisets are invariant to the tie refinement).
    """
    n = filtration.n_vertices
    e = filtration.n_edges
    rank_of_edge = {}
    for r, (i, j) in enumerate(filtration.edges.tolist()):
        rank_of_edge[(i, j)] = r

    def simplex_entry(vertices):
        return max(
            rank_of_edge[pair] for pair in itertools.combinations(vertices, 2)
        )

    def build_dim(d):
        simplices = []
        for vs in itertools.combinations(range(n), d + 1):
            simplices.append((simplex_entry(vs), vs))
        simplices.sort()
        return simplices

    def reduce_dim(cur, prev_index, n_rows, facet_dim):
        indptr = np.zeros(len(cur) + 1, dtype=np.int64)
        indices = np.empty(len(cur) * (facet_dim + 2), dtype=np.int32)
        pos = 0
        for ci, (_, vs) in enumerate(cur):
            facet_rows = sorted(
                prev_index[facet]
                for facet in itertools.combinations(vs, facet_dim + 1)
            )
            for fr in facet_rows:
                indices[pos] = fr
                pos += 1
            indptr[ci + 1] = pos
        return _kernels.reduce_z2(n_rows, indptr, indices)

    prev = build_dim(2)
    prev_entry = np.asarray([s[0] for s in prev], dtype=np.int64)
    prev_index = {s[1]: i for i, s in enumerate(prev)}
    # Classify triangles in this order: columns over edge-rank rows.
    edge_index = {
        tuple(edge): r for r, edge in enumerate(filtration.edges.tolist())
    }
    pairs2 = reduce_dim(prev, edge_index, e, 1)
    prev_negative = np.zeros(len(prev), dtype=bool)
    for _, c in pairs2:
        prev_negative[c] = True

    for d in range(3, max_dim + 1):
        cur = build_dim(d)
        pairs = reduce_dim(cur, prev_index, len(prev), d - 1)
        cur_entry = np.asarray([s[0] for s in cur], dtype=np.int64)
        paired_rows = set()
        for p, c in pairs:
            paired_rows.add(int(p))
            bc = int(prev_entry[p]) + 1
            dc = int(cur_entry[c]) + 1
            if bc != dc:
                add_bar(d - 1, bc, dc)
        for row in range(len(prev)):
            if not prev_negative[row] and row not in paired_rows:
                add_bar(d - 1, int(prev_entry[row]) + 1, e + 1)
        prev = cur
        prev_entry = cur_entry
        prev_index = {s[1]: i for i, s in enumerate(cur)}
        prev_negative = np.zeros(len(cur), dtype=bool)
        for _, c in pairs:
            prev_negative[c] = True


def betti_curves(barcode, up_to=None):
    """Betti vectors after every edge count: array (E+1, up_to+1).

    Row M holds (beta_0, ..., beta_up_to) of the flag complex on the first M
    edges (with all simplices whose boundary edges are present).
    """
    if up_to is None:
        up_to = barcode.up_to_dim
    if up_to > barcode.up_to_dim:
        raise ValidationError(
            f"barcode covers dimensions up to {barcode.up_to_dim}, "
            f"cannot report beta_{up_to}"
        )
    e = barcode.n_edges
    diff = np.zeros((e + 2, up_to + 1), dtype=np.int64)
    for dim, bc, dc in zip(
        barcode.dims, barcode.birth_counts, barcode.death_counts
    ):
        if dim > up_to:
            continue
        diff[bc, dim] += 1
        if dc <= e:
            diff[dc, dim] -= 1
    return np.cumsum(diff[: e + 1], axis=0)


def betti_at_count(barcode, m, up_to=None):
    curves = betti_curves(barcode, up_to)
    if m < 0 or m > barcode.n_edges:
        raise ValidationError(f"count must be in [0, {barcode.n_edges}]")
    return curves[m]


@dataclass(frozen=True)
class StableInterval:
    """Longest stretch of the edge ordering with a constant Betti vector.

    Candidate states are the proper prefixes M in {1, ..., E-1}; the terminal
    run (every ordering ends in the trivial homology of the complete graph) is
    excluded unless it is the only run. Length is measured as the fraction of
    the E edge additions whose states lie in the run; ties pick the earliest
    run. scale values (lo, hi] realize the run under strict-< thresholding.
    """

    betti: tuple
    scale_lo: float
    scale_hi: float
    fraction: float
    first_count: int
    last_count: int
    scale_kind: str

    def as_dict(self):
        return {
            "betti": list(self.betti),
            "scale_lo": self.scale_lo,
            "scale_hi": self.scale_hi,
            "fraction": self.fraction,
            "first_count": self.first_count,
            "last_count": self.last_count,
            "scale_kind": self.scale_kind,
        }


def stable_interval(barcode, filtration):
    """Longest constant-Betti stretch; see StableInterval."""
    e = barcode.n_edges
    if filtration.n_edges != e or filtration.n_vertices != barcode.n_vertices:
        raise ValidationError("barcode and filtration do not match")
    if e < 2:
        raise ValidationError("stable interval undefined for fewer than 2 edges")
    curves = betti_curves(barcode)
    rows = curves[1:e]  # states M = 1 .. E-1
    change = np.any(rows[1:] != rows[:-1], axis=1)
    starts = np.concatenate([[0], np.nonzero(change)[0] + 1])
    ends = np.concatenate([np.nonzero(change)[0], [rows.shape[0] - 1]])
    if len(starts) > 1:
        starts, ends = starts[:-1], ends[:-1]  # drop the terminal run
    lengths = ends - starts + 1
    best = int(np.argmax(lengths))  # argmax takes the earliest maximum
    a = int(starts[best]) + 1  # back to M units
    b = int(ends[best]) + 1
    values = filtration.values
    return StableInterval(
        betti=tuple(int(x) for x in rows[starts[best]]),
        scale_lo=float(values[a - 1]),
        scale_hi=float(values[b]),
        fraction=(b - a + 1) / e,
        first_count=a,
        last_count=b,
        scale_kind=barcode.scale_kind,
    )


def homology_persistence_fraction(
    filtration, target, simplex_cap=DEFAULT_SIMPLEX_CAP
):
    """Fraction of edge-addition states whose Betti vector equals target.

    target = (beta_0, ..., beta_{K-1}) fixes the homology dimensions checked.
    States M in {0..E} are counted and divided by E = N(N-1)/2, matching the
    clustering persistence convention.
    """
    target = tuple(int(x) for x in target)
    if len(target) < 1:
        raise ValidationError("target Betti vector must be non-empty")
    barcode = persistent_homology(
        filtration, max_dim=len(target), simplex_cap=simplex_cap
    )
    curves = betti_curves(barcode, up_to=len(target) - 1)
    matches = np.all(curves == np.asarray(target, dtype=np.int64), axis=1)
    return float(matches.sum()) / barcode.n_edges


def value_realizable_counts(filtration):
    """Edge counts M reachable by some strict-< scale threshold.

    M is realizable iff M == 0, M == E, or values[M-1] < values[M]; ties make
    the in-between prefixes invisible to any single scale value.
    """
    e = filtration.n_edges
    values = filtration.values
    counts = [0]
    for m in range(1, e):
        if values[m - 1] < values[m]:
            counts.append(m)
    if e > 0:
        counts.append(e)
    return np.asarray(counts, dtype=np.int64)


def write_barcode_csv(path, barcode):
    """Rows "dim,birth,death" (value level, zero-length bars dropped)."""
    with open(path, "w") as fh:
        for dim, birth, death in barcode.pairs():
            d = "inf" if np.isinf(death) else FLOAT_FMT % death
            fh.write(f"{dim},{FLOAT_FMT % birth},{d}\n")


def read_barcode_csv(path):
    """Parse bars back as (dims, births, deaths) arrays; deaths may be inf."""
    dims, births, deaths = [], [], []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ValidationError(f"bad barcode row: {line!r}")
            dims.append(int(parts[0]))
            births.append(float(parts[1]))
            deaths.append(float(parts[2]))
    return (
        np.asarray(dims, dtype=np.int64),
        np.asarray(births, dtype=np.float64),
        np.asarray(deaths, dtype=np.float64),
    )
