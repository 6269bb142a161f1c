"""Pure-Python fallbacks for the hot kernels.

Same contracts as the compiled versions in ``_speedups``; selected at import
time by ``_kernels`` when the extension is unavailable or disabled.
"""

import numpy as np


def uf_merge_ranks(n_vertices, edges_i, edges_j):
    """Replay edges through a union-find and report which ones merged.

    Parameters
    ----------
    n_vertices : int
    edges_i, edges_j : int arrays of equal length, endpoints in insertion order.

    Returns
    -------
    int64 array of the 0-based positions of edges whose insertion reduced the
    component count, in increasing order.
    """
    parent = list(range(n_vertices))
    size = [1] * n_vertices

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    merges = []
    for r in range(len(edges_i)):
        a = find(int(edges_i[r]))
        b = find(int(edges_j[r]))
        if a != b:
            if size[a] < size[b]:
                a, b = b, a
            parent[b] = a
            size[a] += size[b]
            merges.append(r)
    return np.asarray(merges, dtype=np.int64)


def flag_triangles(rank_matrix):
    """Boundary triples for every triangle on the complete vertex set.

    ``rank_matrix[i, j]`` is the position of edge {i, j} in the sorted edge
    ordering. Returns an int32 array of shape (C(n,3), 3): each row holds the
    three boundary-edge ranks sorted ascending, so row[2] is the rank of the
    edge whose insertion completes the triangle. Rows are sorted by
    (row[2], row[1], row[0]).
    """
    n = rank_matrix.shape[0]
    blocks = []
    for i in range(n - 2):
        row_i = rank_matrix[i]
        for j in range(i + 1, n - 1):
            ks = np.arange(j + 1, n)
            trip = np.empty((len(ks), 3), dtype=np.int32)
            trip[:, 0] = rank_matrix[i, j]
            trip[:, 1] = row_i[ks]
            trip[:, 2] = rank_matrix[j, ks]
            blocks.append(trip)
    if not blocks:
        return np.empty((0, 3), dtype=np.int32)
    tri = np.vstack(blocks)
    tri.sort(axis=1)
    order = np.lexsort((tri[:, 0], tri[:, 1], tri[:, 2]))
    return np.ascontiguousarray(tri[order])


def reduce_z2(n_rows, indptr, indices):
    """Left-to-right column reduction of a Z/2 matrix.

    Columns are given CSC-style: column c holds rows
    ``indices[indptr[c]:indptr[c+1]]`` (strictly ascending). A column is
    repeatedly XORed with the stored column owning its current pivot (largest
    remaining row) until it is empty or claims a fresh pivot.

    Returns an int64 array of shape (P, 2): rows (pivot_row, column) in
    increasing column order. The pairing is canonical for a fixed column order.
    """
    # Columns are python-int bitsets: XOR is ^, the pivot is bit_length()-1.
    owner_bits = {}
    pairs = []
    n_cols = len(indptr) - 1
    for c in range(n_cols):
        bits = 0
        for r in indices[indptr[c]:indptr[c + 1]]:
            bits |= 1 << int(r)
        while bits:
            p = bits.bit_length() - 1
            other = owner_bits.get(p)
            if other is None:
                owner_bits[p] = bits
                pairs.append((p, c))
                break
            bits ^= other
    if not pairs:
        return np.empty((0, 2), dtype=np.int64)
    return np.asarray(pairs, dtype=np.int64)
