# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: union-find replay, flag-triangle enumeration and
Z/2 column reduction. Contracts match ``_kernels_py`` exactly."""

import numpy as np

cimport numpy as cnp
from libcpp.vector cimport vector

cnp.import_array()


cdef int _find(vector[int]& parent, int x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def uf_merge_ranks(int n_vertices, const cnp.int32_t[::1] edges_i, const cnp.int32_t[::1] edges_j):
    """Positions of edges whose insertion merged two components."""
    cdef vector[int] parent
    cdef vector[int] size
    cdef Py_ssize_t n_edges = edges_i.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(n_edges, dtype=np.int64)
    cdef Py_ssize_t n_merges = 0
    cdef Py_ssize_t r
    cdef int a, b, tmp

    parent.resize(n_vertices)
    size.resize(n_vertices)
    for a in range(n_vertices):
        parent[a] = a
        size[a] = 1
    with nogil:
        for r in range(n_edges):
            a = _find(parent, edges_i[r])
            b = _find(parent, edges_j[r])
            if a != b:
                if size[a] < size[b]:
                    tmp = a
                    a = b
                    b = tmp
                parent[b] = a
                size[a] += size[b]
                out[n_merges] = r
                n_merges += 1
    return out[:n_merges].copy()


def flag_triangles(const cnp.int32_t[:, ::1] rank_matrix):
    """Sorted boundary-edge-rank triples for all triangles; see _kernels_py."""
    cdef Py_ssize_t n = rank_matrix.shape[0]
    cdef Py_ssize_t n_tri = n * (n - 1) * (n - 2) // 6
    cdef cnp.ndarray[cnp.int32_t, ndim=2] tri = np.empty((n_tri, 3), dtype=np.int32)
    cdef cnp.int32_t[:, ::1] t = tri
    cdef Py_ssize_t i, j, k, pos = 0
    cdef cnp.int32_t rij, a, b, c, tmp

    with nogil:
        for i in range(n - 2):
            for j in range(i + 1, n - 1):
                rij = rank_matrix[i, j]
                for k in range(j + 1, n):
                    a = rij
                    b = rank_matrix[i, k]
                    c = rank_matrix[j, k]
                    # sort the three ranks ascending
                    if a > b:
                        tmp = a; a = b; b = tmp
                    if b > c:
                        tmp = b; b = c; c = tmp
                    if a > b:
                        tmp = a; a = b; b = tmp
                    t[pos, 0] = a
                    t[pos, 1] = b
                    t[pos, 2] = c
                    pos += 1
    order = np.lexsort((tri[:, 0], tri[:, 1], tri[:, 2]))
    return np.ascontiguousarray(tri[order])


def reduce_z2(int n_rows, const cnp.int64_t[::1] indptr, const cnp.int32_t[::1] indices):
    """Left-to-right Z/2 column reduction; returns (pivot_row, column) pairs."""
    cdef Py_ssize_t n_cols = indptr.shape[0] - 1
    cdef cnp.ndarray[cnp.int64_t, ndim=1] owner_np = np.full(n_rows, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] owner = owner_np
    # Reduced columns that own a pivot, slot-compressed (at most n_rows live).
    cdef vector[vector[int]] slots
    cdef vector[int] cur, merged
    cdef Py_ssize_t c, s, e
    cdef cnp.int64_t o
    cdef int p
    cdef size_t ia, ib
    cdef vector[int]* other
    cdef cnp.ndarray[cnp.int64_t, ndim=2] pairs_np
    cdef vector[cnp.int64_t] pair_rows, pair_cols

    with nogil:
        for c in range(n_cols):
            cur.clear()
            s = indptr[c]
            e = indptr[c + 1]
            while s < e:
                cur.push_back(indices[s])
                s += 1
            while cur.size() > 0:
                p = cur.back()
                o = owner[p]
                if o < 0:
                    owner[p] = slots.size()
                    slots.push_back(cur)
                    pair_rows.push_back(p)
                    pair_cols.push_back(c)
                    break
                # XOR with the stored column owning this pivot (sorted merge,
                # equal entries cancel).
                other = &slots[<size_t> o]
                merged.clear()
                ia = 0
                ib = 0
                while ia < cur.size() and ib < other[0].size():
                    if cur[ia] < other[0][ib]:
                        merged.push_back(cur[ia])
                        ia += 1
                    elif cur[ia] > other[0][ib]:
                        merged.push_back(other[0][ib])
                        ib += 1
                    else:
                        ia += 1
                        ib += 1
                while ia < cur.size():
                    merged.push_back(cur[ia])
                    ia += 1
                while ib < other[0].size():
                    merged.push_back(other[0][ib])
                    ib += 1
                cur.swap(merged)

    pairs_np = np.empty((pair_rows.size(), 2), dtype=np.int64)
    for s in range(<Py_ssize_t> pair_rows.size()):
        pairs_np[s, 0] = pair_rows[s]
        pairs_np[s, 1] = pair_cols[s]
    return pairs_np
