# cython: language_level=3
# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled embedding enumeration kernel.

Iterative backtracking twin of _embed_py.enumerate_embeddings; must produce
byte-identical output for identical inputs.
"""
import numpy as np


cdef inline Py_ssize_t _lower_bound(const int[::1] arr, Py_ssize_t lo, Py_ssize_t hi, int c) noexcept nogil:
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] < c:
            lo = mid + 1
        else:
            hi = mid
    return lo


def enumerate_embeddings(
    const long long[::1] plabels,
    const int[::1] anchor_j,
    const int[::1] anchor_dir,
    const int[::1] con_j,
    const int[::1] con_dir,
    const int[::1] con_indptr,
    const long long[::1] t_labels,
    const int[::1] out_indptr,
    const int[::1] out_indices,
    const int[::1] in_indptr,
    const int[::1] in_indices,
    const int[::1] root_cands,
    long long cap,
):
    cdef Py_ssize_t n = plabels.shape[0]
    cdef Py_ssize_t npoints = t_labels.shape[0]
    cdef long long target = cap + 1
    cdef long long count = 0
    cdef Py_ssize_t k, i, t, lo, hi, pos
    cdef int c, mj
    cdef bint advanced, ok, hit = False

    mapping_arr = np.zeros(n, dtype=np.int32)
    used_arr = np.zeros(npoints if npoints else 1, dtype=np.uint8)
    arrid_arr = np.zeros(n, dtype=np.int8)
    ce_arr = np.zeros(n, dtype=np.int64)
    cpos_arr = np.zeros(n, dtype=np.int64)
    cdef int[::1] mapping = mapping_arr
    cdef unsigned char[::1] used = used_arr
    cdef signed char[::1] arrid = arrid_arr
    cdef long long[::1] ce = ce_arr
    cdef long long[::1] cpos = cpos_arr

    cdef long long capacity = 256 if target > 256 else target
    if capacity < 1:
        capacity = 1
    out_arr = np.empty(capacity * n, dtype=np.int32)
    cdef int[::1] out = out_arr

    arrid[0] = 0
    cpos[0] = 0
    ce[0] = root_cands.shape[0]
    k = 0
    while k >= 0:
        advanced = False
        while cpos[k] < ce[k]:
            if arrid[k] == 0:
                c = root_cands[cpos[k]]
            elif arrid[k] == 1:
                c = out_indices[cpos[k]]
            else:
                c = in_indices[cpos[k]]
            cpos[k] += 1
            if used[c] or t_labels[c] != plabels[k]:
                continue
            ok = True
            for t in range(con_indptr[k], con_indptr[k + 1]):
                mj = mapping[con_j[t]]
                if con_dir[t] == 1:
                    lo = out_indptr[mj]
                    hi = out_indptr[mj + 1]
                    pos = _lower_bound(out_indices, lo, hi, c)
                    if pos >= hi or out_indices[pos] != c:
                        ok = False
                        break
                else:
                    lo = in_indptr[mj]
                    hi = in_indptr[mj + 1]
                    pos = _lower_bound(in_indices, lo, hi, c)
                    if pos >= hi or in_indices[pos] != c:
                        ok = False
                        break
            if not ok:
                continue
            mapping[k] = c
            if k == n - 1:
                if count == capacity:
                    capacity = capacity * 2
                    if capacity > target:
                        capacity = target
                    new_arr = np.empty(capacity * n, dtype=np.int32)
                    new_arr[:count * n] = out_arr[:count * n]
                    out_arr = new_arr
                    out = out_arr
                for i in range(n):
                    out[count * n + i] = mapping[i]
                count += 1
                if count >= target:
                    hit = True
                    break
                continue
            used[c] = 1
            k += 1
            if anchor_j[k] < 0:
                arrid[k] = 0
                cpos[k] = 0
                ce[k] = root_cands.shape[0]
            else:
                mj = mapping[anchor_j[k]]
                if anchor_dir[k] == 1:
                    arrid[k] = 1
                    cpos[k] = out_indptr[mj]
                    ce[k] = out_indptr[mj + 1]
                else:
                    arrid[k] = 2
                    cpos[k] = in_indptr[mj]
                    ce[k] = in_indptr[mj + 1]
            advanced = True
            break
        if hit:
            break
        if advanced:
            continue
        k -= 1
        if k >= 0:
            used[mapping[k]] = 0

    cdef bint truncated = count >= target
    if truncated:
        count = cap
    return out_arr[:count * n].copy(), truncated
