"""Pure-Python embedding enumeration kernel.

Reference implementation of the array-level kernel contract; the compiled
backend must produce byte-identical output. Matching proceeds one pattern
vertex at a time in plan order: each vertex draws its candidates from the
adjacency row of an already-matched anchor vertex (or from the label index
for the first vertex) and every remaining edge to earlier vertices is
verified by binary search in the sorted CSR rows.
"""
from __future__ import annotations

from bisect import bisect_left

import numpy as np


def enumerate_embeddings(
    plabels: np.ndarray,
    anchor_j: np.ndarray,
    anchor_dir: np.ndarray,
    con_j: np.ndarray,
    con_dir: np.ndarray,
    con_indptr: np.ndarray,
    t_labels: np.ndarray,
    out_indptr: np.ndarray,
    out_indices: np.ndarray,
    in_indptr: np.ndarray,
    in_indices: np.ndarray,
    root_cands: np.ndarray,
    cap: int,
) -> tuple[np.ndarray, bool]:
    """Return (flat int32 point indices, truncated flag).

    Output rows appear in ascending candidate-index order per level, which
    yields embeddings sorted lexicographically by the mapped index tuple.
    One extra embedding beyond cap is probed so truncation is exact.
    """
    n = len(plabels)
    pl = plabels.tolist()
    aj = anchor_j.tolist()
    ad = anchor_dir.tolist()
    cj = con_j.tolist()
    cd = con_dir.tolist()
    cp = con_indptr.tolist()
    tl = t_labels.tolist()
    oip = out_indptr.tolist()
    oix = out_indices.tolist()
    iip = in_indptr.tolist()
    iix = in_indices.tolist()
    roots = root_cands.tolist()

    target = cap + 1
    out: list[int] = []
    mapping = [0] * n
    used = bytearray(len(tl))
    count = 0

    def has_edge(row: list[int], lo: int, hi: int, c: int) -> bool:
        pos = bisect_left(row, c, lo, hi)
        return pos < hi and row[pos] == c

    def rec(k: int) -> bool:
        nonlocal count
        if k == n:
            out.extend(mapping)
            count += 1
            return count >= target
        if aj[k] < 0:
            cands = roots
        else:
            mj = mapping[aj[k]]
            if ad[k] == 1:
                cands = oix[oip[mj]:oip[mj + 1]]
            else:
                cands = iix[iip[mj]:iip[mj + 1]]
        labk = pl[k]
        for c in cands:
            if used[c] or tl[c] != labk:
                continue
            ok = True
            for t in range(cp[k], cp[k + 1]):
                mj2 = mapping[cj[t]]
                if cd[t] == 1:
                    if not has_edge(oix, oip[mj2], oip[mj2 + 1], c):
                        ok = False
                        break
                elif not has_edge(iix, iip[mj2], iip[mj2 + 1], c):
                    ok = False
                    break
            if not ok:
                continue
            mapping[k] = c
            used[c] = 1
            stop = rec(k + 1)
            used[c] = 0
            if stop:
                return True
        return False

    rec(0)
    truncated = count >= target
    if truncated:
        del out[cap * n:]
    return np.array(out, dtype=np.int32), truncated
