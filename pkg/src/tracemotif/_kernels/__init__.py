"""Embedding enumeration backends and the pattern matching entry point.

The compiled kernel is preferred when built; set TRACEMOTIF_PURE=1 to force
the pure-Python fallback. Both backends share one array-level contract and
produce identical results; `match_pattern` is the only API the rest of the
package uses.
"""
from __future__ import annotations

import os
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from ..model import TraceArrays
from ..patterns import Pattern

from . import _embed_py

_cy = None
if not os.environ.get("TRACEMOTIF_PURE"):
    try:
        from . import _embed_cy as _cy  # type: ignore[no-redef]
    except ImportError:
        _cy = None

BACKEND = "python" if _cy is None else "cython"

# Probe budget used when a pattern's vertex numbering forces full
# enumeration before sorting; far above any sane embedding count.
_UNCAPPED = 2**31 - 2


class _Plan(NamedTuple):
    """Per-pattern matching plan, independent of any trace."""

    order: tuple[int, ...]
    identity: bool
    plabels: np.ndarray
    anchor_j: np.ndarray
    anchor_dir: np.ndarray
    con_j: np.ndarray
    con_dir: np.ndarray
    con_indptr: np.ndarray


def _match_order(p: Pattern) -> tuple[int, ...]:
    """Vertex order where each vertex after the first touches an earlier one.

    Identity order works for canonical patterns (DFS discovery order);
    otherwise vertices are added greedily by smallest index.
    """
    n = p.num_vertices
    neigh: list[set[int]] = [set() for _ in range(n)]
    for u, v in p.edges:
        neigh[u].add(v)
        neigh[v].add(u)
    placed = {0}
    identity = True
    for k in range(1, n):
        if neigh[k] & placed:
            placed.add(k)
        else:
            identity = False
            break
    if identity:
        return tuple(range(n))
    order = [0]
    placed = {0}
    while len(order) < n:
        nxt = min(v for v in range(n) if v not in placed and neigh[v] & placed)
        order.append(nxt)
        placed.add(nxt)
    return tuple(order)


@lru_cache(maxsize=65536)
def _plan_for(p: Pattern) -> _Plan:
    order = _match_order(p)
    n = p.num_vertices
    pos = {v: k for k, v in enumerate(order)}
    anchor_j = np.full(n, -1, dtype=np.int32)
    anchor_dir = np.zeros(n, dtype=np.int32)
    con_j: list[int] = []
    con_dir: list[int] = []
    con_indptr = np.zeros(n + 1, dtype=np.int32)
    for k in range(n):
        v = order[k]
        # (earlier position, dir) for every pattern edge between v and an
        # already-placed vertex; dir 1 means earlier->v, 0 means v->earlier.
        links = sorted(
            [(pos[u], 1) for u, w in p.edges if w == v and pos[u] < k]
            + [(pos[w], 0) for u, w in p.edges if u == v and pos[w] < k]
        )
        if k > 0:
            anchor_j[k], anchor_dir[k] = links[0]
            for j, d in links[1:]:
                con_j.append(j)
                con_dir.append(d)
        con_indptr[k + 1] = len(con_j)
    return _Plan(
        order=order,
        identity=order == tuple(range(n)),
        plabels=np.array([p.labels[v] for v in order], dtype=np.int64),
        anchor_j=anchor_j,
        anchor_dir=anchor_dir,
        con_j=np.array(con_j, dtype=np.int32),
        con_dir=np.array(con_dir, dtype=np.int32),
        con_indptr=con_indptr,
    )


def _impl(backend: str | None):
    if backend is None:
        backend = BACKEND
    if backend == "python":
        return _embed_py
    if backend == "cython":
        if _cy is None:
            raise RuntimeError("compiled kernel not available")
        return _cy
    raise ValueError(f"unknown backend {backend!r}")


def match_pattern(
    p: Pattern,
    arrays: TraceArrays,
    cap: int,
    backend: str | None = None,
) -> tuple[np.ndarray, bool]:
    """Enumerate embeddings of p in one trace.

    Returns (ids, truncated): ids is an int64 array of shape (count,
    num_vertices) holding mapped trace point ids, rows sorted
    lexicographically; truncated is True when more than cap embeddings
    exist and only the first cap are returned.
    """
    n = p.num_vertices
    empty = np.empty((0, n), dtype=np.int64)
    for lab in set(p.labels):
        if lab not in arrays.by_label:
            return empty, False
    plan = _plan_for(p)
    root_cands = arrays.by_label[int(plan.plabels[0])]
    kernel_cap = cap if plan.identity else _UNCAPPED
    flat, truncated = _impl(backend).enumerate_embeddings(
        plan.plabels,
        plan.anchor_j,
        plan.anchor_dir,
        plan.con_j,
        plan.con_dir,
        plan.con_indptr,
        arrays.labels,
        arrays.out_indptr,
        arrays.out_indices,
        arrays.in_indptr,
        arrays.in_indices,
        root_cands,
        kernel_cap,
    )
    if flat.size == 0:
        return empty, False
    idx = flat.reshape(-1, n)
    if plan.identity:
        return arrays.ids[idx], truncated
    # Non-canonical vertex numbering: permute columns back to pattern
    # order, sort rows, then apply the cap.
    perm = np.empty((idx.shape[0], n), dtype=np.int64)
    for col, v in enumerate(plan.order):
        perm[:, v] = idx[:, col]
    ids = arrays.ids[perm]
    rows = np.lexsort(tuple(ids[:, c] for c in reversed(range(n))))
    ids = ids[rows]
    if ids.shape[0] > cap:
        return ids[:cap], True
    return ids, False
