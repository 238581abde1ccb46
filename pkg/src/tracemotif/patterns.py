"""Connected, directed, labeled subgraph templates in canonical form.

The canonical form is a minimum depth-first traversal code computed over
the pattern's directed edges. Codes are identical for isomorphic patterns
and distinct otherwise, so they double as dedup keys and as a stable total
order for all mining output.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from .model import decode_edge_label, encode_edge_label

# A code entry is (i, j, d, L): i and j are DFS discovery indices of the
# traversal edge, d is 0 when the directed edge runs i->j and 1 when j->i,
# and L is the encoded (src_label, dst_label) pair of the directed edge.
CodeEntry = tuple[int, int, int, int]
Code = tuple[CodeEntry, ...]


@dataclass(frozen=True)
class Pattern:
    """A processing-pattern template: vertex labels plus directed edges.

    ``labels[v]`` is the label id of pattern vertex v; edges are pairs of
    vertex indices. Valid patterns are weakly connected DAGs with at least
    one edge, no duplicate edges, and no isolated vertices.
    """

    labels: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        n = len(self.labels)
        if not self.edges:
            raise ValueError("pattern needs at least one edge")
        seen: set[tuple[int, int]] = set()
        covered = [False] * n
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of vertex range")
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            covered[u] = covered[v] = True
        if not all(covered):
            raise ValueError("pattern has isolated vertices")
        if not _connected(n, self.edges):
            raise ValueError("pattern is not weakly connected")
        if _has_cycle(n, self.edges):
            raise ValueError("pattern contains a cycle")

    @property
    def num_vertices(self) -> int:
        return len(self.labels)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def code(self) -> Code:
        return _min_dfs_code(self.labels, self.edges)[0]

    @cached_property
    def code_str(self) -> str:
        return code_to_str(self.code)

    def out_degree(self, v: int) -> int:
        return sum(1 for u, _ in self.edges if u == v)

    def in_degree(self, v: int) -> int:
        return sum(1 for _, w in self.edges if w == v)

    @cached_property
    def is_chain(self) -> bool:
        """True when the pattern is a simple directed path."""
        return all(
            self.out_degree(v) <= 1 and self.in_degree(v) <= 1
            for v in range(self.num_vertices)
        )

    def label_sketch(self, label_of) -> str:
        """Short human-readable rendering, e.g. ``A->B; B->C``."""
        return "; ".join(
            f"{label_of(self.labels[u])}->{label_of(self.labels[v])}"
            for u, v in self.edges
        )


def canonical_code(p: Pattern) -> Code:
    """Total-order key identifying p up to isomorphism."""
    return p.code


def code_to_str(code: Code) -> str:
    """URL- and filename-safe rendering of a canonical code."""
    return "-".join(f"{i}.{j}.{d}.{lab}" for i, j, d, lab in code)


def code_from_str(text: str) -> Code:
    entries = []
    for part in text.split("-"):
        i, j, d, lab = part.split(".")
        entries.append((int(i), int(j), int(d), int(lab)))
    return tuple(entries)


def canonicalize(labels: Sequence[int], edges: Sequence[tuple[int, int]]) -> Pattern:
    """Return the canonical representative of the given pattern.

    Vertices are renumbered to DFS discovery order of the minimum code and
    edges sorted, so isomorphic inputs produce equal Pattern values.
    """
    # constructing with the caller's numbering runs the full validation
    # (connectivity, acyclicity, ...) before the DFS walk assumes it
    probe = Pattern(labels=tuple(labels), edges=tuple(sorted(edges)))
    return pattern_from_code(probe.code)


def pattern_from_code(code: Code) -> Pattern:
    n = max(max(i, j) for i, j, _, _ in code) + 1
    labels = [-1] * n
    edges: list[tuple[int, int]] = []
    for i, j, d, lab in code:
        src_label, dst_label = decode_edge_label(lab)
        if d == 0:
            edges.append((i, j))
            labels[i], labels[j] = src_label, dst_label
        else:
            edges.append((j, i))
            labels[j], labels[i] = src_label, dst_label
    return Pattern(labels=tuple(labels), edges=tuple(sorted(edges)))


def _connected(n: int, edges: Sequence[tuple[int, int]]) -> bool:
    if n <= 1:
        return True
    neigh: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        neigh[u].append(v)
        neigh[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        for w in neigh[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def _has_cycle(n: int, edges: Sequence[tuple[int, int]]) -> bool:
    indeg = [0] * n
    succ: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        indeg[v] += 1
        succ[u].append(v)
    ready = [v for v in range(n) if indeg[v] == 0]
    done = 0
    while ready:
        v = ready.pop()
        done += 1
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return done != n


class _Projection:
    """One partial self-embedding realizing the code prefix built so far."""

    __slots__ = ("mapping", "inv", "used", "parent")

    def __init__(
        self,
        mapping: tuple[int, ...],
        inv: dict[int, int],
        used: frozenset[int],
        parent: tuple[int, ...],
    ):
        self.mapping = mapping
        self.inv = inv
        self.used = used
        self.parent = parent

    def key(self) -> tuple:
        return (self.mapping, self.used)

    def rmpath(self) -> list[int]:
        path = [len(self.mapping) - 1]
        while path[-1] != 0:
            path.append(self.parent[path[-1]])
        path.reverse()
        return path


def _min_dfs_code(
    labels: tuple[int, ...], edges: tuple[tuple[int, int], ...]
) -> tuple[Code, tuple[int, ...]]:
    """Minimum DFS code plus one witnessing discovery order.

    Traversal treats edges as undirected; direction and endpoint labels
    travel in each entry's (d, L) fields. At every step the minimal
    extension is chosen under the ordering: backward edges from the
    rightmost vertex first (by ascending target index), then forward edges
    from the rightmost path, deepest origin first; ties by (d, L).
    """
    m = len(edges)
    incident: dict[int, list[int]] = {}
    for ei, (u, v) in enumerate(edges):
        incident.setdefault(u, []).append(ei)
        incident.setdefault(v, []).append(ei)

    def edge_code(ei: int) -> int:
        u, v = edges[ei]
        return encode_edge_label(labels[u], labels[v])

    # Seed with the minimal single-edge entry over both orientations.
    best_first: CodeEntry | None = None
    starts: list[_Projection] = []
    for ei, (u, v) in enumerate(edges):
        lab = edge_code(ei)
        for d, (a, b) in ((0, (u, v)), (1, (v, u))):
            entry = (0, 1, d, lab)
            if best_first is None or entry < best_first:
                best_first = entry
                starts = []
            if entry == best_first:
                starts.append(
                    _Projection((a, b), {a: 0, b: 1}, frozenset((ei,)), (-1, 0))
                )
    assert best_first is not None
    code: list[CodeEntry] = [best_first]
    projections = starts

    while len(code) < m:
        best_key: tuple | None = None
        best_entry: CodeEntry | None = None
        realizers: list[_Projection] = []
        seen_keys: set[tuple] = set()
        for proj in projections:
            rmpath = proj.rmpath()
            rm = rmpath[-1]
            on_rmpath = set(rmpath)
            for ext in _extensions(proj, rmpath, rm, on_rmpath, edges, incident, edge_code):
                sort_key, entry, new_proj = ext
                if best_key is None or sort_key < best_key:
                    best_key = sort_key
                    best_entry = entry
                    realizers = [new_proj]
                    seen_keys = {new_proj.key()}
                elif sort_key == best_key:
                    pk = new_proj.key()
                    if pk not in seen_keys:
                        seen_keys.add(pk)
                        realizers.append(new_proj)
        if best_entry is None:
            raise AssertionError("DFS traversal stranded; pattern invariants violated")
        code.append(best_entry)
        projections = realizers

    witness = projections[0].mapping
    return tuple(code), witness


def _extensions(
    proj: _Projection,
    rmpath: list[int],
    rm: int,
    on_rmpath: set[int],
    edges: tuple[tuple[int, int], ...],
    incident: dict[int, list[int]],
    edge_code,
) -> Iterator[tuple[tuple, CodeEntry, _Projection]]:
    mapping, inv, used = proj.mapping, proj.inv, proj.used
    rm_orig = mapping[rm]
    # Backward: unused edges between the rightmost vertex and the rightmost path.
    for ei in incident.get(rm_orig, ()):
        if ei in used:
            continue
        u, v = edges[ei]
        other = v if u == rm_orig else u
        j = inv.get(other)
        if j is None or j not in on_rmpath or j == rm:
            continue
        d = 0 if u == rm_orig else 1
        lab = edge_code(ei)
        entry = (rm, j, d, lab)
        new_proj = _Projection(mapping, inv, used | {ei}, proj.parent)
        yield (0, j, d, lab), entry, new_proj
    # Forward: unused edges from any rightmost-path vertex to a new vertex.
    for x in rmpath:
        x_orig = mapping[x]
        for ei in incident.get(x_orig, ()):
            if ei in used:
                continue
            u, v = edges[ei]
            other = v if u == x_orig else u
            if other in inv:
                continue
            d = 0 if u == x_orig else 1
            lab = edge_code(ei)
            new_idx = len(mapping)
            entry = (x, new_idx, d, lab)
            new_proj = _Projection(
                mapping + (other,),
                {**inv, other: new_idx},
                used | {ei},
                proj.parent + (x,),
            )
            yield (1, -x, d, lab), entry, new_proj
