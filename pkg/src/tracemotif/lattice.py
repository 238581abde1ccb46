"""Containment hierarchy over mined motifs for top-down exploration.

A motif's children are the mined motifs obtainable by deleting exactly one
edge (dropping any isolated vertex) while staying connected. Levels are
edge counts, so every parent-child step descends exactly one level.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .annotate import Motif
from .errors import DuplicateMotif, UnknownMotif
from .patterns import Code, Pattern, canonicalize


def one_edge_removals(p: Pattern) -> list[Pattern]:
    """Connected canonical sub-patterns reachable by removing one edge."""
    subs: set[Pattern] = set()
    for i in range(p.num_edges):
        edges = p.edges[:i] + p.edges[i + 1:]
        if not edges:
            continue
        keep = sorted({v for e in edges for v in e})
        if not _connected_on(keep, edges):
            continue
        index = {v: k for k, v in enumerate(keep)}
        labels = tuple(p.labels[v] for v in keep)
        remapped = tuple((index[u], index[v]) for u, v in edges)
        subs.add(canonicalize(labels, remapped))
    return sorted(subs, key=lambda q: q.code)


def _connected_on(vertices: list[int], edges: tuple[tuple[int, int], ...]) -> bool:
    neigh: dict[int, set[int]] = {v: set() for v in vertices}
    for u, v in edges:
        neigh[u].add(v)
        neigh[v].add(u)
    seen = {vertices[0]}
    stack = [vertices[0]]
    while stack:
        for w in neigh[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vertices)


@dataclass
class MotifLattice:
    nodes: dict[Code, Motif] = field(default_factory=dict)
    child_codes: dict[Code, tuple[Code, ...]] = field(default_factory=dict)

    def __contains__(self, code: Code) -> bool:
        return code in self.nodes


def build_lattice(motifs: list[Motif]) -> MotifLattice:
    """Link each motif to its present one-edge-removal sub-motifs.

    Tolerates missing sub-patterns (post-mining filters may have removed
    them); a missing child is simply not linked.
    """
    lattice = MotifLattice()
    for m in sorted(motifs, key=lambda m: m.code):
        if m.code in lattice.nodes:
            raise DuplicateMotif(f"motif {m.code_str} appears twice")
        lattice.nodes[m.code] = m
    for code, m in lattice.nodes.items():
        children = [
            sub.code for sub in one_edge_removals(m.pattern) if sub.code in lattice.nodes
        ]
        lattice.child_codes[code] = tuple(sorted(set(children)))
    return lattice


def roots(lattice: MotifLattice) -> list[Motif]:
    """Motifs that are no other motif's child, largest first."""
    all_children = {c for kids in lattice.child_codes.values() for c in kids}
    top = [m for code, m in lattice.nodes.items() if code not in all_children]
    top.sort(key=lambda m: (-m.pattern.num_edges, m.code))
    return top


def children(lattice: MotifLattice, code: Code) -> list[Motif]:
    if code not in lattice.nodes:
        raise UnknownMotif(f"no motif with code {code!r}")
    return [lattice.nodes[c] for c in lattice.child_codes[code]]
