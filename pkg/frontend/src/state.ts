import type { MotifSummary } from "./types.js";

export type Mode = "explore" | "diff" | "anomalies";
export type SortKey = "api" | "p95" | "support" | "occurrences";

/**
 * Session view state. The lattice itself lives on the server; the client
 * only remembers which codes are expanded plus the fetched child lists
 * so collapse can prune whole subtrees without another request.
 */
export interface ViewState {
  expanded: Set<string>;
  childrenOf: Map<string, MotifSummary[]>;
  selectedMotif: string | null;
  selectedTrace: string | null;
  mode: Mode;
  sortKey: SortKey;
}

export function initialState(): ViewState {
  return {
    expanded: new Set(),
    childrenOf: new Map(),
    selectedMotif: null,
    selectedTrace: null,
    mode: "explore",
    sortKey: "api",
  };
}

/** Record a fetched child list; expanding requires the list to be known. */
export function cacheChildren(
  state: ViewState,
  code: string,
  children: MotifSummary[],
): void {
  state.childrenOf.set(code, children);
}

export function isExpanded(state: ViewState, code: string): boolean {
  return state.expanded.has(code);
}

export function expand(state: ViewState, code: string): void {
  if (!state.childrenOf.has(code)) {
    throw new Error(`expand before children of ${code} were loaded`);
  }
  state.expanded.add(code);
}

/**
 * Collapse a node. Every descendant leaves the expanded set too, so
 * re-expanding shows the subtree in its fully-collapsed form and an
 * expand/collapse round trip restores the prior state exactly.
 */
export function collapse(state: ViewState, code: string): void {
  state.expanded.delete(code);
  const kids = state.childrenOf.get(code) ?? [];
  for (const kid of kids) {
    if (state.expanded.has(kid.code)) {
      collapse(state, kid.code);
    }
  }
}

export function toggle(state: ViewState, code: string): void {
  if (state.expanded.has(code)) {
    collapse(state, code);
  } else {
    expand(state, code);
  }
}

/** One visible lattice row: the API summary plus tree bookkeeping. */
export interface LatticeRow {
  summary: MotifSummary;
  depth: number;
  expanded: boolean;
  /** false once the server said this motif has no children */
  expandable: boolean;
}

function ordered(rows: MotifSummary[], key: SortKey): MotifSummary[] {
  if (key === "api") return rows;
  const value = (m: MotifSummary): number =>
    key === "p95"
      ? m.exec_time.summary.p95
      : key === "support"
        ? m.transaction_support
        : m.occurrence_count;
  // stable: ties keep server order
  return rows
    .map((m, i) => [m, i] as const)
    .sort((a, b) => value(b[0]) - value(a[0]) || a[1] - b[1])
    .map(([m]) => m);
}

/**
 * Flatten the lattice for display: exactly the roots, plus — under each
 * expanded code — exactly the children the API returned for it.
 */
export function visibleRows(
  state: ViewState,
  roots: MotifSummary[],
): LatticeRow[] {
  const out: LatticeRow[] = [];
  const walk = (nodes: MotifSummary[], depth: number) => {
    for (const m of ordered(nodes, state.sortKey)) {
      const kids = state.childrenOf.get(m.code);
      out.push({
        summary: m,
        depth,
        expanded: state.expanded.has(m.code),
        expandable: kids === undefined || kids.length > 0,
      });
      if (state.expanded.has(m.code) && kids !== undefined) {
        walk(kids, depth + 1);
      }
    }
  };
  walk(roots, 0);
  return out;
}
