// DOM interpreter for the view models. One element per row, text straight
// from the model fields; no analytics happen here.

import { formatMicros, formatP, formatSupport } from "./format.js";
import type { LatticeRow } from "./state.js";
import type {
  AnomalyRow,
  DiffPanels,
  DistRow,
  MotifPanel,
  TracePanel,
} from "./views.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  cls?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderLattice(
  rows: LatticeRow[],
  onToggle: (code: string) => void,
  onSelect: (code: string) => void,
): HTMLElement {
  const list = el("div", "lattice");
  for (const row of rows) {
    const m = row.summary;
    const card = el("div", "motif-card");
    card.style.marginLeft = `${row.depth * 1.5}rem`;

    const head = el("div", "motif-head");
    const btn = el(
      "button",
      "toggle",
      row.expandable ? (row.expanded ? "−" : "+") : "·",
    );
    btn.disabled = !row.expandable;
    btn.addEventListener("click", () => onToggle(m.code));
    head.appendChild(btn);

    const sketch = el("a", "sketch", m.sketch);
    sketch.href = "#";
    sketch.addEventListener("click", (ev) => {
      ev.preventDefault();
      onSelect(m.code);
    });
    head.appendChild(sketch);
    card.appendChild(head);

    const stats = el("div", "motif-stats");
    stats.appendChild(
      el("span", "stat", `support ${formatSupport(m.transaction_support)}`),
    );
    stats.appendChild(el("span", "stat", `${m.containing_traces} traces`));
    stats.appendChild(el("span", "stat", `${m.occurrence_count} occurrences`));
    stats.appendChild(
      el("span", "stat", `p95 ${formatMicros(m.exec_time.summary.p95)}`),
    );
    if (m.complete_fork_join) stats.appendChild(el("span", "tag", "fork-join"));
    if (m.truncated) stats.appendChild(el("span", "tag warn", "truncated"));
    card.appendChild(stats);
    list.appendChild(card);
  }
  if (rows.length === 0) {
    list.appendChild(el("p", "empty", "no motifs loaded"));
  }
  return list;
}

function distTable(rows: DistRow[]): HTMLElement {
  const table = el("table", "dist");
  const head = el("tr");
  for (const h of ["", "count", "min", "p50", "mean", "p95", "p99", "max"]) {
    head.appendChild(el("th", undefined, h));
  }
  table.appendChild(head);
  for (const row of rows) {
    const tr = el("tr");
    const s = row.summary;
    tr.appendChild(
      el("td", "lbl", row.label + (row.truncated ? " (truncated)" : "")),
    );
    tr.appendChild(el("td", undefined, String(s.count)));
    for (const v of [s.min, s.p50, s.mean, s.p95, s.p99, s.max]) {
      tr.appendChild(el("td", undefined, formatMicros(v)));
    }
    table.appendChild(tr);
  }
  return table;
}

export function renderMotif(
  panel: MotifPanel,
  onTrace: (traceId: string) => void,
): HTMLElement {
  const box = el("div", "detail");
  box.appendChild(el("h3", undefined, panel.sketch));
  box.appendChild(el("code", "code-line", panel.code));
  const meta = el("p", "meta");
  meta.textContent =
    `${panel.vertexCount} vertices, ${panel.edgeCount} edges · ` +
    `support ${formatSupport(panel.transactionSupport)} · ` +
    `max within-trace ${panel.maxWithinCount}` +
    (panel.completeForkJoin ? " · complete fork-join" : "");
  box.appendChild(meta);
  box.appendChild(distTable([panel.execTime, ...panel.edgeLatencies]));

  if (panel.embeddingCounts.length > 0) {
    box.appendChild(el("h4", undefined, "occurrences"));
    const ul = el("ul", "occurrences");
    for (const [traceId, count] of panel.embeddingCounts) {
      const li = el("li");
      const link = el("a", undefined, traceId);
      link.href = "#";
      link.addEventListener("click", (ev) => {
        ev.preventDefault();
        onTrace(traceId);
      });
      li.appendChild(link);
      li.appendChild(document.createTextNode(` ×${count}`));
      ul.appendChild(li);
    }
    box.appendChild(ul);
  }
  return box;
}

export function renderTrace(panel: TracePanel): HTMLElement {
  const box = el("div", "trace");
  box.appendChild(el("h3", undefined, `trace ${panel.traceId}`));
  if (panel.highlightCode !== null) {
    box.appendChild(
      el(
        "p",
        panel.highlightEmpty ? "notice" : "meta",
        panel.highlightEmpty
          ? "motif has no occurrence in this trace"
          : `${panel.occurrenceCount} occurrence(s) highlighted`,
      ),
    );
  }
  const table = el("table", "points");
  const head = el("tr");
  for (const h of ["id", "label", "ts", "kind"]) {
    head.appendChild(el("th", undefined, h));
  }
  table.appendChild(head);
  for (const p of panel.points) {
    const tr = el("tr", p.highlighted ? "hl" : undefined);
    tr.appendChild(el("td", undefined, String(p.id)));
    tr.appendChild(
      el("td", undefined, p.label + (p.concurrentBranch ? " ∥" : "")),
    );
    tr.appendChild(el("td", undefined, formatMicros(p.tsUs)));
    tr.appendChild(el("td", undefined, p.kind));
    table.appendChild(tr);
  }
  box.appendChild(table);

  const edges = el("p", "edges");
  edges.textContent = panel.edges
    .map((e) => `${e.src}→${e.dst}${e.highlighted ? "*" : ""}`)
    .join("  ");
  box.appendChild(edges);
  return box;
}

export function renderDiff(panels: DiffPanels): HTMLElement {
  const box = el("div", "diff");
  box.appendChild(
    el(
      "p",
      "meta",
      `alpha ${panels.alpha} · ${panels.unchanged} unchanged` +
        (panels.hasFindings ? "" : " · no findings"),
    ),
  );

  const section = (title: string, cls: string) => {
    const sec = el("div", `diff-section ${cls}`);
    sec.appendChild(el("h4", undefined, title));
    return sec;
  };

  const added = section(`added (${panels.added.length})`, "added");
  for (const row of panels.added) {
    added.appendChild(el("div", "diff-row", row.sketch));
  }
  const removed = section(`removed (${panels.removed.length})`, "removed");
  for (const row of panels.removed) {
    removed.appendChild(el("div", "diff-row", row.sketch));
  }
  const changed = section(
    `latency changed (${panels.changed.length})`,
    "changed",
  );
  for (const row of panels.changed) {
    const div = el("div", `diff-row ${row.direction}`);
    div.appendChild(el("strong", undefined, row.sketch));
    div.appendChild(
      el(
        "span",
        "meta",
        ` ${row.direction} · D=${row.statistic.toFixed(3)} ` +
          `p=${formatP(row.pValue)} · mean ` +
          `${formatMicros(row.baseline.mean)} → ` +
          `${formatMicros(row.candidate.mean)}`,
      ),
    );
    changed.appendChild(div);
  }
  box.appendChild(added);
  box.appendChild(removed);
  box.appendChild(changed);
  return box;
}

export function renderAnomalies(rows: AnomalyRow[]): HTMLElement {
  const box = el("div", "anomalies");
  const table = el("table");
  const head = el("tr");
  for (const h of ["trace", "score", "violated rules"]) {
    head.appendChild(el("th", undefined, h));
  }
  table.appendChild(head);
  for (const row of rows) {
    const tr = el("tr", row.score > 0 ? "flagged" : undefined);
    tr.appendChild(el("td", undefined, row.traceId));
    tr.appendChild(el("td", undefined, row.score.toFixed(3)));
    tr.appendChild(
      el("td", undefined, row.violations.map((v) => v.rule).join("; ")),
    );
    table.appendChild(tr);
  }
  box.appendChild(table);
  return box;
}

export function renderError(message: string): HTMLElement {
  return el("div", "error", message);
}
