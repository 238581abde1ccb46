import { ApiError, createClient, type Client } from "./api.js";
import {
  renderAnomalies,
  renderDiff,
  renderError,
  renderLattice,
  renderMotif,
  renderTrace,
} from "./dom.js";
import {
  cacheChildren,
  initialState,
  toggle,
  visibleRows,
  type Mode,
  type SortKey,
  type ViewState,
} from "./state.js";
import type { MotifSummary } from "./types.js";
import { anomalyRows, diffPanels, motifPanel, tracePanel } from "./views.js";

function apiBase(): string {
  const param = new URLSearchParams(window.location.search).get("api");
  return param ?? "http://127.0.0.1:8765";
}

const state: ViewState = initialState();
let client: Client = createClient(apiBase());
let roots: MotifSummary[] = [];

const $ = (id: string): HTMLElement => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
};

function showError(target: HTMLElement, err: unknown): void {
  const msg =
    err instanceof ApiError
      ? `${err.status}: ${err.detail}`
      : err instanceof Error
        ? err.message
        : String(err);
  target.replaceChildren(renderError(msg));
}

function redrawLattice(): void {
  const rows = visibleRows(state, roots);
  $("lattice").replaceChildren(
    renderLattice(rows, onToggleMotif, (code) => void selectMotif(code)),
  );
}

async function onToggleMotifAsync(code: string): Promise<void> {
  if (!state.expanded.has(code) && !state.childrenOf.has(code)) {
    const doc = await client.children(code);
    cacheChildren(state, code, doc.children);
  }
  toggle(state, code);
  redrawLattice();
}

function onToggleMotif(code: string): void {
  onToggleMotifAsync(code).catch((err) => showError($("detail"), err));
}

async function selectMotif(code: string): Promise<void> {
  state.selectedMotif = code;
  try {
    const doc = await client.motif(code);
    $("detail").replaceChildren(
      renderMotif(motifPanel(doc), (traceId) => void selectTrace(traceId)),
    );
  } catch (err) {
    showError($("detail"), err);
  }
}

async function selectTrace(traceId: string): Promise<void> {
  state.selectedTrace = traceId;
  try {
    const doc = await client.trace(traceId, state.selectedMotif ?? undefined);
    $("trace").replaceChildren(renderTrace(tracePanel(doc)));
  } catch (err) {
    showError($("trace"), err);
  }
}

async function runDiff(): Promise<void> {
  const alphaInput = $("alpha") as HTMLInputElement;
  const alpha = Number(alphaInput.value);
  try {
    const doc = await client.diff(alpha);
    $("diff").replaceChildren(renderDiff(diffPanels(doc)));
  } catch (err) {
    showError($("diff"), err);
  }
}

async function loadAnomalies(): Promise<void> {
  try {
    const doc = await client.anomalies();
    $("anomalies").replaceChildren(renderAnomalies(anomalyRows(doc)));
  } catch (err) {
    showError($("anomalies"), err);
  }
}

function setMode(mode: Mode): void {
  state.mode = mode;
  for (const m of ["explore", "diff", "anomalies"] as const) {
    $(`panel-${m}`).hidden = m !== mode;
    $(`tab-${m}`).classList.toggle("active", m === mode);
  }
  if (mode === "anomalies") void loadAnomalies();
}

async function boot(): Promise<void> {
  client = createClient(apiBase());
  try {
    const health = await client.health();
    $("status").textContent =
      `${health.motifs} motifs · ${health.traces} traces` +
      (health.baseline ? " · baseline loaded" : "");
    const doc = await client.roots();
    roots = doc.roots;
    redrawLattice();
  } catch (err) {
    showError($("lattice"), err);
  }
}

window.addEventListener("DOMContentLoaded", () => {
  for (const m of ["explore", "diff", "anomalies"] as const) {
    $(`tab-${m}`).addEventListener("click", () => setMode(m));
  }
  $("run-diff").addEventListener("click", () => void runDiff());
  $("sort").addEventListener("change", (ev) => {
    state.sortKey = (ev.target as HTMLSelectElement).value as SortKey;
    redrawLattice();
  });
  setMode("explore");
  void boot();
});
