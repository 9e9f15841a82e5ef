/**
 * DOM wiring. One session per tab: a create form, the pending batch
 * table, and the dashboard. All state transitions flow through the API
 * client; this file only moves payload values into the document.
 */

import { ApiError, SessionApi } from "./api.js";
import { costChart, rewardChart, sideTimeline } from "./charts.js";
import { buildViewModel, type SessionViewModel } from "./model.js";
import { LabelStaging } from "./staging.js";
import type { AnomalyLabel, Mode, QueryBatch, SessionSummary } from "./types.js";

const POLL_MS = 800;

const api = new SessionApi("");
const staging = new LabelStaging(
  typeof localStorage === "undefined" ? null : localStorage
);

interface AppState {
  sessionId: string | null;
  summary: SessionSummary | null;
  queries: QueryBatch | null;
  busy: boolean;
  error: string | null;
}

const state: AppState = { sessionId: null, summary: null, queries: null, busy: false, error: null };

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function setError(message: string | null): void {
  state.error = message;
  const banner = el<HTMLDivElement>("error-banner");
  banner.textContent = message ?? "";
  banner.hidden = message === null;
}

async function refresh(): Promise<void> {
  if (!state.sessionId) return;
  state.summary = await api.getSession(state.sessionId);
  state.queries = await api.getQueries(state.sessionId);
  if (state.queries.status === "awaiting-labels") {
    staging.beginBatch(state.sessionId, state.queries.round, state.queries.indices);
  }
  render();
}

// ------------------------------------------------------------ create form

function datasetFromForm(): { path?: string; csv?: string } {
  const path = el<HTMLInputElement>("ds-path").value.trim();
  const csv = el<HTMLTextAreaElement>("ds-csv").value.trim();
  if (path && csv) throw new Error("choose a server path or paste CSV, not both");
  if (path) return { path };
  if (csv) return { csv };
  throw new Error("choose a server path or paste CSV");
}

async function onCreate(ev: Event): Promise<void> {
  ev.preventDefault();
  setError(null);
  try {
    const mode = el<HTMLSelectElement>("mode").value as Mode;
    const created = await api.createSession({
      dataset: datasetFromForm(),
      mode,
      config: {
        strategy: el<HTMLSelectElement>("strategy").value,
        seed: Number(el<HTMLInputElement>("seed").value || "0"),
      },
    });
    state.sessionId = created.id;
    el<HTMLElement>("create-panel").hidden = true;
    el<HTMLElement>("session-panel").hidden = false;
    await refresh();
  } catch (err) {
    setError(err instanceof Error ? err.message : String(err));
  }
}

// ------------------------------------------------------------- batch table

function onToggle(index: number, label: AnomalyLabel): void {
  staging.setLabel(index, label);
  render();
}

async function onSubmitBatch(): Promise<void> {
  if (!state.sessionId || state.busy) return;
  state.busy = true;
  setError(null);
  render();
  try {
    const out = await api.submitLabels(state.sessionId, staging.toPayload());
    staging.finishBatch();
    state.summary = out.summary;
    state.queries = out.queries;
    if (out.queries.status === "awaiting-labels") {
      staging.beginBatch(state.sessionId, out.queries.round, out.queries.indices);
    }
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      // batch already advanced elsewhere; entered labels stay staged
      await refresh();
    }
    setError(err instanceof Error ? err.message : String(err));
  } finally {
    state.busy = false;
    render();
  }
}

async function onAutostep(rounds: number): Promise<void> {
  if (!state.sessionId || state.busy) return;
  state.busy = true;
  setError(null);
  render();
  try {
    await api.autostep(state.sessionId, rounds);
    await waitForIdle();
  } catch (err) {
    setError(err instanceof Error ? err.message : String(err));
  } finally {
    state.busy = false;
    await refresh();
  }
}

async function waitForIdle(): Promise<void> {
  // between rounds the service computes; poll until it settles
  for (;;) {
    await refresh();
    if (!state.summary || state.summary.status === "complete") return;
    if (state.queries && state.queries.status === "awaiting-labels") return;
    await new Promise((r) => setTimeout(r, POLL_MS));
  }
}

// ---------------------------------------------------------------- render

function renderBatch(vm: SessionViewModel): void {
  const host = el<HTMLDivElement>("batch");
  if (vm.complete || vm.pendingBatch.length === 0) {
    host.innerHTML = "";
    return;
  }
  const rows = vm.pendingBatch
    .map((row) => {
      const current = staging.getLabel(row.index);
      const feats = row.features.map((v) => `<td class="num">${v.toPrecision(6)}</td>`).join("");
      return (
        `<tr><td class="num">${row.index}</td>${feats}` +
        `<td><label><input type="radio" name="lab-${row.index}" data-index="${row.index}" data-label="0"` +
        `${current === 0 ? " checked" : ""}/> normal</label>` +
        ` <label><input type="radio" name="lab-${row.index}" data-index="${row.index}" data-label="1"` +
        `${current === 1 ? " checked" : ""}/> anomaly</label></td></tr>`
      );
    })
    .join("");
  const d = vm.pendingBatch[0]?.features.length ?? 0;
  const featHead = Array.from({ length: d }, (_, i) => `<th>f${i + 1}</th>`).join("");
  host.innerHTML =
    `<h3>Round ${vm.round + 1} of ${vm.roundsTotal} · query side ${vm.pendingSide}</h3>` +
    `<table><thead><tr><th>index</th>${featHead}<th>verdict</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>` +
    `<button id="submit-batch" ${staging.isComplete && !state.busy ? "" : "disabled"}>` +
    `Submit ${staging.labeledCount}/${staging.batchSize} labels</button>`;
  host.querySelectorAll<HTMLInputElement>("input[type=radio]").forEach((input) => {
    input.addEventListener("change", () =>
      onToggle(Number(input.dataset.index), Number(input.dataset.label) as AnomalyLabel)
    );
  });
  const submit = host.querySelector<HTMLButtonElement>("#submit-batch");
  submit?.addEventListener("click", () => void onSubmitBatch());
}

function renderDashboard(vm: SessionViewModel): void {
  el<HTMLElement>("stat-dataset").textContent = `${vm.datasetName} (n=${vm.datasetSize})`;
  el<HTMLElement>("stat-strategy").textContent = `${vm.strategy} / ${vm.rewardKind}`;
  el<HTMLElement>("stat-round").textContent = `${vm.round} / ${vm.roundsTotal}`;
  el<HTMLElement>("stat-budget").textContent = `${vm.spent} / ${vm.totalBudget} labels`;
  el<HTMLElement>("stat-tau").textContent = String(vm.tau);
  el<HTMLElement>("stat-rewards").textContent = `AL ${vm.rewardAL} · LR ${vm.rewardLR}`;
  el<HTMLDivElement>("chart-cost").innerHTML = costChart(vm.costCurve);
  el<HTMLDivElement>("chart-reward").innerHTML = rewardChart(vm.rewardPairs);
  el<HTMLDivElement>("chart-sides").innerHTML = sideTimeline(vm.sideHistory);
}

function renderCompletion(vm: SessionViewModel): void {
  const host = el<HTMLDivElement>("completion");
  if (!vm.complete) {
    host.innerHTML = "";
    host.hidden = true;
    return;
  }
  host.hidden = false;
  const last = vm.costCurve[vm.costCurve.length - 1];
  host.innerHTML =
    `<h3>Session complete</h3>` +
    `<p>Final test cost ${last ? last.cost : "n/a"} after ${vm.roundsTotal} rounds.</p>` +
    `<p><a href="${api.reportUrl(vm.id)}" target="_blank">Download the per-round report (CSV)</a></p>`;
}

function render(): void {
  if (!state.summary) return;
  const vm = buildViewModel(state.summary, state.queries);
  el<HTMLElement>("autostep-controls").hidden = vm.mode !== "simulated-oracle" || vm.complete;
  renderBatch(vm);
  renderDashboard(vm);
  renderCompletion(vm);
}

export function main(): void {
  el<HTMLFormElement>("create-form").addEventListener("submit", (ev) => void onCreate(ev));
  el<HTMLButtonElement>("step-1").addEventListener("click", () => void onAutostep(1));
  el<HTMLButtonElement>("step-all").addEventListener("click", () => void onAutostep(10_000));
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", main);
}
