/**
 * Hand-rolled SVG charts.
 *
 * Each builder returns markup as a string; the app injects it with
 * innerHTML. Every plotted point carries its source value in data-*
 * attributes at full precision, which keeps the rendering testable and
 * every on-screen number traceable to the API payload it came from.
 */

import type { CostPoint, RewardPoint, SideChoice } from "./model.js";

const W = 560;
const H = 220;
const PAD = { left: 46, right: 14, top: 14, bottom: 28 };

interface Scale {
  (v: number): number;
}

function linScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const span = hi - lo;
  if (span === 0) {
    const mid = (outLo + outHi) / 2;
    return () => mid;
  }
  return (v) => outLo + ((v - lo) / span) * (outHi - outLo);
}

function fmtTick(v: number): string {
  return Math.abs(v) >= 100 || Number.isInteger(v) ? String(v) : v.toPrecision(3);
}

function frame(body: string, cls: string): string {
  return (
    `<svg class="chart ${cls}" viewBox="0 0 ${W} ${H}" role="img">` +
    `<rect class="bg" x="0" y="0" width="${W}" height="${H}"/>` +
    body +
    "</svg>"
  );
}

function emptyChart(cls: string, note: string): string {
  return frame(
    `<text class="empty-note" x="${W / 2}" y="${H / 2}" text-anchor="middle">${note}</text>`,
    `${cls} empty`
  );
}

function axes(x: Scale, y: Scale, rounds: number[], lo: number, hi: number): string {
  const x0 = PAD.left;
  const x1 = W - PAD.right;
  const y0 = H - PAD.bottom;
  const y1 = PAD.top;
  let out = `<line class="axis" x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}"/>`;
  out += `<line class="axis" x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}"/>`;
  for (const r of rounds) {
    out += `<text class="tick" x="${x(r)}" y="${y0 + 16}" text-anchor="middle">${r}</text>`;
  }
  for (const v of [lo, (lo + hi) / 2, hi]) {
    out += `<text class="tick" x="${x0 - 6}" y="${y(v) + 4}" text-anchor="end">${fmtTick(v)}</text>`;
  }
  return out;
}

function series(
  pts: { round: number; value: number }[],
  x: Scale,
  y: Scale,
  name: string
): string {
  const path = pts.map((p) => `${x(p.round)},${y(p.value)}`).join(" ");
  let out = `<polyline class="line ${name}" fill="none" points="${path}"/>`;
  for (const p of pts) {
    out +=
      `<circle class="pt ${name}" r="3.5" cx="${x(p.round)}" cy="${y(p.value)}"` +
      ` data-series="${name}" data-round="${p.round}" data-value="${p.value}"/>`;
  }
  return out;
}

function bounds(values: number[]): [number, number] {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    // flat series still deserves a visible band
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

/** Test cost after each committed round. */
export function costChart(points: CostPoint[]): string {
  if (points.length === 0) return emptyChart("cost-chart", "no completed rounds yet");
  const [lo, hi] = bounds(points.map((p) => p.cost));
  const x = linScale(points[0]!.round, points[points.length - 1]!.round, PAD.left, W - PAD.right);
  const y = linScale(lo, hi, H - PAD.bottom, PAD.top);
  const rounds = points.map((p) => p.round);
  const body =
    axes(x, y, rounds, lo, hi) +
    series(points.map((p) => ({ round: p.round, value: p.cost })), x, y, "cost");
  return frame(body, "cost-chart");
}

/** Both reward signals per round, on a shared scale. */
export function rewardChart(pairs: RewardPoint[]): string {
  if (pairs.length === 0) return emptyChart("reward-chart", "no completed rounds yet");
  const values = pairs.flatMap((p) => [p.reward_AL, p.reward_LR]);
  const [lo, hi] = bounds(values);
  const x = linScale(pairs[0]!.round, pairs[pairs.length - 1]!.round, PAD.left, W - PAD.right);
  const y = linScale(lo, hi, H - PAD.bottom, PAD.top);
  const rounds = pairs.map((p) => p.round);
  const body =
    axes(x, y, rounds, lo, hi) +
    series(pairs.map((p) => ({ round: p.round, value: p.reward_AL })), x, y, "AL") +
    series(pairs.map((p) => ({ round: p.round, value: p.reward_LR })), x, y, "LR") +
    `<text class="legend AL" x="${W - PAD.right}" y="${PAD.top + 10}" text-anchor="end">AL</text>` +
    `<text class="legend LR" x="${W - PAD.right}" y="${PAD.top + 26}" text-anchor="end">LR</text>`;
  return frame(body, "reward-chart");
}

/** Which side won each round, as a strip of cells. */
export function sideTimeline(history: SideChoice[]): string {
  if (history.length === 0) return emptyChart("side-timeline", "no completed rounds yet");
  const x0 = PAD.left;
  const cell = (W - PAD.left - PAD.right) / history.length;
  const y0 = H / 2 - 22;
  let body = "";
  history.forEach((h, i) => {
    body +=
      `<rect class="side ${h.side}" x="${x0 + i * cell}" y="${y0}" width="${cell - 2}" height="44"` +
      ` data-round="${h.round}" data-side="${h.side}"/>`;
    body += `<text class="tick" x="${x0 + i * cell + (cell - 2) / 2}" y="${y0 + 64}" text-anchor="middle">${h.round}</text>`;
  });
  return frame(body, "side-timeline");
}
