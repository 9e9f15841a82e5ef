import { describe, expect, it } from "vitest";

import { costChart, rewardChart, sideTimeline } from "../src/charts.js";

function dataValues(svg: string, series: string): number[] {
  const out: number[] = [];
  const re = new RegExp(`data-series="${series}"[^/]*data-value="([^"]+)"`, "g");
  for (const m of svg.matchAll(re)) out.push(Number(m[1]));
  return out;
}

describe("costChart", () => {
  it("draws one point per completed round", () => {
    const pts = [1, 2, 3, 4, 5].map((r) => ({ round: r, cost: 0.1 * r }));
    const svg = costChart(pts);
    expect(dataValues(svg, "cost")).toEqual([0.1, 0.2, 0.30000000000000004, 0.4, 0.5]);
    expect(svg.match(/<polyline/g)?.length).toBe(1);
  });

  it("keeps a flat curve visible", () => {
    const svg = costChart([
      { round: 1, cost: 0.25 },
      { round: 2, cost: 0.25 },
    ]);
    expect(svg).toContain('data-value="0.25"');
    expect(svg).not.toContain("NaN");
  });

  it("renders a placeholder with no rounds", () => {
    expect(costChart([])).toContain("empty");
  });
});

describe("rewardChart", () => {
  it("plots both signals per round at full precision", () => {
    const pairs = [
      { round: 1, reward_AL: 0.0, reward_LR: 0.5254119701550152 },
      { round: 2, reward_AL: 0.125, reward_LR: 0.5 },
    ];
    const svg = rewardChart(pairs);
    expect(dataValues(svg, "AL")).toEqual([0.0, 0.125]);
    expect(dataValues(svg, "LR")).toEqual([0.5254119701550152, 0.5]);
  });
});

describe("sideTimeline", () => {
  it("marks every round with its winning side", () => {
    const svg = sideTimeline([
      { round: 1, side: "LR" },
      { round: 2, side: "AL" },
      { round: 3, side: "AL" },
    ]);
    expect(svg.match(/data-side="AL"/g)?.length).toBe(2);
    expect(svg.match(/data-side="LR"/g)?.length).toBe(1);
  });

  it("shows only LR cells for a session that never chose AL", () => {
    const svg = sideTimeline([1, 2, 3, 4].map((r) => ({ round: r, side: "LR" as const })));
    expect(svg).not.toContain('data-side="AL"');
    expect(svg.match(/data-side="LR"/g)?.length).toBe(4);
  });
});
