import { describe, expect, it } from "vitest";

import { ApiError, SessionApi } from "../src/api.js";

interface Recorded {
  url: string;
  init?: RequestInit;
}

function fakeFetch(status: number, body: unknown, log: Recorded[]) {
  return async (url: string, init?: RequestInit): Promise<Response> => {
    log.push({ url, init });
    return new Response(JSON.stringify(body), {
      status,
      headers: { "content-type": "application/json" },
    });
  };
}

describe("SessionApi", () => {
  it("shapes the create request", async () => {
    const log: Recorded[] = [];
    const api = new SessionApi("http://svc", fakeFetch(201, { id: "s1", summary: {} }, log));
    await api.createSession({ dataset: { path: "data/glass.csv" }, mode: "human-oracle" });
    expect(log[0]!.url).toBe("http://svc/sessions");
    expect(log[0]!.init?.method).toBe("POST");
    expect(JSON.parse(String(log[0]!.init?.body))).toEqual({
      dataset: { path: "data/glass.csv" },
      mode: "human-oracle",
    });
  });

  it("sends labels as one atomic body", async () => {
    const log: Recorded[] = [];
    const api = new SessionApi("", fakeFetch(200, { summary: {}, queries: {} }, log));
    await api.submitLabels("s1", { "7": 1, "9": 0 });
    expect(log[0]!.url).toBe("/sessions/s1/labels");
    expect(JSON.parse(String(log[0]!.init?.body))).toEqual({ labels: { "7": 1, "9": 0 } });
  });

  it("exposes the expected index set on a batch mismatch", async () => {
    const detail = { message: "labels must cover the pending batch", expected: [3, 8] };
    const api = new SessionApi("", fakeFetch(409, { detail }, []));
    const err = await api.submitLabels("s1", { "0": 0 }).catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(409);
    expect((err as ApiError).expectedIndices).toEqual([3, 8]);
    expect((err as ApiError).message).toMatch(/pending batch/);
  });

  it("carries plain string details through", async () => {
    const api = new SessionApi("", fakeFetch(404, { detail: "no such session" }, []));
    const err = await api.getSession("nope").catch((e) => e);
    expect((err as ApiError).message).toBe("no such session");
    expect((err as ApiError).expectedIndices).toBeNull();
  });

  it("builds the report link from the base url", () => {
    const api = new SessionApi("http://svc");
    expect(api.reportUrl("abc")).toBe("http://svc/sessions/abc/report");
  });
});
