import { describe, expect, it } from "vitest";

import { ApiError, loadConfig, ReviewApi } from "../src/api.js";

type Recorded = { url: string; init?: RequestInit };

function fakeFetch(
  status: number,
  body: unknown,
): { fetch: (url: string, init?: RequestInit) => Promise<Response>; calls: Recorded[] } {
  const calls: Recorded[] = [];
  return {
    calls,
    fetch: async (url, init) => {
      calls.push({ url, init });
      return new Response(JSON.stringify(body), {
        status,
        headers: { "Content-Type": "application/json" },
      });
    },
  };
}

describe("ReviewApi", () => {
  it("claims the next task with the reviewer query", async () => {
    const { fetch, calls } = fakeFetch(200, { task: null, progress: {} });
    const api = new ReviewApi({ apiBase: "http://h" }, fetch);
    const resp = await api.nextTask("amal");
    expect(resp.task).toBeNull();
    expect(calls[0].url).toBe("http://h/api/tasks/next?reviewer=amal");
  });

  it("posts submit bodies verbatim", async () => {
    const { fetch, calls } = fakeFetch(200, { task: {} });
    const api = new ReviewApi({ apiBase: "" }, fetch);
    await api.submit("t000001", {
      action: "correct",
      reviewer: "amal",
      text: "نص  مُصحح\n",
    });
    expect(calls[0].url).toBe("/api/tasks/t000001/submit");
    expect(JSON.parse(calls[0].init!.body as string)).toEqual({
      action: "correct",
      reviewer: "amal",
      text: "نص  مُصحح\n",
    });
  });

  it("sends the shared token on every request", async () => {
    const { fetch, calls } = fakeFetch(200, {});
    const api = new ReviewApi({ apiBase: "", token: "s3cret" }, fetch);
    await api.progress();
    const headers = calls[0].init!.headers as Record<string, string>;
    expect(headers["X-Review-Token"]).toBe("s3cret");
  });

  it("surfaces error details as ApiError", async () => {
    const { fetch } = fakeFetch(409, { detail: "NotClaimedByYou: t1" });
    const api = new ReviewApi({ apiBase: "" }, fetch);
    await expect(api.submit("t1", { action: "approve", reviewer: "x" }))
      .rejects.toMatchObject({ status: 409, detail: "NotClaimedByYou: t1" });
    await expect(
      api.submit("t1", { action: "approve", reviewer: "x" }),
    ).rejects.toBeInstanceOf(ApiError);
  });

  it("builds image URLs from the sample id", () => {
    const api = new ReviewApi({ apiBase: "http://h" });
    expect(api.imageUrl("abc")).toBe("http://h/api/images/abc");
  });
});

describe("loadConfig", () => {
  it("reads apiBase and token from config.json", async () => {
    const { fetch } = fakeFetch(200, { apiBase: "http://h", token: "t" });
    expect(await loadConfig(fetch)).toEqual({ apiBase: "http://h", token: "t" });
  });

  it("falls back to same-origin when config.json is missing", async () => {
    const { fetch } = fakeFetch(404, {});
    expect(await loadConfig(fetch)).toEqual({ apiBase: "" });
  });
});
