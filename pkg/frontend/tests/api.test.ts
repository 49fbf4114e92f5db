import { describe, expect, it } from "vitest";

import { ApiFailure, Client, FetchLike } from "../src/api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

describe("api client", () => {
  it("posts image_id to /v1/recommend", async () => {
    const seen: { url?: string; body?: unknown } = {};
    const fetchFn: FetchLike = async (url, init) => {
      seen.url = url;
      seen.body = JSON.parse(String(init?.body));
      return jsonResponse({ image: "img_001", status: "ok", groups: [] });
    };
    const result = await new Client("http://svc", fetchFn).recommendByImageId("img_001");
    expect(seen.url).toBe("http://svc/v1/recommend");
    expect(seen.body).toEqual({ image_id: "img_001" });
    expect(result.status).toBe("ok");
  });

  it("encodes search parameters", async () => {
    let url = "";
    const fetchFn: FetchLike = async (u) => {
      url = u;
      return jsonResponse({ cluster: "denim_shorts", fallback: false, hits: [] });
    };
    await new Client("", fetchFn).search("denim_shorts", "denim shorts a high waist", 10, true);
    const parsed = new URL(url, "http://local");
    expect(parsed.pathname).toBe("/v1/search");
    expect(parsed.searchParams.get("cluster")).toBe("denim_shorts");
    expect(parsed.searchParams.get("q")).toBe("denim shorts a high waist");
    expect(parsed.searchParams.get("k")).toBe("10");
    expect(parsed.searchParams.get("fallback")).toBe("true");
  });

  it("surfaces service error bodies", async () => {
    const fetchFn: FetchLike = async () =>
      jsonResponse({ status: 404, code: "unknown_cluster", message: "no cluster named 'hats'" }, 404);
    const err = await new Client("", fetchFn)
      .search("hats", "blue", 5)
      .catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiFailure);
    expect((err as ApiFailure).error.code).toBe("unknown_cluster");
    expect((err as ApiFailure).error.status).toBe(404);
  });

  it("maps transport failures to connection_error", async () => {
    const fetchFn: FetchLike = async () => {
      throw new TypeError("fetch failed");
    };
    const err = await new Client("", fetchFn)
      .recommendByImageId("img_001")
      .catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiFailure);
    expect((err as ApiFailure).error.code).toBe("connection_error");
  });

  it("rejects malformed success bodies", async () => {
    const fetchFn: FetchLike = async () => jsonResponse({ unexpected: true });
    const err = await new Client("", fetchFn)
      .recommendByImageId("img_001")
      .catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiFailure);
  });
});
