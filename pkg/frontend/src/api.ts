/** Thin client for the /v1 wire API. The fetch function is injectable so
 * tests can intercept requests without a browser. */

import {
  ApiError,
  RecommendResult,
  SearchResponse,
  isApiError,
  isRecommendResult,
  isSearchResponse,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiFailure extends Error {
  readonly error: ApiError;

  constructor(error: ApiError) {
    super(`${error.code}: ${error.message}`);
    this.error = error;
  }
}

function connectionError(detail: string): ApiError {
  return { status: 0, code: "connection_error", message: detail };
}

export class Client {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn: FetchLike = (i, init) => fetch(i, init)) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch (exc) {
      throw new ApiFailure(connectionError(String(exc)));
    }
    let body: unknown = null;
    try {
      body = await response.json();
    } catch {
      body = null;
    }
    if (!response.ok) {
      throw new ApiFailure(
        isApiError(body)
          ? body
          : { status: response.status, code: "internal_error", message: `HTTP ${response.status}` },
      );
    }
    return body;
  }

  async recommendByImageId(imageId: string): Promise<RecommendResult> {
    const body = await this.request("/v1/recommend", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ image_id: imageId }),
    });
    if (!isRecommendResult(body)) {
      throw new ApiFailure(connectionError("malformed recommend response"));
    }
    return body;
  }

  async recommendByUpload(
    base64Image: string,
    width: number,
    height: number,
  ): Promise<RecommendResult> {
    const body = await this.request("/v1/recommend", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ image: base64Image, width, height }),
    });
    if (!isRecommendResult(body)) {
      throw new ApiFailure(connectionError("malformed recommend response"));
    }
    return body;
  }

  async search(
    cluster: string,
    query: string,
    k: number,
    fallback = false,
  ): Promise<SearchResponse> {
    const params = new URLSearchParams({
      cluster,
      q: query,
      k: String(k),
      fallback: String(fallback),
    });
    const body = await this.request(`/v1/search?${params.toString()}`);
    if (!isSearchResponse(body)) {
      throw new ApiFailure(connectionError("malformed search response"));
    }
    return body;
  }

  async health(): Promise<unknown> {
    return this.request("/v1/health");
  }
}
