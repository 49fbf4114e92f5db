/** Wire types mirroring schemas/api.schema.json. */

export interface WireDetection {
  class: string;
  confidence: number;
  box: [number, number, number, number];
}

export interface WireClassification {
  label: string;
  score: number;
  /** All candidate labels with scores, best first. For a group these are
   * exactly the subcategories of the detected class, so they double as the
   * label dropdown options. */
  ranked: [string, number][];
}

export interface WireCaption {
  label: string;
  prompt: string;
  body: string;
  full_text: string;
}

export interface WireHit {
  id: string;
  score: number;
  label: string;
  title: string;
  description: string;
  image_uri: string;
  retailer: string | null;
  price: number | null;
}

export interface WireGroup {
  detection: WireDetection;
  crop_key: string;
  assigned_label: string | null;
  classification: WireClassification | null;
  caption: WireCaption | null;
  cluster: string | null;
  query_text: string | null;
  fallback: boolean;
  error: string | null;
  hits: WireHit[];
}

export interface RecommendResult {
  image: string;
  status: "ok" | "no_detections";
  groups: WireGroup[];
}

export interface SearchResponse {
  cluster: string;
  fallback: boolean;
  hits: WireHit[];
}

export interface ApiError {
  status: number;
  code: string;
  message: string;
}

export function isApiError(body: unknown): body is ApiError {
  if (typeof body !== "object" || body === null) return false;
  const candidate = body as Record<string, unknown>;
  return (
    typeof candidate.status === "number" &&
    typeof candidate.code === "string" &&
    typeof candidate.message === "string"
  );
}

export function isRecommendResult(body: unknown): body is RecommendResult {
  if (typeof body !== "object" || body === null) return false;
  const candidate = body as Record<string, unknown>;
  return (
    typeof candidate.image === "string" &&
    (candidate.status === "ok" || candidate.status === "no_detections") &&
    Array.isArray(candidate.groups)
  );
}

export function isSearchResponse(body: unknown): body is SearchResponse {
  if (typeof body !== "object" || body === null) return false;
  const candidate = body as Record<string, unknown>;
  return typeof candidate.cluster === "string" && Array.isArray(candidate.hits);
}
