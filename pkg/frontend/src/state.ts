/** Session state: one panel per recommendation group.
 *
 * The UI never ranks or rescores anything; panels hold the service payload
 * verbatim and display it in payload order. Each panel tracks a request
 * sequence number so a slow response superseded by a newer edit is
 * discarded instead of clobbering fresher hits.
 */

import { RecommendResult, SearchResponse, WireGroup, WireHit } from "./types.js";

export interface Panel {
  index: number;
  group: WireGroup;
  /** Current (possibly edited) label; starts as the assigned label. */
  label: string;
  /** Current (possibly edited) caption body; starts as the caption body. */
  captionBody: string;
  /** Hits currently displayed, in service order. */
  hits: WireHit[];
  fallback: boolean;
  loading: boolean;
  /** Inline error for this panel (e.g. unknown cluster on re-query). */
  error: string | null;
  /** Set when the last error was unknown_cluster: offer a fallback retry. */
  offerFallback: boolean;
  /** Sequence number of the newest request issued for this panel. */
  seq: number;
}

export interface SessionState {
  imageId: string | null;
  status: "idle" | "loading" | "ok" | "no_detections" | "error";
  banner: string | null;
  panels: Panel[];
}

export function initialState(): SessionState {
  return { imageId: null, status: "idle", banner: null, panels: [] };
}

export function startSubmit(state: SessionState): SessionState {
  return { ...state, status: "loading", banner: null, panels: [] };
}

export function applyRecommend(_state: SessionState, result: RecommendResult): SessionState {
  const panels = result.groups.map((group, index) => ({
    index,
    group,
    label: group.assigned_label ?? "",
    captionBody: group.caption?.body ?? "",
    hits: group.hits,
    fallback: group.fallback,
    loading: false,
    error: group.error,
    offerFallback: false,
    seq: 0,
  }));
  return {
    imageId: result.image,
    status: result.status === "no_detections" ? "no_detections" : "ok",
    banner: null,
    panels,
  };
}

export function applyBanner(state: SessionState, message: string): SessionState {
  return { ...state, status: "error", banner: message, panels: [] };
}

/** Options for a panel's label dropdown: the classification's ranked
 * candidates, which are exactly the subcategories of the detected class. */
export function labelOptions(panel: Panel): string[] {
  return panel.group.classification?.ranked.map(([label]) => label) ?? [];
}

export interface EditRequest {
  panelIndex: number;
  seq: number;
  cluster: string;
  query: string;
}

/** Register an edit on one panel; returns the new state plus the request
 * the caller should issue (null when client-side validation failed). */
export function beginEdit(
  state: SessionState,
  panelIndex: number,
  label: string,
  captionBody: string,
  clusterOf: (label: string) => string,
): { state: SessionState; request: EditRequest | null } {
  const panel = state.panels[panelIndex];
  if (!panel) return { state, request: null };
  if (!captionBody.trim() || !label.trim()) {
    const panels = state.panels.map((p) =>
      p.index === panelIndex
        ? { ...p, error: "label and caption must be non-empty", offerFallback: false }
        : p,
    );
    return { state: { ...state, panels }, request: null };
  }
  const seq = panel.seq + 1;
  const panels = state.panels.map((p) =>
    p.index === panelIndex
      ? { ...p, label, captionBody, seq, loading: true, error: null, offerFallback: false }
      : p,
  );
  const request: EditRequest = {
    panelIndex,
    seq,
    cluster: clusterOf(label),
    query: `${label} ${captionBody.trim()}`,
  };
  return { state: { ...state, panels }, request };
}

/** Apply a search response for one panel; stale responses are discarded. */
export function applySearch(
  state: SessionState,
  panelIndex: number,
  seq: number,
  response: SearchResponse,
): SessionState {
  const panel = state.panels[panelIndex];
  if (!panel || panel.seq !== seq) return state; // superseded by a newer edit
  const panels = state.panels.map((p) =>
    p.index === panelIndex
      ? { ...p, hits: response.hits, fallback: response.fallback, loading: false, error: null }
      : p,
  );
  return { ...state, panels };
}

export function applySearchError(
  state: SessionState,
  panelIndex: number,
  seq: number,
  code: string,
  message: string,
): SessionState {
  const panel = state.panels[panelIndex];
  if (!panel || panel.seq !== seq) return state;
  const panels = state.panels.map((p) =>
    p.index === panelIndex
      ? { ...p, loading: false, error: message, offerFallback: code === "unknown_cluster" }
      : p,
  );
  return { ...state, panels };
}
