/** Pure HTML builders. Everything user-visible comes verbatim from the
 * service payload (scores formatted for display only); keeping these as
 * string functions makes render order testable without a DOM. */

import { Panel, SessionState, labelOptions } from "./state.js";
import { WireDetection, WireHit } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

/** Detection overlay rectangle scaled from image pixels to a rendered size. */
export function overlayStyle(
  detection: WireDetection,
  imageWidth: number,
  imageHeight: number,
  renderedWidth: number,
  renderedHeight: number,
): string {
  const [x1, y1, x2, y2] = detection.box;
  const sx = renderedWidth / imageWidth;
  const sy = renderedHeight / imageHeight;
  const left = (x1 * sx).toFixed(1);
  const top = (y1 * sy).toFixed(1);
  const width = ((x2 - x1) * sx).toFixed(1);
  const height = ((y2 - y1) * sy).toFixed(1);
  return `left:${left}px;top:${top}px;width:${width}px;height:${height}px`;
}

export function renderHit(hit: WireHit, rank: number): string {
  const price = hit.price === null ? "" : `<span class="price">${hit.price.toFixed(2)}</span>`;
  return (
    `<li class="hit" data-id="${escapeHtml(hit.id)}">` +
    `<span class="rank">#${rank}</span>` +
    `<span class="score">${hit.score.toFixed(4)}</span>` +
    `<span class="title">${escapeHtml(hit.title)}</span>` +
    `<span class="label">${escapeHtml(hit.label)}</span>` +
    price +
    `</li>`
  );
}

export function renderHits(hits: WireHit[]): string {
  if (!hits.length) return `<p class="empty">no matching products</p>`;
  return `<ol class="hits">${hits.map((h, i) => renderHit(h, i + 1)).join("")}</ol>`;
}

export function renderLabelSelect(panel: Panel): string {
  const options = labelOptions(panel)
    .map((label) => {
      const selected = label === panel.label ? " selected" : "";
      return `<option value="${escapeHtml(label)}"${selected}>${escapeHtml(label)}</option>`;
    })
    .join("");
  return `<select class="label-select" data-panel="${panel.index}">${options}</select>`;
}

export function renderPanel(panel: Panel, imageWidth: number, imageHeight: number): string {
  const detection = panel.group.detection;
  const overlay = overlayStyle(detection, imageWidth, imageHeight, 240, 240 * (imageHeight / imageWidth));
  const badge = panel.fallback ? `<span class="badge fallback">fallback</span>` : "";
  const spinner = panel.loading ? `<span class="badge loading">loading…</span>` : "";
  const error = panel.error
    ? `<p class="panel-error">${escapeHtml(panel.error)}` +
      (panel.offerFallback
        ? ` <button class="retry-fallback" data-panel="${panel.index}">search all clusters</button>`
        : "") +
      `</p>`
    : "";
  return (
    `<section class="panel" data-panel="${panel.index}" data-crop="${escapeHtml(panel.group.crop_key)}">` +
    `<header><h3>${escapeHtml(detection.class)}</h3>` +
    `<span class="confidence">${detection.confidence.toFixed(2)}</span>${badge}${spinner}</header>` +
    `<div class="preview"><div class="overlay" style="${overlay}"></div></div>` +
    `<div class="controls">` +
    renderLabelSelect(panel) +
    `<textarea class="caption-edit" data-panel="${panel.index}">${escapeHtml(panel.captionBody)}</textarea>` +
    `<button class="requery" data-panel="${panel.index}">re-query</button>` +
    `</div>` +
    error +
    renderHits(panel.hits) +
    `</section>`
  );
}

export function renderSession(state: SessionState, imageWidth: number, imageHeight: number): string {
  if (state.status === "idle") {
    return `<p class="empty">pick a fixture image or upload a photo to begin</p>`;
  }
  if (state.status === "loading") {
    return `<p class="empty">analyzing image…</p>`;
  }
  if (state.status === "error") {
    return `<p class="banner error">${escapeHtml(state.banner ?? "request failed")}</p>`;
  }
  if (state.status === "no_detections") {
    return `<p class="banner">no garments detected in this image — try another one</p>`;
  }
  return state.panels.map((p) => renderPanel(p, imageWidth, imageHeight)).join("");
}
