/** DOM wiring: the only module that touches document/window. */

import { clusterName } from "./analyze.js";
import { ApiFailure, Client } from "./api.js";
import {
  SessionState,
  applyBanner,
  applyRecommend,
  applySearch,
  applySearchError,
  beginEdit,
  initialState,
  startSubmit,
} from "./state.js";
import { renderSession } from "./render.js";

const FIXTURE_IMAGES = [
  "img_001", "img_002", "img_003", "img_004", "img_005",
  "img_006", "img_007", "img_008", "img_009", "img_010", "img_011",
];

const baseUrl = (window as unknown as { STYLESEARCH_BASE_URL?: string }).STYLESEARCH_BASE_URL ?? "";
const client = new Client(baseUrl);

let state: SessionState = initialState();
let imageSize: [number, number] = [512, 1024];

function redraw(): void {
  const root = document.getElementById("panels");
  if (!root) return;
  root.innerHTML = renderSession(state, imageSize[0], imageSize[1]);
  wirePanelControls(root);
}

function setState(next: SessionState): void {
  state = next;
  redraw();
}

async function submitImageId(imageId: string): Promise<void> {
  setState(startSubmit(state));
  try {
    const result = await client.recommendByImageId(imageId);
    setState(applyRecommend(state, result));
  } catch (exc) {
    const message = exc instanceof ApiFailure ? `${exc.error.code}: ${exc.error.message}` : String(exc);
    setState(applyBanner(state, message));
  }
}

async function submitUpload(file: File): Promise<void> {
  setState(startSubmit(state));
  try {
    const bytes = new Uint8Array(await file.arrayBuffer());
    let binary = "";
    bytes.forEach((b) => (binary += String.fromCharCode(b)));
    const bitmap = await createImageBitmap(file).catch(() => null);
    const [width, height] = bitmap ? [bitmap.width, bitmap.height] : imageSize;
    imageSize = [width, height];
    const result = await client.recommendByUpload(btoa(binary), width, height);
    setState(applyRecommend(state, result));
  } catch (exc) {
    const message = exc instanceof ApiFailure ? `${exc.error.code}: ${exc.error.message}` : String(exc);
    setState(applyBanner(state, message));
  }
}

async function requery(panelIndex: number, fallback = false): Promise<void> {
  const root = document.getElementById("panels");
  if (!root) return;
  const select = root.querySelector<HTMLSelectElement>(`select.label-select[data-panel="${panelIndex}"]`);
  const textarea = root.querySelector<HTMLTextAreaElement>(`textarea.caption-edit[data-panel="${panelIndex}"]`);
  const label = select?.value ?? state.panels[panelIndex]?.label ?? "";
  const body = textarea?.value ?? state.panels[panelIndex]?.captionBody ?? "";
  const { state: next, request } = beginEdit(state, panelIndex, label, body, clusterName);
  setState(next);
  if (!request) return; // client-side validation failed; inline message shown
  try {
    const response = await client.search(request.cluster, request.query, 10, fallback);
    setState(applySearch(state, request.panelIndex, request.seq, response));
  } catch (exc) {
    if (exc instanceof ApiFailure) {
      setState(applySearchError(state, request.panelIndex, request.seq, exc.error.code, exc.error.message));
    } else {
      setState(applySearchError(state, request.panelIndex, request.seq, "connection_error", String(exc)));
    }
  }
}

function wirePanelControls(root: HTMLElement): void {
  root.querySelectorAll<HTMLButtonElement>("button.requery").forEach((button) => {
    button.addEventListener("click", () => void requery(Number(button.dataset.panel)));
  });
  root.querySelectorAll<HTMLButtonElement>("button.retry-fallback").forEach((button) => {
    button.addEventListener("click", () => void requery(Number(button.dataset.panel), true));
  });
}

function wireTopBar(): void {
  const picker = document.getElementById("fixture-picker") as HTMLSelectElement | null;
  if (picker) {
    for (const id of FIXTURE_IMAGES) {
      const option = document.createElement("option");
      option.value = id;
      option.textContent = id;
      picker.appendChild(option);
    }
  }
  document.getElementById("submit-fixture")?.addEventListener("click", () => {
    if (picker?.value) void submitImageId(picker.value);
  });
  const upload = document.getElementById("upload") as HTMLInputElement | null;
  upload?.addEventListener("change", () => {
    const file = upload.files?.[0];
    if (file) void submitUpload(file);
  });
  void client
    .health()
    .then(() => setBanner("service reachable"))
    .catch(() => setBanner("service unreachable — start `stylesearch serve` first"));
}

function setBanner(text: string): void {
  const el = document.getElementById("status");
  if (el) el.textContent = text;
}

document.addEventListener("DOMContentLoaded", () => {
  wireTopBar();
  redraw();
});
