/** Application wiring: query upload, frame polling, hover and drag. */

import { ApiClient, ApiError } from "./api.js";
import { DragController, attachDragHandlers } from "./drag.js";
import { Renderer } from "./renderer.js";
import { ViewState } from "./state.js";

const POLL_INTERVAL_MS = 33; // ~30 Hz
const STEPS_PER_POLL = 2;

export function createApp(root: HTMLElement, serviceUrl: string): { stop: () => void } {
  const api = new ApiClient(serviceUrl.replace(/\/$/, ""));
  const state = new ViewState();

  const toolbar = document.createElement("div");
  toolbar.className = "toolbar";
  const fileInput = document.createElement("input");
  fileInput.type = "file";
  fileInput.accept = "image/*";
  toolbar.appendChild(fileInput);
  root.appendChild(toolbar);

  const scene = document.createElement("div");
  scene.className = "scene";
  scene.style.position = "relative";
  root.appendChild(scene);

  const toast = document.createElement("div");
  toast.className = "toast";
  toast.style.display = "none";
  root.appendChild(toast);
  let toastTimer: ReturnType<typeof setTimeout> | undefined;
  const showToast = (message: string) => {
    toast.textContent = message;
    toast.style.display = "block";
    clearTimeout(toastTimer);
    toastTimer = setTimeout(() => (toast.style.display = "none"), 4000);
  };

  const renderer = new Renderer(scene, { thumbUrl: (id) => api.thumbUrl(id) });
  const drag = new DragController(api, state, showToast);
  attachDragHandlers(scene, drag);

  scene.addEventListener("pointerover", (ev) => {
    const el = (ev.target as HTMLElement).closest<HTMLElement>("[data-particle-id]");
    if (el?.dataset.level === "image") {
      state.hover = el.dataset.particleId ?? null;
      renderer.render(state);
    }
  });
  scene.addEventListener("pointerout", () => {
    if (state.hover) {
      state.hover = null;
      renderer.render(state);
    }
  });

  fileInput.addEventListener("change", async () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    try {
      const resp = await api.query(file, file.name);
      state.startSession(resp.session_id, resp.result, resp.frame);
      renderer.render(state);
    } catch (err) {
      showToast(err instanceof ApiError ? `${err.status}: ${err.message}` : String(err));
    }
  });

  let polling = false;
  const timer = setInterval(async () => {
    if (!state.sessionId || polling || state.drag) return; // drag serializes its own pins
    polling = true;
    try {
      const frame = await api.step(state.sessionId, STEPS_PER_POLL);
      if (state.applyFrame(frame)) renderer.render(state);
    } catch (err) {
      if (err instanceof ApiError && err.status !== 409) showToast(`${err.status}: ${err.message}`);
    } finally {
      polling = false;
    }
  }, POLL_INTERVAL_MS);

  return { stop: () => clearInterval(timer) };
}
