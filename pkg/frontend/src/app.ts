/**
 * DOM wiring for the review UI. All behaviour decisions live in state.ts
 * and all network calls in api.ts; this file only connects them to the
 * page.
 */

import { ApiError, loadConfig, Progress, ReviewApi } from "./api.js";
import {
  approveBody,
  directionOf,
  displayText,
  editBuffer,
  makeTaskView,
  rejectBody,
  shortcutFor,
  TaskView,
} from "./state.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function main(): Promise<void> {
  const api = new ReviewApi(await loadConfig());

  const reviewerInput = el<HTMLInputElement>("reviewer");
  const startBtn = el<HTMLButtonElement>("start");
  const image = el<HTMLImageElement>("sample-image");
  const editor = el<HTMLTextAreaElement>("editor");
  const preview = el<HTMLDivElement>("preview");
  const harakatToggle = el<HTMLInputElement>("harakat");
  const approveBtn = el<HTMLButtonElement>("approve");
  const rejectBtn = el<HTMLButtonElement>("reject");
  const skipBtn = el<HTMLButtonElement>("skip");
  const banner = el<HTMLDivElement>("banner");
  const emptyState = el<HTMLDivElement>("empty");
  const workArea = el<HTMLDivElement>("work");
  const progressBar = el<HTMLDivElement>("progress");

  let view: TaskView | null = null;
  let reviewer = "";

  function setBanner(text: string, isError: boolean): void {
    banner.textContent = text;
    banner.className = isError ? "banner error" : "banner";
    banner.hidden = text === "";
  }

  function renderProgress(p: Progress): void {
    const done = p.approved + p.rejected;
    progressBar.textContent =
      `${done}/${p.total} done — ${p.pending} pending, ` +
      `${p.in_review} in review`;
  }

  function renderTask(): void {
    const hasTask = view !== null;
    workArea.hidden = !hasTask;
    emptyState.hidden = hasTask;
    approveBtn.disabled = !hasTask;
    rejectBtn.disabled = !hasTask;
    skipBtn.disabled = !hasTask;
    if (!view) return;
    image.src = view.imageUrl;
    editor.value = view.buffer;
    editor.dir = directionOf(view.buffer);
    renderPreview();
  }

  function renderPreview(): void {
    if (!view) return;
    preview.textContent = displayText(view.buffer, harakatToggle.checked);
    preview.dir = directionOf(view.buffer);
  }

  async function loadNext(): Promise<void> {
    setBanner("", false);
    try {
      const resp = await api.nextTask(reviewer);
      renderProgress(resp.progress);
      view = resp.task
        ? makeTaskView(resp.task, api.imageUrl(resp.task.sample_id))
        : null;
      renderTask();
      if (view) editor.focus();
    } catch (e) {
      view = null;
      renderTask();
      setBanner(`Could not reach the server: ${String(e)} — press Retry.`, true);
    }
  }

  async function doSubmit(body: {
    action: string;
    reviewer: string;
    text?: string;
    reason?: string;
  }): Promise<void> {
    if (!view) return;
    try {
      await api.submit(view.taskId, body);
      await loadNext();
    } catch (e) {
      // Buffer is preserved: only the banner changes on failure.
      const detail = e instanceof ApiError ? e.detail : String(e);
      setBanner(detail, true);
    }
  }

  function approve(): void {
    if (!view) return;
    void doSubmit(approveBody(view, reviewer));
  }

  function reject(): void {
    if (!view) return;
    const reason = window.prompt("Reject reason (required):") ?? "";
    const body = rejectBody(reviewer, reason);
    if (!body) {
      setBanner("Rejection needs a reason.", true);
      return;
    }
    void doSubmit(body);
  }

  async function skip(): Promise<void> {
    if (!view) return;
    try {
      await api.release(view.taskId);
      await loadNext();
    } catch (e) {
      setBanner(String(e), true);
    }
  }

  startBtn.addEventListener("click", () => {
    reviewer = reviewerInput.value.trim();
    if (!reviewer) {
      setBanner("Enter a reviewer name first.", true);
      return;
    }
    void loadNext();
  });

  el<HTMLButtonElement>("retry").addEventListener("click", () => {
    if (reviewer) void loadNext();
  });

  editor.addEventListener("input", () => {
    if (!view) return;
    view = editBuffer(view, editor.value);
    renderPreview();
  });

  harakatToggle.addEventListener("change", renderPreview);
  approveBtn.addEventListener("click", approve);
  rejectBtn.addEventListener("click", reject);
  skipBtn.addEventListener("click", () => void skip());

  document.addEventListener("keydown", (ev) => {
    const editing = document.activeElement === editor;
    if (editing && ev.key === "Escape") {
      editor.blur();
      return;
    }
    const action = shortcutFor(ev.key, editing);
    if (!action) return;
    ev.preventDefault();
    if (action === "approve") approve();
    else if (action === "reject") reject();
    else if (action === "skip") void skip();
    else if (action === "edit") editor.focus();
  });
}

void main();
