/**
 * Pure view-state logic: what to render and which request a user action
 * maps to. Kept free of DOM and network so it unit-tests in plain node.
 *
 * The invariant that matters most: the buffer is never transformed on the
 * way in or out. An untouched task approves with the pseudo-label exactly
 * as the server sent it, byte for byte.
 */

import type { Task } from "./api.js";

export interface TaskView {
  taskId: string;
  imageUrl: string;
  buffer: string;
  pseudoLabel: string;
  dirty: boolean;
  status: string;
}

export function makeTaskView(task: Task, imageUrl: string): TaskView {
  return {
    taskId: task.task_id,
    imageUrl,
    buffer: task.pseudo_label,
    pseudoLabel: task.pseudo_label,
    dirty: false,
    status: task.status,
  };
}

export function editBuffer(view: TaskView, text: string): TaskView {
  return { ...view, buffer: text, dirty: text !== view.pseudoLabel };
}

export type SubmitBody = {
  action: "approve" | "correct" | "reject";
  reviewer: string;
  text?: string;
  reason?: string;
};

/**
 * Approve sends a plain approve when the buffer is untouched and a
 * correct(buffer) when it is dirty — the reviewer just presses one key
 * either way.
 */
export function approveBody(view: TaskView, reviewer: string): SubmitBody {
  if (view.dirty) {
    return { action: "correct", reviewer, text: view.buffer };
  }
  return { action: "approve", reviewer };
}

/** Reject needs a non-blank reason; blocked client-side otherwise. */
export function rejectBody(
  reviewer: string,
  reason: string,
): SubmitBody | null {
  if (!reason.trim()) return null;
  return { action: "reject", reviewer, reason };
}

export type ShortcutAction = "approve" | "edit" | "reject" | "skip" | null;

/**
 * Keyboard map: A approve, E focus editor, R reject, N skip/release.
 * Shortcuts are ignored while typing in the editor (except Escape, which
 * the app layer handles) so letters can be typed normally.
 */
export function shortcutFor(key: string, editing: boolean): ShortcutAction {
  if (editing) return null;
  switch (key.toLowerCase()) {
    case "a":
      return "approve";
    case "e":
      return "edit";
    case "r":
      return "reject";
    case "n":
      return "skip";
    default:
      return null;
  }
}

const ARABIC_MARKS = /[\u064B-\u065F\u0670\u06D6-\u06ED\u08D3-\u08FF]/g;

/**
 * Display text for the preview pane. The editor always keeps the full
 * text; the harakat toggle only affects this read-only rendering.
 */
export function displayText(text: string, showHarakat: boolean): string {
  return showHarakat ? text : text.replace(ARABIC_MARKS, "");
}

const RTL_CHAR = /[\u0600-\u06FF\u0750-\u077F\u08A0-\u08FF\uFB50-\uFDFF\uFE70-\uFEFF]/;

/** Lines with any Arabic letter render right-to-left. */
export function directionOf(text: string): "rtl" | "ltr" {
  return RTL_CHAR.test(text) ? "rtl" : "ltr";
}
