// Wiring: builds the workspace context, loads the first sentence, and
// attaches the document-level listeners. Pure logic lives in the other
// modules so tests can drive them with a fake Api.

import type { Api } from "./api.js";
import { ApiError } from "./api.js";
import type { Ctx } from "./context.js";
import { onDialogInput, onInverseToggle, onReferentToggle } from "./dialogs.js";
import { dispatch } from "./keymap.js";
import { render } from "./render.js";
import { initialWorkspace } from "./state.js";

export function init(doc: Document, api: Api): Ctx {
  const ws = initialWorkspace();
  const off = new AbortController();
  // All mutations flow through one promise chain: a keystroke can never
  // observe the batch mid-update, and tests await idle() for quiescence.
  let chain: Promise<void> = Promise.resolve();
  const ctx: Ctx = {
    doc,
    api,
    ws,
    repaint: () => render(doc, ws),
    enqueue(fn) {
      chain = chain.then(fn).catch(err => {
        ws.notice = err instanceof ApiError ? `error: ${err.message}` : `error: ${err}`;
        render(doc, ws);
      });
    },
    idle: () => chain,
    dispose: () => off.abort(),
  };

  const opts = { signal: off.signal };
  doc.addEventListener("keydown", ev => dispatch(ctx, ev), opts);
  doc.addEventListener("click", ev => onClick(ctx, ev), opts);
  doc.getElementById("dialog-input")!
    .addEventListener("input", () => onDialogInput(ctx), opts);
  doc.getElementById("dialog-referent")!
    .addEventListener("change", () => onReferentToggle(ctx), opts);
  doc.getElementById("dialog-inverse")!
    .addEventListener("change", () => onInverseToggle(ctx), opts);

  ctx.enqueue(async () => {
    ws.meta = await api.meta();
    if (ws.meta.sentences > 0) {
      ws.sentence = await api.sentence(ws.meta.cursor);
    }
    ws.notice = `opened ${ws.meta.source} (${ws.meta.sentences} sentences)`;
    ctx.repaint();
  });
  ctx.repaint();
  return ctx;
}

// Mouse input is a convenience mirror of the keyboard: clicks only move
// the cursor or focus, they never mutate the graph.
function onClick(ctx: Ctx, ev: MouseEvent): void {
  const el = (ev.target as HTMLElement | null)?.closest("[data-i], [data-cid], [data-id]");
  if (!(el instanceof HTMLElement)) return;
  const sel = ctx.ws.selection;
  if (el.dataset.i !== undefined) {
    const i = Number(el.dataset.i);
    if (ev.shiftKey) {
      if (sel.anchor === null) sel.anchor = sel.cursor;
    } else {
      sel.anchor = null;
    }
    sel.cursor = i;
  } else {
    sel.focus = el.dataset.cid ?? el.dataset.id ?? null;
  }
  ctx.repaint();
}
