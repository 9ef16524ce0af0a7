// Modal dialogs: concept/attribute search, relation creation, rename,
// relabel, and jump-to-sentence. One dialog at a time; while it is open
// it owns the keyboard.

import { ApiError, type SearchHit } from "./api.js";
import type { Ctx } from "./context.js";
import {
  applyResponse, childHasParent, emptySelection, pendingText, pendingTokenIds,
} from "./state.js";

export type DialogKind =
  "concept" | "attribute" | "relation" | "rename" | "relabel" | "jump";

export interface Dialog {
  kind: DialogKind;
  hits: SearchHit[];
  hitIndex: number;
  picked: boolean;          // an arrow key chose a hit; Enter takes it
  referent: boolean;
  referentLocked: boolean;  // second parent: must stay a referent
  inverse: boolean;
  parentDescription: string;
  targetId: string;         // rename/relabel target
  error: string;
}

export const SEARCH_DEBOUNCE_MS = 150;

let dialog: Dialog | null = null;
let searchTimer: ReturnType<typeof setTimeout> | null = null;

export function currentDialog(): Dialog | null {
  return dialog;
}

const TITLES: Record<DialogKind, string> = {
  concept: "New concept",
  attribute: "New attribute",
  relation: "New relation",
  rename: "Rename node",
  relabel: "Relabel relation",
  jump: "Jump to sentence",
};

export function openDialog(ctx: Ctx, kind: DialogKind): void {
  const { ws, doc } = ctx;
  const s = ws.sentence;
  if (!s) {
    ws.notice = "no batch open";
    return;
  }
  const sel = ws.selection;
  let prefill = "";
  let targetId = "";
  let referent = false;
  let locked = false;

  if (kind === "relation") {
    if (!sel.parent || !sel.child) {
      ws.notice = "mark a parent (p) and a child (k) first";
      return;
    }
    referent = childHasParent(s.graph, sel.child);
    locked = referent;
  } else if (kind === "rename" || kind === "relabel") {
    const id = sel.focus;
    if (!id) {
      ws.notice = "no node focused";
      return;
    }
    targetId = id;
    prefill = kind === "rename"
      ? s.graph.concepts[id].name
      : s.graph.relations[id].label;
  } else if (kind === "concept" || kind === "attribute") {
    prefill = pendingText(ws);
  }

  dialog = {
    kind, hits: [], hitIndex: -1, picked: false,
    referent, referentLocked: locked, inverse: false,
    parentDescription: "", targetId, error: "",
  };

  doc.getElementById("dialog-title")!.textContent = TITLES[kind];
  const input = doc.getElementById("dialog-input") as HTMLInputElement;
  input.value = prefill;
  (doc.getElementById("dialog-referent") as HTMLInputElement).checked = referent;
  doc.getElementById("dialog-referent-row")!.classList.toggle("hidden", kind !== "relation");
  doc.getElementById("dialog-inverse-row")!.classList.toggle("hidden", kind !== "relation");
  (doc.getElementById("dialog-inverse") as HTMLInputElement).checked = false;
  doc.getElementById("dialog")!.classList.remove("hidden");
  renderDialog(ctx);
  input.focus();

  if (kind === "relation") {
    // the description box carries the parent frame's argument structure
    const parentName = s.graph.concepts[sel.parent!].name;
    ctx.enqueue(async () => {
      if (dialog?.kind !== "relation") return;
      dialog.parentDescription = await ctx.api.frame(parentName);
      renderDialog(ctx);
    });
  }
  if (prefill && kind !== "jump") queueSearch(ctx, prefill);
}

export function closeDialog(ctx: Ctx): void {
  dialog = null;
  if (searchTimer !== null) clearTimeout(searchTimer);
  searchTimer = null;
  ctx.doc.getElementById("dialog")!.classList.add("hidden");
}

function searchKind(kind: DialogKind): "concepts" | "relations" {
  return kind === "relation" || kind === "relabel" ? "relations" : "concepts";
}

// Debounced live search; every keystroke restarts the window.
export function queueSearch(ctx: Ctx, query: string): void {
  if (!dialog || dialog.kind === "jump") return;
  if (searchTimer !== null) clearTimeout(searchTimer);
  searchTimer = setTimeout(() => {
    searchTimer = null;
    ctx.enqueue(async () => {
      if (!dialog) return;
      dialog.hits = await ctx.api.search(query.trim(), searchKind(dialog.kind));
      dialog.hitIndex = dialog.hits.length ? 0 : -1;
      dialog.picked = false;
      renderDialog(ctx);
    });
  }, SEARCH_DEBOUNCE_MS);
}

export function onDialogInput(ctx: Ctx): void {
  if (!dialog) return;
  dialog.picked = false;
  dialog.error = "";
  const input = ctx.doc.getElementById("dialog-input") as HTMLInputElement;
  queueSearch(ctx, input.value);
}

export function onReferentToggle(ctx: Ctx): void {
  if (!dialog) return;
  const box = ctx.doc.getElementById("dialog-referent") as HTMLInputElement;
  if (dialog.referentLocked && !box.checked) {
    box.checked = true;          // cannot be unchecked, only warned about
    dialog.error = "the child already has a parent; this edge must be a referent";
    renderDialog(ctx);
    return;
  }
  dialog.referent = box.checked;
}

export function onInverseToggle(ctx: Ctx): void {
  if (!dialog) return;
  const box = ctx.doc.getElementById("dialog-inverse") as HTMLInputElement;
  dialog.inverse = box.checked;
}

// Returns true when the key was consumed by the open dialog.
export function handleDialogKey(ctx: Ctx, ev: KeyboardEvent): boolean {
  if (!dialog) return false;
  if (ev.key === "Escape") {
    closeDialog(ctx);
    ctx.repaint();
    return true;
  }
  if (ev.key === "ArrowDown" || ev.key === "ArrowUp") {
    if (dialog.hits.length) {
      const d = ev.key === "ArrowDown" ? 1 : -1;
      dialog.hitIndex = Math.min(dialog.hits.length - 1, Math.max(0, dialog.hitIndex + d));
      dialog.picked = true;
      renderDialog(ctx);
    }
    return true;
  }
  if (ev.key === "Enter") {
    commit(ctx);
    return true;
  }
  return false;                  // typing reaches the input
}

function chosenText(ctx: Ctx): string {
  const input = ctx.doc.getElementById("dialog-input") as HTMLInputElement;
  if (dialog!.picked && dialog!.hitIndex >= 0) return dialog!.hits[dialog!.hitIndex].name;
  return input.value.trim();
}

function commit(ctx: Ctx): void {
  const d = dialog!;
  const { ws } = ctx;
  const idx = ws.sentence!.index;

  if (d.kind === "jump") {
    const input = ctx.doc.getElementById("dialog-input") as HTMLInputElement;
    const target = Number.parseInt(input.value.trim(), 10);
    if (Number.isNaN(target)) {
      d.error = "enter a sentence index (0-based)";
      renderDialog(ctx);
      return;
    }
    ctx.enqueue(async () => {
      try {
        await ctx.api.setCursor(target);
        const dto = await ctx.api.sentence(target);
        ws.sentence = dto;
        ws.selection = emptySelection();
        ws.notice = `sentence ${target}`;
        closeDialog(ctx);
      } catch (e) {
        if (!(e instanceof ApiError)) throw e;
        d.error = e.message;
        renderDialog(ctx);
      }
      ctx.repaint();
    });
    return;
  }

  const name = chosenText(ctx);
  if (!name) {
    d.error = "name required";
    renderDialog(ctx);
    return;
  }
  const sel = ws.selection;
  const spans = pendingTokenIds(sel);
  const parent = sel.parent;
  const child = sel.child;

  ctx.enqueue(async () => {
    try {
      let dto;
      let note;
      if (d.kind === "concept" || d.kind === "attribute") {
        dto = d.kind === "concept"
          ? await ctx.api.addConcept(idx, name, spans)
          : await ctx.api.addAttribute(idx, name, spans);
        note = `created ${dto.id} ${name}`;
      } else if (d.kind === "relation") {
        dto = await ctx.api.addRelation(idx, {
          parent_id: parent!, child_id: child!, label: name,
          referent: d.referent, inverse: d.inverse,
        });
        note = `created ${dto.id} :${dto.label}${dto.referent ? " (referent)" : ""}`;
      } else if (d.kind === "rename") {
        dto = await ctx.api.renameConcept(idx, d.targetId, name);
        note = `renamed ${d.targetId} to ${name}`;
      } else {
        dto = await ctx.api.relabelRelation(idx, d.targetId, name);
        note = `relabeled ${d.targetId} to ${name}`;
      }
      applyResponse(ws, dto, note);
      if (dto.id) ws.selection.focus = dto.id;
      closeDialog(ctx);
    } catch (e) {
      if (!(e instanceof ApiError)) throw e;
      d.error = e.message;
      renderDialog(ctx);
    }
    ctx.repaint();
  });
}

export function renderDialog(ctx: Ctx): void {
  const { doc } = ctx;
  const d = dialog;
  if (!d) return;
  const desc = doc.getElementById("dialog-desc")!;
  if (d.kind === "relation") {
    desc.textContent = d.parentDescription;
  } else {
    desc.textContent = d.hitIndex >= 0 ? d.hits[d.hitIndex].description : "";
  }
  const list = doc.getElementById("dialog-hits")!;
  list.textContent = "";
  d.hits.forEach((hit, i) => {
    const row = doc.createElement("div");
    row.className = i === d.hitIndex ? "hit active" : "hit";
    row.textContent = hit.name;
    list.append(row);
  });
  doc.getElementById("dialog-error")!.textContent = d.error;
}
