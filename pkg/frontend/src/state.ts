// Workspace state. The rule that keeps this file small: everything
// about the graph comes from the last server response; the only local
// state is what the user has selected but not yet committed.

import type { GraphDto, MetaDto, SentenceDto } from "./api.js";

export interface Selection {
  cursor: number;            // token cursor
  anchor: number | null;     // shift-extension anchor, null = no live span
  pending: Set<number>;      // confirmed (x) token indexes
  focus: string | null;      // focused node: a cid or an rid
  parent: string | null;     // red mark
  child: string | null;      // green mark
}

export interface Workspace {
  meta: MetaDto | null;
  sentence: SentenceDto | null;
  selection: Selection;
  notice: string;
  overlay: boolean;          // shortcut cheat sheet
}

export function emptySelection(): Selection {
  return { cursor: 0, anchor: null, pending: new Set(), focus: null, parent: null, child: null };
}

export function initialWorkspace(): Workspace {
  return { meta: null, sentence: null, selection: emptySelection(), notice: "", overlay: false };
}

export function tokens(ws: Workspace): string[] {
  return ws.sentence?.graph.tokens ?? [];
}

// cursor..anchor as an inclusive range, normalized
export function liveSpan(sel: Selection): [number, number] | null {
  if (sel.anchor === null) return null;
  return [Math.min(sel.anchor, sel.cursor), Math.max(sel.anchor, sel.cursor)];
}

export function confirmSpan(sel: Selection): void {
  const span = liveSpan(sel) ?? [sel.cursor, sel.cursor];
  for (let i = span[0]; i <= span[1]; i++) sel.pending.add(i);
  sel.anchor = null;
}

export function pendingTokenIds(sel: Selection): number[] {
  return [...sel.pending].sort((a, b) => a - b);
}

// Pending tokens as text, contiguous runs joined by spaces — prefill
// for the concept dialog.
export function pendingText(ws: Workspace): string {
  const toks = tokens(ws);
  const ids = pendingTokenIds(ws.selection);
  const parts: string[] = [];
  for (let i = 0; i < ids.length; i++) {
    const word = toks[ids[i]] ?? "";
    if (i > 0 && ids[i] === ids[i - 1] + 1) parts[parts.length - 1] += ` ${word}`;
    else parts.push(word);
  }
  return parts.join(" ");
}

// Focus order: concepts then relations, in id-creation order (the JSON
// object preserves it).
export function focusOrder(g: GraphDto): string[] {
  return [...Object.keys(g.concepts), ...Object.keys(g.relations)];
}

export function moveFocus(ws: Workspace, delta: number): void {
  const g = ws.sentence?.graph;
  if (!g) return;
  const order = focusOrder(g);
  if (order.length === 0) return;
  const sel = ws.selection;
  const at = sel.focus === null ? -1 : order.indexOf(sel.focus);
  const next = at === -1 ? (delta > 0 ? 0 : order.length - 1)
                         : Math.min(order.length - 1, Math.max(0, at + delta));
  sel.focus = order[next];
}

// Whether cid already has a tree (non-referent) parent — read straight
// off the server's relation map, this is what pre-checks the referent
// box before the server would flip it anyway.
export function childHasParent(g: GraphDto, cid: string): boolean {
  return Object.values(g.relations).some(r => !r.referent && r.child_id === cid);
}

export function clearMarks(sel: Selection): void {
  sel.pending.clear();
  sel.anchor = null;
  sel.parent = null;
  sel.child = null;
}

// Install a mutation response: the envelope is the new sentence state.
export function applyResponse(ws: Workspace, dto: SentenceDto, notice: string): void {
  ws.sentence = { ...dto, tokens: dto.graph.tokens, tid: dto.graph.tid };
  clearMarks(ws.selection);
  if (ws.selection.focus !== null && !focusOrder(dto.graph).includes(ws.selection.focus)) {
    ws.selection.focus = null;         // the focused node was deleted
  }
  const warn = dto.warnings.length ? `  [${dto.warnings.join("; ")}]` : "";
  ws.notice = notice + warn;
}
