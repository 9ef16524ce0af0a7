// Key bindings. Everything but raw text entry goes through this table;
// the overlay cheat sheet is generated from it so the docs on screen
// can never drift from the behavior.
import { closeDialog, currentDialog, handleDialogKey, openDialog } from "./dialogs.js";
import { applyResponse, clearMarks, confirmSpan, emptySelection, moveFocus, pendingTokenIds, tokens, } from "./state.js";
function moveCursor(ctx, delta, extend) {
    const sel = ctx.ws.selection;
    const n = tokens(ctx.ws).length;
    if (n === 0)
        return;
    if (extend && sel.anchor === null)
        sel.anchor = sel.cursor;
    if (!extend)
        sel.anchor = null;
    sel.cursor = Math.min(n - 1, Math.max(0, sel.cursor + delta));
}
function mark(ctx, which) {
    const sel = ctx.ws.selection;
    if (!sel.focus || !sel.focus.startsWith("c")) {
        ctx.ws.notice = "focus a concept first (arrow up/down)";
        return;
    }
    const other = which === "parent" ? sel.child : sel.parent;
    if (other === sel.focus) {
        ctx.ws.notice = "a node cannot be both parent and child";
        return;
    }
    sel[which] = sel.focus;
    ctx.ws.notice = `${which}: ${sel.focus}`;
}
function gotoSentence(ctx, index) {
    const { ws } = ctx;
    const count = ws.meta?.sentences ?? 0;
    if (index < 0) {
        ws.notice = "already at the first sentence";
        return;
    }
    if (index >= count) {
        ws.notice = "already at the last sentence";
        return;
    }
    ctx.enqueue(async () => {
        await ctx.api.setCursor(index);
        ws.sentence = await ctx.api.sentence(index);
        ws.selection = emptySelection();
        ws.notice = `sentence ${index}`;
        ctx.repaint();
    });
}
function alignPending(ctx, remove) {
    const { ws } = ctx;
    const sel = ws.selection;
    const ids = pendingTokenIds(sel);
    if (!sel.focus || !sel.focus.startsWith("c")) {
        ws.notice = "focus a concept first (arrow up/down)";
        return;
    }
    if (ids.length === 0) {
        ws.notice = "confirm a span first (x)";
        return;
    }
    const target = sel.focus;
    ctx.enqueue(async () => {
        const dto = await ctx.api.align(ws.sentence.index, target, ids, remove);
        applyResponse(ws, dto, `${remove ? "unaligned" : "aligned"} ${target}`);
        ws.selection.focus = target;
        ctx.repaint();
    });
}
function deleteFocused(ctx) {
    const { ws } = ctx;
    const id = ws.selection.focus;
    if (!id) {
        ws.notice = "no node focused";
        return;
    }
    ctx.enqueue(async () => {
        const dto = id.startsWith("c")
            ? await ctx.api.deleteConcept(ws.sentence.index, id)
            : await ctx.api.deleteRelation(ws.sentence.index, id);
        applyResponse(ws, dto, `deleted ${id}`);
        ctx.repaint();
    });
}
function escape(ctx) {
    const { ws } = ctx;
    if (ws.overlay) {
        ws.overlay = false;
        return;
    }
    clearMarks(ws.selection);
    ws.selection.focus = null;
    ws.notice = "selection cleared";
}
const BINDINGS = [
    { key: "ArrowLeft", help: "move token cursor left", run: c => moveCursor(c, -1, false) },
    { key: "ArrowRight", help: "move token cursor right", run: c => moveCursor(c, 1, false) },
    { key: "ArrowLeft", shift: true, help: "extend span left", run: c => moveCursor(c, -1, true) },
    { key: "ArrowRight", shift: true, help: "extend span right", run: c => moveCursor(c, 1, true) },
    { key: "x", help: "confirm span (repeat for disjoint spans)", run: c => confirmSpan(c.ws.selection) },
    { key: "ArrowUp", help: "focus previous node", run: c => moveFocus(c.ws, -1) },
    { key: "ArrowDown", help: "focus next node", run: c => moveFocus(c.ws, 1) },
    { key: "p", help: "mark focused node as parent (red)", run: c => mark(c, "parent") },
    { key: "k", help: "mark focused node as child (green)", run: c => mark(c, "child") },
    { key: "c", help: "new concept from confirmed spans", run: c => openDialog(c, "concept") },
    { key: "a", help: "new attribute/constant", run: c => openDialog(c, "attribute") },
    { key: "r", help: "new relation parent -> child", run: c => openDialog(c, "relation") },
    { key: "t", help: "align confirmed spans to focused node", run: c => alignPending(c, false) },
    { key: "T", help: "remove confirmed spans from focused node", run: c => alignPending(c, true) },
    { key: "e", help: "rename node / relabel relation", run: c => {
            const id = c.ws.selection.focus;
            openDialog(c, id?.startsWith("r") ? "relabel" : "rename");
        } },
    { key: "d", help: "delete focused node or relation", run: deleteFocused },
    { key: ",", help: "previous sentence", run: c => gotoSentence(c, (c.ws.sentence?.index ?? 0) - 1) },
    { key: ".", help: "next sentence", run: c => gotoSentence(c, (c.ws.sentence?.index ?? 0) + 1) },
    { key: "j", help: "jump to sentence by index", run: c => openDialog(c, "jump") },
    { key: "s", help: "save the batch", run: c => c.enqueue(async () => {
            const path = await c.api.save();
            c.ws.notice = `saved to ${path}`;
            c.repaint();
        }) },
    { key: "?", help: "toggle this cheat sheet", run: c => { c.ws.overlay = !c.ws.overlay; } },
    { key: "Escape", help: "clear selection / close overlay", run: escape },
];
export function bindingHelp() {
    return BINDINGS.map(b => [b.shift ? `Shift+${b.key}` : b.key, b.help]);
}
// Entry point for document-level keydown. Returns true when handled.
export function dispatch(ctx, ev) {
    if (currentDialog()) {
        if (handleDialogKey(ctx, ev)) {
            ev.preventDefault();
            return true;
        }
        return false; // the dialog input takes the keystroke
    }
    if (ev.ctrlKey || ev.altKey || ev.metaKey)
        return false;
    const target = ev.target;
    if (target && (target.tagName === "INPUT" || target.tagName === "TEXTAREA"))
        return false;
    for (const b of BINDINGS) {
        if (b.key !== ev.key)
            continue;
        if (b.key.startsWith("Arrow") && Boolean(b.shift) !== ev.shiftKey)
            continue;
        b.run(ctx);
        ctx.repaint();
        ev.preventDefault();
        return true;
    }
    return false;
}
// re-exported so main can close a dialog when the batch changes under it
export { closeDialog };
