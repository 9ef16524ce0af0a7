// DOM rendering. One entry point, render(doc, ws), rebuilds every
// region from scratch — graphs are a few dozen nodes, so diffing would
// buy nothing. All text lands via textContent; nothing user-supplied is
// parsed as HTML.
import { liveSpan, tokens } from "./state.js";
import { bindingHelp } from "./keymap.js";
export function render(doc, ws) {
    renderMeta(doc, ws);
    renderTokens(doc, ws);
    renderGraph(doc, ws);
    renderNodes(doc, ws);
    renderWarnings(doc, ws);
    renderStatus(doc, ws);
    renderOverlay(doc, ws);
}
function el(doc, tag, cls, text) {
    const e = doc.createElement(tag);
    if (cls)
        e.className = cls;
    if (text !== undefined)
        e.textContent = text;
    return e;
}
function renderMeta(doc, ws) {
    const box = doc.getElementById("meta");
    box.textContent = "";
    const m = ws.meta;
    if (!m)
        return;
    const s = ws.sentence;
    const place = s ? `sentence ${s.index + 1} of ${m.sentences}` : "no batch open";
    box.append(el(doc, "span", "meta-item", s?.tid ?? ""), el(doc, "span", "meta-item", place), el(doc, "span", "meta-item", `annotator ${m.annotator}`), el(doc, "span", "meta-item", `scheme ${m.scheme}`));
}
function spanTokenIds(g, cid) {
    if (!cid || !(cid in g.concepts))
        return new Set();
    return new Set(g.concepts[cid].token_ids);
}
function renderTokens(doc, ws) {
    const box = doc.getElementById("tokens");
    box.textContent = "";
    const s = ws.sentence;
    if (!s)
        return;
    const sel = ws.selection;
    const live = liveSpan(sel);
    const covered = new Set(s.graph.covered_token_ids);
    const parentToks = spanTokenIds(s.graph, sel.parent);
    const childToks = spanTokenIds(s.graph, sel.child);
    tokens(ws).forEach((word, i) => {
        const t = el(doc, "span", "tok", word);
        t.dataset.i = String(i);
        if (covered.has(i))
            t.classList.add("covered");
        if (sel.pending.has(i))
            t.classList.add("pending");
        if (live && i >= live[0] && i <= live[1])
            t.classList.add("live");
        if (i === sel.cursor)
            t.classList.add("cursor");
        if (parentToks.has(i))
            t.classList.add("parent");
        if (childToks.has(i))
            t.classList.add("child");
        box.append(t);
    });
}
// Split one line of serializer output into plain text and node
// occurrences, using the server's variable map. Two shapes matter:
// "(var / name..." definitions and ":label var)))" mentions; constants
// stay plain text since they carry no variable.
export function linkifyLine(line, variables) {
    const pieces = [];
    let rest = line;
    const def = rest.match(/^(.*?\()([^\s/()]+)( \/.*)$/);
    if (def && variables[def[2]] !== undefined) {
        pieces.push({ text: def[1] });
        pieces.push({ text: def[2], cid: variables[def[2]], def: true });
        rest = def[3];
    }
    else {
        const ref = rest.match(/^(\s*:\S+ )([^\s()]+)(\)*)$/);
        if (ref && variables[ref[2]] !== undefined) {
            pieces.push({ text: ref[1] });
            pieces.push({ text: ref[2], cid: variables[ref[2]] });
            rest = ref[3];
        }
    }
    if (rest)
        pieces.push({ text: rest });
    return pieces;
}
function renderGraph(doc, ws) {
    const box = doc.getElementById("graph");
    box.textContent = "";
    const s = ws.sentence;
    if (!s)
        return;
    const sel = ws.selection;
    for (const line of s.penman.split("\n")) {
        const row = el(doc, "div", line.startsWith("#") ? "line meta-line" : "line");
        for (const piece of linkifyLine(line, s.variables)) {
            if (piece.cid === undefined) {
                row.append(doc.createTextNode(piece.text));
                continue;
            }
            const node = el(doc, "span", "node", piece.text);
            node.dataset.cid = piece.cid;
            if (piece.cid === sel.focus)
                node.classList.add("focus");
            if (piece.cid === sel.parent)
                node.classList.add("parent");
            if (piece.cid === sel.child)
                node.classList.add("child");
            row.append(node);
            if (piece.def)
                row.append(el(doc, "span", "badge", piece.cid));
        }
        box.append(row);
    }
}
function nodeRow(doc, ws, id, text) {
    const sel = ws.selection;
    const row = el(doc, "div", "noderow");
    row.dataset.id = id;
    row.append(el(doc, "span", "badge", id), el(doc, "span", "", text));
    if (id === sel.focus)
        row.classList.add("focus");
    if (id === sel.parent)
        row.classList.add("parent");
    if (id === sel.child)
        row.classList.add("child");
    return row;
}
function renderNodes(doc, ws) {
    const box = doc.getElementById("nodes");
    box.textContent = "";
    const s = ws.sentence;
    if (!s)
        return;
    for (const [cid, c] of Object.entries(s.graph.concepts)) {
        const toks = c.token_ids.length ? ` ~${c.token_ids.join(",")}` : "";
        const kind = c.attribute ? " (attribute)" : "";
        box.append(nodeRow(doc, ws, cid, `${c.name}${toks}${kind}`));
    }
    for (const [rid, r] of Object.entries(s.graph.relations)) {
        const flag = r.referent ? " (referent)" : "";
        box.append(nodeRow(doc, ws, rid, `${r.parent_id} :${r.label} ${r.child_id}${flag}`));
    }
}
function renderWarnings(doc, ws) {
    const box = doc.getElementById("warnings");
    box.textContent = "";
    for (const w of ws.sentence?.warnings ?? []) {
        box.append(el(doc, "div", "warning", w));
    }
}
function renderStatus(doc, ws) {
    doc.getElementById("status").textContent = ws.notice;
}
function renderOverlay(doc, ws) {
    const box = doc.getElementById("overlay");
    box.classList.toggle("hidden", !ws.overlay);
    if (!ws.overlay)
        return;
    box.textContent = "";
    const table = el(doc, "table", "keys");
    for (const [key, help] of bindingHelp()) {
        const tr = el(doc, "tr", "");
        tr.append(el(doc, "td", "key", key), el(doc, "td", "", help));
        table.append(tr);
    }
    box.append(el(doc, "div", "overlay-title", "Keyboard shortcuts"), table);
}
