// End-to-end: a real annotation server, the real fetch client, and a
// scripted keyboard-only session that annotates "The boy wants the girl
// to believe him" from scratch. The saved claim file must match the
// reference annotation byte-for-byte modulo the save timestamp.

import { type ChildProcess, spawn } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { afterAll, beforeAll, expect, it } from "vitest";
import { Client } from "../src/api.js";
import type { Ctx } from "../src/context.js";
import { init } from "../src/main.js";
import { graphNode, loadDom, press, tokenEl, type } from "./helpers.js";

const PORT = 18000 + Math.floor(Math.random() * 2000);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
let serverErr = "";
let tmp: string;
let ctx: Ctx;

function sleep(ms: number): Promise<void> {
  return new Promise(r => setTimeout(r, ms));
}

beforeAll(async () => {
  tmp = mkdtempSync(join(tmpdir(), "workspace-e2e-"));
  writeFileSync(join(tmp, "demo.txt"), "The boy wants the girl to believe him\n");

  const boot = [
    "import uvicorn",
    "from semgraph.frames import load_resources",
    "from semgraph.server import create_app",
    "app = create_app('ID', resources=load_resources('amr'))",
    `uvicorn.run(app, host='127.0.0.1', port=${PORT}, log_level='warning')`,
  ].join("\n");
  server = spawn("python3", ["-c", boot], {
    env: { ...process.env, PYTHONPATH: resolve("..", "src") },
    stdio: ["ignore", "ignore", "pipe"],
  });
  server.stderr!.on("data", d => { serverErr += d; });

  const deadline = Date.now() + 20_000;
  for (;;) {
    try {
      const r = await fetch(`${BASE}/meta`);
      if (r.ok) break;
    } catch {
      // not listening yet
    }
    if (server.exitCode !== null) {
      throw new Error(`server died during startup:\n${serverErr}`);
    }
    if (Date.now() > deadline) {
      throw new Error(`server never came up:\n${serverErr}`);
    }
    await sleep(150);
  }

  const opened = await fetch(`${BASE}/open`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ path: join(tmp, "demo.txt") }),
  });
  expect(opened.ok).toBe(true);

  loadDom();
  ctx = init(document, new Client(BASE));
  await ctx.idle();
});

afterAll(() => {
  ctx?.dispose();
  server?.kill();
  rmSync(tmp, { recursive: true, force: true });
});

// Type a name into the open dialog and confirm it.
async function submit(name: string): Promise<void> {
  type(name);
  press("Enter");
  await ctx.idle();
}

function repeat(key: string, n: number): void {
  for (let i = 0; i < n; i++) press(key);
}

it("annotates the demo sentence end to end with the keyboard only", async () => {
  expect(document.getElementById("status")!.textContent).toContain("demo.txt");
  expect(tokenEl(0).textContent).toBe("The");

  // concepts, in the order the reference annotation numbers them
  repeat("ArrowRight", 2);           // "wants"
  press("x");
  press("c");
  await submit("want-01");           // -> c0
  expect(ctx.ws.selection.focus).toBe("c0");

  press("ArrowLeft");                // "boy"
  press("x");
  repeat("ArrowRight", 6);           // "him" — same concept, disjoint span
  press("x");
  press("c");
  await submit("boy");               // -> c1

  repeat("ArrowLeft", 3);            // "girl"
  press("x");
  press("c");
  await submit("girl");              // -> c2

  repeat("ArrowRight", 2);           // "believe"
  press("x");
  press("c");
  await submit("believe-01");        // -> c3

  const g = () => ctx.ws.sentence!.graph;
  expect(Object.keys(g().concepts)).toEqual(["c0", "c1", "c2", "c3"]);
  expect(g().concepts.c1.token_ids).toEqual([1, 7]);

  // want-01 ARG0 boy
  repeat("ArrowUp", 3);              // focus c0
  press("p");
  press("ArrowDown");                // focus c1
  press("k");
  press("r");
  await ctx.idle();                  // frame description fetch
  expect(document.getElementById("dialog-desc")!.textContent)
    .toContain("ARG0");              // the parent frame's roles are shown
  await submit("ARG0");              // -> r0

  // want-01 ARG1 believe-01
  repeat("ArrowUp", 4);
  press("p");
  repeat("ArrowDown", 3);
  press("k");
  press("r");
  await submit("ARG1");              // -> r1

  // believe-01 ARG0 girl
  repeat("ArrowUp", 2);
  press("p");
  press("ArrowUp");
  press("k");
  press("r");
  await submit("ARG0");              // -> r2

  // believe-01 ARG1 boy — the reentrancy
  repeat("ArrowUp", 3);
  press("p");
  repeat("ArrowUp", 2);
  press("k");

  // marks are painted red (parent) and green (child) in every panel
  expect(graphNode("c3")!.classList.contains("parent")).toBe(true);
  expect(graphNode("c1")!.classList.contains("child")).toBe(true);
  expect(tokenEl(6).classList.contains("parent")).toBe(true);
  expect(tokenEl(1).classList.contains("child")).toBe(true);
  expect(tokenEl(7).classList.contains("child")).toBe(true);

  press("r");
  const box = document.getElementById("dialog-referent") as HTMLInputElement;
  expect(box.checked).toBe(true);    // boy already has a parent: pre-checked
  box.checked = false;               // and it cannot be turned off
  box.dispatchEvent(new Event("change", { bubbles: true }));
  expect(box.checked).toBe(true);
  expect(document.getElementById("dialog-error")!.textContent)
    .toContain("must be a referent");
  await submit("ARG1");              // -> r3, a referent edge

  expect(g().relations.r3).toEqual(
    { parent_id: "c3", child_id: "c1", label: "ARG1", referent: true });
  // the reentrant mention renders as a bare variable in the graph panel
  expect(document.getElementById("graph")!.textContent).toContain(":ARG1 b");

  press("s");
  await ctx.idle();
  expect(document.getElementById("status")!.textContent).toContain("saved to");

  const got = JSON.parse(readFileSync(join(tmp, "demo.ID.json"), "utf-8"));
  const want = JSON.parse(
    readFileSync(resolve("..", "tests", "data", "demo.json"), "utf-8"));
  got.graphs[0].last_saved = "";
  want.graphs[0].last_saved = "";
  expect(got).toEqual(want);
});
