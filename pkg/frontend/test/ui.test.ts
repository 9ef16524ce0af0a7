import { afterEach, describe, expect, it, vi } from "vitest";
import { ApiError } from "../src/api.js";
import type { Ctx } from "../src/context.js";
import { closeDialog, currentDialog, SEARCH_DEBOUNCE_MS } from "../src/dialogs.js";
import { init } from "../src/main.js";
import {
  demoSentence, FakeClient, graphNode, loadDom, press, tokenEl, type,
} from "./helpers.js";

let ctx: Ctx | null = null;

async function boot(fake = new FakeClient()): Promise<FakeClient> {
  loadDom();
  ctx = init(document, fake);
  await ctx.idle();
  if (currentDialog()) closeDialog(ctx);   // leftovers from a failed test
  return fake;
}

afterEach(() => {
  ctx?.dispose();
  ctx = null;
  vi.useRealTimers();
});

function setChecked(id: string, value: boolean): void {
  const box = document.getElementById(id) as HTMLInputElement;
  box.checked = value;
  box.dispatchEvent(new Event("change", { bubbles: true }));
}

describe("boot", () => {
  it("renders meta, tokens, and the linkified graph", async () => {
    await boot();
    const meta = document.querySelectorAll("#meta .meta-item");
    expect(meta[0].textContent).toBe("demo.1");
    expect(meta[1].textContent).toBe("sentence 1 of 1");
    expect(tokenEl(0).textContent).toBe("The");
    expect(tokenEl(0).classList.contains("cursor")).toBe(true);
    expect(tokenEl(2).classList.contains("covered")).toBe(true);
    expect(tokenEl(3).classList.contains("covered")).toBe(false);
    // definitions are clickable and carry an id badge
    const w = graphNode("c0")!;
    expect(w.textContent).toBe("w");
    expect(w.nextElementSibling?.textContent).toBe("c0");
    // the reentrant mention of b links without a badge
    const bs = document.querySelectorAll('#graph [data-cid="c1"]');
    expect(bs.length).toBe(2);
    expect(document.getElementById("status")!.textContent)
      .toContain("opened demo.txt");
  });
});

describe("token spans", () => {
  it("moves the cursor, grows a live span, and confirms it", async () => {
    await boot();
    press("ArrowRight");
    press("ArrowRight");
    expect(tokenEl(2).classList.contains("cursor")).toBe(true);
    press("ArrowRight", { shift: true });
    press("ArrowRight", { shift: true });
    for (const i of [2, 3, 4]) {
      expect(tokenEl(i).classList.contains("live")).toBe(true);
    }
    press("x");
    for (const i of [2, 3, 4]) {
      expect(tokenEl(i).classList.contains("pending")).toBe(true);
      expect(tokenEl(i).classList.contains("live")).toBe(false);
    }
    // a second, disjoint span joins the same pending set
    press("ArrowRight");
    press("ArrowRight");
    press("x");
    expect(tokenEl(6).classList.contains("pending")).toBe(true);
    press("Escape");
    expect(document.querySelectorAll("#tokens .pending").length).toBe(0);
  });

  it("clicks move the cursor too", async () => {
    await boot();
    tokenEl(5).dispatchEvent(new MouseEvent("click", { bubbles: true }));
    expect(tokenEl(5).classList.contains("cursor")).toBe(true);
  });
});

describe("parent/child marks", () => {
  it("paints the parent red and the child green across panels", async () => {
    await boot();
    press("ArrowDown");            // focus c0 (want-01)
    press("p");
    press("ArrowDown");            // focus c1 (boy)
    press("k");
    expect(graphNode("c0")!.classList.contains("parent")).toBe(true);
    expect(graphNode("c1")!.classList.contains("child")).toBe(true);
    // aligned tokens pick up the same colors: want~2, boy~1,7
    expect(tokenEl(2).classList.contains("parent")).toBe(true);
    expect(tokenEl(1).classList.contains("child")).toBe(true);
    expect(tokenEl(7).classList.contains("child")).toBe(true);
    const rows = document.querySelectorAll("#nodes .noderow");
    expect(rows[0].classList.contains("parent")).toBe(true);
    expect(rows[1].classList.contains("child")).toBe(true);
  });

  it("refuses to mark one node as both ends", async () => {
    await boot();
    press("ArrowDown");
    press("p");
    press("k");
    expect(ctx!.ws.selection.child).toBeNull();
    expect(document.getElementById("status")!.textContent)
      .toBe("a node cannot be both parent and child");
  });
});

describe("relation dialog", () => {
  it("needs both marks before it opens", async () => {
    await boot();
    press("r");
    expect(currentDialog()).toBeNull();
    expect(document.getElementById("status")!.textContent)
      .toBe("mark a parent (p) and a child (k) first");
  });

  it("pre-checks and locks the referent box when the child has a parent", async () => {
    const fake = await boot();
    press("ArrowDown");            // c0
    press("p");
    press("ArrowDown");            // c1 — r0 already points at it
    press("k");
    press("r");
    const box = document.getElementById("dialog-referent") as HTMLInputElement;
    expect(box.checked).toBe(true);
    setChecked("dialog-referent", false);       // try to uncheck
    expect(box.checked).toBe(true);             // snapped back
    expect(document.getElementById("dialog-error")!.textContent)
      .toBe("the child already has a parent; this edge must be a referent");
    await ctx!.idle();
    // the description box shows the parent's frame
    expect(fake.named("frame")[0]).toEqual(["want-01"]);
    expect(document.getElementById("dialog-desc")!.textContent)
      .toBe(fake.frameDescription);
    type("ARG1");
    press("Enter");
    await ctx!.idle();
    const [, req] = fake.named("addRelation")[0] as [number, Record<string, unknown>];
    expect(req).toEqual({
      parent_id: "c0", child_id: "c1", label: "ARG1",
      referent: true, inverse: false,
    });
  });

  it("sends inverse when the -of box is ticked", async () => {
    const fake = await boot();
    press("ArrowDown");
    press("ArrowDown");
    press("ArrowDown");            // c2 (girl)
    press("p");
    press("ArrowUp");
    press("ArrowUp");              // c0 — nothing points at it
    press("k");
    press("r");
    const box = document.getElementById("dialog-referent") as HTMLInputElement;
    expect(box.checked).toBe(false);
    setChecked("dialog-inverse", true);
    type("poss");
    press("Enter");
    await ctx!.idle();
    const [, req] = fake.named("addRelation")[0] as [number, Record<string, unknown>];
    expect(req).toEqual({
      parent_id: "c2", child_id: "c0", label: "poss",
      referent: false, inverse: true,
    });
  });
});

describe("concept dialog", () => {
  it("debounces live search and restarts the window on each keystroke", async () => {
    const fake = await boot();
    vi.useFakeTimers();
    press("c");
    type("bo");
    vi.advanceTimersByTime(SEARCH_DEBOUNCE_MS - 50);
    expect(fake.named("search").length).toBe(0);
    type("boy");                                 // restarts the window
    vi.advanceTimersByTime(SEARCH_DEBOUNCE_MS - 50);
    expect(fake.named("search").length).toBe(0);
    vi.advanceTimersByTime(60);
    await ctx!.idle();
    expect(fake.named("search")).toEqual([["boy", "concepts"]]);
  });

  it("prefills from pending spans and Enter submits the typed name", async () => {
    const fake = await boot();
    press("ArrowRight");
    press("x");                    // pending {1} = "boy"
    press("c");
    const input = document.getElementById("dialog-input") as HTMLInputElement;
    expect(input.value).toBe("boy");
    press("Enter");
    await ctx!.idle();
    expect(fake.named("addConcept")).toEqual([[0, "boy", [1]]]);
    expect(currentDialog()).toBeNull();
    expect(ctx!.ws.selection.focus).toBe("c9");  // the new node gets focus
  });

  it("arrow keys pick a hit and Enter takes its name", async () => {
    const fake = await boot();
    fake.searchHits = [
      { name: "want-01", description: "ARG0: wanter" },
      { name: "want-02", description: "second sense" },
    ];
    press("c");
    type("want");
    await new Promise(r => setTimeout(r, SEARCH_DEBOUNCE_MS + 50));
    await ctx!.idle();
    expect(document.querySelectorAll("#dialog-hits .hit").length).toBe(2);
    press("ArrowDown");
    expect(document.querySelector("#dialog-hits .hit.active")!.textContent)
      .toBe("want-02");
    expect(document.getElementById("dialog-desc")!.textContent).toBe("second sense");
    press("Enter");
    await ctx!.idle();
    expect(fake.named("addConcept")).toEqual([[0, "want-02", []]]);
  });

  it("shows the server's complaint and stays open", async () => {
    const fake = await boot();
    fake.addConcept = async () => {
      throw new ApiError(409, "concept name cannot be empty");
    };
    press("c");
    type("bad");
    press("Enter");
    await ctx!.idle();
    expect(currentDialog()).not.toBeNull();
    expect(document.getElementById("dialog-error")!.textContent)
      .toBe("concept name cannot be empty");
    press("Escape");
    expect(currentDialog()).toBeNull();
  });
});

describe("node editing keys", () => {
  it("t aligns pending spans to the focused concept, T removes them", async () => {
    const fake = await boot();
    const row = document.querySelector('#nodes [data-id="c2"]')!;
    row.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    expect(ctx!.ws.selection.focus).toBe("c2");
    press("ArrowRight");
    press("ArrowRight");
    press("ArrowRight");
    press("x");                    // pending {3} = "the"
    press("t");
    await ctx!.idle();
    expect(fake.named("align")).toEqual([[0, "c2", [3], false]]);
    press("x");                    // marks were cleared; re-confirm cursor token
    press("T");
    await ctx!.idle();
    expect(fake.named("align")[1]).toEqual([0, "c2", [3], true]);
  });

  it("e renames a focused concept with the name prefilled", async () => {
    const fake = await boot();
    press("ArrowDown");            // c0
    press("e");
    const input = document.getElementById("dialog-input") as HTMLInputElement;
    expect(input.value).toBe("want-01");
    type("want-02");
    press("Enter");
    await ctx!.idle();
    expect(fake.named("renameConcept")).toEqual([[0, "c0", "want-02"]]);
  });

  it("e relabels a focused relation", async () => {
    const fake = await boot();
    press("ArrowUp");              // wraps to the last node: r3
    press("e");
    const input = document.getElementById("dialog-input") as HTMLInputElement;
    expect(input.value).toBe("ARG1");
    type("ARG2");
    press("Enter");
    await ctx!.idle();
    expect(fake.named("relabelRelation")).toEqual([[0, "r3", "ARG2"]]);
  });

  it("d deletes the focused node", async () => {
    const fake = await boot();
    press("ArrowDown");
    press("d");
    await ctx!.idle();
    expect(fake.named("deleteConcept")).toEqual([[0, "c0"]]);
    document.querySelector('#nodes [data-id="r3"]')!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    press("d");
    await ctx!.idle();
    expect(fake.named("deleteRelation")).toEqual([[0, "r3"]]);
  });
});

describe("navigation", () => {
  it("walks sentences with , and . and reports the edges", async () => {
    const fake = await boot(new FakeClient([demoSentence(0), demoSentence(1)]));
    press(".");
    await ctx!.idle();
    expect(ctx!.ws.sentence!.index).toBe(1);
    expect(fake.named("setCursor")).toEqual([[1]]);
    press(".");
    await ctx!.idle();
    expect(ctx!.ws.sentence!.index).toBe(1);
    expect(document.getElementById("status")!.textContent)
      .toBe("already at the last sentence");
    press(",");
    await ctx!.idle();
    expect(ctx!.ws.sentence!.index).toBe(0);
    press(",");
    expect(document.getElementById("status")!.textContent)
      .toBe("already at the first sentence");
  });

  it("jumps by index and rejects junk input", async () => {
    const fake = await boot(new FakeClient([demoSentence(0), demoSentence(1)]));
    press("j");
    type("xyz");
    press("Enter");
    expect(document.getElementById("dialog-error")!.textContent)
      .toBe("enter a sentence index (0-based)");
    type("1");
    press("Enter");
    await ctx!.idle();
    expect(currentDialog()).toBeNull();
    expect(ctx!.ws.sentence!.index).toBe(1);
    expect(fake.named("sentence").at(-1)).toEqual([1]);
    const meta = document.querySelectorAll("#meta .meta-item");
    expect(meta[1].textContent).toBe("sentence 2 of 2");
  });

  it("s saves and reports the claim file", async () => {
    const fake = await boot();
    press("s");
    await ctx!.idle();
    expect(fake.named("save").length).toBe(1);
    expect(document.getElementById("status")!.textContent)
      .toBe("saved to demo.ID.json");
  });
});

describe("overlay", () => {
  it("toggles with ? and lists every binding", async () => {
    await boot();
    press("?");
    const overlay = document.getElementById("overlay")!;
    expect(overlay.classList.contains("hidden")).toBe(false);
    const keys = [...overlay.querySelectorAll("td.key")].map(td => td.textContent);
    expect(keys).toContain("x");
    expect(keys).toContain("Shift+ArrowRight");
    expect(keys).toContain("?");
    press("Escape");
    expect(overlay.classList.contains("hidden")).toBe(true);
  });
});
