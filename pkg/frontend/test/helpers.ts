// Shared test scaffolding: the real index.html body as the DOM under
// test (one source of truth for element ids), a canned in-memory Api,
// and keyboard helpers.

import { readFileSync } from "node:fs";
import { ApiError } from "../src/api.js";
import type {
  Api, GraphDto, MetaDto, RelationRequest, SearchHit, SentenceDto,
} from "../src/api.js";

export function loadDom(): void {
  // vitest runs with the package root as cwd; import.meta.url is not a
  // file: URL under the DOM test environment.
  const html = readFileSync("public/index.html", "utf-8");
  document.body.innerHTML = html.match(/<body>([\s\S]*)<\/body>/)![1];
}

export function press(key: string, opts: { shift?: boolean } = {}): void {
  document.dispatchEvent(new KeyboardEvent("keydown",
    { key, shiftKey: Boolean(opts.shift), bubbles: true, cancelable: true }));
}

// Replace the dialog input's text the way a paste would: value + input event.
export function type(text: string): void {
  const input = document.getElementById("dialog-input") as HTMLInputElement;
  input.value = text;
  input.dispatchEvent(new Event("input", { bubbles: true }));
}

export function tokenEl(i: number): HTMLElement {
  return document.querySelector(`#tokens [data-i="${i}"]`) as HTMLElement;
}

export function graphNode(cid: string): HTMLElement | null {
  return document.querySelector(`#graph [data-cid="${cid}"]`);
}

// The demo sentence, fully annotated — mirrors what the server hands back.
export function demoGraph(): GraphDto {
  return {
    tid: "demo.1",
    annotator: "ID",
    last_saved: "",
    tokens: ["The", "boy", "wants", "the", "girl", "to", "believe", "him"],
    concepts: {
      c0: { name: "want-01", token_ids: [2], attribute: false, first_token_id: 2 },
      c1: { name: "boy", token_ids: [1, 7], attribute: false, first_token_id: 1 },
      c2: { name: "girl", token_ids: [4], attribute: false, first_token_id: 4 },
      c3: { name: "believe-01", token_ids: [6], attribute: false, first_token_id: 6 },
    },
    relations: {
      r0: { parent_id: "c0", child_id: "c1", label: "ARG0", referent: false },
      r1: { parent_id: "c0", child_id: "c3", label: "ARG1", referent: false },
      r2: { parent_id: "c3", child_id: "c2", label: "ARG0", referent: false },
      r3: { parent_id: "c3", child_id: "c1", label: "ARG1", referent: true },
    },
    covered_token_ids: [1, 2, 4, 6, 7],
  };
}

export const DEMO_PENMAN = [
  "# ::id demo.1",
  "# ::annotator ID",
  "# ::snt The boy wants the girl to believe him",
  "(w / want-01~2",
  "   :ARG0 (b / boy~1,7)",
  "   :ARG1 (b2 / believe-01~6",
  "             :ARG0 (g / girl~4)",
  "             :ARG1 b))",
].join("\n");

export const DEMO_VARIABLES = { w: "c0", b: "c1", b2: "c3", g: "c2" };

export function demoSentence(index = 0): SentenceDto {
  const graph = demoGraph();
  return {
    index,
    graph,
    penman: DEMO_PENMAN,
    variables: { ...DEMO_VARIABLES },
    warnings: [],
    tokens: graph.tokens,
    tid: graph.tid,
  };
}

// In-memory Api: echoes canned sentences and records every call so
// tests assert on the requests the UI actually made.
export class FakeClient implements Api {
  calls: Array<[string, unknown[]]> = [];
  searchHits: SearchHit[] = [];
  frameDescription = "ARG0: wanter; ARG1: thing wanted";
  metaDto: MetaDto;

  constructor(public sentences: SentenceDto[] = [demoSentence()]) {
    this.metaDto = {
      annotator: "ID", scheme: "amr", source: "demo.txt",
      claim: "demo.ID.json", cursor: 0, dirty: false,
      sentences: sentences.length,
    };
  }

  named(name: string): unknown[][] {
    return this.calls.filter(c => c[0] === name).map(c => c[1]);
  }

  private log(name: string, ...args: unknown[]): void {
    this.calls.push([name, args]);
  }

  private envelope(i: number, extra: Partial<SentenceDto>): SentenceDto {
    return { ...this.sentences[i], ...extra };
  }

  async meta(): Promise<MetaDto> {
    this.log("meta");
    return this.metaDto;
  }

  async setCursor(index: number): Promise<number> {
    this.log("setCursor", index);
    if (!this.sentences[index]) throw new ApiError(404, `no sentence ${index}`);
    this.metaDto.cursor = index;
    return index;
  }

  async sentence(index: number): Promise<SentenceDto> {
    this.log("sentence", index);
    const s = this.sentences[index];
    if (!s) throw new ApiError(404, `no sentence ${index}`);
    return s;
  }

  async search(q: string, kind: "concepts" | "relations"): Promise<SearchHit[]> {
    this.log("search", q, kind);
    return this.searchHits;
  }

  async frame(name: string): Promise<string> {
    this.log("frame", name);
    return this.frameDescription;
  }

  async addConcept(i: number, name: string, tokenIds: number[]): Promise<SentenceDto> {
    this.log("addConcept", i, name, tokenIds);
    return this.envelope(i, { id: "c9", description: "" });
  }

  async addAttribute(i: number, name: string, tokenIds: number[]): Promise<SentenceDto> {
    this.log("addAttribute", i, name, tokenIds);
    return this.envelope(i, { id: "c9" });
  }

  async addRelation(i: number, req: RelationRequest): Promise<SentenceDto> {
    this.log("addRelation", i, req);
    return this.envelope(i, { id: "r9", label: req.label, referent: req.referent });
  }

  async renameConcept(i: number, cid: string, name: string): Promise<SentenceDto> {
    this.log("renameConcept", i, cid, name);
    return this.envelope(i, { id: cid });
  }

  async relabelRelation(i: number, rid: string, label: string): Promise<SentenceDto> {
    this.log("relabelRelation", i, rid, label);
    return this.envelope(i, { id: rid, label });
  }

  async deleteConcept(i: number, cid: string): Promise<SentenceDto> {
    this.log("deleteConcept", i, cid);
    return this.envelope(i, {});
  }

  async deleteRelation(i: number, rid: string): Promise<SentenceDto> {
    this.log("deleteRelation", i, rid);
    return this.envelope(i, {});
  }

  async align(i: number, cid: string, tokenIds: number[], remove: boolean): Promise<SentenceDto> {
    this.log("align", i, cid, tokenIds, remove);
    return this.envelope(i, { id: cid });
  }

  async save(): Promise<string> {
    this.log("save");
    return "demo.ID.json";
  }
}
