// Typed client for the annotation server. Pure transport: every graph
// decision (referent flips, ordering, validation) happens server-side
// and is consumed from the response here.

export interface ConceptDto {
  name: string;
  token_ids: number[];
  attribute: boolean;
  first_token_id: number;
}

export interface RelationDto {
  parent_id: string;
  child_id: string;
  label: string;
  referent: boolean;
}

export interface GraphDto {
  tid: string;
  annotator: string;
  last_saved: string;
  tokens: string[];
  concepts: Record<string, ConceptDto>;
  relations: Record<string, RelationDto>;
  covered_token_ids: number[];
}

// Envelope returned by every sentence read or mutation.
export interface SentenceDto {
  index: number;
  graph: GraphDto;
  penman: string;
  variables: Record<string, string>; // Penman variable -> concept id
  warnings: string[];
  tokens?: string[];
  tid?: string;
  id?: string;          // id created or touched by a mutation
  description?: string; // frame argument structure, concept endpoints
  label?: string;       // effective label after -of inversion
  referent?: boolean;   // effective flag; server may flip it on
}

export interface MetaDto {
  annotator: string;
  scheme: string;
  source: string | null;
  claim: string | null;
  cursor: number;
  dirty: boolean;
  sentences: number;
}

export interface SearchHit {
  name: string;
  description: string;
}

export interface RelationRequest {
  parent_id: string;
  child_id: string;
  label: string;
  referent: boolean;
  inverse: boolean;
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

// The surface the UI depends on; tests substitute an in-memory fake.
export interface Api {
  meta(): Promise<MetaDto>;
  setCursor(index: number): Promise<number>;
  sentence(index: number): Promise<SentenceDto>;
  search(q: string, kind: "concepts" | "relations", limit?: number): Promise<SearchHit[]>;
  frame(name: string): Promise<string>;
  addConcept(i: number, name: string, tokenIds: number[]): Promise<SentenceDto>;
  addAttribute(i: number, name: string, tokenIds: number[]): Promise<SentenceDto>;
  addRelation(i: number, req: RelationRequest): Promise<SentenceDto>;
  renameConcept(i: number, cid: string, name: string): Promise<SentenceDto>;
  relabelRelation(i: number, rid: string, label: string): Promise<SentenceDto>;
  deleteConcept(i: number, cid: string): Promise<SentenceDto>;
  deleteRelation(i: number, rid: string): Promise<SentenceDto>;
  align(i: number, cid: string, tokenIds: number[], remove: boolean): Promise<SentenceDto>;
  save(): Promise<string>;
}

export class Client implements Api {
  constructor(private base: string = "") {}

  private async req<T>(method: string, path: string, body?: unknown): Promise<T> {
    const res = await fetch(this.base + path, {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!res.ok) {
      let detail = res.statusText;
      try {
        const data = await res.json();
        detail = typeof data.detail === "string" ? data.detail : JSON.stringify(data.detail);
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(res.status, detail);
    }
    return res.json() as Promise<T>;
  }

  meta(): Promise<MetaDto> {
    return this.req("GET", "/meta");
  }

  async setCursor(index: number): Promise<number> {
    const r = await this.req<{ cursor: number }>("POST", "/cursor", { index });
    return r.cursor;
  }

  sentence(index: number): Promise<SentenceDto> {
    return this.req("GET", `/sentence/${index}`);
  }

  async search(q: string, kind: "concepts" | "relations", limit = 12): Promise<SearchHit[]> {
    const params = new URLSearchParams({ q, kind, limit: String(limit) });
    const r = await this.req<{ hits: SearchHit[] }>("GET", `/search?${params}`);
    return r.hits;
  }

  async frame(name: string): Promise<string> {
    const r = await this.req<{ description: string }>(
      "GET", `/frame/${encodeURIComponent(name)}`);
    return r.description;
  }

  addConcept(i: number, name: string, tokenIds: number[]): Promise<SentenceDto> {
    return this.req("POST", `/sentence/${i}/concept`, { name, token_ids: tokenIds });
  }

  addAttribute(i: number, name: string, tokenIds: number[]): Promise<SentenceDto> {
    return this.req("POST", `/sentence/${i}/attribute`, { name, token_ids: tokenIds });
  }

  addRelation(i: number, req: RelationRequest): Promise<SentenceDto> {
    return this.req("POST", `/sentence/${i}/relation`, req);
  }

  renameConcept(i: number, cid: string, name: string): Promise<SentenceDto> {
    return this.req("PATCH", `/sentence/${i}/concept/${cid}`, { name });
  }

  relabelRelation(i: number, rid: string, label: string): Promise<SentenceDto> {
    return this.req("PATCH", `/sentence/${i}/relation/${rid}`, { label });
  }

  deleteConcept(i: number, cid: string): Promise<SentenceDto> {
    return this.req("DELETE", `/sentence/${i}/concept/${cid}`);
  }

  deleteRelation(i: number, rid: string): Promise<SentenceDto> {
    return this.req("DELETE", `/sentence/${i}/relation/${rid}`);
  }

  align(i: number, cid: string, tokenIds: number[], remove: boolean): Promise<SentenceDto> {
    return this.req("POST", `/sentence/${i}/align`,
      { concept_id: cid, token_ids: tokenIds, remove });
  }

  async save(): Promise<string> {
    const r = await this.req<{ saved: string }>("POST", "/save");
    return r.saved;
  }
}
