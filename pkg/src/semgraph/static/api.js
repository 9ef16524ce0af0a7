// Typed client for the annotation server. Pure transport: every graph
// decision (referent flips, ordering, validation) happens server-side
// and is consumed from the response here.
export class ApiError extends Error {
    constructor(status, detail) {
        super(detail);
        this.status = status;
    }
}
export class Client {
    constructor(base = "") {
        this.base = base;
    }
    async req(method, path, body) {
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
            }
            catch {
                // non-JSON error body; keep the status text
            }
            throw new ApiError(res.status, detail);
        }
        return res.json();
    }
    meta() {
        return this.req("GET", "/meta");
    }
    async setCursor(index) {
        const r = await this.req("POST", "/cursor", { index });
        return r.cursor;
    }
    sentence(index) {
        return this.req("GET", `/sentence/${index}`);
    }
    async search(q, kind, limit = 12) {
        const params = new URLSearchParams({ q, kind, limit: String(limit) });
        const r = await this.req("GET", `/search?${params}`);
        return r.hits;
    }
    async frame(name) {
        const r = await this.req("GET", `/frame/${encodeURIComponent(name)}`);
        return r.description;
    }
    addConcept(i, name, tokenIds) {
        return this.req("POST", `/sentence/${i}/concept`, { name, token_ids: tokenIds });
    }
    addAttribute(i, name, tokenIds) {
        return this.req("POST", `/sentence/${i}/attribute`, { name, token_ids: tokenIds });
    }
    addRelation(i, req) {
        return this.req("POST", `/sentence/${i}/relation`, req);
    }
    renameConcept(i, cid, name) {
        return this.req("PATCH", `/sentence/${i}/concept/${cid}`, { name });
    }
    relabelRelation(i, rid, label) {
        return this.req("PATCH", `/sentence/${i}/relation/${rid}`, { label });
    }
    deleteConcept(i, cid) {
        return this.req("DELETE", `/sentence/${i}/concept/${cid}`);
    }
    deleteRelation(i, rid) {
        return this.req("DELETE", `/sentence/${i}/relation/${rid}`);
    }
    align(i, cid, tokenIds, remove) {
        return this.req("POST", `/sentence/${i}/align`, { concept_id: cid, token_ids: tokenIds, remove });
    }
    async save() {
        const r = await this.req("POST", "/save");
        return r.saved;
    }
}
