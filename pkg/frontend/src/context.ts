import type { Api } from "./api.js";
import type { Workspace } from "./state.js";

// Shared handle passed to key handlers and dialogs. enqueue serializes
// async work (each action awaits the server before the next runs) and
// idle() lets tests wait for the queue to drain.
export interface Ctx {
  doc: Document;
  api: Api;
  ws: Workspace;
  repaint(): void;
  enqueue(fn: () => Promise<void>): void;
  idle(): Promise<void>;
  dispose(): void;           // detach document listeners
}
