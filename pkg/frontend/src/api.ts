/**
 * Typed client for the job service. Progress arrives as server-sent events;
 * the stream parser works on any fetch ReadableStream so it behaves the same
 * in the browser and under node-based tests. Reconnection resumes from the
 * last seen generation via the `after` query parameter.
 */

import type {
  DistanceMatrixPayload,
  InventoryDoc,
  JobEvent,
  JobSnapshot,
  JobSpec,
  SolutionsPayload,
  WorkspacePayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

async function expectOk(response: Response): Promise<Response> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
      else if (body && body.detail) detail = JSON.stringify(body.detail);
    } catch {
      // keep statusText
    }
    throw new ApiError(response.status, detail);
  }
  return response;
}

/** Split an SSE byte stream into parsed `data:` payloads. */
export function parseSseChunk(buffer: string): { events: string[]; rest: string } {
  const events: string[] = [];
  let rest = buffer;
  for (;;) {
    const sep = rest.indexOf("\n\n");
    if (sep < 0) break;
    const block = rest.slice(0, sep);
    rest = rest.slice(sep + 2);
    for (const line of block.split("\n")) {
      if (line.startsWith("data: ")) events.push(line.slice(6));
    }
  }
  return { events, rest };
}

export class ApiClient {
  constructor(readonly baseUrl: string, private fetchFn: typeof fetch = fetch) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async workspace(): Promise<WorkspacePayload> {
    const r = await expectOk(await this.fetchFn(this.url("/api/workspace")));
    return r.json();
  }

  async putInventory(doc: InventoryDoc): Promise<InventoryDoc> {
    const r = await expectOk(
      await this.fetchFn(this.url("/api/workspace/inventory"), {
        method: "PUT",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(doc),
      }),
    );
    return (await r.json()).inventory;
  }

  async submitJob(spec: JobSpec): Promise<JobSnapshot> {
    const r = await expectOk(
      await this.fetchFn(this.url("/api/jobs"), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(spec),
      }),
    );
    return r.json();
  }

  async jobStatus(id: string): Promise<JobSnapshot> {
    const r = await expectOk(await this.fetchFn(this.url(`/api/jobs/${id}`)));
    return r.json();
  }

  async jobSolutions(id: string): Promise<SolutionsPayload> {
    const r = await expectOk(
      await this.fetchFn(this.url(`/api/jobs/${id}/solutions`)),
    );
    return r.json();
  }

  async distanceMatrix(
    solutions: number[][],
    normalize = false,
    labels?: string[],
  ): Promise<DistanceMatrixPayload> {
    const r = await expectOk(
      await this.fetchFn(this.url("/api/analysis/distance-matrix"), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ solutions, normalize, labels }),
      }),
    );
    return r.json();
  }

  /**
   * Follow a job's event stream, invoking `onEvent` per event in order.
   * Resolves on the terminal event. Disconnections reconnect with
   * `after=<last generation seen>` so no generation is replayed twice.
   */
  async streamEvents(
    id: string,
    onEvent: (event: JobEvent) => void,
    maxReconnects = 5,
  ): Promise<void> {
    let lastGeneration = 0;
    let attempts = 0;
    for (;;) {
      try {
        const done = await this.streamOnce(id, lastGeneration, (event) => {
          if (event.type === "progress") lastGeneration = event.generation;
          onEvent(event);
        });
        if (done) return;
      } catch (err) {
        attempts += 1;
        if (attempts > maxReconnects) throw err;
      }
    }
  }

  private async streamOnce(
    id: string,
    after: number,
    onEvent: (event: JobEvent) => void,
  ): Promise<boolean> {
    const r = await expectOk(
      await this.fetchFn(this.url(`/api/jobs/${id}/events?after=${after}`)),
    );
    if (!r.body) throw new ApiError(0, "event stream has no body");
    const reader = r.body.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    for (;;) {
      const { value, done } = await reader.read();
      if (done) return false; // closed without terminal event: caller reconnects
      buffer += decoder.decode(value, { stream: true });
      const { events, rest } = parseSseChunk(buffer);
      buffer = rest;
      for (const raw of events) {
        const event = JSON.parse(raw) as JobEvent;
        onEvent(event);
        if (event.type === "done" || event.type === "failed") {
          await reader.cancel().catch(() => undefined);
          return true;
        }
      }
    }
  }
}
