import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, parseSseChunk } from "../src/api.js";
import type { JobEvent } from "../src/types.js";

describe("sse parsing", () => {
  it("splits complete events and keeps the partial tail", () => {
    const { events, rest } = parseSseChunk(
      'data: {"a":1}\n\ndata: {"b":2}\n\ndata: {"partial',
    );
    expect(events).toEqual(['{"a":1}', '{"b":2}']);
    expect(rest).toBe('data: {"partial');
  });

  it("ignores non-data lines", () => {
    const { events } = parseSseChunk("event: progress\ndata: {}\n\n");
    expect(events).toEqual(["{}"]);
  });
});

function sseResponse(blocks: string[]): Response {
  const encoder = new TextEncoder();
  const stream = new ReadableStream<Uint8Array>({
    start(controller) {
      for (const block of blocks) controller.enqueue(encoder.encode(block));
      controller.close();
    },
  });
  return new Response(stream, {
    status: 200,
    headers: { "content-type": "text/event-stream" },
  });
}

describe("streamEvents", () => {
  it("delivers ordered events and resolves on the terminal", async () => {
    const body = [
      'data: {"type":"progress","generation":10,"best_e":4.0,"front0_size":5}\n\n',
      'data: {"type":"progress","generation":20,"best_e":1.0,"front0_size":9}\n\n',
      'data: {"type":"done","nondominated_count":9,"successful_count":2,"best_e":0.01,"evaluations_used":1000}\n\n',
    ];
    const client = new ApiClient("http://test", (async () =>
      sseResponse(body)) as unknown as typeof fetch);
    const seen: JobEvent[] = [];
    await client.streamEvents("j1", (e) => seen.push(e));
    expect(seen.map((e) => e.type)).toEqual(["progress", "progress", "done"]);
  });

  it("reconnects with after=<last generation> when the stream drops", async () => {
    const urls: string[] = [];
    let call = 0;
    const fetchFn = (async (url: RequestInfo | URL) => {
      urls.push(String(url));
      call += 1;
      if (call === 1) {
        // stream closes after one progress event, no terminal
        return sseResponse([
          'data: {"type":"progress","generation":30,"best_e":2.0,"front0_size":4}\n\n',
        ]);
      }
      return sseResponse([
        'data: {"type":"done","nondominated_count":1,"successful_count":1,"best_e":0.0,"evaluations_used":10}\n\n',
      ]);
    }) as unknown as typeof fetch;
    const client = new ApiClient("http://test", fetchFn);
    const seen: JobEvent[] = [];
    await client.streamEvents("j1", (e) => seen.push(e));
    expect(urls[0]).toContain("after=0");
    expect(urls[1]).toContain("after=30");
    expect(seen[seen.length - 1].type).toBe("done");
  });

  it("http errors surface status and detail", async () => {
    const fetchFn = (async () =>
      new Response(JSON.stringify({ detail: "unknown job id 'x'" }), {
        status: 404,
        headers: { "content-type": "application/json" },
      })) as unknown as typeof fetch;
    const client = new ApiClient("http://test", fetchFn);
    await expect(client.jobStatus("x")).rejects.toThrowError(ApiError);
    await expect(client.jobStatus("x")).rejects.toThrow(/unknown job id/);
  });
});
