import { describe, expect, it } from "vitest";

import { SessionClient, SocketLike } from "../src/client.js";

/** In-memory socket: captures sends, lets the test push replies. */
class FakeSocket implements SocketLike {
  sent: string[] = [];
  listeners = new Map<string, ((event: any) => void)[]>();

  addEventListener(type: string, listener: (event: any) => void): void {
    const list = this.listeners.get(type) ?? [];
    list.push(listener);
    this.listeners.set(type, list);
  }

  emit(type: string, event: any = {}): void {
    for (const fn of this.listeners.get(type) ?? []) fn(event);
  }

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.emit("close");
  }
}

async function connected(): Promise<{ client: SessionClient; sock: FakeSocket }> {
  const sock = new FakeSocket();
  const client = new SessionClient();
  const pending = client.connect("ws://example/ws", () => sock);
  sock.emit("open");
  await pending;
  return { client, sock };
}

describe("SessionClient", () => {
  it("resolves connect on open and sends JSON envelopes", async () => {
    const { client, sock } = await connected();
    client.send("hello", { version: 1 });
    expect(sock.sent).toHaveLength(1);
    expect(JSON.parse(sock.sent[0]!)).toEqual({ kind: "hello", payload: { version: 1 } });
  });

  it("rejects connect when the socket errors first", async () => {
    const sock = new FakeSocket();
    const client = new SessionClient();
    const pending = client.connect("ws://example/ws", () => sock);
    sock.emit("error", { message: "refused" });
    await expect(pending).rejects.toThrow(/refused/);
  });

  it("refuses to send invalid messages before they reach the wire", async () => {
    const { client, sock } = await connected();
    expect(() => client.send("act", { action: "FLY" }, "s1")).toThrow(/refusing to send/);
    expect(() => client.send("observe")).toThrow(/session_token/);
    expect(sock.sent).toHaveLength(0);
  });

  it("dispatches inbound messages by kind", async () => {
    const { client, sock } = await connected();
    const seen: string[] = [];
    client.on("score", (payload) => seen.push(`score:${payload.done}`));
    client.on("error", (msg) => seen.push(`error:${msg.code}`));

    sock.emit("message", { data: '{"kind": "score", "payload": {"done": true}}' });
    sock.emit("message", { data: '{"kind": "error", "code": "BAD_KIND", "detail": "?"}' });
    sock.emit("message", { data: "not json at all" });

    expect(seen).toEqual(["score:true", "error:BAD_KIND"]);
  });

  it("reports closure and refuses sends afterwards", async () => {
    const { client, sock } = await connected();
    let closed = false;
    client.onClose(() => {
      closed = true;
    });
    sock.emit("close");
    expect(closed).toBe(true);
    expect(client.connected).toBe(false);
    expect(() => client.send("list_tasks")).toThrow(/not connected/);
  });
});
