/* Session client: one WebSocket, validated sends, per-kind dispatch.
 *
 * The socket implementation is injectable so tests can run under node
 * with the `ws` package while the browser uses window.WebSocket.
 */

import { Envelope, isErrorMessage, parseInbound, validateOutbound } from "./protocol.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  addEventListener(type: "open" | "message" | "close" | "error", listener: (event: any) => void): void;
}

export type SocketFactory = (url: string) => SocketLike;

export type MessageHandler = (payload: any, msg: Envelope) => void;

export class SessionClient {
  private sock: SocketLike | null = null;
  private handlers = new Map<string, MessageHandler>();
  private closeHandler: (() => void) | null = null;
  connected = false;

  /** Register the handler for one inbound kind (last registration wins). */
  on(kind: string, handler: MessageHandler): void {
    this.handlers.set(kind, handler);
  }

  onClose(handler: () => void): void {
    this.closeHandler = handler;
  }

  connect(url: string, makeSocket?: SocketFactory): Promise<void> {
    const factory: SocketFactory = makeSocket ?? ((u) => new WebSocket(u) as unknown as SocketLike);
    return new Promise((resolve, reject) => {
      let settled = false;
      const sock = factory(url);
      sock.addEventListener("open", () => {
        this.sock = sock;
        this.connected = true;
        settled = true;
        resolve();
      });
      sock.addEventListener("error", (event: any) => {
        if (!settled) {
          settled = true;
          reject(new Error(`connection to ${url} failed: ${event?.message ?? "socket error"}`));
        }
      });
      sock.addEventListener("close", () => {
        this.connected = false;
        this.sock = null;
        if (this.closeHandler) this.closeHandler();
        if (!settled) {
          settled = true;
          reject(new Error(`connection to ${url} closed before opening`));
        }
      });
      sock.addEventListener("message", (event: any) => {
        this.dispatch(typeof event.data === "string" ? event.data : String(event.data));
      });
    });
  }

  private dispatch(data: string): void {
    const msg = parseInbound(data);
    if (msg === null) return; // not a protocol message; nothing sane to do
    const kind = isErrorMessage(msg) ? "error" : msg.kind;
    const handler = this.handlers.get(kind);
    if (handler) {
      handler(isErrorMessage(msg) ? msg : (msg as Envelope).payload, msg as Envelope);
    }
  }

  /** Validate and send one message. Throws on invalid shape or closed socket. */
  send(kind: string, payload?: unknown, sessionToken?: string): void {
    const msg: Envelope = { kind };
    if (sessionToken !== undefined) msg.session_token = sessionToken;
    if (payload !== undefined) msg.payload = payload;
    const problems = validateOutbound(msg);
    if (problems.length > 0) {
      throw new Error(`refusing to send invalid ${kind}: ${problems.join("; ")}`);
    }
    if (!this.sock) {
      throw new Error("not connected");
    }
    this.sock.send(JSON.stringify(msg));
  }

  close(): void {
    if (this.sock) {
      this.sock.close();
      this.sock = null;
      this.connected = false;
    }
  }
}
