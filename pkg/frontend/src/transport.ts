/** Browser transport: WebSocket text frames carrying protocol JSON. */

import type { Transport } from "./protocol.js";

export class WsTransport implements Transport {
  private ws: WebSocket;
  private handler: ((message: string) => void) | null = null;
  private pending: string[] = [];

  constructor(url: string) {
    this.ws = new WebSocket(url);
    this.ws.onmessage = (ev) => {
      if (this.handler) this.handler(String(ev.data));
    };
    this.ws.onopen = () => {
      for (const m of this.pending) this.ws.send(m);
      this.pending = [];
    };
  }

  ready(): Promise<void> {
    if (this.ws.readyState === WebSocket.OPEN) return Promise.resolve();
    return new Promise((resolve, reject) => {
      this.ws.addEventListener("open", () => resolve(), { once: true });
      this.ws.addEventListener("error", () => reject(new Error("connect failed")), {
        once: true,
      });
    });
  }

  send(message: string): void {
    if (this.ws.readyState === WebSocket.OPEN) this.ws.send(message);
    else this.pending.push(message);
  }

  onMessage(handler: (message: string) => void): void {
    this.handler = handler;
  }

  close(): void {
    this.ws.close();
  }
}
