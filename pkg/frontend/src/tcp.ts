/**
 * Node transport for tests and tooling: the server's framed protocol,
 * 4-byte big-endian length followed by UTF-8 JSON.
 */

import * as net from "node:net";

import type { Transport } from "./protocol.js";

export class TcpTransport implements Transport {
  private sock: net.Socket;
  private buffer = Buffer.alloc(0);
  private handler: ((message: string) => void) | null = null;
  private readonly connected: Promise<void>;

  constructor(port: number, host = "127.0.0.1") {
    this.sock = net.createConnection({ port, host });
    this.connected = new Promise((resolve, reject) => {
      this.sock.once("connect", () => resolve());
      this.sock.once("error", (e) => reject(e));
    });
    this.sock.on("data", (chunk) => {
      this.buffer = Buffer.concat([this.buffer, chunk]);
      for (;;) {
        if (this.buffer.length < 4) return;
        const length = this.buffer.readUInt32BE(0);
        if (this.buffer.length < 4 + length) return;
        const payload = this.buffer.subarray(4, 4 + length).toString("utf-8");
        this.buffer = this.buffer.subarray(4 + length);
        if (this.handler) this.handler(payload);
      }
    });
  }

  ready(): Promise<void> {
    return this.connected;
  }

  send(message: string): void {
    const body = Buffer.from(message, "utf-8");
    const head = Buffer.alloc(4);
    head.writeUInt32BE(body.length, 0);
    this.sock.write(Buffer.concat([head, body]));
  }

  onMessage(handler: (message: string) => void): void {
    this.handler = handler;
  }

  close(): void {
    this.sock.destroy();
  }
}
