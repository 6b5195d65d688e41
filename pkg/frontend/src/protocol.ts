/**
 * Session protocol: message types and a transport-agnostic client.
 *
 * The server answers strictly one response per request on a connection,
 * so the client serializes requests and resolves them in order.
 */

export type PortRef = ["a", number, number] | ["free", string];

export interface NetJson {
  agents: { id: number; symbol: string }[];
  wires: [PortRef, PortRef][];
  interface: PortRef[];
}

export interface PairInfo {
  index: number;
  agents: [number, number];
  symbols: [string, string];
}

export interface Stats {
  total: number;
  eval: number;
  mgmt: number;
}

export interface Snapshot {
  net: NetJson;
  pairs: PairInfo[];
  steps: number;
  stats: Stats;
}

export interface StepEvent {
  step: number;
  rule: [string, string];
  consumed: number[];
  created: number[];
}

export interface Response {
  rev: number;
  ok: boolean;
  error?: string;
  message?: string;
  snapshot?: Snapshot;
  pairs?: PairInfo[];
  event?: StepEvent;
  events?: StepEvent[];
  readback?: { term?: string; not_syntactic?: string[] };
  system?: string;
}

export type Request = Record<string, unknown> & { cmd: string };

/** One request in, one JSON response out. */
export interface Transport {
  send(message: string): void;
  onMessage(handler: (message: string) => void): void;
  close(): void;
}

export class SessionClient {
  private queue: { resolve: (r: Response) => void; reject: (e: Error) => void }[] = [];
  /** Every request/response pair, for conformance checks. */
  readonly exchanges: { request: Request; response: Response }[] = [];

  constructor(private transport: Transport) {
    transport.onMessage((raw) => {
      const waiter = this.queue.shift();
      if (!waiter) return;
      try {
        waiter.resolve(JSON.parse(raw) as Response);
      } catch (e) {
        waiter.reject(e as Error);
      }
    });
  }

  request(req: Request): Promise<Response> {
    return new Promise((resolve, reject) => {
      this.queue.push({
        resolve: (resp) => {
          this.exchanges.push({ request: req, response: resp });
          resolve(resp);
        },
        reject,
      });
      this.transport.send(JSON.stringify(req));
    });
  }

  load(source: string, token = true): Promise<Response> {
    const req: Request = { cmd: "load", source };
    if (!token) req.token = false;
    return this.request(req);
  }

  snapshot(): Promise<Response> {
    return this.request({ cmd: "snapshot" });
  }

  pairs(): Promise<Response> {
    return this.request({ cmd: "pairs" });
  }

  step(rev: number, pairIndex: number): Promise<Response> {
    return this.request({ cmd: "step", rev, pair_index: pairIndex });
  }

  run(rev: number, opts: { n?: number; toNormal?: boolean }): Promise<Response> {
    const req: Request = { cmd: "run", rev };
    if (opts.toNormal) req.to_normal = true;
    if (opts.n !== undefined) req.n = opts.n;
    return this.request(req);
  }

  undo(rev: number): Promise<Response> {
    return this.request({ cmd: "undo", rev });
  }

  readback(): Promise<Response> {
    return this.request({ cmd: "readback" });
  }

  system(): Promise<Response> {
    return this.request({ cmd: "system" });
  }

  close(): void {
    this.transport.close();
  }
}
