/**
 * Browser step-debugger: connects to the session server over WebSocket,
 * renders snapshots as SVG, and maps clicks on highlighted wires to
 * step{pair_index} requests.  All state shown is a server snapshot; the
 * snapshot hash in the corner makes that checkable.
 */

import { PositionCache, layout } from "./layout.js";
import { Response, SessionClient, Snapshot } from "./protocol.js";
import { Scene, buildScene } from "./render.js";
import { snapshotHash } from "./hash.js";
import { WsTransport } from "./transport.js";

const WIDTH = 860;
const HEIGHT = 540;
const SVG_NS = "http://www.w3.org/2000/svg";

const DEFAULT_PROGRAM = "(\\x:nat. x) 0";

class App {
  private client: SessionClient;
  private rev = 0;
  private snapshot: Snapshot | null = null;
  private positions: PositionCache = new Map();
  private selectedPair = 0;

  constructor(private root: HTMLElement, transport: WsTransport) {
    this.client = new SessionClient(transport);
    this.buildDom();
  }

  private el<K extends keyof HTMLElementTagNameMap>(
    tag: K, attrs: Record<string, string> = {}, text = "",
  ): HTMLElementTagNameMap[K] {
    const e = document.createElement(tag);
    for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
    if (text) e.textContent = text;
    return e;
  }

  private editor!: HTMLTextAreaElement;
  private svg!: SVGSVGElement;
  private readbackPane!: HTMLElement;
  private statsPane!: HTMLElement;
  private hashPane!: HTMLElement;
  private statusPane!: HTMLElement;

  private buildDom(): void {
    const bar = this.el("div", { class: "bar" });
    this.editor = this.el("textarea", { rows: "3", class: "editor" });
    this.editor.value = DEFAULT_PROGRAM;
    const mk = (label: string, fn: () => void) => {
      const b = this.el("button", {}, label);
      b.addEventListener("click", () => void fn());
      bar.appendChild(b);
      return b;
    };
    mk("Load", () => this.doLoad());
    mk("Step", () => this.doStep());
    mk("Run 10", () => this.doRun({ n: 10 }));
    mk("Run to normal", () => this.doRun({ toNormal: true }));
    mk("Undo", () => this.doUndo());

    this.svg = document.createElementNS(SVG_NS, "svg");
    this.svg.setAttribute("width", String(WIDTH));
    this.svg.setAttribute("height", String(HEIGHT));
    this.svg.setAttribute("class", "net");

    this.readbackPane = this.el("pre", { class: "pane" });
    this.statsPane = this.el("div", { class: "pane" });
    this.hashPane = this.el("div", { class: "hash" });
    this.statusPane = this.el("div", { class: "status" });

    this.root.append(
      this.editor, bar, this.statusPane, this.svg,
      this.readbackPane, this.statsPane, this.hashPane,
    );
  }

  async doLoad(): Promise<void> {
    const r = await this.client.load(this.editor.value);
    this.apply(r);
  }

  async doStep(): Promise<void> {
    if (!this.snapshot || this.snapshot.pairs.length === 0) return;
    const index = Math.min(this.selectedPair, this.snapshot.pairs.length - 1);
    this.apply(await this.client.step(this.rev, index));
    this.selectedPair = 0;
  }

  async doRun(opts: { n?: number; toNormal?: boolean }): Promise<void> {
    this.apply(await this.client.run(this.rev, opts));
  }

  async doUndo(): Promise<void> {
    this.apply(await this.client.undo(this.rev));
  }

  async stepPair(index: number): Promise<void> {
    this.apply(await this.client.step(this.rev, index));
  }

  private apply(r: Response): void {
    if (!r.ok) {
      if (r.error === "stale_revision") {
        // racing client: refresh from the server and carry on
        void this.client.snapshot().then((s) => this.apply(s));
        return;
      }
      this.statusPane.textContent = `${r.error}: ${r.message ?? ""}`;
      return;
    }
    this.statusPane.textContent = "";
    this.rev = r.rev;
    if (r.snapshot) {
      this.snapshot = r.snapshot;
      this.renderSnapshot(r.snapshot);
    }
    void this.refreshReadback();
  }

  private async refreshReadback(): Promise<void> {
    const r = await this.client.readback();
    if (!r.ok || !r.readback) return;
    if (r.readback.term !== undefined) {
      this.readbackPane.textContent = r.readback.term;
    } else {
      this.readbackPane.textContent =
        "computation agents present: " + (r.readback.not_syntactic ?? []).join(", ");
    }
  }

  private renderSnapshot(snapshot: Snapshot): void {
    this.positions = layout(snapshot.net, WIDTH, HEIGHT, this.positions);
    const scene = buildScene(snapshot, this.positions, WIDTH, HEIGHT);
    this.drawScene(scene);
    const s = snapshot.stats;
    this.statsPane.textContent =
      `steps ${s.total} (evaluation ${s.eval}, management ${s.mgmt}); ` +
      `active pairs: ${snapshot.pairs.length}`;
    this.hashPane.textContent = `snapshot ${snapshotHash(snapshot)}`;
  }

  private drawScene(scene: Scene): void {
    while (this.svg.firstChild) this.svg.removeChild(this.svg.firstChild);
    const add = (name: string, attrs: Record<string, string>, parent: Node = this.svg) => {
      const e = document.createElementNS(SVG_NS, name);
      for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
      parent.appendChild(e);
      return e;
    };
    for (const edge of scene.edges) {
      const line = add("line", {
        x1: String(edge.a.x), y1: String(edge.a.y),
        x2: String(edge.b.x), y2: String(edge.b.y),
        stroke: edge.active ? "#d22" : "#888",
        "stroke-width": edge.active ? "3.5" : "1.4",
      });
      if (edge.active && edge.pairIndex !== null) {
        const index = edge.pairIndex;
        line.setAttribute("cursor", "pointer");
        line.addEventListener("click", () => void this.stepPair(index));
      }
      // principal ports marked with a dot near their end
      for (const e of [edge.a, edge.b]) {
        if (!e.principal) continue;
        const ox = e === edge.a ? edge.b : edge.a;
        const dx = ox.x - e.x;
        const dy = ox.y - e.y;
        const d = Math.max(Math.hypot(dx, dy), 1);
        add("circle", {
          cx: String(e.x + (dx / d) * 14),
          cy: String(e.y + (dy / d) * 14),
          r: "3", fill: "#222",
        });
      }
      if (edge.portLabel) {
        add("text", {
          x: String((edge.a.x + edge.b.x) / 2 + 4),
          y: String((edge.a.y + edge.b.y) / 2 - 4),
          "font-size": "9", fill: "#777",
        }).textContent = edge.portLabel;
      }
    }
    for (const p of scene.interfacePorts) {
      add("circle", { cx: String(p.x), cy: String(p.y), r: "3", fill: "#06c" });
    }
    for (const n of scene.nodes) {
      const g = add("g", {});
      const common = { stroke: "#333", "stroke-width": "1.2" };
      const shape = (d: string, fill: string, dashed = false) =>
        add("path", {
          d, fill, ...common,
          ...(dashed ? { "stroke-dasharray": "3,2" } : {}),
        }, g);
      const { x, y } = n;
      switch (n.glyph) {
        case "triangle":
          shape(`M ${x} ${y - 12} L ${x - 12} ${y + 9} L ${x + 12} ${y + 9} Z`, "#ffd98a");
          break;
        case "circle":
          add("circle", { cx: String(x), cy: String(y), r: "12", fill: "#ffb3b3", ...common }, g);
          break;
        case "lambda":
          shape(`M ${x - 11} ${y - 11} H ${x + 11} V ${y + 11} H ${x - 11} Z`, "#bde0fe");
          break;
        case "token":
          shape(`M ${x} ${y - 13} L ${x + 13} ${y} L ${x} ${y + 13} L ${x - 13} ${y} Z`, "#b9f6ca");
          break;
        case "fan":
          shape(`M ${x - 10} ${y - 8} H ${x + 10} L ${x} ${y + 10} Z`, "#e8e8e8");
          break;
        case "duplicator":
          shape(`M ${x - 10} ${y - 8} H ${x + 10} L ${x} ${y + 10} Z`, "#cfcfcf", true);
          break;
        case "eraser":
          add("circle", { cx: String(x), cy: String(y), r: "6", fill: "#555", ...common }, g);
          break;
        case "iterator":
          shape(
            `M ${x} ${y - 13} L ${x + 12} ${y - 3} L ${x + 7} ${y + 11} ` +
            `L ${x - 7} ${y + 11} L ${x - 12} ${y - 3} Z`, "#e6ccff",
          );
          break;
        case "iterator-comp":
          shape(
            `M ${x} ${y - 13} L ${x + 12} ${y - 3} L ${x + 7} ${y + 11} ` +
            `L ${x - 7} ${y + 11} L ${x - 12} ${y - 3} Z`, "#d0a9ff", true,
          );
          break;
        default:
          shape(`M ${x - 11} ${y - 9} H ${x + 11} V ${y + 9} H ${x - 11} Z`, "#fff3bf");
      }
      const label = add("text", {
        x: String(x), y: String(y + 4),
        "text-anchor": "middle", "font-size": "10", fill: "#111",
      }, g);
      label.textContent = n.glyph === "eraser" ? "" : n.label;
      add("title", {}, g).textContent = `${n.symbol}#${n.id}`;
    }
  }
}

export function start(): void {
  const rootEl = document.getElementById("app");
  if (!rootEl) throw new Error("missing #app container");
  const params = new URLSearchParams(location.search);
  const port = params.get("port") ?? "4270";
  const transport = new WsTransport(`ws://127.0.0.1:${port}/`);
  const app = new App(rootEl, transport);
  void transport.ready().then(() => app.doLoad());
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  start();
}
