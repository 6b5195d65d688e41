/**
 * Scene model: a pure function from a server snapshot (plus layout
 * positions) to drawable nodes and edges.  The browser code applies the
 * scene to SVG; tests assert on the scene directly, in particular that
 * highlighted edges are exactly the server's active-pair list.
 */

import type { PairInfo, PortRef, Snapshot } from "./protocol.js";
import type { Point, PositionCache } from "./layout.js";

export type Glyph =
  | "triangle"       // syntactic application, principal toward the root
  | "circle"         // computation application
  | "lambda"
  | "token"
  | "constructor"
  | "fan"            // copy placed by the translator
  | "duplicator"
  | "eraser"
  | "iterator"       // syntactic iterator agent
  | "iterator-comp"; // computation iterator agent

export function glyphFor(symbol: string): Glyph {
  if (symbol === "app") return "triangle";
  if (symbol === "capp") return "circle";
  if (symbol === "lam") return "lambda";
  if (symbol === "tok") return "token";
  if (symbol === "copy") return "fan";
  if (symbol === "dup") return "duplicator";
  if (symbol === "erase") return "eraser";
  if (symbol.startsWith("It_")) return "iterator";
  if (symbol.startsWith("ItC_")) return "iterator-comp";
  return "constructor";
}

export function glyphLabel(symbol: string): string {
  const names: Record<string, string> = {
    app: "@",
    capp: "@",
    lam: "λ",
    tok: "⇓",
    copy: "c",
    dup: "δ",
    erase: "ε",
    zero: "0",
  };
  return names[symbol] ?? symbol;
}

export interface SceneNode {
  id: number;
  symbol: string;
  glyph: Glyph;
  label: string;
  x: number;
  y: number;
}

export interface SceneEdge {
  key: string;
  a: { x: number; y: number; principal: boolean };
  b: { x: number; y: number; principal: boolean };
  portLabel: string;
  active: boolean;
  pairIndex: number | null;
}

export interface ScenePort {
  name: string;
  x: number;
  y: number;
}

export interface Scene {
  nodes: SceneNode[];
  edges: SceneEdge[];
  interfacePorts: ScenePort[];
}

function pairByAgents(pairs: PairInfo[]): Map<string, number> {
  const m = new Map<string, number>();
  for (const p of pairs) {
    const [a, b] = p.agents;
    m.set(a < b ? `${a}:${b}` : `${b}:${a}`, p.index);
  }
  return m;
}

export function buildScene(
  snapshot: Snapshot,
  positions: PositionCache,
  width = 800,
  height = 520,
): Scene {
  const nodes: SceneNode[] = snapshot.net.agents.map((a) => {
    const p: Point = positions.get(a.id) ?? { x: width / 2, y: height / 2 };
    return {
      id: a.id,
      symbol: a.symbol,
      glyph: glyphFor(a.symbol),
      label: glyphLabel(a.symbol),
      x: p.x,
      y: p.y,
    };
  });
  const byId = new Map(nodes.map((n) => [n.id, n]));
  const pairIndex = pairByAgents(snapshot.pairs);

  // interface ports pinned along the top edge, in order
  const interfacePorts: ScenePort[] = snapshot.net.interface.map((ref, k) => ({
    name: `i${k}`,
    x: (width * (k + 1)) / (snapshot.net.interface.length + 1),
    y: 18,
  }));

  // free ends named in wires resolve to their interface position
  const freePos = new Map<string, ScenePort>();
  snapshot.net.interface.forEach((ref, k) => {
    if (ref[0] === "free") freePos.set(ref[1], interfacePorts[k]!);
  });

  const edges: SceneEdge[] = [];
  const end = (ref: PortRef) => {
    if (ref[0] === "a") {
      const n = byId.get(ref[1])!;
      return { x: n.x, y: n.y, principal: ref[2] === 0, agent: ref[1], port: ref[2] };
    }
    const p = freePos.get(ref[1])!;
    return { x: p.x, y: p.y, principal: false, agent: null, port: null };
  };

  snapshot.net.wires.forEach(([p, q], i) => {
    const a = end(p);
    const b = end(q);
    let index: number | null = null;
    if (a.principal && b.principal && a.agent !== null && b.agent !== null) {
      const key = a.agent < b.agent ? `${a.agent}:${b.agent}` : `${b.agent}:${a.agent}`;
      index = pairIndex.get(key) ?? null;
    }
    const labels = [a, b]
      .filter((e) => e.port !== null && e.port !== 0)
      .map((e) => String(e.port));
    edges.push({
      key: `w${i}`,
      a: { x: a.x, y: a.y, principal: a.principal },
      b: { x: b.x, y: b.y, principal: b.principal },
      portLabel: labels.join(","),
      active: index !== null,
      pairIndex: index,
    });
  });

  // wires from interface entries that are direct agent ports
  snapshot.net.interface.forEach((ref, k) => {
    if (ref[0] === "a") {
      const n = byId.get(ref[1])!;
      const p = interfacePorts[k]!;
      edges.push({
        key: `i${k}`,
        a: { x: p.x, y: p.y, principal: false },
        b: { x: n.x, y: n.y, principal: ref[2] === 0 },
        portLabel: ref[2] !== 0 ? String(ref[2]) : "",
        active: false,
        pairIndex: null,
      });
    }
  });

  return { nodes, edges, interfacePorts };
}

/** The highlighted pair indices, sorted; must equal the server's list. */
export function highlightedPairs(scene: Scene): number[] {
  return scene.edges
    .filter((e) => e.active)
    .map((e) => e.pairIndex as number)
    .sort((x, y) => x - y);
}
