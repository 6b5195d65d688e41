/**
 * Deterministic force-directed layout.
 *
 * Initial positions are seeded from agent ids, so the same net always
 * renders identically (replay-stable screenshots); a position cache keeps
 * surviving agents where they were across revisions and only new agents
 * get seeded positions.
 */

import type { NetJson } from "./protocol.js";

export interface Point {
  x: number;
  y: number;
}

export type PositionCache = Map<number, Point>;

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function seededPosition(agentId: number, width: number, height: number): Point {
  const rng = mulberry32(0x9e3779b9 ^ agentId);
  return {
    x: width * (0.15 + 0.7 * rng()),
    y: height * (0.15 + 0.7 * rng()),
  };
}

export function layout(
  net: NetJson,
  width: number,
  height: number,
  cache: PositionCache = new Map(),
  iterations = 120,
): PositionCache {
  const ids = net.agents.map((a) => a.id);
  const pos: PositionCache = new Map();
  const pinned = new Set<number>();
  for (const id of ids) {
    const cached = cache.get(id);
    if (cached) {
      pos.set(id, { ...cached });
      pinned.add(id); // survivors stay put across revisions
    } else {
      pos.set(id, seededPosition(id, width, height));
    }
  }
  // springs along wires between agents (interface ends are ignored; the
  // renderer pins them to the frame)
  const springs: [number, number][] = [];
  for (const [p, q] of net.wires) {
    if (p[0] === "a" && q[0] === "a" && p[1] !== q[1]) springs.push([p[1], q[1]]);
  }
  const repulsion = (width * height) / Math.max(ids.length, 1) / 14;
  for (let it = 0; it < iterations; it++) {
    const cool = 1 - it / iterations;
    const force = new Map<number, Point>(ids.map((id) => [id, { x: 0, y: 0 }]));
    for (let i = 0; i < ids.length; i++) {
      for (let j = i + 1; j < ids.length; j++) {
        const a = pos.get(ids[i]!)!;
        const b = pos.get(ids[j]!)!;
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        const d2 = Math.max(dx * dx + dy * dy, 1);
        const f = repulsion / d2;
        dx *= f;
        dy *= f;
        const fa = force.get(ids[i]!)!;
        const fb = force.get(ids[j]!)!;
        fa.x += dx;
        fa.y += dy;
        fb.x -= dx;
        fb.y -= dy;
      }
    }
    for (const [a, b] of springs) {
      const pa = pos.get(a)!;
      const pb = pos.get(b)!;
      const dx = pb.x - pa.x;
      const dy = pb.y - pa.y;
      const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
      const want = 70;
      const f = (d - want) / d / 6;
      const fa = force.get(a)!;
      const fb = force.get(b)!;
      fa.x += dx * f;
      fa.y += dy * f;
      fb.x -= dx * f;
      fb.y -= dy * f;
    }
    for (const id of ids) {
      if (pinned.has(id)) continue;
      const p = pos.get(id)!;
      const f = force.get(id)!;
      const cx = width / 2;
      const cy = height / 2;
      p.x += (f.x + (cx - p.x) * 0.01) * cool;
      p.y += (f.y + (cy - p.y) * 0.01) * cool;
      p.x = Math.min(Math.max(p.x, 20), width - 20);
      p.y = Math.min(Math.max(p.y, 20), height - 20);
    }
  }
  return pos;
}
