import { describe, expect, it } from "vitest";

import { layoutGraph, mulberry32 } from "../src/layout.js";

const NODES = ["n1", "n2", "n3", "n4", "n5", "n6"];
const EDGES = [
  { source: "n1", target: "n2" },
  { source: "n2", target: "n3" },
  { source: "n3", target: "n4" },
  { source: "n1", target: "n5" },
];
const OPTS = { width: 600, height: 400, seed: 42 };

describe("mulberry32", () => {
  it("is deterministic per seed", () => {
    const a = mulberry32(7);
    const b = mulberry32(7);
    const seqA = [a(), a(), a()];
    const seqB = [b(), b(), b()];
    expect(seqA).toEqual(seqB);
  });

  it("differs across seeds", () => {
    expect(mulberry32(1)()).not.toEqual(mulberry32(2)());
  });

  it("stays in [0, 1)", () => {
    const rng = mulberry32(123);
    for (let i = 0; i < 1000; i++) {
      const v = rng();
      expect(v).toBeGreaterThanOrEqual(0);
      expect(v).toBeLessThan(1);
    }
  });
});

describe("layoutGraph", () => {
  it("gives identical positions for identical inputs and seed", () => {
    const first = layoutGraph(NODES, EDGES, OPTS);
    const second = layoutGraph(NODES, EDGES, OPTS);
    expect(Object.fromEntries(second)).toEqual(Object.fromEntries(first));
  });

  it("changes layout when the seed changes", () => {
    const first = layoutGraph(NODES, EDGES, OPTS);
    const second = layoutGraph(NODES, EDGES, { ...OPTS, seed: 43 });
    const moved = NODES.some((id) => {
      const a = first.get(id);
      const b = second.get(id);
      return a && b && (a.x !== b.x || a.y !== b.y);
    });
    expect(moved).toBe(true);
  });

  it("keeps every node inside the canvas padding", () => {
    const positions = layoutGraph(NODES, EDGES, OPTS);
    for (const point of positions.values()) {
      expect(point.x).toBeGreaterThanOrEqual(30);
      expect(point.x).toBeLessThanOrEqual(OPTS.width - 30);
      expect(point.y).toBeGreaterThanOrEqual(30);
      expect(point.y).toBeLessThanOrEqual(OPTS.height - 30);
    }
  });

  it("positions every node and only the given nodes", () => {
    const positions = layoutGraph(NODES, EDGES, OPTS);
    expect(Array.from(positions.keys()).sort()).toEqual([...NODES].sort());
  });

  it("handles the empty graph and a single node", () => {
    expect(layoutGraph([], [], OPTS).size).toBe(0);
    const single = layoutGraph(["only"], [], OPTS);
    expect(single.size).toBe(1);
  });

  it("ignores edges pointing at unknown nodes", () => {
    const positions = layoutGraph(
      ["a", "b"],
      [{ source: "a", target: "ghost" }],
      OPTS,
    );
    expect(positions.size).toBe(2);
  });

  it("pulls connected nodes closer than the most distant pair", () => {
    // A chain plus one isolated node: by the end, chain neighbors should not
    // be the farthest-apart pair on the canvas.
    const nodes = ["a", "b", "c", "z"];
    const edges = [
      { source: "a", target: "b" },
      { source: "b", target: "c" },
    ];
    const positions = layoutGraph(nodes, edges, { width: 800, height: 600, seed: 9 });
    const dist = (p: string, q: string) => {
      const a = positions.get(p)!;
      const b = positions.get(q)!;
      return Math.hypot(a.x - b.x, a.y - b.y);
    };
    const linked = dist("a", "b");
    let widest = 0;
    for (const p of nodes) {
      for (const q of nodes) {
        widest = Math.max(widest, dist(p, q));
      }
    }
    expect(linked).toBeLessThan(widest);
  });
});
