/** Seeded force-directed layout. Pure: same inputs and seed give identical positions. */

export interface Point {
  x: number;
  y: number;
}

export interface LayoutOptions {
  width: number;
  height: number;
  seed: number;
  iterations?: number;
}

interface LayoutEdge {
  source: string;
  target: string;
}

/** Small deterministic PRNG (mulberry32). */
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/**
 * Compute positions for every node id. Classic spring-embedder: seeded random
 * start, pairwise repulsion, spring attraction along edges, pull to center,
 * cooling step size. Positions are rounded so snapshots compare exactly.
 */
export function layoutGraph(
  nodeIds: string[],
  edges: LayoutEdge[],
  options: LayoutOptions,
): Map<string, Point> {
  const { width, height, seed } = options;
  const iterations = options.iterations ?? 150;
  const count = nodeIds.length;
  const result = new Map<string, Point>();
  if (count === 0) {
    return result;
  }

  const rng = mulberry32(seed);
  const pad = 30;
  const xs = new Float64Array(count);
  const ys = new Float64Array(count);
  const index = new Map<string, number>();
  nodeIds.forEach((id, i) => {
    index.set(id, i);
    xs[i] = pad + rng() * (width - 2 * pad);
    ys[i] = pad + rng() * (height - 2 * pad);
  });

  const links: Array<[number, number]> = [];
  for (const edge of edges) {
    const a = index.get(edge.source);
    const b = index.get(edge.target);
    if (a !== undefined && b !== undefined && a !== b) {
      links.push([a, b]);
    }
  }

  const area = width * height;
  const k = Math.sqrt(area / count);
  const dispX = new Float64Array(count);
  const dispY = new Float64Array(count);

  for (let iter = 0; iter < iterations; iter++) {
    dispX.fill(0);
    dispY.fill(0);

    for (let i = 0; i < count; i++) {
      for (let j = i + 1; j < count; j++) {
        let dx = xs[i] - xs[j];
        let dy = ys[i] - ys[j];
        let dist = Math.sqrt(dx * dx + dy * dy);
        if (dist < 0.01) {
          // Deterministic nudge for coincident points.
          dx = 0.01 * ((i % 3) - 1 || 1);
          dy = 0.01 * ((j % 3) - 1 || 1);
          dist = Math.sqrt(dx * dx + dy * dy);
        }
        const force = (k * k) / dist;
        dispX[i] += (dx / dist) * force;
        dispY[i] += (dy / dist) * force;
        dispX[j] -= (dx / dist) * force;
        dispY[j] -= (dy / dist) * force;
      }
    }

    for (const [a, b] of links) {
      const dx = xs[a] - xs[b];
      const dy = ys[a] - ys[b];
      const dist = Math.max(Math.sqrt(dx * dx + dy * dy), 0.01);
      const force = (dist * dist) / k;
      dispX[a] -= (dx / dist) * force;
      dispY[a] -= (dy / dist) * force;
      dispX[b] += (dx / dist) * force;
      dispY[b] += (dy / dist) * force;
    }

    const cx = width / 2;
    const cy = height / 2;
    const cooling = 0.1 * Math.min(width, height) * (1 - iter / iterations);
    for (let i = 0; i < count; i++) {
      dispX[i] += (cx - xs[i]) * 0.02;
      dispY[i] += (cy - ys[i]) * 0.02;
      const len = Math.max(Math.sqrt(dispX[i] * dispX[i] + dispY[i] * dispY[i]), 0.01);
      const step = Math.min(len, cooling);
      xs[i] += (dispX[i] / len) * step;
      ys[i] += (dispY[i] / len) * step;
      xs[i] = Math.min(width - pad, Math.max(pad, xs[i]));
      ys[i] = Math.min(height - pad, Math.max(pad, ys[i]));
    }
  }

  nodeIds.forEach((id, i) => {
    result.set(id, { x: Math.round(xs[i] * 100) / 100, y: Math.round(ys[i] * 100) / 100 });
  });
  return result;
}
