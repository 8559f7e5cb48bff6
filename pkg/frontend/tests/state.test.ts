import { describe, expect, it } from "vitest";

import { AppState, KeyValueStorage, normalizeName } from "../src/state.js";
import { GraphPage } from "../src/types.js";

class FakeStorage implements KeyValueStorage {
  data = new Map<string, string>();
  getItem(key: string): string | null {
    return this.data.get(key) ?? null;
  }
  setItem(key: string, value: string): void {
    this.data.set(key, value);
  }
}

function page(nodes: Array<[string, string]>, edges: Array<[string, string, string]> = []): GraphPage {
  return {
    nodes: nodes.map(([id, name]) => ({ id, name, label: "Concept", properties: {} })),
    edges: edges.map(([id, source, target]) => ({
      id,
      source,
      relation: "RELATED_TO",
      target,
      properties: {},
    })),
    total_nodes: nodes.length,
    total_edges: edges.length,
  };
}

describe("normalizeName", () => {
  it("lowercases and collapses whitespace", () => {
    expect(normalizeName("  Machine    Learning ")).toBe("machine learning");
  });
});

describe("AppState session and seed", () => {
  it("persists the session id through storage", () => {
    const storage = new FakeStorage();
    const state = new AppState(storage);
    expect(state.sessionId).toBeNull();
    state.sessionId = "abc123";
    expect(state.sessionId).toBe("abc123");
    expect(new AppState(storage).sessionId).toBe("abc123");
  });

  it("defaults the layout seed and survives bad stored values", () => {
    const storage = new FakeStorage();
    const state = new AppState(storage);
    expect(state.layoutSeed).toBe(42);
    state.layoutSeed = 7;
    expect(state.layoutSeed).toBe(7);
    storage.setItem("graphtalk.seed", "not-a-number");
    expect(state.layoutSeed).toBe(42);
  });
});

describe("AppState staleness", () => {
  it("marks the view stale when a mutation lands after the fetch was sent", () => {
    const state = new AppState();
    const token = state.beginFetch();
    state.markMutated();
    state.applySnapshot(page([["n1", "A"]]), token);
    expect(state.stale).toBe(true);
  });

  it("clears staleness once a later fetch lands", () => {
    const state = new AppState();
    const first = state.beginFetch();
    state.markMutated();
    state.applySnapshot(page([["n1", "A"]]), first);
    expect(state.stale).toBe(true);
    const second = state.beginFetch();
    state.applySnapshot(page([["n1", "A"]]), second);
    expect(state.stale).toBe(false);
  });

  it("is fresh when the fetch was sent after the mutation", () => {
    const state = new AppState();
    state.markMutated();
    const token = state.beginFetch();
    state.applySnapshot(page([]), token);
    expect(state.stale).toBe(false);
  });
});

describe("AppState selection", () => {
  it("keeps selection ordered and toggles on repeat", () => {
    const state = new AppState();
    state.applySnapshot(page([["n1", "A"], ["n2", "B"], ["n3", "C"]]), state.beginFetch());
    state.toggleSelected("n2");
    state.toggleSelected("n1");
    expect(state.selection).toEqual(["n2", "n1"]);
    state.toggleSelected("n2");
    expect(state.selection).toEqual(["n1"]);
  });

  it("caps the selection at three, dropping the oldest pick", () => {
    const state = new AppState();
    state.toggleSelected("a");
    state.toggleSelected("b");
    state.toggleSelected("c");
    state.toggleSelected("d");
    expect(state.selection).toEqual(["b", "c", "d"]);
  });

  it("prunes selected ids that vanish from a new snapshot", () => {
    const state = new AppState();
    state.applySnapshot(page([["n1", "A"], ["n2", "B"]]), state.beginFetch());
    state.toggleSelected("n1");
    state.toggleSelected("n2");
    state.applySnapshot(page([["n2", "B"]]), state.beginFetch());
    expect(state.selection).toEqual(["n2"]);
  });
});

describe("AppState snapshot helpers", () => {
  it("merges expansions without duplicating ids", () => {
    const state = new AppState();
    state.applySnapshot(page([["n1", "A"]], []), state.beginFetch());
    state.mergeExpansion(
      [
        { id: "n1", name: "A", label: "Concept", properties: {} },
        { id: "n2", name: "B", label: "Concept", properties: {} },
      ],
      [{ id: "e1", source: "n1", relation: "RELATED_TO", target: "n2", properties: {} }],
    );
    state.mergeExpansion(
      [{ id: "n2", name: "B", label: "Concept", properties: {} }],
      [{ id: "e1", source: "n1", relation: "RELATED_TO", target: "n2", properties: {} }],
    );
    expect(state.nodes.map((n) => n.id)).toEqual(["n1", "n2"]);
    expect(state.edges.map((e) => e.id)).toEqual(["e1"]);
  });

  it("finds nodes by normalized name", () => {
    const state = new AppState();
    state.applySnapshot(page([["n1", "Machine Learning"]]), state.beginFetch());
    expect(state.nodeByName(" machine   LEARNING ")?.id).toBe("n1");
    expect(state.nodeByName("unknown")).toBeUndefined();
  });
});
