/** Application wiring: one root element, one API base URL. */

import { ApiClient, FetchLike } from "./api.js";
import { ChatPanel } from "./chat.js";
import { GraphExplorer } from "./explorer.js";
import { TaskShortcuts } from "./shortcuts.js";
import { AppState, KeyValueStorage } from "./state.js";
import { ToastHost } from "./toast.js";

/** Environment injection for tests; real pages pass nothing. */
export interface AppEnvironment {
  fetchImpl?: FetchLike;
  storage?: KeyValueStorage;
  layoutSeed?: number;
  /** Refetch interval in ms; 0 disables polling. */
  pollMs?: number;
  toastTimeoutMs?: number;
}

export interface App {
  client: ApiClient;
  state: AppState;
  chat: ChatPanel;
  explorer: GraphExplorer;
  shortcuts: TaskShortcuts;
  /** Resolves once all in-flight UI operations settle. */
  flush(): Promise<void>;
  /** Initial snapshot fetch; call once after construction. */
  start(): Promise<void>;
  stop(): void;
}

export function initApp(root: HTMLElement, apiBase: string, env: AppEnvironment = {}): App {
  const doc = root.ownerDocument;
  const state = new AppState(env.storage);
  if (env.layoutSeed !== undefined) {
    state.layoutSeed = env.layoutSeed;
  }
  const client = new ApiClient(apiBase, env.fetchImpl);

  // Every user-triggered async operation registers here so tests can await
  // quiescence instead of guessing at timers.
  const pending = new Set<Promise<unknown>>();
  const track = <T>(op: Promise<T>): Promise<T> => {
    pending.add(op);
    op.finally(() => pending.delete(op)).catch(() => undefined);
    return op;
  };
  const flush = async (): Promise<void> => {
    while (pending.size > 0) {
      await Promise.allSettled(Array.from(pending));
    }
  };

  root.classList.add("graphtalk-app");
  const toastContainer = doc.createElement("div");
  const explorerRoot = doc.createElement("div");
  const shortcutsRoot = doc.createElement("div");
  const chatRoot = doc.createElement("div");
  root.append(toastContainer, explorerRoot, shortcutsRoot, chatRoot);

  const toasts = new ToastHost(toastContainer, env.toastTimeoutMs);
  const chat = new ChatPanel(chatRoot, client, state, track);
  const explorer = new GraphExplorer(explorerRoot, client, state, toasts, track);
  const shortcuts = new TaskShortcuts(shortcutsRoot, client, state, chat, explorer, track);
  explorer.onSelectionChange = () => shortcuts.update();

  let timer: ReturnType<typeof setInterval> | null = null;
  if (env.pollMs && env.pollMs > 0) {
    timer = setInterval(() => {
      void track(explorer.refresh());
    }, env.pollMs);
  }

  return {
    client,
    state,
    chat,
    explorer,
    shortcuts,
    flush,
    start: () => track(explorer.refresh()),
    stop: () => {
      if (timer !== null) {
        clearInterval(timer);
      }
    },
  };
}
