/** Chat panel: message history, task badges, trace inspector. */

import { ApiClient, ApiError } from "./api.js";
import { AppState } from "./state.js";
import { ChatResponse, TraceOut } from "./types.js";

export class ChatPanel {
  private client: ApiClient;
  private state: AppState;
  private root: HTMLElement;
  private log: HTMLElement;
  private form: HTMLFormElement;
  private input: HTMLInputElement;
  private sendButton: HTMLButtonElement;
  private traceView: HTMLElement;
  private track: <T>(op: Promise<T>) => Promise<T>;

  constructor(
    root: HTMLElement,
    client: ApiClient,
    state: AppState,
    track?: <T>(op: Promise<T>) => Promise<T>,
  ) {
    this.client = client;
    this.state = state;
    this.root = root;
    this.track = track ?? ((op) => op);
    const doc = root.ownerDocument;

    root.classList.add("chat-panel");
    this.log = doc.createElement("div");
    this.log.className = "chat-log";
    root.appendChild(this.log);

    this.form = doc.createElement("form");
    this.form.className = "chat-form";
    this.input = doc.createElement("input");
    this.input.type = "text";
    this.input.name = "message";
    this.input.placeholder = "Ask about the graph";
    this.sendButton = doc.createElement("button");
    this.sendButton.type = "submit";
    this.sendButton.textContent = "Send";
    this.form.appendChild(this.input);
    this.form.appendChild(this.sendButton);
    root.appendChild(this.form);

    this.traceView = doc.createElement("div");
    this.traceView.className = "trace-view hidden";
    root.appendChild(this.traceView);

    this.form.addEventListener("submit", (event) => {
      event.preventDefault();
      const text = this.input.value.trim();
      if (!text) {
        return;
      }
      this.input.value = "";
      void this.track(this.send(text));
    });
  }

  private setBusy(busy: boolean): void {
    this.input.disabled = busy;
    this.sendButton.disabled = busy;
  }

  private bubble(kind: string, text: string): HTMLElement {
    const doc = this.root.ownerDocument;
    const element = doc.createElement("div");
    element.className = `bubble ${kind}`;
    element.textContent = text;
    this.log.appendChild(element);
    return element;
  }

  /** Send a message through the API; also used by task shortcuts. */
  async send(message: string): Promise<ChatResponse | null> {
    this.bubble("user", message);
    this.setBusy(true);
    try {
      const response = await this.client.chat(message, this.state.sessionId ?? undefined);
      this.state.sessionId = response.session_id;
      const answer = this.bubble("answer", response.answer);

      const doc = this.root.ownerDocument;
      const meta = doc.createElement("div");
      meta.className = "bubble-meta";
      const badge = doc.createElement("span");
      badge.className = "task-badge";
      badge.textContent = response.task_type;
      meta.appendChild(badge);
      const traceLink = doc.createElement("a");
      traceLink.href = "#";
      traceLink.className = "trace-link";
      traceLink.textContent = response.trace_id;
      traceLink.addEventListener("click", (event) => {
        event.preventDefault();
        void this.track(this.showTrace(response.trace_id));
      });
      meta.appendChild(traceLink);
      answer.appendChild(meta);
      return response;
    } catch (exc) {
      const message =
        exc instanceof ApiError ? `${exc.code}: ${exc.message}` : `unexpected error: ${String(exc)}`;
      this.bubble("error", message);
      return null;
    } finally {
      this.setBusy(false);
    }
  }

  /** Fetch a trace and render its stages in order. */
  async showTrace(traceId: string): Promise<TraceOut | null> {
    let trace: TraceOut;
    try {
      trace = await this.client.trace(traceId);
    } catch (exc) {
      const message = exc instanceof ApiError ? `${exc.code}: ${exc.message}` : String(exc);
      this.bubble("error", message);
      return null;
    }
    const doc = this.root.ownerDocument;
    this.traceView.innerHTML = "";
    this.traceView.classList.remove("hidden");

    const heading = doc.createElement("div");
    heading.className = "trace-heading";
    heading.textContent = `${trace.trace_id} · ${trace.task_type}`;
    this.traceView.appendChild(heading);

    const close = doc.createElement("button");
    close.type = "button";
    close.className = "trace-close";
    close.textContent = "Close";
    close.addEventListener("click", () => this.traceView.classList.add("hidden"));
    this.traceView.appendChild(close);

    const list = doc.createElement("ol");
    list.className = "trace-stages";
    for (const entry of trace.entries) {
      const item = doc.createElement("li");
      item.className = "trace-stage";
      item.setAttribute("data-stage", entry.stage);
      const name = doc.createElement("span");
      name.className = "stage-name";
      name.textContent = entry.stage;
      item.appendChild(name);
      const output = doc.createElement("pre");
      output.className = "stage-output";
      output.textContent = entry.output;
      item.appendChild(output);
      list.appendChild(item);
    }
    this.traceView.appendChild(list);

    if (trace.failed_step) {
      const failed = doc.createElement("div");
      failed.className = "trace-failed";
      failed.textContent = `failed at ${trace.failed_step.step_id}: ${trace.failed_step.message}`;
      this.traceView.appendChild(failed);
    }
    if (trace.warnings.length > 0) {
      const warnings = doc.createElement("div");
      warnings.className = "trace-warnings";
      warnings.textContent = trace.warnings.join("; ");
      this.traceView.appendChild(warnings);
    }
    return trace;
  }
}
