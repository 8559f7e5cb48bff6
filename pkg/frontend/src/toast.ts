/** Transient notification strip, used for CRUD errors like 404 and 409. */

export class ToastHost {
  private container: HTMLElement;
  private timeoutMs: number;

  constructor(container: HTMLElement, timeoutMs = 4000) {
    this.container = container;
    this.container.classList.add("toast-host");
    this.timeoutMs = timeoutMs;
  }

  show(message: string, kind: "error" | "info" = "error"): void {
    const doc = this.container.ownerDocument;
    const toast = doc.createElement("div");
    toast.className = `toast toast-${kind}`;
    toast.textContent = message;
    this.container.appendChild(toast);
    if (this.timeoutMs > 0) {
      setTimeout(() => {
        toast.remove();
      }, this.timeoutMs);
    }
  }
}
