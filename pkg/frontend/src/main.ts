/** Browser entry point. The only configuration is the API base URL, read from
 * the root element's data attribute; empty means same origin. */

import { initApp } from "./app.js";

const root = document.getElementById("app");
if (root) {
  const apiBase = root.getAttribute("data-api-base") ?? "";
  const app = initApp(root, apiBase, {
    storage: window.localStorage,
    pollMs: 20_000,
  });
  void app.start();
}
