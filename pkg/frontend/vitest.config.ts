import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    include: ["tests/**/*.test.ts"],
    // The smoke test boots a real API server subprocess.
    testTimeout: 60_000,
    hookTimeout: 60_000,
  },
});
