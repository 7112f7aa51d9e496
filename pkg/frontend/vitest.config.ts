import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // native libraries and subprocess round trips; forks keep koffi happy
    pool: "forks",
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
