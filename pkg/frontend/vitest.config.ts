import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    environment: 'happy-dom',
    environmentOptions: {
      happyDOM: {
        // the round-trip test talks to live localhost servers, which the
        // simulated window would otherwise treat as cross-origin
        settings: { fetch: { disableSameOriginPolicy: true } },
      },
    },
    include: ['tests/**/*.test.ts'],
    testTimeout: 60000,
    hookTimeout: 60000,
  },
});
