import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/apiClient.js';
import { budgetRemaining, FunnelDashboard } from '../src/dashboard.js';
import type { FunnelStats } from '../src/types.js';
import { FakeRoutes, jsonResponse } from './helpers.js';

const stats: FunnelStats = {
  counts: {
    POOL: 120,
    AUTO_PASSED: 40,
    STAGE1_KEPT: 25,
    STAGE1_REJECTED: 10,
    SELECTED: 4,
    STAGE2_REJECTED: 1,
  },
  cumulative: { pool: 200, auto_passed: 80, stage1_kept: 30, selected: 4 },
  rejections: { auto: { ocr: 10 }, stage1: { annotator: 10 }, stage2: { lighting: 1 } },
  budgets: { auto: 200000, stage1: 20000, final: 2000 },
  pending: { stage1: 40, stage2: 25 },
};

function dashboardWith(routes: FakeRoutes) {
  return new FunnelDashboard(new ApiClient('http://api.test', routes.fetch));
}

const text = (root: HTMLElement, id: string) =>
  root.querySelector(`[data-testid="${id}"]`)?.textContent;

describe('budgetRemaining', () => {
  it('subtracts cumulative progress from each gate budget', () => {
    expect(budgetRemaining(stats)).toEqual({ auto: 199920, stage1: 19970, final: 1996 });
  });
});

describe('FunnelDashboard', () => {
  it('renders the four funnel counts and remaining budgets', async () => {
    const routes = new FakeRoutes().on('GET', '/funnel/stats', () => jsonResponse(stats));
    const dashboard = dashboardWith(routes);
    await dashboard.refresh();
    const root = dashboard.render();

    expect(text(root, 'count-pool')).toBe('200');
    expect(text(root, 'count-auto')).toBe('80');
    expect(text(root, 'count-stage1')).toBe('30');
    expect(text(root, 'count-selected')).toBe('4');
    expect(text(root, 'remaining-auto')).toBe('199920');
    expect(text(root, 'remaining-stage1')).toBe('19970');
    expect(text(root, 'remaining-final')).toBe('1996');
    expect(root.querySelector('[data-testid="stale-banner"]')).toBeNull();
  });

  it('keeps the last stats behind a stale banner when the server goes away', async () => {
    let up = true;
    const routes = new FakeRoutes().on('GET', '/funnel/stats', () => {
      if (!up) throw new TypeError('fetch failed');
      return jsonResponse(stats);
    });
    const dashboard = dashboardWith(routes);
    await dashboard.refresh();
    up = false;
    await dashboard.refresh();

    const root = dashboard.render();
    expect(root.querySelector('[data-testid="stale-banner"]')!.textContent).toMatch(/stale/i);
    expect(text(root, 'count-pool')).toBe('200'); // old numbers still shown
  });

  it('reports offline-with-no-data when it never loaded', async () => {
    const dashboard = dashboardWith(new FakeRoutes());
    await dashboard.refresh();
    const root = dashboard.render();
    expect(root.querySelector('[data-testid="stale-banner"]')!.textContent).toMatch(/no.*data/i);
    expect(root.querySelector('[data-testid="count-pool"]')).toBeNull();
  });

  it('recovers cleanly once the server is reachable again', async () => {
    let up = false;
    const routes = new FakeRoutes().on('GET', '/funnel/stats', () => {
      if (!up) throw new TypeError('fetch failed');
      return jsonResponse(stats);
    });
    const dashboard = dashboardWith(routes);
    await dashboard.refresh();
    expect(dashboard.stale).toBe(true);
    up = true;
    await dashboard.refresh();
    expect(dashboard.stale).toBe(false);
    expect(dashboard.render().querySelector('[data-testid="stale-banner"]')).toBeNull();
  });
});
