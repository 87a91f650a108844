/**
 * Funnel dashboard: cumulative POOL/AUTO/STAGE1/SELECTED counts plus the
 * budget remaining at each gate. The last good stats are kept around so a
 * dead link degrades to stale numbers behind a banner instead of a blank
 * page.
 */

import { ApiClient } from './apiClient.js';
import { el } from './dom.js';
import type { FunnelStats } from './types.js';

export interface BudgetRemaining {
  auto: number;
  stage1: number;
  final: number;
}

export function budgetRemaining(stats: FunnelStats): BudgetRemaining {
  return {
    auto: stats.budgets.auto - stats.cumulative.auto_passed,
    stage1: stats.budgets.stage1 - stats.cumulative.stage1_kept,
    final: stats.budgets.final - stats.cumulative.selected,
  };
}

export class FunnelDashboard {
  stats: FunnelStats | null = null;
  stale = false;

  constructor(private readonly client: ApiClient) {}

  /** Fetch fresh stats; on failure keep the previous ones and mark them stale. */
  async refresh(): Promise<void> {
    try {
      this.stats = await this.client.funnelStats();
      this.stale = false;
    } catch {
      this.stale = true;
    }
  }

  render(): HTMLElement {
    const root = el('div', { class: 'funnel-dashboard', 'data-testid': 'funnel-dashboard' });
    if (this.stale) {
      root.append(
        el('div', { class: 'banner', 'data-testid': 'stale-banner', role: 'alert' }, [
          this.stats
            ? 'Offline — showing stale data from the last successful refresh.'
            : 'Offline — no funnel data available yet.',
        ]),
      );
    }
    if (!this.stats) return root;

    const stat = (id: string, label: string, value: number) =>
      el('div', { class: 'stat' }, [
        el('dt', {}, [label]),
        el('dd', { 'data-testid': id }, [String(value)]),
      ]);

    const remaining = budgetRemaining(this.stats);
    root.append(
      el('h2', {}, ['Curation funnel']),
      el('dl', { class: 'stats' }, [
        stat('count-pool', 'POOL', this.stats.cumulative.pool),
        stat('count-auto', 'AUTO', this.stats.cumulative.auto_passed),
        stat('count-stage1', 'STAGE1', this.stats.cumulative.stage1_kept),
        stat('count-selected', 'SELECTED', this.stats.cumulative.selected),
      ]),
      el('h2', {}, ['Budget remaining']),
      el('dl', { class: 'stats' }, [
        stat('remaining-auto', 'auto pass', remaining.auto),
        stat('remaining-stage1', 'stage-1 keeps', remaining.stage1),
        stat('remaining-final', 'final selection', remaining.final),
      ]),
      el('p', { class: 'pending' }, [
        `Pending review: ${this.stats.pending.stage1} stage-1, ${this.stats.pending.stage2} stage-2.`,
      ]),
    );
    return root;
  }
}
