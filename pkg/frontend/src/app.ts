/**
 * Application shell: one annotator session per tab, four work modes
 * (stage-1 triage, stage-2 checklist, A/B rating, funnel dashboard).
 * Each mode loops fetch → render → submit → next until the queue is empty.
 */

import { ApiClient } from './apiClient.js';
import { renderAbComparison } from './comparisonView.js';
import { FunnelDashboard } from './dashboard.js';
import { el } from './dom.js';
import { SessionState } from './session.js';
import { UiSettings } from './settings.js';
import { renderStage1Review } from './stage1View.js';
import { renderStage2Review } from './stage2View.js';

type Mode = 'stage1' | 'stage2' | 'rate' | 'dashboard';

export class AnnotationApp {
  private readonly client: ApiClient;
  private session: SessionState;
  private readonly content: HTMLElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly settings: UiSettings,
    annotatorId = 'anon',
  ) {
    this.client = new ApiClient(settings.baseUrl);
    this.session = new SessionState(annotatorId, this.client, settings);
    this.content = el('main', { class: 'content' });

    const annotatorInput = el('input', {
      'data-testid': 'annotator-id',
      value: annotatorId,
      'aria-label': 'annotator id',
    });
    annotatorInput.addEventListener('change', () => {
      const id = annotatorInput.value.trim();
      if (id) this.session = new SessionState(id, this.client, settings);
    });

    const nav = el('nav', { class: 'modes' });
    const modes: [Mode, string][] = [
      ['stage1', 'Stage 1'],
      ['stage2', 'Stage 2'],
      ['rate', 'Rate A/B'],
      ['dashboard', 'Dashboard'],
    ];
    for (const [mode, label] of modes) {
      const button = el('button', { 'data-testid': `mode-${mode}` }, [label]);
      button.addEventListener('click', () => void this.show(mode));
      nav.append(button);
    }

    root.append(el('header', {}, [el('h1', {}, ['Image review']), annotatorInput, nav]), this.content);
  }

  private idle(message: string): void {
    this.content.replaceChildren(el('p', { class: 'idle', 'data-testid': 'idle' }, [message]));
  }

  async show(mode: Mode): Promise<void> {
    this.session.release();
    if (mode === 'dashboard') {
      const dashboard = new FunnelDashboard(this.client);
      await dashboard.refresh();
      const refresh = el('button', { 'data-testid': 'refresh' }, ['Refresh']);
      refresh.addEventListener('click', async () => {
        await dashboard.refresh();
        this.content.replaceChildren(refresh, dashboard.render());
      });
      this.content.replaceChildren(refresh, dashboard.render());
      return;
    }
    if (mode === 'rate') return this.nextComparison();
    return this.nextCuration(mode === 'stage1' ? 1 : 2);
  }

  private async nextCuration(stage: 1 | 2): Promise<void> {
    const task = await this.session.fetchNextCurationTask(stage);
    if (task === null) {
      this.idle(`No stage-${stage} tasks waiting.`);
      return;
    }
    const again = () => void this.nextCuration(stage);
    const view =
      stage === 1
        ? renderStage1Review(task, this.settings, {
            submit: (choice) => this.session.submitStage1(choice),
            onDone: again,
            onExpired: again,
          })
        : renderStage2Review(task, this.settings, {
            submit: (answers, caption) => this.session.submitStage2(answers, caption),
            onDone: again,
            onExpired: again,
          });
    this.content.replaceChildren(view);
    view.focus();
  }

  private async nextComparison(): Promise<void> {
    const task = await this.session.fetchNextComparisonTask();
    if (task === null) {
      this.idle('No comparisons waiting.');
      return;
    }
    const again = () => void this.nextComparison();
    const view = renderAbComparison(task, this.settings, {
      submit: (verdict) => this.session.submitJudgment(verdict),
      onDone: again,
      onConflict: again,
    });
    this.content.replaceChildren(view);
    view.focus();
  }
}

export function mountAnnotationApp(
  root: HTMLElement,
  settings: UiSettings,
  annotatorId?: string,
): AnnotationApp {
  return new AnnotationApp(root, settings, annotatorId);
}
