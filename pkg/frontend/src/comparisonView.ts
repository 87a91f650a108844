/**
 * Side-by-side comparison: image A on the left, image B on the right,
 * exactly as the server assigned them. Visual-appeal tasks render no
 * caption node at all; text-faithfulness tasks show the caption and add
 * Both/Neither. A duplicate submission comes back 409 — the conflict is
 * surfaced in the status line and the caller refreshes to the next task.
 *
 * Keyboard flow: `a`, `b`, `t` pick A/B/Tie; `o` Both and `n` Neither where
 * offered. A keypress submits immediately.
 */

import { ApiConflictError } from './apiClient.js';
import { el, isTypingTarget } from './dom.js';
import { absoluteUrl, UiSettings } from './settings.js';
import type { ComparisonTask, JudgmentResponse, Verdict } from './types.js';

export interface ComparisonViewDeps {
  submit(verdict: Verdict): Promise<JudgmentResponse>;
  /** Called after the server recorded the judgment. */
  onDone(result: JudgmentResponse): void;
  /** Called after a duplicate/conflicting submission; view should be replaced. */
  onConflict(detail: string): void;
}

const METRIC_TITLES: Record<ComparisonTask['metric'], string> = {
  visual_appeal: 'Visual appeal',
  text_faithfulness: 'Text faithfulness',
};

const METRIC_INSTRUCTIONS: Record<ComparisonTask['metric'], string> = {
  visual_appeal: 'Choose which image is more visually appealing.',
  text_faithfulness:
    'Ignore visual appeal and choose which image best describes the caption.',
};

const VERDICT_KEYS: Record<Verdict, string> = {
  A: 'a',
  B: 'b',
  Tie: 't',
  Both: 'o',
  Neither: 'n',
};

export function renderAbComparison(
  task: ComparisonTask,
  settings: UiSettings,
  deps: ComparisonViewDeps,
): HTMLElement {
  let submitting = false;

  const root = el('div', {
    class: 'ab-comparison',
    'data-testid': 'ab-comparison',
    'data-metric': task.metric,
    tabindex: '0',
  });

  root.append(
    el('h2', {}, [METRIC_TITLES[task.metric]]),
    el('p', { class: 'instructions' }, [METRIC_INSTRUCTIONS[task.metric]]),
  );

  if (task.metric === 'text_faithfulness') {
    root.append(
      el('blockquote', { class: 'caption', 'data-testid': 'caption' }, [task.caption ?? '']),
    );
  }

  const pane = (side: 'A' | 'B', path: string) =>
    el('figure', { class: 'pane', 'data-side': side }, [
      el('img', { src: absoluteUrl(settings, path), alt: `image ${side}` }),
      el('figcaption', {}, [side]),
    ]);
  root.append(
    el('div', { class: 'panes' }, [pane('A', task.image_a_url), pane('B', task.image_b_url)]),
  );

  const status = el('p', { class: 'status', 'data-testid': 'status', 'aria-live': 'polite' });
  const buttons = new Map<Verdict, HTMLButtonElement>();

  const setDisabled = (disabled: boolean) => {
    for (const button of buttons.values()) {
      if (disabled) button.setAttribute('disabled', '');
      else button.removeAttribute('disabled');
    }
  };

  const submit = async (verdict: Verdict) => {
    if (submitting) return;
    submitting = true;
    setDisabled(true);
    status.textContent = 'Submitting…';
    try {
      const result = await deps.submit(verdict);
      status.textContent = `Recorded ${verdict} (${result.judgments}/${task.required_judgments} judgments).`;
      deps.onDone(result);
    } catch (err) {
      if (err instanceof ApiConflictError) {
        status.textContent = `Conflict: ${err.detail}. Loading the next task…`;
        deps.onConflict(err.detail);
        return;
      }
      submitting = false;
      setDisabled(false);
      status.textContent = err instanceof Error ? err.message : 'Submission failed.';
    }
  };

  const verdictBar = el('div', { class: 'verdicts' });
  for (const option of task.verdict_options) {
    const button = el(
      'button',
      { 'data-testid': `verdict-${option}`, title: `shortcut: ${VERDICT_KEYS[option]}` },
      [option],
    );
    button.addEventListener('click', () => void submit(option));
    buttons.set(option, button);
    verdictBar.append(button);
  }
  root.append(verdictBar, status);

  root.addEventListener('keydown', (event: KeyboardEvent) => {
    if (isTypingTarget(event) || event.altKey || event.ctrlKey || event.metaKey) return;
    for (const option of task.verdict_options) {
      if (event.key === VERDICT_KEYS[option]) {
        void submit(option);
        event.preventDefault();
        return;
      }
    }
  });

  return root;
}
