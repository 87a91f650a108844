/**
 * Stage-1 review: quick keep/reject triage of auto-passed records.
 * Keyboard flow: `k` keeps, `r` rejects.
 */

import { ApiConflictError } from './apiClient.js';
import { el, isTypingTarget } from './dom.js';
import { absoluteUrl, UiSettings } from './settings.js';
import type { CurationTask, Stage1Choice, VerdictResponse } from './types.js';

export interface Stage1ViewDeps {
  submit(choice: Stage1Choice): Promise<VerdictResponse>;
  onDone(result: VerdictResponse): void;
  onExpired(detail: string): void;
}

export function renderStage1Review(
  task: CurationTask,
  settings: UiSettings,
  deps: Stage1ViewDeps,
): HTMLElement {
  let submitting = false;

  const root = el('div', {
    class: 'stage1-review',
    'data-testid': 'stage1-review',
    'data-record-id': task.record_id,
    tabindex: '0',
  });

  root.append(
    el('figure', { class: 'review-figure' }, [
      el('img', {
        class: 'review-image',
        src: absoluteUrl(settings, task.image_url),
        alt: `record ${task.record_id}`,
      }),
      el('figcaption', {}, [task.caption]),
    ]),
    el('p', { class: 'meta' }, [`${task.width}×${task.height} · ${task.concept}`]),
  );

  const status = el('p', { class: 'status', 'data-testid': 'status', 'aria-live': 'polite' });
  const keep = el('button', { 'data-testid': 'keep', title: 'shortcut: k' }, ['Keep']);
  const reject = el('button', { 'data-testid': 'reject', title: 'shortcut: r' }, ['Reject']);

  const submit = async (choice: Stage1Choice) => {
    if (submitting) return;
    submitting = true;
    keep.setAttribute('disabled', '');
    reject.setAttribute('disabled', '');
    status.textContent = 'Submitting…';
    try {
      const result = await deps.submit(choice);
      status.textContent = `Recorded — record is now ${result.stage}.`;
      deps.onDone(result);
    } catch (err) {
      if (err instanceof ApiConflictError) {
        status.textContent = `Claim expired: ${err.detail}. Fetching a fresh task…`;
        deps.onExpired(err.detail);
        return;
      }
      submitting = false;
      keep.removeAttribute('disabled');
      reject.removeAttribute('disabled');
      status.textContent = err instanceof Error ? err.message : 'Submission failed.';
    }
  };

  keep.addEventListener('click', () => void submit('keep'));
  reject.addEventListener('click', () => void submit('reject'));
  root.append(el('div', { class: 'choices' }, [keep, reject]), status);

  root.addEventListener('keydown', (event: KeyboardEvent) => {
    if (isTypingTarget(event) || event.altKey || event.ctrlKey || event.metaKey) return;
    if (event.key === 'k') {
      void submit('keep');
      event.preventDefault();
    } else if (event.key === 'r') {
      void submit('reject');
      event.preventDefault();
    }
  });

  return root;
}
