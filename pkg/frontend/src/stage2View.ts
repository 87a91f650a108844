/**
 * Stage-2 review: the image at full available resolution, the seven
 * checklist items with their guideline text, and a curated-caption box.
 * Submit is disabled until the form model is complete; a conflict on submit
 * (our claim expired and the record moved on) is surfaced and the caller is
 * asked to refetch.
 *
 * Keyboard flow: digits 1-7 arm an item, `p` passes it, `f` fails it
 * (arming then advances to the next unanswered item), Enter submits.
 */

import { ApiConflictError } from './apiClient.js';
import { ChecklistFormModel } from './checklistForm.js';
import { el, isTypingTarget } from './dom.js';
import { absoluteUrl, UiSettings } from './settings.js';
import type { ChecklistAnswers, CurationTask, VerdictResponse } from './types.js';

export interface Stage2ViewDeps {
  submit(answers: ChecklistAnswers, curatedCaption: string): Promise<VerdictResponse>;
  /** Called after the server accepted the verdict. */
  onDone(result: VerdictResponse): void;
  /** Called when the claim expired under us; the task must be refetched. */
  onExpired(detail: string): void;
}

export function renderStage2Review(
  task: CurationTask,
  settings: UiSettings,
  deps: Stage2ViewDeps,
): HTMLElement {
  const model = new ChecklistFormModel();
  let armed = 0;
  let submitting = false;

  const root = el('div', {
    class: 'stage2-review',
    'data-testid': 'stage2-review',
    'data-record-id': task.record_id,
    tabindex: '0',
  });

  // Full available resolution: no width/height constraints on the element.
  const image = el('img', {
    class: 'review-image',
    src: absoluteUrl(settings, task.image_url),
    alt: `record ${task.record_id}`,
  });
  root.append(el('figure', { class: 'review-figure' }, [image]));

  const sections: HTMLElement[] = [];
  const passButtons = new Map<string, HTMLButtonElement>();
  const failButtons = new Map<string, HTMLButtonElement>();

  const submitButton = el('button', { 'data-testid': 'submit', disabled: '' }, ['Submit review']);
  const status = el('p', { class: 'status', 'data-testid': 'status', 'aria-live': 'polite' });

  const refreshControls = () => {
    sections.forEach((section, i) => section.classList.toggle('armed', i === armed));
    for (const item of model.items) {
      const answer = model.answerFor(item.key);
      passButtons.get(item.key)!.setAttribute('aria-pressed', String(answer === true));
      failButtons.get(item.key)!.setAttribute('aria-pressed', String(answer === false));
    }
    if (model.canSubmit() && !submitting) {
      submitButton.removeAttribute('disabled');
    } else {
      submitButton.setAttribute('disabled', '');
    }
  };

  const answerArmed = (key: (typeof model.items)[number]['key'], pass: boolean) => {
    model.answer(key, pass);
    const nextOpen = model.firstUnanswered();
    if (nextOpen !== null) {
      armed = model.items.findIndex((item) => item.key === nextOpen);
    }
    refreshControls();
  };

  // The three subjective questions sit inside a fifth top-level section of
  // the review guideline; the principles stand alone.
  const subjectiveGroup = el('section', { class: 'checklist-group' }, [
    el('h3', {}, ['5. Additional subjective assessment']),
  ]);
  model.items.forEach((item, index) => {
    const pass = el('button', { 'data-testid': `item-${item.key}-pass`, 'aria-pressed': 'false' }, [
      item.passLabel,
    ]);
    const fail = el('button', { 'data-testid': `item-${item.key}-fail`, 'aria-pressed': 'false' }, [
      item.failLabel,
    ]);
    pass.addEventListener('click', () => {
      armed = index;
      answerArmed(item.key, true);
    });
    fail.addEventListener('click', () => {
      armed = index;
      answerArmed(item.key, false);
    });
    passButtons.set(item.key, pass);
    failButtons.set(item.key, fail);
    const grouped = item.key.startsWith('subjective_');
    const section = el('section', { class: 'checklist-item', 'data-item': item.key }, [
      el(grouped ? 'h4' : 'h3', {}, [`${index + 1}. ${item.label}`]),
      el('p', { class: 'guideline' }, [item.guideline]),
      el('div', { class: 'choices' }, [pass, fail]),
    ]);
    sections.push(section);
    if (grouped) subjectiveGroup.append(section);
    else root.append(section);
  });
  root.append(subjectiveGroup);

  const captionBox = el('textarea', {
    'data-testid': 'curated-caption',
    rows: '3',
    'aria-label': 'curated caption',
  });
  captionBox.value = task.curated_caption || task.caption;
  root.append(
    el('section', { class: 'caption-editor' }, [
      el('h3', {}, ['Curated caption']),
      el('p', { class: 'guideline' }, [
        'Rewrite the caption to describe the image plainly and completely; it ships with the record if the image is selected.',
      ]),
      captionBox,
    ]),
    el('div', { class: 'actions' }, [submitButton]),
    status,
  );

  const submit = async () => {
    if (!model.canSubmit() || submitting) return;
    submitting = true;
    refreshControls();
    status.textContent = 'Submitting…';
    try {
      const result = await deps.submit(model.toAnswers(), captionBox.value.trim());
      status.textContent = `Recorded — record is now ${result.stage}.`;
      deps.onDone(result);
    } catch (err) {
      submitting = false;
      if (err instanceof ApiConflictError) {
        status.textContent = `Claim expired: ${err.detail}. Fetching a fresh task…`;
        deps.onExpired(err.detail);
        return;
      }
      status.textContent = err instanceof Error ? err.message : 'Submission failed.';
      refreshControls();
    }
  };
  submitButton.addEventListener('click', submit);

  root.addEventListener('keydown', (event: KeyboardEvent) => {
    if (isTypingTarget(event) || event.altKey || event.ctrlKey || event.metaKey) return;
    const total = model.items.length;
    if (event.key >= '1' && event.key <= String(total)) {
      armed = Number(event.key) - 1;
      refreshControls();
      event.preventDefault();
    } else if (event.key === 'p' || event.key === 'f') {
      answerArmed(model.items[armed].key, event.key === 'p');
      event.preventDefault();
    } else if (event.key === 'Enter') {
      void submit();
      event.preventDefault();
    }
  });

  refreshControls();
  return root;
}
