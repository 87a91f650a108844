/**
 * Form model behind the Stage-2 review view: seven pass/fail answers, each
 * carrying its guideline text. Submission stays disabled until every item
 * has been answered one way or the other.
 */

import { CHECKLIST_GUIDELINES, GuidelineItem } from './guidelines.js';
import type { ChecklistAnswers, ChecklistKey } from './types.js';

export class ChecklistFormModel {
  readonly items: GuidelineItem[] = CHECKLIST_GUIDELINES;
  private answers = new Map<ChecklistKey, boolean>();

  answer(key: ChecklistKey, pass: boolean): void {
    if (!this.items.some((item) => item.key === key)) {
      throw new Error(`unknown checklist item: ${key}`);
    }
    this.answers.set(key, pass);
  }

  answerFor(key: ChecklistKey): boolean | undefined {
    return this.answers.get(key);
  }

  /** True once all seven items are answered; gates the submit control. */
  canSubmit(): boolean {
    return this.items.every((item) => this.answers.has(item.key));
  }

  /** First unanswered item, or null when the form is complete. */
  firstUnanswered(): ChecklistKey | null {
    for (const item of this.items) {
      if (!this.answers.has(item.key)) return item.key;
    }
    return null;
  }

  toAnswers(): ChecklistAnswers {
    if (!this.canSubmit()) {
      throw new Error('checklist incomplete: all seven items must be answered');
    }
    const out = {} as Record<ChecklistKey, boolean>;
    for (const item of this.items) {
      out[item.key] = this.answers.get(item.key)!;
    }
    return out as ChecklistAnswers;
  }

  reset(): void {
    this.answers.clear();
  }
}
