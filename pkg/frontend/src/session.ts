/**
 * Per-annotator session: holds at most one active task, and a submission
 * always clears that task before the next one may be fetched. Conflicts
 * (someone else's claim won, duplicate judgment, stale stage) also clear the
 * task — the server has moved on, so must we — and are re-thrown for the
 * view to surface.
 */

import { ApiClient, ApiConflictError, ApiError } from './apiClient.js';
import { prefetchTaskImages } from './prefetch.js';
import { UiSettings } from './settings.js';
import type {
  ActiveTask,
  ChecklistAnswers,
  ComparisonTask,
  CurationTask,
  JudgmentResponse,
  ReviewStage,
  Stage1Choice,
  Verdict,
  VerdictResponse,
} from './types.js';

export type Connectivity = 'online' | 'offline';

export class SessionState {
  activeTask: ActiveTask | null = null;
  /** Number of tasks completed in this session. */
  queuePosition = 0;
  connectivity: Connectivity = 'online';

  constructor(
    readonly annotatorId: string,
    private readonly client: ApiClient,
    private readonly settings: UiSettings,
  ) {
    if (!annotatorId) throw new Error('annotator id must be non-empty');
  }

  private requireIdle(): void {
    if (this.activeTask !== null) {
      throw new Error('a task is already active; submit or release it first');
    }
  }

  private track<T>(promise: Promise<T>): Promise<T> {
    return promise.then(
      (value) => {
        this.connectivity = 'online';
        return value;
      },
      (err: unknown) => {
        // API errors mean the server answered; anything else is a dead link.
        this.connectivity = err instanceof ApiError ? 'online' : 'offline';
        throw err;
      },
    );
  }

  async fetchNextCurationTask(stage: ReviewStage): Promise<CurationTask | null> {
    this.requireIdle();
    const task = await this.track(this.client.nextCurationTask(stage, this.annotatorId));
    if (task === null) return null;
    this.activeTask = { kind: 'curation', task };
    prefetchTaskImages(this.settings, this.activeTask);
    return task;
  }

  async fetchNextComparisonTask(): Promise<ComparisonTask | null> {
    this.requireIdle();
    const task = await this.track(this.client.nextComparisonTask(this.annotatorId));
    if (task === null) return null;
    this.activeTask = { kind: 'comparison', task };
    prefetchTaskImages(this.settings, this.activeTask);
    return task;
  }

  /** Drop the active task without submitting (e.g. annotator walks away). */
  release(): void {
    this.activeTask = null;
  }

  private activeCuration(stage: ReviewStage): CurationTask {
    if (this.activeTask?.kind !== 'curation' || this.activeTask.task.stage !== stage) {
      throw new Error(`no active stage-${stage} curation task`);
    }
    return this.activeTask.task;
  }

  private async completing<T>(promise: Promise<T>): Promise<T> {
    try {
      const result = await this.track(promise);
      this.activeTask = null; // cleared before any next fetch can run
      this.queuePosition += 1;
      return result;
    } catch (err) {
      if (err instanceof ApiConflictError) this.activeTask = null;
      throw err;
    }
  }

  submitStage1(verdict: Stage1Choice): Promise<VerdictResponse> {
    const task = this.activeCuration(1);
    return this.completing(
      this.client.submitStage1Verdict(task.record_id, this.annotatorId, verdict),
    );
  }

  submitStage2(checklist: ChecklistAnswers, curatedCaption = ''): Promise<VerdictResponse> {
    const task = this.activeCuration(2);
    return this.completing(
      this.client.submitStage2Verdict(task.record_id, this.annotatorId, checklist, curatedCaption),
    );
  }

  submitJudgment(verdict: Verdict): Promise<JudgmentResponse> {
    if (this.activeTask?.kind !== 'comparison') {
      throw new Error('no active comparison task');
    }
    return this.completing(
      this.client.submitJudgment(this.activeTask.task.task_id, this.annotatorId, verdict),
    );
  }
}
