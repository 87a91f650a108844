/**
 * Thin typed client for the curation and rating HTTP APIs.
 *
 * All methods resolve to parsed JSON payloads or reject with ApiError;
 * a 409 (someone else's claim, duplicate judgment, stale stage) rejects
 * with the ApiConflictError subclass so callers can branch on it.
 */

import type {
  ChecklistAnswers,
  ComparisonTask,
  CurationTask,
  EvalReport,
  FunnelStats,
  JudgmentResponse,
  ReviewStage,
  Stage1Choice,
  Verdict,
  VerdictResponse,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = 'ApiError';
  }
}

export class ApiConflictError extends ApiError {
  constructor(detail: string) {
    super(409, detail);
    this.name = 'ApiConflictError';
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (typeof body.detail === 'string') return body.detail;
    return JSON.stringify(body);
  } catch {
    return response.statusText || 'request failed';
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      const detail = await errorDetail(response);
      throw response.status === 409
        ? new ApiConflictError(detail)
        : new ApiError(response.status, detail);
    }
    return response.json();
  }

  private post(path: string, body: unknown): Promise<unknown> {
    return this.request(path, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  // --- curation ---

  async nextCurationTask(stage: ReviewStage, annotator: string): Promise<CurationTask | null> {
    const payload = (await this.request(
      `/tasks/next?stage=${stage}&annotator=${encodeURIComponent(annotator)}`,
    )) as { task: CurationTask | null };
    return payload.task;
  }

  submitStage1Verdict(
    recordId: string,
    annotator: string,
    verdict: Stage1Choice,
  ): Promise<VerdictResponse> {
    return this.post(`/tasks/${encodeURIComponent(recordId)}/verdict`, {
      stage: 1,
      annotator,
      verdict,
    }) as Promise<VerdictResponse>;
  }

  submitStage2Verdict(
    recordId: string,
    annotator: string,
    checklist: ChecklistAnswers,
    curatedCaption = '',
  ): Promise<VerdictResponse> {
    return this.post(`/tasks/${encodeURIComponent(recordId)}/verdict`, {
      stage: 2,
      annotator,
      checklist,
      curated_caption: curatedCaption,
    }) as Promise<VerdictResponse>;
  }

  funnelStats(): Promise<FunnelStats> {
    return this.request('/funnel/stats') as Promise<FunnelStats>;
  }

  // --- rating ---

  async nextComparisonTask(annotator: string): Promise<ComparisonTask | null> {
    const payload = (await this.request(
      `/eval/tasks/next?annotator=${encodeURIComponent(annotator)}`,
    )) as { task: ComparisonTask | null };
    return payload.task;
  }

  submitJudgment(taskId: string, annotator: string, verdict: Verdict): Promise<JudgmentResponse> {
    return this.post(`/eval/tasks/${encodeURIComponent(taskId)}/judgment`, {
      annotator_id: annotator,
      verdict,
    }) as Promise<JudgmentResponse>;
  }

  evalReport(slice: 'all' | 'stylized' = 'all'): Promise<EvalReport> {
    return this.request(`/eval/report?slice=${slice}`) as Promise<EvalReport>;
  }
}
