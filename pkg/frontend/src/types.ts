/**
 * Payload types for the two HTTP APIs the UI consumes.
 *
 * These mirror the wire format exactly. ComparisonTask in particular is the
 * blinding contract: the server's annotator payload carries opaque per-side
 * image URLs and never the side-to-model assignment, so nothing in this file
 * (and hence nothing the views can render) can name a model.
 */

export type CurationStageName =
  | 'POOL'
  | 'AUTO_PASSED'
  | 'STAGE1_KEPT'
  | 'STAGE1_REJECTED'
  | 'SELECTED'
  | 'STAGE2_REJECTED';

export type ReviewStage = 1 | 2;

/** One claimed curation task, as served by GET /tasks/next. */
export interface CurationTask {
  record_id: string;
  stage: ReviewStage;
  uri: string;
  image_url: string;
  caption: string;
  concept: string;
  width: number;
  height: number;
  curated_caption: string;
}

/** The seven pass/fail answers of a complete Stage-2 checklist. */
export interface ChecklistAnswers {
  composition: boolean;
  lighting: boolean;
  color_contrast: boolean;
  subject_background: boolean;
  subjective_q1: boolean;
  subjective_q2: boolean;
  subjective_q3: boolean;
}

export type ChecklistKey = keyof ChecklistAnswers;

export type Stage1Choice = 'keep' | 'reject';

/** Response to POST /tasks/{record_id}/verdict. */
export interface VerdictResponse {
  record_id: string;
  stage: CurationStageName;
  curated_caption: string;
}

/** Response to GET /funnel/stats. */
export interface FunnelStats {
  counts: Record<CurationStageName, number>;
  cumulative: {
    pool: number;
    auto_passed: number;
    stage1_kept: number;
    selected: number;
  };
  rejections: {
    auto: Record<string, number>;
    stage1: Record<string, number>;
    stage2: Record<string, number>;
  };
  budgets: { auto: number; stage1: number; final: number };
  pending: { stage1: number; stage2: number };
}

export type Metric = 'visual_appeal' | 'text_faithfulness';

export type Verdict = 'A' | 'B' | 'Tie' | 'Both' | 'Neither';

/**
 * One claimed comparison task, as served by GET /eval/tasks/next.
 *
 * `caption` is present only for text_faithfulness tasks; visual_appeal
 * payloads omit it entirely, so a visual-appeal view has no caption to show
 * even by accident.
 */
export interface ComparisonTask {
  task_id: string;
  metric: Metric;
  image_a_url: string;
  image_b_url: string;
  verdict_options: Verdict[];
  required_judgments: number;
  caption?: string;
}

/** Response to POST /eval/tasks/{task_id}/judgment. */
export interface JudgmentResponse {
  task_id: string;
  recorded: boolean;
  judgments: number;
  complete: boolean;
}

/** One row of GET /eval/report. */
export interface ReportRow {
  n_tasks: number;
  wins: number;
  ties: number;
  losses: number;
  win_pct: number;
  tie_pct: number;
  lose_pct: number;
  votes: Record<string, number>;
}

export interface EvalReport {
  rows: Record<string, ReportRow>;
  n_outcomes: number;
}

/** The one task a session may hold at a time. */
export type ActiveTask =
  | { kind: 'curation'; task: CurationTask }
  | { kind: 'comparison'; task: ComparisonTask };
