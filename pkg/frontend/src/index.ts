export { ApiClient, ApiConflictError, ApiError } from './apiClient.js';
export { AnnotationApp, mountAnnotationApp } from './app.js';
export { ChecklistFormModel } from './checklistForm.js';
export { renderAbComparison } from './comparisonView.js';
export type { ComparisonViewDeps } from './comparisonView.js';
export { budgetRemaining, FunnelDashboard } from './dashboard.js';
export { CHECKLIST_GUIDELINES } from './guidelines.js';
export type { GuidelineItem } from './guidelines.js';
export { prefetchTaskImages, taskImagePaths } from './prefetch.js';
export { SessionState } from './session.js';
export type { Connectivity } from './session.js';
export { absoluteUrl, DEFAULT_SETTINGS, settingsFromQuery } from './settings.js';
export type { UiSettings } from './settings.js';
export { renderStage1Review } from './stage1View.js';
export type { Stage1ViewDeps } from './stage1View.js';
export { renderStage2Review } from './stage2View.js';
export type { Stage2ViewDeps } from './stage2View.js';
export * from './types.js';
