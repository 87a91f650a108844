/**
 * Image warm-up. The task queue serves one claim at a time (re-requesting
 * returns the claim you already hold), so the earliest moment a task's
 * images can load is when its payload arrives — start them then, before the
 * view is built, so rendering hits a warm cache. Blinding is unaffected:
 * the URLs are opaque and assignment stays server-side.
 */

import { absoluteUrl, UiSettings } from './settings.js';
import type { ActiveTask } from './types.js';

export function taskImagePaths(active: ActiveTask): string[] {
  if (active.kind === 'comparison') {
    return [active.task.image_a_url, active.task.image_b_url];
  }
  return [active.task.image_url];
}

export function prefetchTaskImages(settings: UiSettings, active: ActiveTask): void {
  if (typeof Image === 'undefined') return; // non-browser host
  for (const path of taskImagePaths(active)) {
    const img = new Image();
    img.src = absoluteUrl(settings, path);
  }
}
