/**
 * UI configuration. The one knob is the API base URL: both the curation
 * endpoints (/tasks, /funnel, /images) and the rating endpoints (/eval/...)
 * are expected under a single origin — their path namespaces are disjoint,
 * so one reverse proxy (or the bundled demo server) can host both.
 */

export interface UiSettings {
  baseUrl: string;
}

export const DEFAULT_SETTINGS: UiSettings = {
  baseUrl: 'http://127.0.0.1:8000',
};

/** Resolve settings, letting `?api=<url>` in the page query override the default. */
export function settingsFromQuery(search: string): UiSettings {
  const params = new URLSearchParams(search);
  const api = params.get('api');
  return { baseUrl: api ? api.replace(/\/+$/, '') : DEFAULT_SETTINGS.baseUrl };
}

/** Absolute URL for a server-relative path like /images/r-0042. */
export function absoluteUrl(settings: UiSettings, path: string): string {
  return settings.baseUrl + path;
}
