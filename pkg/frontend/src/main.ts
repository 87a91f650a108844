import { mountAnnotationApp } from './app.js';
import { settingsFromQuery } from './settings.js';

const root = document.getElementById('app');
if (root) {
  mountAnnotationApp(root, settingsFromQuery(window.location.search));
}
