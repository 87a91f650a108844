/**
 * The review guideline shown next to each checklist item, embedded so the
 * criteria sit in-context while a specialist reviews. Four photography
 * principles come first, then the three subjective questions. A record is
 * selected only when every item passes.
 */

import type { ChecklistKey } from './types.js';

export interface GuidelineItem {
  key: ChecklistKey;
  label: string;
  guideline: string;
  /** Button caption that records a pass for this item. */
  passLabel: string;
  /** Button caption that records a fail. */
  failLabel: string;
}

export const CHECKLIST_GUIDELINES: GuidelineItem[] = [
  {
    key: 'composition',
    label: 'Composition',
    guideline:
      'The image should adhere to principles of professional photography composition, ' +
      'including the "Rule of Thirds" and "Depth and Layering". Negative examples include ' +
      'imbalance in visual weight (all focal subjects concentrated on one side of the frame), ' +
      'subjects captured from less flattering angles, a primary subject that is obscured, or ' +
      'surrounding unimportant objects distracting from the subject.',
    passLabel: 'Pass',
    failLabel: 'Fail',
  },
  {
    key: 'lighting',
    label: 'Lighting',
    guideline:
      'Look for dynamic lighting with balanced exposure that enhances the image — for example ' +
      'lighting that originates from an angle, casting highlights on select areas of the ' +
      'background and subject(s). Avoid artificial or lackluster lighting, and excessively dim ' +
      'or overexposed light.',
    passLabel: 'Pass',
    failLabel: 'Fail',
  },
  {
    key: 'color_contrast',
    label: 'Color and Contrast',
    guideline:
      'Prefer images with vibrant colors and strong color contrast. Avoid monochromatic images ' +
      'or those where a single color dominates the entire frame.',
    passLabel: 'Pass',
    failLabel: 'Fail',
  },
  {
    key: 'subject_background',
    label: 'Subject and Background',
    guideline:
      'The image should have a sense of depth between the foreground and background elements. ' +
      'The background should be uncluttered but not overly simplistic or dull. Focused subjects ' +
      'must be intentionally placed within the frame with all critical details clearly visible — ' +
      'in a portrait, the primary subject should not extend beyond the frame or be obstructed. ' +
      'The level of detail on the foreground subject is extremely important.',
    passLabel: 'Pass',
    failLabel: 'Fail',
  },
  {
    key: 'subjective_q1',
    label: 'Storytelling',
    guideline: 'Does this image convey a compelling story?',
    passLabel: 'Yes',
    failLabel: 'No',
  },
  {
    key: 'subjective_q2',
    label: 'Could it be better?',
    guideline:
      'Could it have been captured significantly better? ' +
      '(Answering "yes" fails the item: only keep images that could hardly be improved.)',
    passLabel: 'No',
    failLabel: 'Yes',
  },
  {
    key: 'subjective_q3',
    label: 'Among the best',
    guideline: "Is this among the best photos you've ever seen for this particular content?",
    passLabel: 'Yes',
    failLabel: 'No',
  },
];
