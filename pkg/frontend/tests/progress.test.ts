import { describe, expect, it } from 'vitest';

import { ProgressPlaceholder } from '../src/progress.js';
import type { JobState } from '../src/types.js';

const FULL_RUN: JobState[] = [
  'queued', 'prompting', 'awaiting_model', 'validating', 'compiling', 'done',
];

describe('ProgressPlaceholder', () => {
  it('shows a label for every state it is fed', () => {
    const placeholder = new ProgressPlaceholder();
    const seen: string[] = [];
    for (const state of FULL_RUN) {
      placeholder.update(state);
      seen.push(placeholder.element.querySelector('.progress-label')!.textContent!);
    }
    expect(seen).toEqual([
      'queued', 'building prompt', 'awaiting model', 'validating', 'compiling', 'done',
    ]);
    expect(placeholder.states()).toEqual(FULL_RUN);
  });

  it('exposes the latest state on the element for styling', () => {
    const placeholder = new ProgressPlaceholder();
    placeholder.update('awaiting_model');
    expect(placeholder.element.dataset.state).toBe('awaiting_model');
  });

  it('failure renders a red badge with the error code', () => {
    const placeholder = new ProgressPlaceholder();
    placeholder.update('queued');
    placeholder.update('failed');
    placeholder.fail({ code: 'GenerationFailed', message: 'nope', detail: null });
    expect(placeholder.element.classList.contains('progress-failed')).toBe(true);
    expect(placeholder.element.querySelector('.error-badge')!.textContent).toBe(
      'GenerationFailed',
    );
  });
});
