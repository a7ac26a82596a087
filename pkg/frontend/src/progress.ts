/** Placeholder shown inside a pending chart node while its job runs.
 * The label always reflects the latest job state; failures turn into a
 * red badge with the error code. */

import type { ErrorBody, JobState } from './types.js';

const LABELS: Record<JobState, string> = {
  queued: 'queued',
  prompting: 'building prompt',
  awaiting_model: 'awaiting model',
  validating: 'validating',
  repairing: 'repairing',
  compiling: 'compiling',
  done: 'done',
  failed: 'failed',
};

export class ProgressPlaceholder {
  readonly element: HTMLElement;
  private label: HTMLElement;
  private dots: HTMLElement;
  private history: JobState[] = [];

  constructor() {
    this.element = document.createElement('div');
    this.element.className = 'progress-placeholder';
    this.dots = document.createElement('div');
    this.dots.className = 'progress-dots';
    this.label = document.createElement('div');
    this.label.className = 'progress-label';
    this.label.textContent = LABELS.queued;
    this.element.append(this.dots, this.label);
  }

  update(state: JobState): void {
    this.history.push(state);
    this.label.textContent = LABELS[state] ?? state;
    this.element.dataset.state = state;
    this.dots.textContent = '●'.repeat(Math.min(this.history.length, 6));
  }

  fail(error: ErrorBody | null): void {
    this.element.classList.add('progress-failed');
    const badge = document.createElement('span');
    badge.className = 'error-badge';
    badge.textContent = error?.code ?? 'GenerationFailed';
    badge.title = error?.message ?? '';
    this.label.textContent = LABELS.failed;
    this.element.appendChild(badge);
  }

  states(): JobState[] {
    return [...this.history];
  }
}
