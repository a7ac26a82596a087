/** The freeform canvas view.
 *
 * Interaction model follows the two-affordance design: click empty canvas
 * to type a hypothesis (generate button directly below the text), click a
 * chart to type a revision. Everything else (drag, duplicate, delete,
 * lineage toggle, spec readout) hangs off the selection toolbar.
 *
 * Mutations are optimistic: the node moves immediately, the server
 * confirms with a new doc_version, and a 409 rolls the view back to the
 * refetched server state (conflict toast included).
 */

import { ApiClient, ApiError } from './api.js';
import { renderChart } from './chart.js';
import { ProgressPlaceholder } from './progress.js';
import { ViewState } from './state.js';
import type { CanvasDocumentData, CanvasNodeData, JobTransition } from './types.js';

const NODE_DRAG_THRESHOLD = 3;

export class CanvasView {
  readonly root: HTMLElement;
  readonly view = new ViewState();
  doc: CanvasDocumentData;

  private world: HTMLElement;
  private edgeLayer: SVGSVGElement;
  private toast: HTMLElement;
  private nodeElements = new Map<string, HTMLElement>();
  private showLineage = false;
  private pendingJobs = new Set<string>();

  constructor(
    private api: ApiClient,
    doc: CanvasDocumentData,
    container: HTMLElement,
  ) {
    this.doc = doc;
    this.root = container;
    this.root.classList.add('vizcanvas');
    this.world = document.createElement('div');
    this.world.className = 'canvas-world';
    this.edgeLayer = document.createElementNS('http://www.w3.org/2000/svg', 'svg');
    this.edgeLayer.classList.add('edge-layer');
    this.edgeLayer.style.display = 'none';
    this.toast = document.createElement('div');
    this.toast.className = 'toast';
    this.toast.hidden = true;
    this.root.append(this.world, this.toast);
    this.world.appendChild(this.edgeLayer);

    this.bindCanvasInteractions();
    this.renderAll();
  }

  // -- rendering -------------------------------------------------------

  private applyTransform(): void {
    this.world.style.transform =
      `translate(${this.view.panX}px, ${this.view.panY}px) scale(${this.view.zoom})`;
  }

  renderAll(): void {
    for (const element of this.nodeElements.values()) element.remove();
    this.nodeElements.clear();
    for (const node of Object.values(this.doc.nodes)) {
      if (!node.tombstone) this.renderNode(node);
    }
    this.applyTransform();
    this.renderEdges();
  }

  private renderNode(node: CanvasNodeData): HTMLElement {
    let element = this.nodeElements.get(node.id);
    if (!element) {
      element = document.createElement('div');
      element.dataset.nodeId = node.id;
      this.nodeElements.set(node.id, element);
      this.world.appendChild(element);
      this.bindNodeInteractions(element, node.id);
    }
    element.className = `canvas-node node-${node.kind}`;
    element.style.left = `${node.position[0]}px`;
    element.style.top = `${node.position[1]}px`;
    element.style.width = `${node.size[0]}px`;
    element.style.minHeight = `${node.size[1]}px`;
    element.style.zIndex = String(node.z);
    element.replaceChildren();

    if (node.kind === 'note') {
      const text = document.createElement('div');
      text.className = 'note-text';
      text.textContent = node.text ?? '';
      element.appendChild(text);
    } else {
      const body = document.createElement('div');
      body.className = 'viz-body';
      element.appendChild(body);
      this.loadChart(node, body);
    }
    return element;
  }

  private async loadChart(node: CanvasNodeData, body: HTMLElement): Promise<void> {
    if (!node.payload_ref) {
      body.textContent = node.spec?.title ?? 'no payload';
      return;
    }
    try {
      const payload = await this.api.nodePayload(this.doc.id, node.id);
      body.replaceChildren(
        renderChart(payload.grammar_json, node.size[0] - 8, node.size[1] - 8),
      );
    } catch (error) {
      body.textContent = `payload unavailable: ${String(error)}`;
    }
  }

  private renderEdges(): void {
    this.edgeLayer.replaceChildren();
    if (!this.showLineage) return;
    for (const edge of this.doc.edges) {
      const from = this.doc.nodes[edge.from];
      const to = this.doc.nodes[edge.to];
      if (!from || !to) continue;
      const line = document.createElementNS('http://www.w3.org/2000/svg', 'line');
      line.setAttribute('x1', String(from.position[0] + from.size[0] / 2));
      line.setAttribute('y1', String(from.position[1] + from.size[1] / 2));
      line.setAttribute('x2', String(to.position[0] + to.size[0] / 2));
      line.setAttribute('y2', String(to.position[1] + to.size[1] / 2));
      line.setAttribute('class', `edge edge-${edge.kind}`);
      this.edgeLayer.appendChild(line);
    }
  }

  private showToast(message: string): void {
    this.toast.textContent = message;
    this.toast.hidden = false;
    setTimeout(() => {
      this.toast.hidden = true;
    }, 2500);
  }

  // -- synchronization ---------------------------------------------------

  async refetch(): Promise<void> {
    this.doc = await this.api.getDocument(this.doc.id);
    this.renderAll();
  }

  /** Runs a mutation against the current doc_version; on 409 the view
   * converges to server state and the conflict surfaces as a toast. */
  private async mutate(
    action: (docVersion: number) => Promise<{ doc_version: number }>,
  ): Promise<boolean> {
    try {
      const result = await action(this.doc.doc_version);
      this.doc.doc_version = result.doc_version;
      return true;
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        this.showToast('canvas changed elsewhere, reloading');
        await this.refetch();
        return false;
      }
      throw error;
    }
  }

  // -- interactions ----------------------------------------------------------

  private bindCanvasInteractions(): void {
    this.root.addEventListener('wheel', (event) => {
      event.preventDefault();
      const factor = event.deltaY < 0 ? 1.1 : 1 / 1.1;
      const rect = this.root.getBoundingClientRect();
      this.view.zoomAt(factor, event.clientX - rect.left, event.clientY - rect.top);
      this.applyTransform();
    });

    let panStart: { x: number; y: number } | null = null;
    let moved = false;
    this.root.addEventListener('pointerdown', (event) => {
      if (event.target !== this.root && event.target !== this.world) return;
      panStart = { x: event.clientX, y: event.clientY };
      moved = false;
    });
    this.root.addEventListener('pointermove', (event) => {
      if (!panStart) return;
      const dx = event.clientX - panStart.x;
      const dy = event.clientY - panStart.y;
      if (Math.abs(dx) + Math.abs(dy) > NODE_DRAG_THRESHOLD) moved = true;
      this.view.panBy(dx, dy);
      panStart = { x: event.clientX, y: event.clientY };
      this.applyTransform();
    });
    this.root.addEventListener('pointerup', (event) => {
      const wasPanning = panStart !== null;
      panStart = null;
      if (wasPanning && !moved) {
        // plain click on empty canvas: open the hypothesis prompt there
        const rect = this.root.getBoundingClientRect();
        const point = this.view.toCanvas(
          event.clientX - rect.left,
          event.clientY - rect.top,
        );
        this.view.select(null);
        this.openPromptBox({ point });
      }
    });
  }

  private bindNodeInteractions(element: HTMLElement, nodeId: string): void {
    let dragStart: { x: number; y: number; nodeX: number; nodeY: number } | null = null;
    let dragged = false;

    element.addEventListener('pointerdown', (event) => {
      event.stopPropagation();
      const node = this.doc.nodes[nodeId];
      dragStart = {
        x: event.clientX,
        y: event.clientY,
        nodeX: node.position[0],
        nodeY: node.position[1],
      };
      dragged = false;
      element.setPointerCapture(event.pointerId);
    });

    element.addEventListener('pointermove', (event) => {
      if (!dragStart) return;
      const dx = (event.clientX - dragStart.x) / this.view.zoom;
      const dy = (event.clientY - dragStart.y) / this.view.zoom;
      if (Math.abs(dx) + Math.abs(dy) > NODE_DRAG_THRESHOLD) dragged = true;
      if (dragged) {
        // optimistic: move locally while dragging
        const node = this.doc.nodes[nodeId];
        node.position = [dragStart.nodeX + dx, dragStart.nodeY + dy];
        element.style.left = `${node.position[0]}px`;
        element.style.top = `${node.position[1]}px`;
        this.renderEdges();
      }
    });

    element.addEventListener('pointerup', async () => {
      if (!dragStart) return;
      const start = dragStart;
      dragStart = null;
      const node = this.doc.nodes[nodeId];
      if (dragged) {
        const target = node.position;
        const committed = await this.mutate((version) =>
          this.api.moveNode(this.doc.id, nodeId, [target[0], target[1]], version),
        );
        if (!committed) return; // rolled back to server state already
        node.z = this.doc.next_z; // server raised it; cheap local approximation
        element.style.zIndex = String(++this.doc.next_z);
      } else {
        node.position = [start.nodeX, start.nodeY];
        this.selectNode(nodeId);
      }
    });
  }

  private selectNode(nodeId: string): void {
    this.view.select(nodeId);
    for (const [id, element] of this.nodeElements) {
      element.classList.toggle('selected', id === nodeId);
    }
    const node = this.doc.nodes[nodeId];
    if (node.kind === 'visualization') {
      // click-to-revise: prompt box anchored to the chart
      this.openPromptBox({ nodeId });
    }
    this.renderToolbar(nodeId);
  }

  // -- prompt box --------------------------------------------------------------

  openPromptBox(anchor: { nodeId: string } | { point: [number, number] }): void {
    this.closePromptBox();
    this.view.openPrompt(anchor);

    const box = document.createElement('div');
    box.className = 'prompt-box';
    const input = document.createElement('textarea');
    input.className = 'prompt-input';
    input.rows = 2;
    const isRevision = 'nodeId' in anchor;
    input.placeholder = isRevision
      ? 'describe the change, e.g. "flip it"'
      : 'type a hypothesis about the data';
    // the action button sits immediately below the entered text
    const button = document.createElement('button');
    button.className = 'prompt-generate';
    button.textContent = isRevision ? 'revise' : 'generate';
    const problem = document.createElement('div');
    problem.className = 'prompt-problem';
    box.append(input, button, problem);

    let position: [number, number];
    if (isRevision) {
      const node = this.doc.nodes[anchor.nodeId];
      position = [node.position[0], node.position[1] + node.size[1] + 8];
    } else {
      position = anchor.point;
    }
    box.style.left = `${position[0]}px`;
    box.style.top = `${position[1]}px`;
    this.world.appendChild(box);
    input.focus();

    input.addEventListener('input', () => {
      this.view.promptBox && (this.view.promptBox.draft = input.value);
      problem.textContent = '';
    });
    button.addEventListener('click', () => {
      const text = input.value.trim();
      if (!text) {
        problem.textContent = 'type something first';
        input.classList.add('invalid');
        return; // inline validation, no request
      }
      this.closePromptBox();
      if (isRevision) void this.submitRevision(anchor.nodeId, text);
      else void this.submitHypothesis(anchor.point, text);
    });
  }

  closePromptBox(): void {
    this.view.closePrompt();
    this.world.querySelectorAll('.prompt-box').forEach((box) => box.remove());
  }

  // -- generation flows ----------------------------------------------------------

  async submitHypothesis(point: [number, number], text: string): Promise<string | null> {
    const created = await this.api.createNote(this.doc.id, text, point, this.doc.doc_version);
    this.doc.doc_version = created.doc_version;
    await this.refetch();
    const note = this.doc.nodes[created.node_id];

    const placeholder = new ProgressPlaceholder();
    const holder = document.createElement('div');
    holder.className = 'canvas-node node-pending';
    holder.style.left = `${note.position[0]}px`;
    holder.style.top = `${note.position[1] + note.size[1] + 16}px`;
    holder.appendChild(placeholder.element);
    this.world.appendChild(holder);

    try {
      const { job_id } = await this.api.generate({
        dataset_id: this.doc.dataset_id,
        document_id: this.doc.id,
        source_node: created.node_id,
        goal_text: text,
      });
      const final = await this.trackJob(job_id, placeholder);
      holder.remove();
      if (final.state === 'failed') {
        this.badgeNode(created.node_id, final.error?.code ?? 'GenerationFailed');
        return null;
      }
      await this.refetch();
      return final.result?.node_id ?? null;
    } catch (error) {
      holder.remove();
      this.badgeNode(created.node_id, error instanceof ApiError ? error.code : 'Error');
      return null;
    }
  }

  async submitRevision(nodeId: string, instruction: string): Promise<string | null> {
    const parent = this.doc.nodes[nodeId];
    const placeholder = new ProgressPlaceholder();
    const holder = document.createElement('div');
    holder.className = 'canvas-node node-pending';
    holder.style.left = `${parent.position[0] + 24}px`;
    holder.style.top = `${parent.position[1] + 24}px`;
    holder.appendChild(placeholder.element);
    this.world.appendChild(holder);

    try {
      const { job_id } = await this.api.revise(this.doc.id, nodeId, instruction);
      const final = await this.trackJob(job_id, placeholder);
      holder.remove();
      if (final.state === 'failed') {
        this.badgeNode(nodeId, final.error?.code ?? 'GenerationFailed');
        return null;
      }
      await this.refetch();
      return final.result?.node_id ?? null;
    } catch (error) {
      holder.remove();
      this.badgeNode(nodeId, error instanceof ApiError ? error.code : 'Error');
      return null;
    }
  }

  /** Feed every transition into the placeholder; resolves on the
   * terminal one. */
  private async trackJob(
    jobId: string,
    placeholder: ProgressPlaceholder,
  ): Promise<JobTransition> {
    this.pendingJobs.add(jobId);
    try {
      let last: JobTransition | null = null;
      for await (const transition of this.api.followJob(jobId)) {
        placeholder.update(transition.state);
        last = transition;
        if (transition.state === 'failed') placeholder.fail(transition.error ?? null);
      }
      if (last === null) throw new Error('event stream ended without transitions');
      return last;
    } finally {
      this.pendingJobs.delete(jobId);
    }
  }

  private badgeNode(nodeId: string, code: string): void {
    const element = this.nodeElements.get(nodeId);
    if (!element) return;
    const badge = document.createElement('span');
    badge.className = 'error-badge';
    badge.textContent = code;
    element.appendChild(badge);
  }

  // -- toolbar (duplicate / delete / lineage / spec readout) --------------------

  private renderToolbar(nodeId: string): void {
    this.root.querySelectorAll('.node-toolbar').forEach((bar) => bar.remove());
    const node = this.doc.nodes[nodeId];
    if (!node) return;
    const bar = document.createElement('div');
    bar.className = 'node-toolbar';
    bar.style.left = `${node.position[0]}px`;
    bar.style.top = `${node.position[1] - 28}px`;

    if (node.kind === 'visualization') {
      bar.appendChild(this.toolButton('duplicate', () => void this.duplicate(nodeId)));
      bar.appendChild(this.toolButton('spec', () => void this.revealSpec(nodeId)));
    }
    bar.appendChild(this.toolButton('delete', () => void this.remove(nodeId)));
    bar.appendChild(
      this.toolButton(this.showLineage ? 'hide lineage' : 'lineage', () =>
        this.toggleLineage(),
      ),
    );
    this.world.appendChild(bar);
  }

  private toolButton(label: string, onClick: () => void): HTMLButtonElement {
    const button = document.createElement('button');
    button.className = `tool-${label.split(' ')[0]}`;
    button.textContent = label;
    button.addEventListener('click', (event) => {
      event.stopPropagation();
      onClick();
    });
    return button;
  }

  async duplicate(nodeId: string): Promise<void> {
    const committed = await this.mutate((version) =>
      this.api.duplicateNode(this.doc.id, nodeId, version),
    );
    if (committed) await this.refetch();
  }

  async remove(nodeId: string): Promise<void> {
    const committed = await this.mutate((version) =>
      this.api.deleteNode(this.doc.id, nodeId, version),
    );
    if (committed) await this.refetch();
  }

  toggleLineage(): void {
    this.showLineage = !this.showLineage;
    this.edgeLayer.style.display = this.showLineage ? '' : 'none';
    this.renderEdges();
  }

  /** Spec readout: opt-in, read-only panel (the "underlying code"). */
  async revealSpec(nodeId: string): Promise<void> {
    const spec = await this.api.nodeSpec(this.doc.id, nodeId);
    this.root.querySelectorAll('.spec-panel').forEach((panel) => panel.remove());
    const panel = document.createElement('div');
    panel.className = 'spec-panel';
    const close = document.createElement('button');
    close.className = 'spec-close';
    close.textContent = 'close';
    close.addEventListener('click', () => panel.remove());
    const pre = document.createElement('pre');
    pre.textContent = JSON.stringify(spec, null, 2);
    panel.append(close, pre);
    this.root.appendChild(panel);
  }
}
