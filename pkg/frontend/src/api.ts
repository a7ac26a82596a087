/** REST + SSE client for the vizcanvas server.
 *
 * Job progress is consumed with fetch + ReadableStream rather than
 * EventSource so the same code runs in the browser and under node tests.
 */

import type {
  CanvasDocumentData,
  ChartSpec,
  DatasetSummary,
  ErrorBody,
  JobSnapshot,
  JobTransition,
  RenderPayload,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public detail: unknown = null,
  ) {
    super(message);
  }
}

async function toError(response: Response): Promise<ApiError> {
  let body: Partial<ErrorBody> = {};
  try {
    body = (await response.json()) as ErrorBody;
  } catch {
    /* non-JSON error body */
  }
  return new ApiError(
    response.status,
    body.code ?? `HTTP${response.status}`,
    body.message ?? response.statusText,
    body.detail,
  );
}

export class ApiClient {
  constructor(private base: string = '') {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + path, init);
    if (!response.ok) throw await toError(response);
    return (await response.json()) as T;
  }

  private json(body: unknown, method = 'POST'): RequestInit {
    return {
      method,
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    };
  }

  uploadDataset(file: Blob, name: string) {
    const form = new FormData();
    form.append('file', file, name);
    return this.request<{ dataset_id: string; summary: DatasetSummary }>('/datasets', {
      method: 'POST',
      body: form,
    });
  }

  suggestions(datasetId: string, k = 3) {
    return this.request<{ suggestions: string[] }>(
      `/datasets/${datasetId}/suggestions?k=${k}`,
    ).then((body) => body.suggestions);
  }

  createDocument(datasetId: string) {
    return this.request<CanvasDocumentData>('/documents', this.json({ dataset_id: datasetId }));
  }

  getDocument(docId: string) {
    return this.request<CanvasDocumentData>(`/documents/${docId}`);
  }

  createNote(docId: string, text: string, position: [number, number], docVersion: number) {
    return this.request<{ node_id: string; doc_version: number }>(
      `/documents/${docId}/nodes`,
      this.json({ kind: 'note', text, position, doc_version: docVersion }),
    );
  }

  moveNode(docId: string, nodeId: string, position: [number, number], docVersion: number) {
    return this.request<{ node_id: string; doc_version: number }>(
      `/documents/${docId}/nodes/${nodeId}`,
      this.json({ position, doc_version: docVersion }, 'PUT'),
    );
  }

  resizeNode(docId: string, nodeId: string, size: [number, number], docVersion: number) {
    return this.request<{ node_id: string; doc_version: number }>(
      `/documents/${docId}/nodes/${nodeId}`,
      this.json({ size, doc_version: docVersion }, 'PUT'),
    );
  }

  deleteNode(docId: string, nodeId: string, docVersion: number) {
    return this.request<{ node_id: string; doc_version: number }>(
      `/documents/${docId}/nodes/${nodeId}?doc_version=${docVersion}`,
      { method: 'DELETE' },
    );
  }

  duplicateNode(docId: string, nodeId: string, docVersion: number) {
    return this.request<{ node_id: string; doc_version: number }>(
      `/documents/${docId}/nodes/${nodeId}/duplicate`,
      this.json({ doc_version: docVersion }),
    );
  }

  lineage(docId: string, nodeId: string) {
    return this.request<{ ancestors: string[] }>(
      `/documents/${docId}/nodes/${nodeId}/lineage`,
    ).then((body) => body.ancestors);
  }

  nodeSpec(docId: string, nodeId: string) {
    return this.request<ChartSpec>(`/documents/${docId}/nodes/${nodeId}/spec`);
  }

  nodePayload(docId: string, nodeId: string) {
    return this.request<RenderPayload>(`/documents/${docId}/nodes/${nodeId}/payload`);
  }

  generate(body: {
    dataset_id: string;
    document_id: string;
    goal_text: string;
    source_node?: string;
    parent_node?: string;
    provider?: string;
  }) {
    return this.request<{ job_id: string }>('/generate', this.json(body));
  }

  revise(docId: string, nodeId: string, instruction: string, provider?: string) {
    return this.request<{ job_id: string }>(
      `/documents/${docId}/nodes/${nodeId}/revise`,
      this.json({ instruction, provider }),
    );
  }

  getJob(jobId: string) {
    return this.request<JobSnapshot>(`/jobs/${jobId}`);
  }

  /** Replays persisted transitions, then follows live ones until the job
   * reaches a terminal state. */
  async *followJob(jobId: string): AsyncGenerator<JobTransition> {
    const response = await fetch(`${this.base}/jobs/${jobId}/events`);
    if (!response.ok || response.body === null) throw await toError(response);
    const reader = response.body.getReader();
    const decoder = new TextDecoder();
    let buffer = '';
    try {
      while (true) {
        const { done, value } = await reader.read();
        if (done) break;
        buffer += decoder.decode(value, { stream: true });
        let boundary;
        while ((boundary = buffer.indexOf('\n\n')) !== -1) {
          const block = buffer.slice(0, boundary);
          buffer = buffer.slice(boundary + 2);
          for (const line of block.split('\n')) {
            if (line.startsWith('data: ')) {
              yield JSON.parse(line.slice('data: '.length)) as JobTransition;
            }
          }
        }
      }
    } finally {
      reader.releaseLock();
    }
  }
}
