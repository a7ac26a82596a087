/** Wire types mirroring the server's JSON formats (docs/schemas.md). */

export interface Encoding {
  column: string;
  aggregate?: string;
  scale?: string;
}

export interface ChartSpec {
  spec_version: number;
  mark: 'scatter' | 'bar' | 'line' | 'histogram' | 'heatmap';
  title: string;
  encodings: Record<string, Encoding>;
  transforms: Array<Record<string, unknown>>;
  matrix_columns?: string[];
}

export interface DataTable {
  column_names: string[];
  rows: Array<Array<number | string | null>>;
}

export interface RenderPayload {
  spec: ChartSpec;
  data: DataTable;
  labels: { top: number[]; bottom: number[] } | null;
  grammar_json: string;
}

export interface CanvasNodeData {
  id: string;
  kind: 'note' | 'visualization';
  position: [number, number];
  size: [number, number];
  z: number;
  tombstone: boolean;
  text?: string;
  spec?: ChartSpec;
  payload_ref?: string;
}

export interface ProvenanceEdgeData {
  from: string;
  to: string;
  kind: 'derived-from' | 'duplicated-from' | 'generated-from-note';
  created_at: string;
}

export interface CanvasDocumentData {
  format_version: number;
  id: string;
  dataset_id: string;
  doc_version: number;
  next_z: number;
  nodes: Record<string, CanvasNodeData>;
  edges: ProvenanceEdgeData[];
}

export type JobState =
  | 'queued'
  | 'prompting'
  | 'awaiting_model'
  | 'validating'
  | 'repairing'
  | 'compiling'
  | 'done'
  | 'failed';

export interface JobTransition {
  state: JobState;
  at: number;
  result?: JobResult;
  error?: ErrorBody;
}

export interface JobResult {
  node_id: string;
  document_id: string;
  provider_used: string;
  attempts: number;
  provenance_note: string;
}

export interface JobSnapshot {
  job_id: string;
  state: JobState;
  transitions: JobTransition[];
  result: JobResult | null;
  error: ErrorBody | null;
}

export interface ErrorBody {
  code: string;
  message: string;
  detail: unknown;
}

export interface DatasetSummary {
  dataset_id: string;
  name: string;
  row_count: number;
  columns: Array<Record<string, unknown>>;
}
