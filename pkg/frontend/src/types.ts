// Payload shapes of the /v1 API this console consumes.

export interface RagAnswer {
  answer_id: string;
  session_id: string;
  text: string;
  citations: string[];
  grounded: boolean;
  confidence: number;
  latency_ms: number;
  language: string;
  intent: string;
  flags: string[];
  retrieved: string[];
  tool_payload: Record<string, unknown> | null;
}

export interface ErrorCodeAnswer {
  status: "exact" | "disambiguation" | "not_found";
  query_code: string;
  entry?: CatalogEntry;
  suggestions?: CatalogEntry[];
  related?: { chunk_id: string; score: number; segment: string }[];
}

export interface CatalogEntry {
  code: string;
  raw_code: string;
  description: string;
  causes: string[];
  corrective_actions: string[];
  source_chunk_id: string;
}

export interface LogReport {
  total_lines: number;
  parsed: number;
  malformed_lines: number[];
  counts_by_severity: Record<string, number>;
  top_codes: { code: string; count: number; catalog_match: boolean }[];
  time_range: [string, string] | null;
}

export interface SelfTestSnapshot {
  session_id: string;
  device_model: string;
  state: "in_progress" | "complete";
  cursor: number;
  total_steps: number;
  current_step: { step_id: string; instruction: string; expected: string } | null;
  report?: SelfTestReport;
}

export interface SelfTestReport {
  counts: { pass: number; fail: number; skipped: number };
  trace: { step_id: string; instruction: string; expected: string; result: string | null }[];
  total_steps: number;
}

export interface MaintenancePlan {
  device_model: string;
  created: string;
  horizon_days: number;
  tasks: { task_id: string; title: string; next_due: string; source: string }[];
  events: { uid: string; task_id: string; title: string; due: string }[];
}

export interface ForumPost {
  post_id: string;
  author_id: string;
  device_model: string;
  title: string;
  body: string;
  tags: string[];
  created_at: string;
  status: "open" | "resolved";
  replies?: number;
}

export interface ForumReply {
  reply_id: string;
  post_id: string;
  author_id: string;
  body: string;
  created_at: string;
  votes: number;
  accepted: boolean;
  promoted?: boolean;
  promoted_chunks?: string[] | null;
}

export interface ApiError {
  code: string;
  message: string;
  details?: Record<string, unknown>;
}
