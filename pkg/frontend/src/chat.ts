// Chat view-model: turns API answers into renderable messages and enforces
// the display invariants (ungrounded answers render refusal style with zero
// citation panels; grounded answers always show their citation panels).

import type { RagAnswer } from "./types.js";

export interface CitationPanel {
  chunk_id: string;
  expanded: boolean;
}

export interface ChatMessage {
  direction: "user" | "assistant";
  text: string;
  citations: CitationPanel[];
  grounded: boolean;
  language: string;
  intent?: string;
  flags: string[];
  answer_id?: string;
  tool_payload?: Record<string, unknown> | null;
}

export function userMessage(text: string): ChatMessage {
  return { direction: "user", text, citations: [], grounded: true, language: "", flags: [] };
}

export function toChatMessage(answer: RagAnswer): ChatMessage {
  // a refusal never renders citation panels, whatever the payload says
  const citations = answer.grounded
    ? answer.citations.map((chunk_id) => ({ chunk_id, expanded: false }))
    : [];
  return {
    direction: "assistant",
    text: answer.text,
    citations,
    grounded: answer.grounded,
    language: answer.language,
    intent: answer.intent,
    flags: answer.flags ?? [],
    answer_id: answer.answer_id,
    tool_payload: answer.tool_payload,
  };
}

export function toggleCitation(message: ChatMessage, chunkId: string): ChatMessage {
  return {
    ...message,
    citations: message.citations.map((c) =>
      c.chunk_id === chunkId ? { ...c, expanded: !c.expanded } : c,
    ),
  };
}

/** Reject whitespace-only input client-side before it hits the API. */
export function validateInput(text: string): string | null {
  const trimmed = text.trim();
  return trimmed.length > 0 ? trimmed : null;
}
