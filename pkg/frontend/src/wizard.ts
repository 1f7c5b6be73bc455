// Self-test wizard state: a thin mirror of the server session. The wizard
// never fabricates progress — every transition comes from a server snapshot,
// so the displayed step can never run ahead of the server cursor.

import type { SelfTestSnapshot } from "./types.js";

export interface WizardState {
  sessionId: string | null;
  model: string | null;
  cursor: number;
  totalSteps: number;
  state: "idle" | "in_progress" | "complete";
  currentStep: { step_id: string; instruction: string; expected: string } | null;
  report: SelfTestSnapshot["report"] | null;
}

export const IDLE: WizardState = {
  sessionId: null,
  model: null,
  cursor: 0,
  totalSteps: 0,
  state: "idle",
  currentStep: null,
  report: null,
};

export function applySnapshot(prev: WizardState, snap: SelfTestSnapshot): WizardState {
  if (prev.sessionId && snap.session_id === prev.sessionId && snap.cursor < prev.cursor) {
    // a stale response must never move the wizard backwards
    return prev;
  }
  return {
    sessionId: snap.session_id,
    model: snap.device_model,
    cursor: snap.cursor,
    totalSteps: snap.total_steps,
    state: snap.state,
    currentStep: snap.current_step,
    report: snap.report ?? (snap.state === "complete" ? prev.report : null),
  };
}

export function progressLabel(state: WizardState): string {
  if (state.state === "idle") return "not started";
  if (state.state === "complete") return `complete (${state.totalSteps}/${state.totalSteps})`;
  return `step ${state.cursor + 1} of ${state.totalSteps}`;
}

const SESSION_KEY = "devicedesk_selftest_session";

export function rememberSession(storage: Storage | null, sessionId: string) {
  storage?.setItem(SESSION_KEY, sessionId);
}

export function recallSession(storage: Storage | null): string | null {
  return storage?.getItem(SESSION_KEY) ?? null;
}

export function forgetSession(storage: Storage | null) {
  storage?.removeItem(SESSION_KEY);
}
