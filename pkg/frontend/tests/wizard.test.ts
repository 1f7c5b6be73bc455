import { describe, expect, it } from "vitest";
import { IDLE, applySnapshot, progressLabel } from "../src/wizard.js";
import type { SelfTestSnapshot } from "../src/types.js";

function snap(cursor: number, total = 3, over: Partial<SelfTestSnapshot> = {}): SelfTestSnapshot {
  const complete = cursor >= total;
  return {
    session_id: "sess-1",
    device_model: "USX-300",
    state: complete ? "complete" : "in_progress",
    cursor,
    total_steps: total,
    current_step: complete
      ? null
      : { step_id: `st-0${cursor + 1}`, instruction: `do ${cursor + 1}`, expected: `exp ${cursor + 1}` },
    ...over,
  };
}

describe("self-test wizard state", () => {
  it("completes a 3-step script and shows the report", () => {
    let state = applySnapshot(IDLE, snap(0));
    expect(state.state).toBe("in_progress");
    expect(state.currentStep?.step_id).toBe("st-01");

    state = applySnapshot(state, snap(1));
    state = applySnapshot(state, snap(2));
    const report = {
      counts: { pass: 3, fail: 0, skipped: 0 },
      trace: [
        { step_id: "st-01", instruction: "do 1", expected: "exp 1", result: "pass" },
        { step_id: "st-02", instruction: "do 2", expected: "exp 2", result: "pass" },
        { step_id: "st-03", instruction: "do 3", expected: "exp 3", result: "pass" },
      ],
      total_steps: 3,
    };
    state = applySnapshot(state, snap(3, 3, { report }));
    expect(state.state).toBe("complete");
    expect(state.report?.counts.pass).toBe(3);
    expect(progressLabel(state)).toBe("complete (3/3)");
  });

  it("never displays a step beyond the server cursor", () => {
    let state = applySnapshot(IDLE, snap(2));
    // a stale earlier response arrives late: wizard must not move backwards,
    // and it never invents progress past what the server reported
    const stale = snap(1);
    state = applySnapshot(state, stale);
    expect(state.cursor).toBe(2);
    expect(state.currentStep?.step_id).toBe("st-03");
  });

  it("resumes mid-session from a server snapshot", () => {
    const resumed = applySnapshot(IDLE, snap(1));
    expect(resumed.cursor).toBe(1);
    expect(progressLabel(resumed)).toBe("step 2 of 3");
  });

  it("progress label for idle state", () => {
    expect(progressLabel(IDLE)).toBe("not started");
  });
});
