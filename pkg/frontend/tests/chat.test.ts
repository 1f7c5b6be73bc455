import { describe, expect, it } from "vitest";
import { toChatMessage, toggleCitation, userMessage, validateInput } from "../src/chat.js";
import type { RagAnswer } from "../src/types.js";

function answer(over: Partial<RagAnswer> = {}): RagAnswer {
  return {
    answer_id: "a1",
    session_id: "s1",
    text: "Wipe the probe after every exam.",
    citations: ["um-transducer-care#0000", "um-routine-upkeep#0001"],
    grounded: true,
    confidence: 0.4,
    latency_ms: 2,
    language: "en",
    intent: "instructional",
    flags: [],
    retrieved: ["um-transducer-care#0000", "um-routine-upkeep#0001"],
    tool_payload: null,
    ...over,
  };
}

describe("chat view model", () => {
  it("grounded answers render one citation panel per payload citation", () => {
    const msg = toChatMessage(answer());
    expect(msg.citations.map((c) => c.chunk_id)).toEqual([
      "um-transducer-care#0000",
      "um-routine-upkeep#0001",
    ]);
    expect(msg.grounded).toBe(true);
    expect(msg.citations.every((c) => !c.expanded)).toBe(true);
  });

  it("ungrounded answers render refusal style with zero panels", () => {
    // even if a buggy payload carried citations, the refusal renders none
    const msg = toChatMessage(
      answer({ grounded: false, citations: ["stray#0001"], text: "I could not find support…" }),
    );
    expect(msg.grounded).toBe(false);
    expect(msg.citations).toEqual([]);
  });

  it("toggles a single citation panel", () => {
    let msg = toChatMessage(answer());
    msg = toggleCitation(msg, "um-routine-upkeep#0001");
    expect(msg.citations.find((c) => c.chunk_id === "um-routine-upkeep#0001")?.expanded).toBe(true);
    expect(msg.citations.find((c) => c.chunk_id === "um-transducer-care#0000")?.expanded).toBe(false);
    msg = toggleCitation(msg, "um-routine-upkeep#0001");
    expect(msg.citations.every((c) => !c.expanded)).toBe(true);
  });

  it("chat round-trip: user message then assistant message with citations", () => {
    const thread = [userMessage("how do I clean the transducer"), toChatMessage(answer())];
    expect(thread[0].direction).toBe("user");
    expect(thread[1].direction).toBe("assistant");
    expect(thread[1].citations.length).toBeGreaterThan(0);
  });

  it("rejects whitespace-only input client-side", () => {
    expect(validateInput("   ")).toBeNull();
    expect(validateInput("\n\t")).toBeNull();
    expect(validateInput("  ok  ")).toBe("ok");
  });
});
