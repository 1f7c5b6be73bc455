import { describe, expect, it } from "vitest";
import { optimisticUpvote, reconcileFailure, reconcileSuccess } from "../src/votes.js";
import type { ForumReply } from "../src/types.js";

const reply = (votes: number): ForumReply => ({
  reply_id: "r1",
  post_id: "p1",
  author_id: "t1",
  body: "x",
  created_at: "",
  votes,
  accepted: false,
});

describe("optimistic vote reconciliation", () => {
  it("increments immediately and settles on the server count", () => {
    let state = { replyId: "r1", votes: 4, pendingDelta: 0 };
    state = optimisticUpvote(state);
    expect(state.votes).toBe(5);
    state = reconcileSuccess(state, reply(5));
    expect(state).toEqual({ replyId: "r1", votes: 5, pendingDelta: 0 });
  });

  it("DuplicateVote reverts the optimistic increment", () => {
    let state = { replyId: "r1", votes: 4, pendingDelta: 0 };
    state = optimisticUpvote(state);
    expect(state.votes).toBe(5);
    state = reconcileFailure(state, "DuplicateVote");
    expect(state.votes).toBe(4);
    expect(state.pendingDelta).toBe(0);
  });

  it("vote count after double-click nets +1 once the server answers", () => {
    let state = { replyId: "r1", votes: 4, pendingDelta: 0 };
    state = optimisticUpvote(state); // first click succeeds server-side
    state = reconcileSuccess(state, reply(5));
    state = optimisticUpvote(state); // second click rejected server-side
    state = reconcileFailure(state, "DuplicateVote");
    expect(state.votes).toBe(5);
  });

  it("network failure also reverts (job goes to the retry queue)", () => {
    let state = { replyId: "r1", votes: 2, pendingDelta: 0 };
    state = optimisticUpvote(state);
    state = reconcileFailure(state, "NetworkError");
    expect(state.votes).toBe(2);
  });
});
