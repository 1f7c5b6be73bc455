// Optimistic upvoting with server reconciliation: increment immediately,
// then settle with the server's count; a DuplicateVote error reverts the
// optimistic increment (the vote already counted in a previous session).

import type { ForumReply } from "./types.js";

export interface VoteState {
  replyId: string;
  votes: number;
  pendingDelta: number;
}

export function optimisticUpvote(state: VoteState): VoteState {
  return { ...state, votes: state.votes + 1, pendingDelta: state.pendingDelta + 1 };
}

export function reconcileSuccess(state: VoteState, serverReply: ForumReply): VoteState {
  return { replyId: state.replyId, votes: serverReply.votes, pendingDelta: 0 };
}

export function reconcileFailure(state: VoteState, errorCode: string): VoteState {
  if (errorCode === "DuplicateVote") {
    // the optimistic bump was wrong: this voter already counted
    return { ...state, votes: state.votes - state.pendingDelta, pendingDelta: 0 };
  }
  // network or auth failure: revert too, caller may queue a retry
  return { ...state, votes: state.votes - state.pendingDelta, pendingDelta: 0 };
}
