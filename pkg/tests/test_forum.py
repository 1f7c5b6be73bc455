"""Forum behavior: voting, acceptance, promotion, feedback labels."""

import itertools
import json

import pytest

from devicedesk.embedding import EmbedderSpec, HashedNgramEmbedder
from devicedesk.errors import (
    AlreadyPromoted,
    DuplicateVote,
    NotAuthorized,
    RuleNotMet,
    UnknownPost,
    UnknownTarget,
)
from devicedesk.forum import ForumStore, PromotionRule
from devicedesk.vecstore import StoreSegment

SPEC = EmbedderSpec(dimension=1024, seed=9)


@pytest.fixture()
def store():
    return ForumStore(admins={"admin"})


def seeded(store):
    post = store.create_post("tech-a", "USX-300", "Probe dropout on port A",
                             "Vertical dark lines appear when the probe warms up.")
    reply = store.create_reply(post.post_id, "tech-b",
                               "Reseat the probe and clean the connector pins with contact cleaner.")
    return post, reply


class TestVoting:
    def test_second_vote_rejected_and_count_stable(self, store):
        _, reply = seeded(store)
        store.upvote(reply.reply_id, "tech-c")
        with pytest.raises(DuplicateVote):
            store.upvote(reply.reply_id, "tech-c")
        assert store.replies[reply.reply_id].votes == 1

    def test_votes_never_negative_and_monotonic(self, store):
        _, reply = seeded(store)
        for voter in ("v1", "v2", "v3"):
            store.upvote(reply.reply_id, voter)
        assert store.replies[reply.reply_id].votes == 3

    def test_reply_to_unknown_post(self, store):
        with pytest.raises(UnknownPost):
            store.create_reply("post-999999", "tech-a", "hello")


class TestAccept:
    def test_accept_switches_previous(self, store):
        post, r1 = seeded(store)
        r2 = store.create_reply(post.post_id, "tech-c", "Try the other port instead.")
        store.accept_reply(post.post_id, r1.reply_id, "tech-a")
        store.accept_reply(post.post_id, r2.reply_id, "tech-a")
        assert not store.replies[r1.reply_id].accepted
        assert store.replies[r2.reply_id].accepted
        assert store.posts[post.post_id].status == "resolved"

    def test_non_author_cannot_accept(self, store):
        post, reply = seeded(store)
        with pytest.raises(NotAuthorized):
            store.accept_reply(post.post_id, reply.reply_id, "tech-z")

    def test_admin_can_accept(self, store):
        post, reply = seeded(store)
        store.accept_reply(post.post_id, reply.reply_id, "admin")
        assert store.replies[reply.reply_id].accepted

    def test_single_accepted_under_any_interleaving(self, store):
        post, _ = seeded(store)
        replies = [store.create_reply(post.post_id, f"t{i}", f"answer {i}") for i in range(3)]
        for order in itertools.permutations(replies):
            for r in order:
                store.accept_reply(post.post_id, r.reply_id, "tech-a")
            accepted = [r for r in store.replies_for(post.post_id) if r.accepted]
            assert len(accepted) == 1
            assert accepted[0].reply_id == order[-1].reply_id


class TestPromotion:
    def make_segment(self):
        return StoreSegment("community", "USX-300", SPEC)

    def test_promotion_inserts_chunks(self, store):
        post, reply = seeded(store)
        store.accept_reply(post.post_id, reply.reply_id, "tech-a")
        for v in ("v1", "v2", "v3"):
            store.upvote(reply.reply_id, v)
        seg = self.make_segment()
        chunks = {}
        ids = store.promote_to_knowledge(
            reply.reply_id, PromotionRule(), seg, HashedNgramEmbedder(SPEC), chunks
        )
        assert ids
        assert len(seg) == len(ids)
        assert set(ids) <= set(chunks)

    def test_promoted_question_retrieves_own_chunk(self, store):
        post, reply = seeded(store)
        store.accept_reply(post.post_id, reply.reply_id, "tech-a")
        for v in ("v1", "v2", "v3"):
            store.upvote(reply.reply_id, v)
        seg = self.make_segment()
        embedder = HashedNgramEmbedder(SPEC)
        ids = store.promote_to_knowledge(reply.reply_id, PromotionRule(), seg, embedder, {})
        hits = seg.search(embedder.embed(post.title + " " + post.body), k=5)
        assert set(h.chunk_id for h in hits) & set(ids)

    def test_under_voted_rejected(self, store):
        post, reply = seeded(store)
        store.accept_reply(post.post_id, reply.reply_id, "tech-a")
        store.upvote(reply.reply_id, "v1")
        store.upvote(reply.reply_id, "v2")
        with pytest.raises(RuleNotMet):
            store.promote_to_knowledge(
                reply.reply_id, PromotionRule(), self.make_segment(), HashedNgramEmbedder(SPEC), {}
            )

    def test_not_accepted_rejected(self, store):
        _, reply = seeded(store)
        for v in ("v1", "v2", "v3"):
            store.upvote(reply.reply_id, v)
        with pytest.raises(RuleNotMet):
            store.promote_to_knowledge(
                reply.reply_id, PromotionRule(), self.make_segment(), HashedNgramEmbedder(SPEC), {}
            )

    def test_exactly_once(self, store):
        post, reply = seeded(store)
        store.accept_reply(post.post_id, reply.reply_id, "tech-a")
        for v in ("v1", "v2", "v3"):
            store.upvote(reply.reply_id, v)
        seg = self.make_segment()
        store.promote_to_knowledge(reply.reply_id, PromotionRule(), seg, HashedNgramEmbedder(SPEC), {})
        before = len(seg)
        with pytest.raises(AlreadyPromoted):
            store.promote_to_knowledge(
                reply.reply_id, PromotionRule(), seg, HashedNgramEmbedder(SPEC), {}
            )
        assert len(seg) == before


class TestFeedback:
    def test_one_verdict_per_author_target(self, store):
        _, reply = seeded(store)
        store.record_feedback(reply.reply_id, "correct", "tech-x")
        store.record_feedback(reply.reply_id, "incorrect", "tech-x")
        correct, incorrect = store.feedback_aggregate(reply.reply_id)
        assert (correct, incorrect) == (0, 1)

    def test_aggregate_counts(self, store):
        _, reply = seeded(store)
        store.record_feedback(reply.reply_id, "correct", "a1")
        store.record_feedback(reply.reply_id, "correct", "a2")
        store.record_feedback(reply.reply_id, "incorrect", "a3")
        assert store.feedback_aggregate(reply.reply_id) == (2, 1)

    def test_unknown_target(self, store):
        with pytest.raises(UnknownTarget):
            store.record_feedback("answer-nope", "correct", "a1")

    def test_registered_answer_accepts_feedback(self, store):
        store.register_answer("ans-123")
        label = store.record_feedback("ans-123", "correct", "a1")
        assert label.verdict == "correct"

    def test_export_is_anonymized(self, store):
        _, reply = seeded(store)
        store.record_feedback(reply.reply_id, "correct", "someone@hospital")
        lines = store.export_feedback(salt="s")
        assert len(lines) == 1
        rec = json.loads(lines[0])
        assert rec["verdict"] == "correct"
        assert "someone" not in json.dumps(rec)
        assert len(rec["author"]) == 16


class TestJournal:
    def test_replay_reconstructs_state(self, tmp_path):
        path = tmp_path / "forum.jsonl"
        store = ForumStore(journal_path=path, admins={"admin"})
        post, reply = seeded(store)
        store.upvote(reply.reply_id, "v1")
        store.accept_reply(post.post_id, reply.reply_id, "tech-a")
        store.record_feedback(reply.reply_id, "correct", "v1")

        loaded = ForumStore.load(path, admins={"admin"})
        assert loaded.posts[post.post_id].status == "resolved"
        assert loaded.replies[reply.reply_id].votes == 1
        assert loaded.replies[reply.reply_id].accepted
        assert loaded.feedback_aggregate(reply.reply_id) == (1, 0)
        # ids continue from the replayed sequence without collisions
        p2 = loaded.create_post("tech-d", "USX-300", "New issue", "Something else broke.")
        assert p2.post_id not in {post.post_id, reply.reply_id}

    def test_duplicate_vote_survives_restart(self, tmp_path):
        path = tmp_path / "forum.jsonl"
        store = ForumStore(journal_path=path)
        post, reply = seeded(store)
        store.upvote(reply.reply_id, "v1")
        loaded = ForumStore.load(path)
        with pytest.raises(DuplicateVote):
            loaded.upvote(reply.reply_id, "v1")
