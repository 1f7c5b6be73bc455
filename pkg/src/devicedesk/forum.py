"""Technician forum: posts, upvote-only replies, acceptance, the feedback
label store, and promotion of vetted solutions into the community segment.

State is an append-only event journal (JSONL) replayed on load; promotion
embeds the question + accepted answer with the same chunking/embedding used
at ingest so promoted knowledge is retrievable like any other chunk.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .corpus import chunk_document, embedding_text_for_chunk, parse_document
from .errors import (
    AlreadyPromoted,
    DuplicateVote,
    NotAuthorized,
    RuleNotMet,
    UnknownPost,
    UnknownReply,
    UnknownTarget,
)


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class ForumPost:
    post_id: str
    author_id: str
    device_model: str
    title: str
    body: str
    tags: list[str]
    created_at: str
    status: str = "open"  # open | resolved

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class Reply:
    reply_id: str
    post_id: str
    author_id: str
    body: str
    created_at: str
    votes: int = 0
    accepted: bool = False

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class FeedbackLabel:
    label_id: str
    target: str
    verdict: str  # correct | incorrect
    comment: str
    author_id: str
    created_at: str


@dataclass(frozen=True)
class PromotionRule:
    min_votes: int = 3
    require_accepted: bool = True


class ForumStore:
    def __init__(self, journal_path: str | Path | None = None, admins: set[str] | None = None):
        self.journal_path = Path(journal_path) if journal_path else None
        self.admins = set(admins or ())
        self.posts: dict[str, ForumPost] = {}
        self.replies: dict[str, Reply] = {}
        self._votes: set[tuple[str, str]] = set()
        self._feedback: dict[tuple[str, str], FeedbackLabel] = {}
        self.promoted: dict[str, list[str]] = {}  # reply_id -> community chunk ids
        self._known_answers: set[str] = set()
        self._seq = 0
        # one lock serializes all forum writes (covers the per-post
        # serialization contract; read paths stay lock-free)
        self._write_lock = threading.Lock()

    # -- journal -----------------------------------------------------------------

    def _record(self, event: dict) -> None:
        if self.journal_path is not None:
            with open(self.journal_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(event, sort_keys=True) + "\n")

    @classmethod
    def load(cls, journal_path: str | Path, admins: set[str] | None = None) -> "ForumStore":
        store = cls(journal_path=None, admins=admins)
        path = Path(journal_path)
        if path.exists():
            for line in path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    store._apply(json.loads(line))
        store.journal_path = path
        return store

    def _apply(self, ev: dict) -> None:
        kind = ev["event"]
        if kind == "post":
            post = ForumPost(**{k: v for k, v in ev.items() if k != "event"})
            self.posts[post.post_id] = post
            self._bump_seq(post.post_id)
        elif kind == "reply":
            reply = Reply(**{k: v for k, v in ev.items() if k != "event"})
            self.replies[reply.reply_id] = reply
            self._bump_seq(reply.reply_id)
        elif kind == "vote":
            self._votes.add((ev["reply_id"], ev["voter_id"]))
            self.replies[ev["reply_id"]].votes += 1
        elif kind == "accept":
            self._do_accept(ev["post_id"], ev["reply_id"])
        elif kind == "feedback":
            label = FeedbackLabel(**{k: v for k, v in ev.items() if k != "event"})
            self._feedback[(label.author_id, label.target)] = label
            self._bump_seq(label.label_id)
        elif kind == "promotion":
            self.promoted[ev["reply_id"]] = list(ev["chunk_ids"])
        elif kind == "answer":
            self._known_answers.add(ev["answer_id"])

    def _bump_seq(self, ident: str) -> None:
        tail = ident.rsplit("-", 1)[-1]
        if tail.isdigit():
            self._seq = max(self._seq, int(tail))

    def _next_id(self, prefix: str) -> str:
        self._seq += 1
        return f"{prefix}-{self._seq:06d}"

    # -- posts and replies ---------------------------------------------------------

    def create_post(self, author_id: str, device_model: str, title: str, body: str,
                    tags: list[str] | None = None) -> ForumPost:
        if not title.strip() or not body.strip():
            raise ValueError("post title and body must be non-empty")
        with self._write_lock:
            post = ForumPost(
                post_id=self._next_id("post"),
                author_id=author_id,
                device_model=device_model,
                title=title,
                body=body,
                tags=list(tags or ()),
                created_at=_now_iso(),
            )
            self.posts[post.post_id] = post
            self._record({"event": "post", **post.to_dict()})
            return post

    def create_reply(self, post_id: str, author_id: str, body: str) -> Reply:
        if post_id not in self.posts:
            raise UnknownPost(f"no post {post_id}")
        if not body.strip():
            raise ValueError("reply body must be non-empty")
        with self._write_lock:
            reply = Reply(
                reply_id=self._next_id("reply"),
                post_id=post_id,
                author_id=author_id,
                body=body,
                created_at=_now_iso(),
            )
            self.replies[reply.reply_id] = reply
            self._record({"event": "reply", **reply.to_dict()})
            return reply

    def upvote(self, reply_id: str, voter_id: str) -> Reply:
        with self._write_lock:
            reply = self.replies.get(reply_id)
            if reply is None:
                raise UnknownReply(f"no reply {reply_id}")
            if (reply_id, voter_id) in self._votes:
                raise DuplicateVote(f"{voter_id} already upvoted {reply_id}")
            self._votes.add((reply_id, voter_id))
            reply.votes += 1
            self._record({"event": "vote", "reply_id": reply_id, "voter_id": voter_id})
            return reply

    def accept_reply(self, post_id: str, reply_id: str, actor_id: str) -> Reply:
        with self._write_lock:
            post = self.posts.get(post_id)
            if post is None:
                raise UnknownPost(f"no post {post_id}")
            reply = self.replies.get(reply_id)
            if reply is None or reply.post_id != post_id:
                raise UnknownReply(f"no reply {reply_id} on post {post_id}")
            if actor_id != post.author_id and actor_id not in self.admins:
                raise NotAuthorized("only the post author or an admin may accept a reply")
            self._do_accept(post_id, reply_id)
            self._record({"event": "accept", "post_id": post_id, "reply_id": reply_id})
            return reply

    def _do_accept(self, post_id: str, reply_id: str) -> None:
        for r in self.replies.values():
            if r.post_id == post_id and r.accepted:
                r.accepted = False
        self.replies[reply_id].accepted = True
        self.posts[post_id].status = "resolved"

    def replies_for(self, post_id: str) -> list[Reply]:
        return sorted(
            (r for r in self.replies.values() if r.post_id == post_id),
            key=lambda r: r.reply_id,
        )

    # -- promotion -------------------------------------------------------------------

    def promote_to_knowledge(
        self, reply_id: str, rule: PromotionRule, community_segment, embedder, chunk_sink: dict
    ) -> list[str]:
        """Chunk + embed (title + question + accepted answer) into the
        community segment; exactly once per reply."""
        with self._write_lock:
            reply = self.replies.get(reply_id)
            if reply is None:
                raise UnknownReply(f"no reply {reply_id}")
            if reply_id in self.promoted:
                raise AlreadyPromoted(f"reply {reply_id} was already promoted")
            if rule.require_accepted and not reply.accepted:
                raise RuleNotMet(f"reply {reply_id} is not the accepted answer")
            if reply.votes < rule.min_votes:
                raise RuleNotMet(
                    f"reply {reply_id} has {reply.votes} votes, needs {rule.min_votes}"
                )
            self.promoted[reply_id] = []  # reserve the exactly-once slot
        post = self.posts[reply.post_id]
        # chunking/embedding below stays outside the forum write lock; the
        # caller holds the community-segment writer lock
        body = f"# {post.title}\n\nQuestion: {post.body}\n\nAccepted answer: {reply.body}\n"
        doc = parse_document(
            body,
            {
                "doc_id": f"community-{post.post_id}-{reply_id}",
                "device_model": post.device_model,
                "doc_class": "community",
                "language": "en",
                "title": post.title,
            },
        )
        chunks = chunk_document(doc)
        chunk_ids = []
        try:
            for chunk in chunks:
                vec = embedder.embed(embedding_text_for_chunk(chunk))
                community_segment.insert(chunk.chunk_id, vec, payload_ref=chunk.chunk_id)
                chunk_sink[chunk.chunk_id] = chunk
                chunk_ids.append(chunk.chunk_id)
        except Exception:
            with self._write_lock:
                self.promoted.pop(reply_id, None)
            raise
        with self._write_lock:
            self.promoted[reply_id] = chunk_ids
            self._record({"event": "promotion", "reply_id": reply_id, "chunk_ids": chunk_ids})
        return chunk_ids

    # -- feedback ----------------------------------------------------------------------

    def register_answer(self, answer_id: str) -> None:
        with self._write_lock:
            self._known_answers.add(answer_id)
            self._record({"event": "answer", "answer_id": answer_id})

    def record_feedback(self, target: str, verdict: str, author_id: str, comment: str = "") -> FeedbackLabel:
        if verdict not in ("correct", "incorrect"):
            raise ValueError("verdict must be correct or incorrect")
        if target not in self.replies and target not in self._known_answers:
            raise UnknownTarget(f"no reply or answer {target}")
        with self._write_lock:
            label = FeedbackLabel(
                label_id=self._next_id("label"),
                target=target,
                verdict=verdict,
                comment=comment,
                author_id=author_id,
                created_at=_now_iso(),
            )
            self._feedback[(author_id, target)] = label  # one verdict per (author, target)
            self._record({"event": "feedback", **label.__dict__})
            return label

    def feedback_aggregate(self, target: str) -> tuple[int, int]:
        labels = [l for (_, t), l in self._feedback.items() if t == target]
        correct = sum(1 for l in labels if l.verdict == "correct")
        return correct, len(labels) - correct

    def export_feedback(self, salt: str = "devicedesk") -> list[str]:
        """Anonymized line-delimited export: author ids replaced by salted hashes."""
        lines = []
        for (_, _), label in sorted(self._feedback.items(), key=lambda kv: kv[1].label_id):
            author_hash = hashlib.sha256(f"{salt}:{label.author_id}".encode()).hexdigest()[:16]
            lines.append(
                json.dumps(
                    {
                        "target": label.target,
                        "verdict": label.verdict,
                        "author": author_hash,
                        "timestamp": label.created_at,
                    },
                    sort_keys=True,
                )
            )
        return lines
