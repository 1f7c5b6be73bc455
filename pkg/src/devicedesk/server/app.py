"""HTTP service: the /v1 API over the answer pipeline, diagnostic tools,
forum, and feedback store.

Missing stores degrade the service to tools-only instead of failing start
(the health endpoint reports it). All 4xx/5xx bodies carry machine-readable
error codes from the shared taxonomy.
"""

from __future__ import annotations

import logging
import secrets
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Depends, FastAPI, Header, Request, Response, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .. import _kernel
from ..deployment import _chunk_to_record
from ..errors import (
    DeviceDeskError,
    EmptyProfile,
    EmptyQuery,
    InvalidToken,
    MissingStores,
    StoreUnavailable,
    UnknownPost,
    UnknownSession,
    ValidationError,
)
from ..rag.pipeline import INTENT_SEGMENTS
from ..forum import ForumStore, PromotionRule
from ..rag.pipeline import (
    QueryRequest,
    RagPipeline,
    RemoteLlmProvider,
    shipped_prompt_template,
)
from ..tools import analyze_log, export_icalendar, generate_maintenance_plan, lookup_error_code, parse_log
from ..vecstore import StoreSegment
from .auth import Authenticator, TokenStore
from .config import ServerConfig
from .ingest import load_deployment
from .interactions import InteractionLog

logger = logging.getLogger(__name__)


@dataclass
class Session:
    session_id: str
    technician_id: str | None
    device_model: str | None = None
    created_at: float = field(default_factory=time.time)
    last_active: float = field(default_factory=time.time)


class SessionStore:
    def __init__(self, idle_minutes: int):
        self._sessions: dict[str, Session] = {}
        self._idle = idle_minutes * 60
        self._lock = threading.Lock()

    def get_or_create(self, session_id: str | None, technician_id: str | None) -> Session:
        now = time.time()
        with self._lock:
            if session_id:
                session = self._sessions.get(session_id)
                if session and now - session.last_active <= self._idle:
                    session.last_active = now
                    return session
            session = Session(session_id=secrets.token_urlsafe(16), technician_id=technician_id)
            self._sessions[session.session_id] = session
            return session


class QueryBody(BaseModel):
    text: str = ""
    language: str | None = None
    device_model: str | None = None
    session_id: str | None = None
    k: int | None = None
    segments: list[str] | None = None


class PostBody(BaseModel):
    device_model: str = ""
    title: str = ""
    body: str = ""
    tags: list[str] = []


class ReplyBody(BaseModel):
    body: str = ""


class FeedbackBody(BaseModel):
    target: str = ""
    verdict: str = ""
    comment: str = ""


class AdvanceBody(BaseModel):
    result: str = ""


class TokenBody(BaseModel):
    technician_id: str = ""
    ttl_hours: float = 720.0


def create_app(config: ServerConfig) -> FastAPI:
    app = FastAPI(title="devicedesk", version="0.1.0", docs_url=None, redoc_url=None)
    data_dir = Path(config.data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)

    try:
        deployment = load_deployment(config)
        degraded = False
    except MissingStores as exc:
        logger.warning("starting degraded (tools only): %s", exc)
        deployment = None
        degraded = True

    provider = None
    if config.generation_provider == "remote_llm" and config.remote_llm_endpoint:
        provider = RemoteLlmProvider(
            config.remote_llm_endpoint,
            shipped_prompt_template(),
            credential=config.remote_llm_credential,
            timeout=config.remote_llm_timeout,
        )
    pipeline = (
        RagPipeline(
            deployment,
            provider=provider,
            tau_ground=config.tau_ground,
            default_k=config.default_k,
        )
        if deployment
        else None
    )

    forum = ForumStore.load(data_dir / "forum.jsonl", admins={"admin"})
    tokens = TokenStore(data_dir / "tokens.jsonl", salt=config.log_salt)
    auth = Authenticator(tokens, config.admin_token, config.kiosk_mode)
    interactions = InteractionLog(data_dir / "interactions.jsonl", salt=config.log_salt)
    sessions = SessionStore(config.session_idle_minutes)
    promotion_rule = PromotionRule(
        min_votes=config.promotion_min_votes,
        require_accepted=config.promotion_require_accepted,
    )
    community_lock = threading.Lock()

    app.state.deployment = deployment
    app.state.pipeline = pipeline
    app.state.forum = forum

    # -- plumbing -----------------------------------------------------------------

    @app.exception_handler(DeviceDeskError)
    async def on_domain_error(request: Request, exc: DeviceDeskError):
        return JSONResponse(status_code=exc.status, content={"error": exc.to_payload()})

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": {"code": "ValidationError", "message": str(exc.errors()[:3])}},
        )

    def bearer(authorization: str | None = Header(default=None)) -> str | None:
        if authorization and authorization.lower().startswith("bearer "):
            return authorization[7:].strip()
        return None

    def current_identity(token: str | None = Depends(bearer)) -> str | None:
        return auth.identify(token)

    def require_identity(token: str | None = Depends(bearer)) -> str:
        return auth.require_identity(token)

    def require_admin(token: str | None = Depends(bearer)) -> str:
        return auth.require_admin(token)

    def need_pipeline() -> RagPipeline:
        if pipeline is None:
            raise StoreUnavailable("no stores ingested; run `devicedesk ingest` first")
        return pipeline

    def _segment_counts() -> dict:
        if deployment is None:
            return {}
        return {name: len(seg) for name, seg in sorted(deployment.segments.items())}

    def _persist_community() -> None:
        import json as _json

        seg = deployment.segments.get("community")
        if seg is not None:
            seg.persist(data_dir / "segments" / "community.dds")
            with open(data_dir / "chunks.jsonl", "w", encoding="utf-8") as fh:
                for cid in sorted(deployment.chunks):
                    fh.write(
                        _json.dumps(_chunk_to_record(deployment.chunks[cid]), sort_keys=True) + "\n"
                    )

    def _try_promote(reply_id: str) -> list[str] | None:
        """Auto-promotion once a reply satisfies the rule; exactly-once is
        guarded by the forum store."""
        if deployment is None:
            return None
        reply = forum.replies.get(reply_id)
        if (
            reply is None
            or reply_id in forum.promoted
            or (promotion_rule.require_accepted and not reply.accepted)
            or reply.votes < promotion_rule.min_votes
        ):
            return None
        with community_lock:
            seg = deployment.segments.get("community")
            if seg is None:
                seg = StoreSegment(
                    "community",
                    deployment.default_model,
                    deployment.embedder_spec,
                    index_kind="flat",
                    hnsw_params=config.hnsw_params(),
                )
                deployment.segments["community"] = seg
            chunk_ids = forum.promote_to_knowledge(
                reply_id, promotion_rule, seg, deployment.embedder, deployment.chunks
            )
            _persist_community()
            return chunk_ids

    # -- health ------------------------------------------------------------------

    @app.get("/v1/health")
    def health():
        return {
            "status": "degraded" if degraded else "ok",
            "segments": _segment_counts(),
            "embedder_spec_hash": config.embedder_spec().spec_hash(),
            "kernel_backend": _kernel.BACKEND,
            "device_models": deployment.device_models if deployment else [],
            "kiosk_mode": config.kiosk_mode,
        }

    # -- query -------------------------------------------------------------------

    @app.post("/v1/query")
    def query(body: QueryBody, identity: str | None = Depends(current_identity)):
        if not config.kiosk_mode and identity is None:
            raise InvalidToken("authentication required for queries outside kiosk mode")
        pipe = need_pipeline()
        if not body.text or not body.text.strip():
            raise EmptyQuery("query text is empty")
        session = sessions.get_or_create(body.session_id, identity)
        if body.device_model:
            session.device_model = body.device_model
        request = QueryRequest(
            text=body.text,
            language=body.language,
            device_model=body.device_model or session.device_model,
            session_id=session.session_id,
            k=body.k or config.default_k,
            requested_segments=body.segments,
        )
        answer = pipe.answer_query(request)
        answer_id = uuid.uuid4().hex
        forum.register_answer(answer_id)
        interactions.record(
            session_id=session.session_id,
            intent=answer.intent,
            segments=list(INTENT_SEGMENTS.get(answer.intent, ())),
            grounded=answer.grounded,
            latency_ms=answer.latency_ms,
            answer_id=answer_id,
        )
        return {"answer_id": answer_id, "session_id": session.session_id, **answer.to_payload()}

    # -- tools ---------------------------------------------------------------------

    @app.get("/v1/error-codes/{code}")
    def error_code(code: str):
        if deployment is None:
            raise StoreUnavailable("no stores ingested")
        catalog = deployment.catalogs.get(deployment.default_model)
        answer = lookup_error_code(
            code,
            catalog,
            error_segment=deployment.segments.get("error_catalog"),
            embedder=deployment.embedder,
        )
        return answer.to_payload()

    @app.post("/v1/logs/analyze")
    async def logs_analyze(file: UploadFile | None = None, format_spec: str = "standard"):
        if file is None:
            raise EmptyQuery("multipart field 'file' with the log content is required")
        text = (await file.read()).decode("utf-8", errors="replace")
        parsed = parse_log(text, format_spec)
        catalog = deployment.catalogs.get(deployment.default_model) if deployment else None
        return analyze_log(parsed, catalog).to_payload()

    @app.post("/v1/selftest/{model}/start")
    def selftest_start(model: str):
        runner = deployment.selftest if deployment else None
        if runner is None:
            raise StoreUnavailable("no deployment loaded")
        session = runner.start(model)
        return session.snapshot()

    @app.get("/v1/selftest/{session_id}")
    def selftest_get(session_id: str):
        runner = deployment.selftest if deployment else None
        if runner is None:
            raise UnknownSession(session_id)
        return runner.get(session_id).snapshot()

    @app.post("/v1/selftest/{session_id}/advance")
    def selftest_advance(session_id: str, body: AdvanceBody):
        runner = deployment.selftest if deployment else None
        if runner is None:
            raise UnknownSession(session_id)
        if body.result not in ("pass", "fail", "skipped"):
            raise ValidationError("result must be pass, fail, or skipped")
        return runner.advance(session_id, body.result)

    @app.get("/v1/maintenance/{model}/plan")
    def maintenance_plan(model: str, horizon_days: int = 90):
        profile = deployment.profiles.get(model) if deployment else None
        if profile is None:
            raise EmptyProfile(f"no maintenance profile for model {model!r}")
        plan = generate_maintenance_plan(profile, horizon_days)
        return plan.to_payload()

    @app.get("/v1/maintenance/{model}/plan.ics")
    def maintenance_ics(model: str, horizon_days: int = 90):
        profile = deployment.profiles.get(model) if deployment else None
        if profile is None:
            raise EmptyProfile(f"no maintenance profile for model {model!r}")
        plan = generate_maintenance_plan(profile, horizon_days)
        return Response(content=export_icalendar(plan), media_type="text/calendar")

    # -- forum ---------------------------------------------------------------------

    @app.get("/v1/forum/posts")
    def forum_list(device_model: str | None = None):
        posts = [
            {**p.to_dict(), "replies": len(forum.replies_for(p.post_id))}
            for p in forum.posts.values()
            if device_model is None or p.device_model == device_model
        ]
        posts.sort(key=lambda p: p["post_id"], reverse=True)
        return {"posts": posts}

    @app.get("/v1/forum/posts/{post_id}")
    def forum_get(post_id: str):
        post = forum.posts.get(post_id)
        if post is None:
            raise UnknownPost(f"no post {post_id}")
        return {
            **post.to_dict(),
            "replies": [
                {**r.to_dict(), "promoted": r.reply_id in forum.promoted}
                for r in forum.replies_for(post_id)
            ],
        }

    @app.post("/v1/forum/posts", status_code=201)
    def forum_post(body: PostBody, identity: str = Depends(require_identity)):
        post = forum.create_post(
            author_id=identity,
            device_model=body.device_model or (deployment.default_model if deployment else ""),
            title=body.title,
            body=body.body,
            tags=body.tags,
        )
        return post.to_dict()

    @app.post("/v1/forum/posts/{post_id}/replies", status_code=201)
    def forum_reply(post_id: str, body: ReplyBody, identity: str = Depends(require_identity)):
        return forum.create_reply(post_id, identity, body.body).to_dict()

    @app.post("/v1/forum/replies/{reply_id}/upvote")
    def forum_upvote(reply_id: str, identity: str = Depends(require_identity)):
        reply = forum.upvote(reply_id, identity)
        promoted = _try_promote(reply_id)
        return {**reply.to_dict(), "promoted_chunks": promoted}

    @app.post("/v1/forum/posts/{post_id}/accept/{reply_id}")
    def forum_accept(post_id: str, reply_id: str, identity: str = Depends(require_identity)):
        reply = forum.accept_reply(post_id, reply_id, identity)
        promoted = _try_promote(reply_id)
        return {**reply.to_dict(), "promoted_chunks": promoted}

    @app.post("/v1/feedback", status_code=201)
    def feedback(body: FeedbackBody, identity: str = Depends(require_identity)):
        label = forum.record_feedback(body.target, body.verdict, identity, body.comment)
        correct, incorrect = forum.feedback_aggregate(body.target)
        return {
            "label_id": label.label_id,
            "target": label.target,
            "verdict": label.verdict,
            "aggregate": {"correct": correct, "incorrect": incorrect},
        }

    # -- admin ---------------------------------------------------------------------

    @app.post("/v1/auth/token", status_code=201)
    def issue_token(body: TokenBody, _: str = Depends(require_admin)):
        if not body.technician_id:
            raise DeviceDeskError("technician_id is required")
        token = tokens.issue(body.technician_id, body.ttl_hours)
        return {"token": token, "technician_id": body.technician_id}

    @app.post("/v1/admin/exemplars/reload")
    def reload_exemplars(_: str = Depends(require_admin)):
        if deployment is None:
            raise StoreUnavailable("no deployment loaded")
        from importlib import resources

        if config.exemplar_path:
            deployment.router.load_exemplar_file(config.exemplar_path)
        else:
            with resources.as_file(
                resources.files("devicedesk.data") / "intent_exemplars.txt"
            ) as p:
                deployment.router.load_exemplar_file(p)
        return {"intents": deployment.router.registered_intents}

    if config.ui_dir and Path(config.ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app

