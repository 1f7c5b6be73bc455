"""HTTP API integration: endpoints, auth, kiosk mode, degraded mode,
anonymized interaction logging."""

import json
import shutil
from dataclasses import replace

import pytest
from fastapi.testclient import TestClient

from devicedesk.server.app import create_app
from devicedesk.server.config import ServerConfig

ADMIN = {"Authorization": "Bearer desk-admin-token"}


@pytest.fixture(scope="module")
def served(desk_config, desk_deployment, tmp_path_factory):
    data_dir = tmp_path_factory.mktemp("server-data")
    shutil.copytree(desk_config.data_dir, data_dir, dirs_exist_ok=True)
    config = replace(desk_config, data_dir=str(data_dir), admin_token="desk-admin-token")
    app = create_app(config)
    with TestClient(app) as client:
        yield client, config


@pytest.fixture(scope="module")
def tech_token(served):
    client, _ = served
    resp = client.post("/v1/auth/token", json={"technician_id": "tech-7"}, headers=ADMIN)
    assert resp.status_code == 201
    return resp.json()["token"]


def auth(token):
    return {"Authorization": f"Bearer {token}"}


class TestHealth:
    def test_lists_core_segments(self, served):
        client, _ = served
        body = client.get("/v1/health").json()
        assert body["status"] == "ok"
        for name in ("user_manual", "service_manual", "error_catalog"):
            assert name in body["segments"]
        assert body["embedder_spec_hash"]
        assert "USX-300" in body["device_models"]


class TestQuery:
    def test_valid_query_returns_citations(self, served):
        client, _ = served
        resp = client.post("/v1/query", json={"text": "how do I clean the transducer"})
        assert resp.status_code == 200
        body = resp.json()
        assert body["grounded"] is True
        assert isinstance(body["citations"], list) and body["citations"]
        assert body["answer_id"] and body["session_id"]

    def test_empty_body_is_400_with_code(self, served):
        client, _ = served
        resp = client.post("/v1/query", json={})
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "EmptyQuery"

    def test_anonymous_allowed_in_kiosk_mode(self, served):
        client, _ = served
        assert client.post("/v1/query", json={"text": "what does E-001 mean"}).status_code == 200

    def test_session_device_model_slot_persists(self, served):
        client, _ = served
        first = client.post(
            "/v1/query", json={"text": "run the self test", "device_model": "USX-300"}
        ).json()
        second = client.post(
            "/v1/query", json={"text": "run the self test", "session_id": first["session_id"]}
        ).json()
        assert second["session_id"] == first["session_id"]
        assert second["tool_payload"]["device_model"] == "USX-300"

    def test_unknown_fields_ignored(self, served):
        client, _ = served
        resp = client.post("/v1/query", json={"text": "how do I adjust gain", "frobnicate": 1})
        assert resp.status_code == 200


class TestTools:
    def test_error_code_endpoint(self, served):
        client, _ = served
        body = client.get("/v1/error-codes/e 001").json()
        assert body["status"] == "exact"
        assert body["entry"]["code"] == "E-001"

    def test_log_upload_multipart(self, served):
        client, _ = served
        log = open("desk_corpus/sample_device.log", "rb")
        resp = client.post("/v1/logs/analyze", files={"file": ("dev.log", log, "text/plain")})
        assert resp.status_code == 200
        body = resp.json()
        truth = json.loads(open("desk_corpus/sample_device.log.truth.json").read())
        assert body["total_lines"] == truth["total_lines"]
        assert body["parsed"] == truth["parsed"]

    def test_selftest_wizard_flow(self, served):
        client, _ = served
        snap = client.post("/v1/selftest/USX-300/start").json()
        sid = snap["session_id"]
        assert snap["state"] == "in_progress"
        assert snap["current_step"]["step_id"] == "st-01"
        # resume returns the same cursor
        assert client.get(f"/v1/selftest/{sid}").json()["cursor"] == 0
        last = None
        for _ in range(snap["total_steps"]):
            last = client.post(f"/v1/selftest/{sid}/advance", json={"result": "pass"}).json()
        assert last["state"] == "complete"
        assert last["report"]["counts"]["pass"] == snap["total_steps"]
        resp = client.post(f"/v1/selftest/{sid}/advance", json={"result": "pass"})
        assert resp.status_code == 409
        assert resp.json()["error"]["code"] == "SessionComplete"

    def test_selftest_unknown_model(self, served):
        client, _ = served
        resp = client.post("/v1/selftest/NOPE-1/start")
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "NoScriptForModel"

    def test_maintenance_plan_and_ics(self, served):
        client, _ = served
        plan = client.get("/v1/maintenance/USX-300/plan", params={"horizon_days": 90}).json()
        assert plan["events"]
        ics = client.get("/v1/maintenance/USX-300/plan.ics", params={"horizon_days": 90})
        assert ics.status_code == 200
        assert ics.headers["content-type"].startswith("text/calendar")
        assert ics.text.count("BEGIN:VEVENT") == len(plan["events"])


class TestForumApi:
    def test_write_requires_identity(self, served):
        client, _ = served
        resp = client.post("/v1/forum/posts", json={"title": "x", "body": "y"})
        assert resp.status_code == 401
        assert resp.json()["error"]["code"] == "InvalidToken"

    def test_full_forum_flow_with_promotion(self, served, tech_token):
        client, _ = served
        post = client.post(
            "/v1/forum/posts",
            json={"title": "Fan whine on boot", "body": "Rear fan whines for a minute.",
                  "device_model": "USX-300"},
            headers=auth(tech_token),
        ).json()
        reply = client.post(
            f"/v1/forum/posts/{post['post_id']}/replies",
            json={"body": "Replace the fan assembly; the bearing is drying out."},
            headers=auth(tech_token),
        ).json()
        # author accepts
        accept = client.post(
            f"/v1/forum/posts/{post['post_id']}/accept/{reply['reply_id']}",
            headers=auth(tech_token),
        )
        assert accept.status_code == 200

        # three distinct voters
        promoted = None
        for i in range(3):
            tok = client.post(
                "/v1/auth/token", json={"technician_id": f"voter-{i}"}, headers=ADMIN
            ).json()["token"]
            resp = client.post(
                f"/v1/forum/replies/{reply['reply_id']}/upvote", headers=auth(tok)
            ).json()
            promoted = resp.get("promoted_chunks") or promoted
        assert promoted, "reply should auto-promote at 3 votes + accepted"

        health = client.get("/v1/health").json()
        assert health["segments"].get("community", 0) >= 1

        listing = client.get("/v1/forum/posts").json()["posts"]
        assert any(p["post_id"] == post["post_id"] for p in listing)
        detail = client.get(f"/v1/forum/posts/{post['post_id']}").json()
        assert detail["replies"][0]["promoted"] is True

    def test_duplicate_vote_is_409(self, served, tech_token):
        client, _ = served
        post = client.post(
            "/v1/forum/posts",
            json={"title": "t", "body": "b", "device_model": "USX-300"},
            headers=auth(tech_token),
        ).json()
        reply = client.post(
            f"/v1/forum/posts/{post['post_id']}/replies",
            json={"body": "r"},
            headers=auth(tech_token),
        ).json()
        assert client.post(
            f"/v1/forum/replies/{reply['reply_id']}/upvote", headers=auth(tech_token)
        ).status_code == 200
        resp = client.post(
            f"/v1/forum/replies/{reply['reply_id']}/upvote", headers=auth(tech_token)
        )
        assert resp.status_code == 409
        assert resp.json()["error"]["code"] == "DuplicateVote"

    def test_non_author_accept_forbidden(self, served, tech_token):
        client, _ = served
        post = client.post(
            "/v1/forum/posts",
            json={"title": "t2", "body": "b2", "device_model": "USX-300"},
            headers=auth(tech_token),
        ).json()
        reply = client.post(
            f"/v1/forum/posts/{post['post_id']}/replies",
            json={"body": "r2"},
            headers=auth(tech_token),
        ).json()
        other = client.post(
            "/v1/auth/token", json={"technician_id": "other"}, headers=ADMIN
        ).json()["token"]
        resp = client.post(
            f"/v1/forum/posts/{post['post_id']}/accept/{reply['reply_id']}", headers=auth(other)
        )
        assert resp.status_code == 403
        assert resp.json()["error"]["code"] == "NotAuthorized"

    def test_feedback_on_answer(self, served, tech_token):
        client, _ = served
        answer = client.post("/v1/query", json={"text": "how do I store probes"}).json()
        resp = client.post(
            "/v1/feedback",
            json={"target": answer["answer_id"], "verdict": "correct"},
            headers=auth(tech_token),
        )
        assert resp.status_code == 201
        assert resp.json()["aggregate"]["correct"] == 1

    def test_feedback_unknown_target(self, served, tech_token):
        client, _ = served
        resp = client.post(
            "/v1/feedback", json={"target": "missing", "verdict": "correct"}, headers=auth(tech_token)
        )
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "UnknownTarget"


class TestPrivacy:
    def test_interaction_log_has_only_hashes(self, served):
        client, config = served
        resp = client.post("/v1/query", json={"text": "how do I clean the transducer"}).json()
        log_lines = open(f"{config.data_dir}/interactions.jsonl").read().splitlines()
        assert log_lines
        rec = json.loads(log_lines[-1])
        assert rec["session"] != resp["session_id"]
        assert resp["session_id"] not in json.dumps(rec)
        assert len(rec["session"]) == 16
        assert rec["intent"] and isinstance(rec["grounded"], bool)

    def test_expired_token_rejected(self, served):
        client, config = served
        tok = client.post(
            "/v1/auth/token", json={"technician_id": "t", "ttl_hours": -1}, headers=ADMIN
        ).json()["token"]
        resp = client.post("/v1/forum/posts", json={"title": "a", "body": "b"}, headers=auth(tok))
        assert resp.status_code == 401
        assert resp.json()["error"]["code"] == "Expired"


class TestDegradedAndKiosk:
    def test_degraded_without_stores(self, tmp_path):
        config = ServerConfig(data_dir=str(tmp_path / "empty"))
        app = create_app(config)
        with TestClient(app) as client:
            health = client.get("/v1/health").json()
            assert health["status"] == "degraded"
            resp = client.post("/v1/query", json={"text": "anything"})
            assert resp.status_code == 503
            assert resp.json()["error"]["code"] == "StoreUnavailable"

    def test_kiosk_off_requires_identity(self, desk_config, desk_deployment, tmp_path):
        shutil.copytree(desk_config.data_dir, tmp_path / "data")
        config = replace(
            desk_config, data_dir=str(tmp_path / "data"), kiosk_mode=False,
            admin_token="desk-admin-token",
        )
        app = create_app(config)
        with TestClient(app) as client:
            resp = client.post("/v1/query", json={"text": "how do I clean the transducer"})
            assert resp.status_code == 401
            ok = client.post(
                "/v1/query", json={"text": "how do I clean the transducer"}, headers=ADMIN
            )
            assert ok.status_code == 200
