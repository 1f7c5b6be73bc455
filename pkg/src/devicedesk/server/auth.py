"""Bearer-token identity for forum writes and admin endpoints.

Tokens are random, stored only as salted SHA-256 hashes in a JSONL file, and
carry an expiry. Query endpoints stay anonymous in kiosk mode; the admin
token comes from the server config.
"""

from __future__ import annotations

import hashlib
import json
import secrets
import time
from pathlib import Path

from ..errors import Expired, InvalidToken, NotAuthorized


class TokenStore:
    def __init__(self, path: str | Path, salt: str):
        self.path = Path(path)
        self.salt = salt
        self._tokens: dict[str, dict] = {}
        if self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    rec = json.loads(line)
                    self._tokens[rec["token_hash"]] = rec

    def _hash(self, token: str) -> str:
        return hashlib.sha256(f"{self.salt}:{token}".encode()).hexdigest()

    def issue(self, technician_id: str, ttl_hours: float = 24 * 30) -> str:
        token = secrets.token_urlsafe(24)
        rec = {
            "token_hash": self._hash(token),
            "technician_id": technician_id,
            "expires_at": time.time() + ttl_hours * 3600,
        }
        self._tokens[rec["token_hash"]] = rec
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
        return token

    def authenticate(self, token: str) -> str:
        """Resolve a bearer token to a pseudonymous technician id."""
        rec = self._tokens.get(self._hash(token))
        if rec is None:
            raise InvalidToken("unknown token")
        if time.time() > rec["expires_at"]:
            raise Expired("token expired")
        return rec["technician_id"]


class Authenticator:
    def __init__(self, store: TokenStore, admin_token: str, kiosk_mode: bool):
        self.store = store
        self.admin_token = admin_token
        self.kiosk_mode = kiosk_mode

    def identify(self, bearer: str | None) -> str | None:
        """Optional identity: None for anonymous callers."""
        if not bearer:
            return None
        if self.admin_token and secrets.compare_digest(bearer, self.admin_token):
            return "admin"
        return self.store.authenticate(bearer)

    def require_identity(self, bearer: str | None) -> str:
        if not bearer:
            raise InvalidToken("authentication required")
        return self.identify(bearer)

    def require_admin(self, bearer: str | None) -> str:
        if not bearer or not self.admin_token or not secrets.compare_digest(bearer, self.admin_token):
            raise NotAuthorized("admin token required")
        return "admin"
