"""Server configuration: a flat key = value file.

Unknown keys are rejected (they are usually typos); every key has a default
so a minimal config is just ``data_dir = /var/lib/devicedesk``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

from ..embedding import EmbedderSpec
from ..vecstore import HnswParams


@dataclass
class ServerConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8470
    data_dir: str = "data"
    manifest: str = ""

    embedder_provider: str = "local_hashed_ngram"
    embedder_dimension: int = 4096
    ngram_min: int = 3
    ngram_max: int = 5
    embedder_seed: int = 0

    hnsw_m: int = 16
    hnsw_ef_construction: int = 200
    hnsw_ef_search: int = 512
    hnsw_level_seed: int = 0

    tau_intent: float = 0.15
    tau_ground: float = 0.18
    default_k: int = 5

    kiosk_mode: bool = True
    admin_token: str = ""
    log_salt: str = "devicedesk"
    session_idle_minutes: int = 120

    promotion_min_votes: int = 3
    promotion_require_accepted: bool = True

    corpus_language: str = "en"
    default_model: str = ""
    language_profile_dir: str = ""
    exemplar_path: str = ""
    selftest_dir: str = ""
    maintenance_profile_dir: str = ""
    eval_cases_path: str = ""
    ui_dir: str = ""

    generation_provider: str = "extractive_local"
    remote_llm_endpoint: str = ""
    remote_llm_credential: str = ""
    remote_llm_timeout: float = 10.0
    remote_embed_endpoint: str = ""
    remote_embed_credential: str = ""

    def __post_init__(self):
        for name in ("tau_intent", "tau_ground"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise ValueError(f"{name} must be within [0, 1], got {value}")
        if self.default_k < 1:
            raise ValueError("default_k must be >= 1")

    @classmethod
    def from_file(cls, path: str | Path) -> "ServerConfig":
        path = Path(path)
        known = {f.name: f.type for f in fields(cls)}
        raw: dict = {}
        for line_no, line in enumerate(path.read_text(encoding="utf-8").split("\n"), 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ValueError(f"{path}:{line_no}: expected 'key = value'")
            key, _, value = stripped.partition("=")
            key, value = key.strip(), value.strip()
            if key not in known:
                raise ValueError(f"{path}:{line_no}: unknown config key {key!r}")
            raw[key] = value
        kwargs = {}
        for f in fields(cls):
            if f.name not in raw:
                continue
            value = raw[f.name]
            if f.type == "int":
                kwargs[f.name] = int(value)
            elif f.type == "float":
                kwargs[f.name] = float(value)
            elif f.type == "bool":
                kwargs[f.name] = value.lower() in ("1", "true", "yes", "on")
            else:
                kwargs[f.name] = value
        cfg = cls(**kwargs)
        # relative paths resolve against the config file location
        base = path.parent
        for name in (
            "data_dir",
            "manifest",
            "language_profile_dir",
            "exemplar_path",
            "selftest_dir",
            "maintenance_profile_dir",
            "eval_cases_path",
            "ui_dir",
        ):
            value = getattr(cfg, name)
            if value and not Path(value).is_absolute():
                setattr(cfg, name, str((base / value).resolve()))
        return cfg

    def embedder_spec(self) -> EmbedderSpec:
        return EmbedderSpec(
            provider=self.embedder_provider,
            dimension=self.embedder_dimension,
            ngram_min=self.ngram_min,
            ngram_max=self.ngram_max,
            seed=self.embedder_seed,
        )

    def hnsw_params(self) -> HnswParams:
        return HnswParams(
            M=self.hnsw_m,
            ef_construction=self.hnsw_ef_construction,
            ef_search=self.hnsw_ef_search,
            level_seed=self.hnsw_level_seed,
        )
