"""Shared fixtures: the ingested desk corpus and its answer pipeline."""

from pathlib import Path

import pytest

from devicedesk.rag.pipeline import RagPipeline
from devicedesk.server.config import ServerConfig
from devicedesk.server.ingest import ingest

DESK_DIR = Path(__file__).resolve().parents[1] / "desk_corpus"


@pytest.fixture(scope="session")
def desk_config(tmp_path_factory) -> ServerConfig:
    config = ServerConfig.from_file(DESK_DIR / "desk.conf")
    config.data_dir = str(tmp_path_factory.mktemp("desk-data"))
    return config


@pytest.fixture(scope="session")
def desk_deployment(desk_config):
    deployment, report = ingest(desk_config.manifest, desk_config)
    assert report.documents == 15
    return deployment


@pytest.fixture(scope="session")
def desk_pipeline(desk_config, desk_deployment) -> RagPipeline:
    return RagPipeline(
        desk_deployment,
        tau_ground=desk_config.tau_ground,
        default_k=desk_config.default_k,
    )
