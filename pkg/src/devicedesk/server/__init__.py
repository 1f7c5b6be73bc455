"""HTTP service, configuration, ingestion, auth, and interaction logging."""

from .app import create_app
from .config import ServerConfig
from .ingest import IngestReport, ingest, load_deployment

__all__ = ["IngestReport", "ServerConfig", "create_app", "ingest", "load_deployment"]
