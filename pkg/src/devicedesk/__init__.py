"""devicedesk: offline-first diagnostic support for biomedical equipment
technicians — segmented vector retrieval over technical manuals, diagnostic
tools (error codes, logs, self-tests, maintenance), and a technician forum
feeding a community knowledge segment."""

__version__ = "0.1.0"
