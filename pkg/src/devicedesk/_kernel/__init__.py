"""Hot-kernel backend selection.

The compiled extension (``_hot``, built by setup.py) is preferred; the numpy
fallback is functionally equivalent and is used automatically when the
extension was not built. Set DEVICEDESK_KERNEL=python to force the fallback
(used by the benchmark and parity tests).
"""

import os

from . import pyfallback

if os.environ.get("DEVICEDESK_KERNEL", "").lower() == "python":
    _impl = pyfallback
else:
    try:
        from . import _hot as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = pyfallback

BACKEND = _impl.BACKEND
ngram_hashes = _impl.ngram_hashes
score_rows = _impl.score_rows
search_layer = _impl.search_layer
select_heuristic = _impl.select_heuristic
link_backlinks = _impl.link_backlinks


def load_backend(name: str):
    """Explicitly fetch one backend module ("cython" or "python")."""
    if name == "python":
        return pyfallback
    from . import _hot

    return _hot
