"""Kernel backend selection.

The compiled extension is preferred; set CORPUSFORGE_PURE_PYTHON=1 to
force the pure-Python fallback (used by the benchmark and CI).
"""

import os

if os.environ.get("CORPUSFORGE_PURE_PYTHON"):
    from . import _fallback as _impl

    BACKEND = "python"
else:
    try:
        from . import _native as _impl  # type: ignore[attr-defined]

        BACKEND = "native"
    except ImportError:
        from . import _fallback as _impl

        BACKEND = "python"

levenshtein = _impl.levenshtein
indel_distance = _impl.indel_distance
sgns_train = _impl.sgns_train

__all__ = ["BACKEND", "levenshtein", "indel_distance", "sgns_train"]
