"""Backend selection for the cost-engine scans.

The compiled extension is used when it was built; otherwise the numpy twin.
Set ``ROTFORGE_KERNELS=python`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("ROTFORGE_KERNELS", "").lower() != "python":
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

mek_candidates = _impl.mek_candidates
rotation_candidates = _impl.rotation_candidates


def backends() -> dict:
    """Every importable backend by name, for benchmarks and cross-checks."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        return out
    out["cython"] = _compiled
    return out
