"""Select the compiled core when available, else the numpy fallback.

Set ``PANELHET_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _core_py

if os.environ.get("PANELHET_PURE_PYTHON", "") not in ("", "0"):
    core = _core_py
    BACKEND = "python"
else:
    try:
        from . import _core as core  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        core = _core_py
        BACKEND = "python"


def available_backends() -> dict:
    out = {"python": _core_py}
    try:
        from . import _core  # type: ignore[attr-defined]

        out["cython"] = _core
    except ImportError:
        pass
    return out
