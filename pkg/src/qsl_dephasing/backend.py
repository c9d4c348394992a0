"""Selects the batch-evaluation kernel at import time.

The compiled Cython extension is preferred when importable; the
pure-numpy twin is the fallback.  Set QSL_DEPHASING_BACKEND=python or
=compiled to force a choice (forcing `compiled` without the extension
raises immediately rather than degrading silently).
"""

from __future__ import annotations

import os

from . import _kernels_py

_FORCED = os.environ.get("QSL_DEPHASING_BACKEND", "auto").lower()

compiled_available = False
if _FORCED != "python":
    try:
        from . import _kernels_cy  # type: ignore[attr-defined]

        compiled_available = True
    except ImportError:
        if _FORCED == "compiled":
            raise ImportError(
                "QSL_DEPHASING_BACKEND=compiled but the extension is not built"
            )

if compiled_available:
    thermal_eval = _kernels_cy.thermal_eval
    BACKEND_NAME = "compiled"
else:
    thermal_eval = _kernels_py.thermal_eval
    BACKEND_NAME = "python"


def backend_name() -> str:
    return BACKEND_NAME
