"""Backend selection for the Newton kernel.

The compiled extension is preferred when importable; MUBFORGE_BACKEND=python
or =cython forces a choice (raising if the forced backend is unavailable).
"""

from __future__ import annotations

import os

from . import _kernels_py

_forced = os.environ.get("MUBFORGE_BACKEND", "").strip().lower()

if _forced == "python":
    _impl = _kernels_py
elif _forced == "cython":
    from . import _kernels_cy as _impl  # raises ImportError if not built
else:
    try:
        from . import _kernels_cy as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND
run_newton = _impl.run_newton


def available_backends():
    out = {"python": _kernels_py.run_newton}
    try:
        from . import _kernels_cy

        out["cython"] = _kernels_cy.run_newton
    except ImportError:
        pass
    return out
