"""Hot numeric kernels with a compiled core and a NumPy fallback.

The compiled extension (``_fast``, built from Cython) is preferred when
importable; otherwise the NumPy twins in ``_pure`` take over. Set
``TIMBREID_KERNELS=pure`` or ``=compiled`` to force a backend.
"""

from __future__ import annotations

import os

from . import _pure

_forced = os.environ.get("TIMBREID_KERNELS", "").strip().lower()
if _forced not in ("", "pure", "compiled"):
    raise ImportError(f"TIMBREID_KERNELS must be 'pure' or 'compiled', got {_forced!r}")

if _forced == "pure":
    _fast = None
else:
    try:
        from . import _fast
    except ImportError:
        if _forced == "compiled":
            raise ImportError(
                "TIMBREID_KERNELS=compiled but the extension is not built; "
                "run `pip install -e . --no-build-isolation` or unset the variable"
            ) from None
        _fast = None

_impl = _fast if _fast is not None else _pure
BACKEND = "compiled" if _fast is not None else "pure"

lpc_descent = _impl.lpc_descent
svm_fit = _impl.svm_fit
