"""Census hot kernels: compiled core if available, numpy fallback otherwise.

Set ``GAUGEORBITS_PURE=1`` to force the fallback.  Both implementations are
bit-identical on the same inputs; `benchmarks/bench_kernels.py` compares
their speed.
"""

from __future__ import annotations

import os

from gaugeorbits._kernels import fallback as _fallback

if os.environ.get("GAUGEORBITS_PURE"):
    _impl = _fallback
else:
    try:
        from gaugeorbits._kernels import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _fallback

BACKEND = _impl.BACKEND_NAME
tuple_masks = _impl.tuple_masks
su2_classify = _impl.su2_classify

__all__ = ["BACKEND", "tuple_masks", "su2_classify"]
