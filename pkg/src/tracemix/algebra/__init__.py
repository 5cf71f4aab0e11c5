"""BN254 pairing groups with a compiled core and a pure-Python fallback.

The backend is picked once, at import time.  ``TRACEMIX_BACKEND`` may be set
to ``native`` (fail if the extension is missing), ``python`` (never load the
extension) or ``auto`` (default: native when available).

Both backends expose the same classes and produce identical bytes for every
element, so transcripts never depend on which one wrote them.
"""

import os

from . import purepy

_requested = os.environ.get("TRACEMIX_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "native", "python"):
    raise ImportError(f"TRACEMIX_BACKEND must be auto, native or python, not {_requested!r}")

_impl = purepy
if _requested != "python":
    try:
        from . import _native as _impl  # noqa: F811
    except ImportError:
        if _requested == "native":
            raise
        _impl = purepy

G1 = _impl.G1
G2 = _impl.G2
GT = _impl.GT
pairing = _impl.pairing
multi_pairing = _impl.multi_pairing
g1_multi_exp = _impl.g1_multi_exp
g2_multi_exp = _impl.g2_multi_exp
gt_multi_exp = _impl.gt_multi_exp
BACKEND = _impl.BACKEND

# group order and base field characteristic
Q = purepy.R
P = purepy.P
G1_BYTES = purepy.G1_BYTES
G2_BYTES = purepy.G2_BYTES
GT_BYTES = purepy.GT_BYTES


def g2_from_bytes_cleared(data):
    """Map 64 arbitrary twist-point bytes into G2 by cofactor clearing."""
    pt = purepy.g2_from_bytes_cleared(data)
    return G2.from_bytes(pt.to_bytes())


def native_available():
    try:
        from . import _native  # noqa: F401
    except ImportError:
        return False
    return True


__all__ = [
    "G1", "G2", "GT", "pairing", "multi_pairing", "g1_multi_exp", "g2_multi_exp",
    "gt_multi_exp", "BACKEND", "Q", "P", "G1_BYTES", "G2_BYTES", "GT_BYTES",
    "g2_from_bytes_cleared", "native_available",
]
