"""Compression primitives behind the algorithmic complexity measures.

`lzw_compress`/`lzw_decompress` resolve to the compiled extension when it
is importable, otherwise to the pure-Python twin (same stream, slower).
Set ARTCOMPLEXITY_PURE_PYTHON=1 to force the fallback, e.g. for
benchmarking one against the other.
"""

from __future__ import annotations

import os

from . import _lzw_py

if os.environ.get("ARTCOMPLEXITY_PURE_PYTHON"):
    _impl = _lzw_py
else:
    try:
        from . import _lzwc as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _lzw_py

lzw_compress = _impl.lzw_compress
lzw_decompress = _impl.lzw_decompress

# Stamped into cache fingerprints and reports; bump when stream formats change.
CODEC_VERSION = "lzw-v9-12/dct8-rle-v1"


def lzw_backend() -> str:
    """Name of the active LZW implementation ('c' or 'python')."""
    return "c" if _impl.__name__.endswith("_lzwc") else "python"


from .lossy import LossyCodecParams, lossy_encode, lossy_encode_blob  # noqa: E402

__all__ = [
    "CODEC_VERSION",
    "LossyCodecParams",
    "lossy_encode",
    "lossy_encode_blob",
    "lzw_backend",
    "lzw_compress",
    "lzw_decompress",
]
