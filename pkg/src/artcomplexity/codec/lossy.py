"""Block-DCT lossy codec with a [0, 1] quality knob.

8x8 orthonormal DCT of the 8-bit luminance plane, quantized by the
conventional base luminance table scaled by the quality mapping
(q100 = round(100*quality); scale = 5000/q100 below 50 else 200 - 2*q100;
entry = clamp(round(base*scale/100), 1, 255)).  Quantized coefficients are
zig-zag scanned, run-length coded and LZW-compressed for the byte size;
the reconstruction comes from dequantizing the same coefficients.  Not an
interchange format: sizes and reconstructions only need to be
deterministic and comparable within this library.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np
from scipy import fft

from ..errors import InvalidParameterError
from ..image import GrayImage

_MAGIC = b"ACX1"
_EOB = 0xFF

BASE_LUMA_QUANT = np.array(
    [
        [16, 11, 10, 16, 24, 40, 51, 61],
        [12, 12, 14, 19, 26, 58, 60, 55],
        [14, 13, 16, 24, 40, 57, 69, 56],
        [14, 17, 22, 29, 51, 87, 80, 62],
        [18, 22, 37, 56, 68, 109, 103, 77],
        [24, 35, 55, 64, 81, 104, 113, 92],
        [49, 64, 78, 87, 103, 121, 120, 101],
        [72, 92, 95, 98, 112, 100, 103, 99],
    ],
    dtype=np.float64,
)


def _zigzag_order() -> np.ndarray:
    def key(i):
        r, c = divmod(i, 8)
        d = r + c
        return (d, r if d % 2 else -r)

    return np.array(sorted(range(64), key=key), dtype=np.intp)


ZIGZAG = _zigzag_order()


@dataclass(frozen=True)
class LossyCodecParams:
    """Quality in (0, 1]; lower means stronger compression."""

    quality: float = 0.75

    def __post_init__(self):
        if not 0.0 < self.quality <= 1.0:
            raise InvalidParameterError(f"quality must lie in (0, 1], got {self.quality}")

    @property
    def q100(self) -> int:
        return max(1, int(round(100.0 * self.quality)))


def quant_table(params: LossyCodecParams) -> np.ndarray:
    q100 = params.q100
    scale = 5000.0 / q100 if q100 < 50 else 200.0 - 2.0 * q100
    table = np.floor(BASE_LUMA_QUANT * scale / 100.0 + 0.5)
    return np.clip(table, 1.0, 255.0)


def _append_varint(out: bytearray, value: int) -> None:
    u = (value << 1) ^ (value >> 63)
    while u >= 0x80:
        out.append((u & 0x7F) | 0x80)
        u >>= 7
    out.append(u)


def _block_transform(img: GrayImage) -> tuple[np.ndarray, int, int]:
    """Level-shifted 8-bit plane cut into 8x8 blocks, edge-padded."""
    plane = np.rint(img.pixels * 255.0) - 128.0
    h, w = plane.shape
    pad_h = (-h) % 8
    pad_w = (-w) % 8
    if pad_h or pad_w:
        plane = np.pad(plane, ((0, pad_h), (0, pad_w)), mode="edge")
    nby, nbx = plane.shape[0] // 8, plane.shape[1] // 8
    blocks = plane.reshape(nby, 8, nbx, 8).transpose(0, 2, 1, 3)
    return fft.dctn(blocks, axes=(2, 3), norm="ortho"), nby, nbx


def _entropy_stage(quantized: np.ndarray, width: int, height: int, q100: int) -> bytes:
    """Serialize zig-zag scanned blocks as DC deltas plus AC run/value pairs."""
    from . import lzw_compress

    zz = quantized.reshape(-1, 64)[:, ZIGZAG].astype(np.int64)
    body = bytearray()
    prev_dc = 0
    for row in zz.tolist():
        _append_varint(body, row[0] - prev_dc)
        prev_dc = row[0]
        run = 0
        for coeff in row[1:]:
            if coeff == 0:
                run += 1
            else:
                body.append(run)
                _append_varint(body, coeff)
                run = 0
        body.append(_EOB)
    header = _MAGIC + struct.pack("<IIB", width, height, q100)
    return header + lzw_compress(bytes(body))


def lossy_encode_blob(img: GrayImage, params: LossyCodecParams) -> tuple[bytes, GrayImage]:
    """Encoded byte stream plus the decoded reconstruction."""
    table = quant_table(params)
    coeffs, nby, nbx = _block_transform(img)
    quantized = np.rint(coeffs / table)
    blob = _entropy_stage(quantized, img.width, img.height, params.q100)

    recon = fft.idctn(quantized * table, axes=(2, 3), norm="ortho")
    recon = recon.transpose(0, 2, 1, 3).reshape(nby * 8, nbx * 8)
    recon = (recon[: img.height, : img.width] + 128.0) / 255.0
    return blob, GrayImage(np.clip(recon, 0.0, 1.0))


def lossy_encode(img: GrayImage, params: LossyCodecParams) -> tuple[int, GrayImage]:
    """Encoded size in bytes and the reconstruction, per the codec above."""
    blob, recon = lossy_encode_blob(img, params)
    return len(blob), recon
