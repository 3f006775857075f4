"""Pure-Python LZW codec (fallback when the C extension is unavailable).

Stream format, shared bit-for-bit with the compiled implementation:

- 8-bit symbols; code 256 clears the dictionary, 257 ends the stream,
  dynamic entries start at 258.
- Code width grows 9 -> 12 bits.  The encoder widens after the dictionary
  add that fills the current width (next_code == 1 << width); the decoder,
  whose dictionary trails the encoder's by one entry, widens at
  next_code == (1 << width) - 1.  The end-of-stream code is emitted at the
  decoder's view of the width, since no dictionary add precedes it.
- When the dictionary reaches 4096 entries the encoder emits a clear code
  and resets to 9-bit codes.
- Codes are packed most-significant-bit first; the final byte is padded
  with zero bits.
"""

from __future__ import annotations

CLEAR = 256
END = 257
FIRST = 258
MIN_WIDTH = 9
MAX_WIDTH = 12
MAX_CODES = 1 << MAX_WIDTH


class _BitWriter:
    __slots__ = ("out", "acc", "nbits")

    def __init__(self):
        self.out = bytearray()
        self.acc = 0
        self.nbits = 0

    def write(self, code: int, width: int) -> None:
        self.acc = (self.acc << width) | code
        self.nbits += width
        while self.nbits >= 8:
            self.nbits -= 8
            self.out.append((self.acc >> self.nbits) & 0xFF)
        self.acc &= (1 << self.nbits) - 1

    def finish(self) -> bytes:
        if self.nbits:
            self.out.append((self.acc << (8 - self.nbits)) & 0xFF)
            self.acc = 0
            self.nbits = 0
        return bytes(self.out)


def lzw_compress(payload: bytes) -> bytes:
    writer = _BitWriter()
    table: dict[int, int] = {}
    next_code = FIRST
    width = MIN_WIDTH

    wcode = -1
    for sym in payload:
        if wcode < 0:
            wcode = sym
            continue
        key = (wcode << 8) | sym
        code = table.get(key, -1)
        if code >= 0:
            wcode = code
            continue
        writer.write(wcode, width)
        table[key] = next_code
        next_code += 1
        if next_code == (1 << width) and width < MAX_WIDTH:
            width += 1
        elif next_code == MAX_CODES:
            writer.write(CLEAR, width)
            table.clear()
            next_code = FIRST
            width = MIN_WIDTH
        wcode = sym

    if wcode >= 0:
        writer.write(wcode, width)
    if next_code == (1 << width) - 1 and width < MAX_WIDTH:
        width += 1
    writer.write(END, width)
    return writer.finish()


def lzw_decompress(data: bytes) -> bytes:
    out = bytearray()
    strings: list[bytes] = [bytes([i]) for i in range(256)] + [b"", b""]
    next_code = FIRST
    width = MIN_WIDTH
    prev: bytes | None = None

    acc = 0
    nbits = 0
    pos = 0
    n = len(data)

    while True:
        while nbits < width:
            if pos >= n:
                raise ValueError("truncated LZW stream (no end-of-stream code)")
            acc = (acc << 8) | data[pos]
            pos += 1
            nbits += 8
        nbits -= width
        code = (acc >> nbits) & ((1 << width) - 1)
        acc &= (1 << nbits) - 1

        if code == END:
            return bytes(out)
        if code == CLEAR:
            strings = strings[:FIRST]
            next_code = FIRST
            width = MIN_WIDTH
            prev = None
            continue

        if code < len(strings) and (code < CLEAR or code >= FIRST):
            s = strings[code]
        elif code == next_code and prev is not None:
            s = prev + prev[:1]
        else:
            raise ValueError(f"corrupt LZW stream: code {code} out of range")
        out += s

        if prev is not None and next_code < MAX_CODES:
            strings.append(prev + s[:1])
            next_code += 1
            if next_code == (1 << width) - 1 and width < MAX_WIDTH:
                width += 1
        prev = s
