# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled LZW codec.

Byte-for-byte identical stream format to `_lzw_py`; see that module for
the format notes.  The encoder uses a flat child table indexed by
(prefix_code, symbol) so the inner loop is a single array lookup.
"""

from libc.stdlib cimport free, malloc, realloc
from libc.string cimport memset

from cpython.bytes cimport PyBytes_FromStringAndSize

cdef enum:
    CLEAR = 256
    END = 257
    FIRST = 258
    MIN_WIDTH = 9
    MAX_WIDTH = 12
    MAX_CODES = 4096


def lzw_compress(payload):
    cdef const unsigned char[:] data = payload
    cdef Py_ssize_t n = data.shape[0]
    cdef Py_ssize_t out_cap = 2 * n + 64
    cdef unsigned char *out = <unsigned char *> malloc(out_cap)
    cdef int *children = <int *> malloc(MAX_CODES * 256 * sizeof(int))
    cdef int *used = <int *> malloc(MAX_CODES * sizeof(int))
    if out == NULL or children == NULL or used == NULL:
        free(out)
        free(children)
        free(used)
        raise MemoryError()

    cdef Py_ssize_t out_len = 0
    cdef unsigned long long acc = 0
    cdef int nbits = 0
    cdef int width = MIN_WIDTH
    cdef int next_code = FIRST
    cdef int wcode = -1
    cdef int child, key, k
    cdef unsigned char sym
    cdef Py_ssize_t i

    memset(children, 0xFF, MAX_CODES * 256 * sizeof(int))

    try:
        for i in range(n):
            sym = data[i]
            if wcode < 0:
                wcode = sym
                continue
            key = (wcode << 8) | sym
            child = children[key]
            if child >= 0:
                wcode = child
                continue
            acc = (acc << width) | <unsigned int> wcode
            nbits += width
            while nbits >= 8:
                nbits -= 8
                out[out_len] = <unsigned char> ((acc >> nbits) & 0xFF)
                out_len += 1
            children[key] = next_code
            used[next_code - FIRST] = key
            next_code += 1
            if next_code == (1 << width) and width < MAX_WIDTH:
                width += 1
            elif next_code == MAX_CODES:
                acc = (acc << width) | CLEAR
                nbits += width
                while nbits >= 8:
                    nbits -= 8
                    out[out_len] = <unsigned char> ((acc >> nbits) & 0xFF)
                    out_len += 1
                # Clear only the slots this generation touched.
                for k in range(next_code - FIRST):
                    children[used[k]] = -1
                next_code = FIRST
                width = MIN_WIDTH
            wcode = sym

        if wcode >= 0:
            acc = (acc << width) | <unsigned int> wcode
            nbits += width
            while nbits >= 8:
                nbits -= 8
                out[out_len] = <unsigned char> ((acc >> nbits) & 0xFF)
                out_len += 1
        if next_code == (1 << width) - 1 and width < MAX_WIDTH:
            width += 1
        acc = (acc << width) | END
        nbits += width
        while nbits >= 8:
            nbits -= 8
            out[out_len] = <unsigned char> ((acc >> nbits) & 0xFF)
            out_len += 1
        if nbits:
            out[out_len] = <unsigned char> ((acc << (8 - nbits)) & 0xFF)
            out_len += 1
        return PyBytes_FromStringAndSize(<char *> out, out_len)
    finally:
        free(out)
        free(children)
        free(used)


def lzw_decompress(data):
    cdef const unsigned char[:] src = data
    cdef Py_ssize_t n = src.shape[0]
    cdef Py_ssize_t out_cap = 4 * n + 64
    cdef unsigned char *out = <unsigned char *> malloc(out_cap)
    cdef int *prefix = <int *> malloc(MAX_CODES * sizeof(int))
    cdef unsigned char *suffix = <unsigned char *> malloc(MAX_CODES)
    cdef unsigned char *stack = <unsigned char *> malloc(MAX_CODES + 1)
    if out == NULL or prefix == NULL or suffix == NULL or stack == NULL:
        free(out)
        free(prefix)
        free(suffix)
        free(stack)
        raise MemoryError()

    cdef Py_ssize_t out_len = 0
    cdef unsigned long long acc = 0
    cdef int nbits = 0
    cdef int width = MIN_WIDTH
    cdef int next_code = FIRST
    cdef int prev = -1
    cdef int code, cur, limit
    cdef unsigned char first_byte = 0
    cdef Py_ssize_t pos = 0, top, k
    cdef unsigned char *grown

    try:
        while True:
            while nbits < width:
                if pos >= n:
                    raise ValueError("truncated LZW stream (no end-of-stream code)")
                acc = (acc << 8) | src[pos]
                pos += 1
                nbits += 8
            nbits -= width
            code = <int> ((acc >> nbits) & ((1 << width) - 1))
            acc &= (1 << nbits) - 1

            if code == END:
                return PyBytes_FromStringAndSize(<char *> out, out_len)
            if code == CLEAR:
                next_code = FIRST
                width = MIN_WIDTH
                prev = -1
                continue

            # With no pending prefix only literals are valid; otherwise the
            # not-yet-added entry (code == next_code) is also allowed.
            limit = next_code + 1 if prev >= 0 else 256
            if code >= limit:
                raise ValueError("corrupt LZW stream: code %d out of range" % code)

            # Expand `code` (or the pending KwKwK entry) onto the stack.
            top = 0
            cur = code
            if cur == next_code:  # entry not yet added: prev + prev[0]
                stack[top] = first_byte
                top += 1
                cur = prev
            while cur >= FIRST:
                stack[top] = suffix[cur]
                top += 1
                cur = prefix[cur]
            stack[top] = <unsigned char> cur
            top += 1
            first_byte = <unsigned char> cur

            if out_len + top > out_cap:
                out_cap = 2 * (out_len + top) + 64
                grown = <unsigned char *> realloc(out, out_cap)
                if grown == NULL:
                    raise MemoryError()
                out = grown
            for k in range(top):
                out[out_len] = stack[top - 1 - k]
                out_len += 1

            if prev >= 0 and next_code < MAX_CODES:
                prefix[next_code] = prev
                suffix[next_code] = first_byte
                next_code += 1
                if next_code == (1 << width) - 1 and width < MAX_WIDTH:
                    width += 1
            prev = code
    finally:
        free(out)
        free(prefix)
        free(suffix)
        free(stack)
