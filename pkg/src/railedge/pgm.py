"""Plain (P2) and binary (P5) PGM reading and writing.

Pixel values map to grid values as ``pixel / maxval``; writing quantizes to
8 bits with ``round(value * 255)``.
"""

import re

import numpy as np

from .validation import check_grid

_WHITESPACE = b" \t\n\r\v\f"


class PGMError(ValueError):
    """Malformed or unsupported PGM data."""


def _header_tokens(data, count, pos):
    tokens = []
    while len(tokens) < count:
        while pos < len(data) and data[pos] in _WHITESPACE:
            pos += 1
        if pos < len(data) and data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and data[pos] not in _WHITESPACE and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise PGMError("truncated PGM header")
        tokens.append(data[start:pos])
    return tokens, pos


def decode_pgm(data):
    """Decode PGM bytes into a float64 grid with values in [0, 1]."""
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise PGMError(f"not a PGM file (magic {magic!r})")
    tokens, pos = _header_tokens(data, 3, 2)
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise PGMError("non-integer PGM header field") from None
    if width < 1 or height < 1 or not 0 < maxval < 65536:
        raise PGMError(f"invalid PGM header: {width}x{height}, maxval {maxval}")

    n = width * height
    if magic == b"P5":
        pos += 1  # single whitespace byte after maxval
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        raw = data[pos:pos + n * dtype.itemsize]
        if len(raw) != n * dtype.itemsize:
            raise PGMError("truncated PGM pixel data")
        pixels = np.frombuffer(raw, dtype=dtype).astype(np.int64)
    else:
        body = re.sub(rb"#[^\r\n]*", b"", data[pos:]).split()
        if len(body) < n:
            raise PGMError("truncated PGM pixel data")
        try:
            pixels = np.array([int(v) for v in body[:n]], dtype=np.int64)
        except ValueError:
            raise PGMError("non-integer PGM pixel value") from None
    if pixels.max(initial=0) > maxval or pixels.min(initial=0) < 0:
        raise PGMError("PGM pixel value out of range")
    return pixels.reshape(height, width) / maxval


def encode_pgm(grid, binary=True):
    """Encode a [0, 1] grid as 8-bit PGM bytes (P5 when ``binary``, else P2)."""
    grid = check_grid(grid)
    pixels = np.clip(np.rint(grid * 255.0), 0, 255).astype(np.uint8)
    height, width = pixels.shape
    if binary:
        return f"P5\n{width} {height}\n255\n".encode("ascii") + pixels.tobytes()
    lines = [f"P2\n{width} {height}\n255"]
    lines += [" ".join(str(v) for v in row) for row in pixels]
    return ("\n".join(lines) + "\n").encode("ascii")


def read_pgm(path):
    with open(path, "rb") as fh:
        return decode_pgm(fh.read())


def write_pgm(path, grid, binary=True):
    with open(path, "wb") as fh:
        fh.write(encode_pgm(grid, binary=binary))
