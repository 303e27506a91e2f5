"""Binary container files and corpus ingestion.

File layout (integers little-endian, layer payloads MSB-first)::

    magic    4  b"SFDC"
    version  1  = 1
    variant  1  0 standard, 1 gamma
    lambda   1
    n        8
    n_layer  8  dynamic-layer length (standard) or common layer length (gamma)
    sigma    4
    sigma x (symbol u32, code length u8), canonical order
    layers, each padded to 8 bytes: the lambda-1 fixed layers then the
    dynamic layer (standard), or the lambda uniform layers (gamma)
"""

from __future__ import annotations

import io
import struct
import sys
from pathlib import Path

import numpy as np

from .bitlayers import BitLayer, words_for
from .gamma import GammaContainer
from .huffman import CodeTable, build_decode_tree
from .standard import SfdcContainer

MAGIC = b"SFDC"
VERSION = 1
HEADER = struct.Struct("<4sBBBQQI")
RECORD = struct.Struct("<IB")
VARIANTS = {"standard": 0, "gamma": 1}


class FormatError(ValueError):
    def __init__(self, msg: str, offset: int | None = None, layer: int | None = None):
        where = []
        if offset is not None:
            where.append(f"offset {offset}")
        if layer is not None:
            where.append(f"layer {layer}")
        super().__init__(msg + (f" ({', '.join(where)})" if where else ""))
        self.offset = offset
        self.layer = layer


def _symbol_code(sym) -> int:
    if isinstance(sym, str) and len(sym) == 1:
        return ord(sym)
    if isinstance(sym, (int, np.integer)) and 0 <= int(sym) < (1 << 32):
        return int(sym)
    raise ValueError(f"symbol {sym!r} cannot be stored as a 32-bit code point")


def _layers(cont) -> list[BitLayer]:
    if isinstance(cont, SfdcContainer):
        return list(cont.fixed_layers) + [cont.dynamic_layer]
    return list(cont.layers)


def file_size(lam: int, variant: str, n: int, n_layer: int, sigma: int) -> int:
    """Total bytes of a container file, from header fields alone."""
    if variant == "standard":
        payload = (lam - 1) * words_for(n) + words_for(n_layer)
    else:
        payload = lam * words_for(n_layer)
    return HEADER.size + sigma * RECORD.size + 8 * payload


def serialize(cont, sink) -> int:
    """Write ``cont`` to a binary stream (or path); returns the byte count."""
    if isinstance(sink, (str, Path)):
        with open(sink, "wb") as fh:
            return serialize(cont, fh)
    codes = cont.codes
    if not codes.is_canonical():
        raise ValueError("only canonical code tables can be stored as (symbol, length) records")
    variant = cont.variant
    n_layer = cont.n_dyn if variant == "standard" else cont.n_gamma
    parts = [HEADER.pack(MAGIC, VERSION, VARIANTS[variant], cont.lam, cont.n, n_layer, codes.sigma)]
    for sym, ell in zip(codes.symbols, codes.lengths):
        parts.append(RECORD.pack(_symbol_code(sym), int(ell)))
    for layer in _layers(cont):
        parts.append(layer.to_bytes())
    data = b"".join(parts)
    sink.write(data)
    return len(data)


def to_bytes(cont) -> bytes:
    buf = io.BytesIO()
    serialize(cont, buf)
    return buf.getvalue()


def _read_exact(source, k: int, offset: int, what: str, layer=None) -> bytes:
    data = source.read(k)
    if len(data) != k:
        raise FormatError(f"truncated {what}: wanted {k} bytes, got {len(data)}", offset + len(data), layer)
    return data


def deserialize(source):
    """Read a container written by :func:`serialize` from a stream, path or bytes."""
    if isinstance(source, (bytes, bytearray, memoryview)):
        return deserialize(io.BytesIO(bytes(source)))
    if isinstance(source, (str, Path)):
        with open(source, "rb") as fh:
            return deserialize(fh)
    head = _read_exact(source, HEADER.size, 0, "header")
    magic, version, variant, lam, n, n_layer, sigma = HEADER.unpack(head)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}", 0)
    if version != VERSION:
        raise FormatError(f"unsupported version {version}", 4)
    if variant not in (0, 1):
        raise FormatError(f"unknown variant {variant}", 5)
    if lam < 2:
        raise FormatError(f"invalid lambda {lam}", 6)
    if n < 1 or n_layer < n:
        raise FormatError(f"inconsistent lengths n={n}, layer length={n_layer}", 7)
    if sigma < 1:
        raise FormatError("empty code table", 23)
    off = HEADER.size
    raw = _read_exact(source, sigma * RECORD.size, off, "code table")
    symbols, lengths = [], []
    for k in range(sigma):
        sym, ell = RECORD.unpack_from(raw, k * RECORD.size)
        symbols.append(sym)
        lengths.append(ell)
    try:
        codes = CodeTable.canonical(symbols, lengths)
    except ValueError as exc:
        raise FormatError(f"invalid code table: {exc}", off) from None
    off += len(raw)
    if variant == 0:
        sizes = [n] * (lam - 1) + [n_layer]
    else:
        sizes = [n_layer] * lam
    layers = []
    for h, size in enumerate(sizes):
        nbytes = 8 * words_for(size)
        data = _read_exact(source, nbytes, off, "layer payload", h)
        layers.append(BitLayer.from_bytes(data, size).freeze())
        off += nbytes
    tree = build_decode_tree(codes)
    if variant == 0:
        return SfdcContainer(lam, n, layers[:-1], layers[-1], codes, tree)
    return GammaContainer(lam, n, layers, codes, tree)


def header_bits_per_symbol(path) -> float:
    """Layer bits per symbol as implied by a file header (padding excluded)."""
    with open(path, "rb") as fh:
        head = fh.read(HEADER.size)
    if len(head) != HEADER.size:
        raise FormatError("truncated header", len(head))
    magic, _v, variant, lam, n, n_layer, _s = HEADER.unpack(head)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}", 0)
    bits = (lam - 1) * n + n_layer if variant == 0 else lam * n_layer
    return bits / n


# ingestion -------------------------------------------------------------------

MODES = ("bytes", "utf8", "ints")


def ingest_text(src, mode: str = "bytes"):
    """Read a corpus as a symbol sequence.

    ``bytes``: a ``uint8`` array, one symbol per byte.  ``utf8``: a str.
    ``ints``: one non-negative integer per line, as an ``int64`` array.
    ``src`` is a path, ``-`` for stdin, or a binary stream.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
    if isinstance(src, (str, Path)):
        if str(src) == "-":
            data = sys.stdin.buffer.read()
        else:
            data = Path(src).read_bytes()
    else:
        data = src.read()
    if mode == "bytes":
        return np.frombuffer(data, dtype=np.uint8).copy()
    if mode == "utf8":
        return data.decode("utf-8")
    values = []
    for lineno, line in enumerate(data.decode("ascii", errors="replace").splitlines(), 1):
        tok = line.strip()
        if not tok:
            continue
        if not tok.isdigit():
            raise ValueError(f"line {lineno}: not a non-negative integer: {tok!r}")
        v = int(tok)
        if v >= 1 << 32:
            raise ValueError(f"line {lineno}: value {v} exceeds 32 bits")
        values.append(v)
    return np.array(values, dtype=np.int64)


def emit_text(seq, mode: str) -> bytes:
    """Inverse of :func:`ingest_text` for writing decoded output."""
    if mode == "bytes":
        return np.asarray(seq, dtype=np.uint8).tobytes()
    if mode == "utf8":
        if isinstance(seq, str):
            return seq.encode("utf-8")
        return "".join(chr(int(c)) for c in seq).encode("utf-8")
    return "".join(f"{int(v)}\n" for v in seq).encode("ascii")
