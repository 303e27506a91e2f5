"""Pattern search directly on the layers of a standard container.

A pattern is encoded on its own with the text's code table.  Inside an
occurrence the window characters' pending bits sit on top of any older
backlog, so over the first ``m`` dynamic positions they land exactly where
the standalone encoding put them; slots the pattern leaves idle may hold
backlog bits and are masked out by the blind-match layer ``X_B``.

Pattern characters whose last pending bit falls at or after ``m`` in the
standalone encoding are interleaved with the characters that follow the
window in the text, so their tails cannot be compared blindly.  After a
successful blind comparison those characters are confirmed by decoding
them from the text.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from . import _kernels as K
from .bitlayers import BitLayer
from .huffman import CodeTable, MissingSymbolError
from .standard import SfdcContainer, encode_with_log

MAX_Q = 16
_ALL = np.uint64(0xFFFFFFFFFFFFFFFF)


class VariantError(TypeError):
    """Search was asked to run on a container it does not support."""


@dataclass(eq=False)
class BlindPattern:
    m: int
    lam: int
    fixed_layers: list
    dynamic_layer: BitLayer
    blind_mask: BitLayer
    symbols: object
    indices: np.ndarray
    tail_start: int
    possible: bool = True

    @property
    def m_prime(self) -> int:
        return self.dynamic_layer.len_bits


@dataclass(eq=False)
class BucketTable:
    q: int
    offsets: np.ndarray
    values: np.ndarray

    def bucket(self, c: int) -> list[int]:
        return self.values[self.offsets[c] : self.offsets[c + 1]].tolist()


def _impossible(x, lam) -> BlindPattern:
    empty = BitLayer(0)
    m = len(x)
    return BlindPattern(m, lam, [], empty, empty, x, np.zeros(0, np.int64), m, possible=False)


def compile_pattern(x, codes: CodeTable, lam: int) -> BlindPattern:
    """Standalone layered encoding of ``x`` plus its blind-match mask.

    A pattern with a symbol outside ``codes`` cannot occur; it compiles to a
    pattern with ``possible=False`` instead of raising.
    """
    if len(x) == 0:
        raise ValueError("empty pattern")
    try:
        cont, log = encode_with_log(x, codes, lam)
    except MissingSymbolError:
        return _impossible(x, lam)
    m = cont.n
    mask = BitLayer(cont.n_dyn)
    last = np.full(m, -1, dtype=np.int64)
    for p, _h, pos in log:
        mask.write_bit(int(pos), 1)
        last[p] = pos
    late = np.flatnonzero(last >= m)
    tail_start = int(late[0]) if late.size else m
    idx = codes.to_indices(x).astype(np.int64)
    return BlindPattern(m, lam, cont.fixed_layers, cont.dynamic_layer, mask.freeze(), x, idx, tail_start)


def build_buckets(pat: BlindPattern, q: int) -> BucketTable:
    """``z[C]`` holds ``m - q - i`` for every offset ``i`` where ``X_0[i..i+q-1] = C``."""
    m = pat.m
    if not 1 <= q <= min(m, MAX_Q):
        raise ValueError(f"block width q={q} outside [1, {min(m, MAX_Q)}]")
    x0 = pat.fixed_layers[0] if pat.fixed_layers else BitLayer(m)
    blocks = np.array([x0.get_rblock(i, q) for i in range(m - q + 1)], dtype=np.int64)
    entries = m - q - np.arange(m - q + 1, dtype=np.int64)
    order = np.argsort(blocks, kind="stable")
    counts = np.bincount(blocks, minlength=1 << q)
    offsets = np.zeros((1 << q) + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    return BucketTable(q, offsets, entries[order])


# compiled verify and probe loop -------------------------------------------


@njit(cache=True, inline="always")
def _rblock(words, i, q):
    nw = words.shape[0]
    k = i >> 6
    s = i & 63
    mask = _ALL if q == 64 else (np.uint64(1) << np.uint64(q)) - np.uint64(1)
    w0 = words[k] if k < nw else np.uint64(0)
    if s + q <= 64:
        return (w0 >> np.uint64(64 - q - s)) & mask
    w1 = words[k + 1] if k + 1 < nw else np.uint64(0)
    return ((w0 << np.uint64(s + q - 64)) | (w1 >> np.uint64(128 - q - s))) & mask


@njit(cache=True, inline="always")
def _lblock(words, i, q):
    return _rblock(words, i, q) << np.uint64(64 - q)


@njit(cache=True, nogil=True)
def _verify(fixed, dyn, n, n_dyn, nf, pfixed, pdyn, pmask, m, tail_start, ptail, left, right, sym, i):
    nblocks = (m + 63) >> 6
    for h in range(nf):
        for b in range(nblocks):
            q = 64 if b < nblocks - 1 or m % 64 == 0 else m % 64
            if _lblock(fixed[h], i + 64 * b, q) != _lblock(pfixed[h], 64 * b, q):
                return False
    for b in range(nblocks):
        q = 64 if b < nblocks - 1 or m % 64 == 0 else m % 64
        t = _lblock(dyn, i + 64 * b, q) & _lblock(pmask, 64 * b, q)
        if t != _lblock(pdyn, 64 * b, q):
            return False
    if tail_start < m:
        k = m - tail_start
        out = np.empty(k, np.int64)
        delays = np.empty(k, np.int64)
        st = K._decode_standard_into(
            fixed, dyn, n, n_dyn, nf, left, right, sym, i + tail_start, i + m - 1, out, delays
        )
        if st != K.OK:
            return False
        for t in range(k):
            if out[t] != ptail[t]:
                return False
    return True


@njit(cache=True, nogil=True)
def _skip_search(fixed, dyn, n, n_dyn, nf, pfixed, pdyn, pmask, m, tail_start, ptail, left, right, sym,
                 q, offsets, values, j_first, j_last):
    found = np.empty(16, np.int64)
    nfound = 0
    step = m - q + 1
    j = j_first
    while j <= j_last:
        c = _rblock(fixed[0], j, q)
        for t in range(offsets[c], offsets[c + 1]):
            h = j - (m - q - values[t])
            if h < 0 or h > n - m:
                continue
            if _verify(fixed, dyn, n, n_dyn, nf, pfixed, pdyn, pmask, m, tail_start, ptail, left, right, sym, h):
                if nfound == found.shape[0]:
                    found = K._grow(found)
                found[nfound] = h
                nfound += 1
        j += step
    return found[:nfound].copy()


def _check_container(text) -> None:
    if not isinstance(text, SfdcContainer):
        raise VariantError("blind search needs a standard container")


def _pattern_arrays(pat: BlindPattern):
    nw = (pat.m + 63) >> 6
    pfixed = np.zeros((pat.lam - 1, nw), dtype=np.uint64)
    for h, layer in enumerate(pat.fixed_layers):
        pfixed[h, :] = layer.words
    return pfixed, pat.dynamic_layer.words, pat.blind_mask.words, pat.indices[pat.tail_start :].copy()


def _args(text: SfdcContainer, pat: BlindPattern):
    if pat.lam != text.lam:
        raise ValueError("pattern and text use different layer counts")
    pfixed, pdyn, pmask, ptail = _pattern_arrays(pat)
    t = text.tree
    return (text._fixed2d, text.dynamic_layer.words, text.n, text.n_dyn, text.lam - 1,
            pfixed, pdyn, pmask, pat.m, pat.tail_start, ptail, t.left, t.right, t.symbol)


def verify(text: SfdcContainer, pat: BlindPattern, i: int) -> bool:
    """True iff the pattern occurs at position ``i`` of the encoded text."""
    _check_container(text)
    if not 0 <= i <= text.n - pat.m:
        raise IndexError(f"position {i} outside [0, {text.n - pat.m}]")
    if not pat.possible:
        return False
    return bool(_verify(*_args(text, pat), int(i)))


def skip_search(text: SfdcContainer, pat: BlindPattern, q: int | None = None, threads: int = 1,
                buckets: BucketTable | None = None) -> list[int]:
    """Sorted start positions of every occurrence of the pattern."""
    _check_container(text)
    m, n = pat.m, text.n
    if not pat.possible or m > n:
        return []
    if buckets is None:
        buckets = build_buckets(pat, q or min(8, m))
    q = buckets.q
    args = _args(text, pat) + (q, buckets.offsets, buckets.values)
    step = m - q + 1
    first, last = m - q, n - 1
    nprobe = (last - first) // step + 1
    if threads <= 1 or nprobe < 2 * threads:
        hits = _skip_search(*args, first, last)
    else:
        per = -(-nprobe // threads)
        ranges = [(first + k * per * step, min(last, first + ((k + 1) * per - 1) * step)) for k in range(threads)]
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(lambda r: _skip_search(*args, r[0], r[1]), [r for r in ranges if r[0] <= last]))
        hits = np.concatenate(parts) if parts else np.zeros(0, np.int64)
    return sorted(set(hits.tolist()))


def search(text: SfdcContainer, x, q: int | None = None, threads: int = 1) -> list[int]:
    """Compile ``x`` against the text's code table and run :func:`skip_search`."""
    pat = compile_pattern(x, text.codes, text.lam)
    return skip_search(text, pat, q, threads)


# plain-text baseline --------------------------------------------------------


def _as_int_array(seq) -> np.ndarray:
    if isinstance(seq, np.ndarray):
        return seq.astype(np.int64, copy=False)
    if isinstance(seq, str):
        return np.frombuffer(seq.encode("utf-32-le"), dtype=np.uint32).astype(np.int64)
    if isinstance(seq, (bytes, bytearray)):
        return np.frombuffer(bytes(seq), dtype=np.uint8).astype(np.int64)
    return np.asarray(list(seq), dtype=np.int64)


@njit(cache=True)
def _plain_skip(y, x, xs, offsets, values):
    n = y.shape[0]
    m = x.shape[0]
    found = np.empty(16, np.int64)
    nfound = 0
    j = m - 1
    while j <= n - 1:
        c = np.searchsorted(xs, y[j])
        if c < xs.shape[0] and xs[c] == y[j]:
            for t in range(offsets[c], offsets[c + 1]):
                h = j - values[t]
                if h < 0 or h > n - m:
                    continue
                ok = True
                for k in range(m):
                    if y[h + k] != x[k]:
                        ok = False
                        break
                if ok:
                    if nfound == found.shape[0]:
                        found = K._grow(found)
                    found[nfound] = h
                    nfound += 1
        j += m
    return found[:nfound].copy()


def plain_skip_search(y, x) -> list[int]:
    """Skip-Search on the plain symbols: one bucket of pattern offsets per character."""
    yi, xi = _as_int_array(y), _as_int_array(x)
    m, n = xi.size, yi.size
    if m == 0:
        raise ValueError("empty pattern")
    if m > n:
        return []
    xs, inv = np.unique(xi, return_inverse=True)
    order = np.argsort(inv, kind="stable")
    offsets = np.zeros(xs.size + 1, dtype=np.int64)
    np.cumsum(np.bincount(inv, minlength=xs.size), out=offsets[1:])
    hits = _plain_skip(yi, xi, xs, offsets, order.astype(np.int64))
    return sorted(set(hits.tolist()))
