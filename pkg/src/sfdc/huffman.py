"""Frequency counting, canonical Huffman codes and the prefix-code tree."""

from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

MAX_CODE_LENGTH = 64


class MissingSymbolError(KeyError):
    """A symbol has no code-word in the table."""


class PrefixError(ValueError):
    """A code table is not prefix-free."""


def _sort_key(sym):
    # mixed-type alphabets fall back to repr ordering
    return (type(sym).__name__, sym) if isinstance(sym, (int, str, bytes)) else ("~", repr(sym))


@dataclass(frozen=True)
class FrequencyTable:
    counts: dict
    n: int

    @property
    def sigma(self) -> int:
        return len(self.counts)

    def relative(self, sym) -> float:
        return self.counts[sym] / self.n


def count_frequencies(text) -> FrequencyTable:
    """Absolute symbol counts of ``text`` (a str, sequence or integer array)."""
    if isinstance(text, np.ndarray):
        if text.size == 0:
            raise ValueError("cannot count frequencies of an empty text")
        if text.dtype.kind in "ui" and text.size and int(text.min()) >= 0 and int(text.max()) < (1 << 20):
            bc = np.bincount(text.astype(np.int64, copy=False))
            nz = np.flatnonzero(bc)
            counts = {int(s): int(bc[s]) for s in nz}
        else:
            vals, cnt = np.unique(text, return_counts=True)
            counts = {v.item(): int(c) for v, c in zip(vals, cnt)}
        return FrequencyTable(counts, int(text.size))
    counts = Counter(text)
    if not counts:
        raise ValueError("cannot count frequencies of an empty text")
    return FrequencyTable(dict(counts), sum(counts.values()))


@dataclass(frozen=True, eq=False)
class CodeTable:
    """Symbol -> code-word map.

    ``symbols`` is the table order (canonical order for Huffman tables);
    ``values[k]`` holds the code-word of ``symbols[k]`` as an integer whose
    ``lengths[k]`` low bits are the code, most significant bit first.
    """

    symbols: tuple
    lengths: np.ndarray
    values: np.ndarray
    freqs: FrequencyTable | None = None
    index: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {s: k for k, s in enumerate(self.symbols)})
        if len(self.index) != len(self.symbols):
            raise ValueError("duplicate symbol in code table")
        if len(self.symbols) == 0:
            raise ValueError("empty code table")
        lengths = np.asarray(self.lengths, dtype=np.int64)
        if lengths.min() < 1:
            raise ValueError("code lengths must be positive")
        if lengths.max() > MAX_CODE_LENGTH:
            raise ValueError(f"code length {int(lengths.max())} exceeds {MAX_CODE_LENGTH}")
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.uint64))
        for arr in (self.lengths, self.values):
            arr.setflags(write=False)

    @classmethod
    def from_codewords(cls, mapping: Mapping[Hashable, str]) -> "CodeTable":
        """Table from explicit ``{symbol: '0101'}`` code-words, kept in the given order.

        No prefix-freeness check is made here; see :func:`build_decode_tree`.
        """
        symbols = tuple(mapping)
        words = [mapping[s] for s in symbols]
        for w in words:
            if not w or set(w) - {"0", "1"}:
                raise ValueError(f"invalid code-word {w!r}")
        return cls(symbols, [len(w) for w in words], [int(w, 2) for w in words])

    @classmethod
    def canonical(cls, symbols: Sequence, lengths: Sequence[int], freqs=None) -> "CodeTable":
        """Assign canonical code values to ``symbols`` in the order given.

        Lengths must be non-decreasing along ``symbols``.
        """
        values = []
        code, prev = 0, None
        for ell in lengths:
            if prev is None:
                code = 0
            else:
                if ell < prev:
                    raise ValueError("canonical order requires non-decreasing lengths")
                code = (code + 1) << (ell - prev)
            if code >> ell:
                raise ValueError("lengths violate the Kraft inequality")
            values.append(code)
            prev = ell
        return cls(tuple(symbols), list(lengths), values, freqs)

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def sigma(self) -> int:
        return len(self.symbols)

    @property
    def max_len(self) -> int:
        return int(self.lengths.max())

    def codeword(self, sym) -> str:
        try:
            k = self.index[sym]
        except KeyError:
            raise MissingSymbolError(sym) from None
        return format(int(self.values[k]), f"0{int(self.lengths[k])}b")

    def length(self, sym) -> int:
        try:
            return int(self.lengths[self.index[sym]])
        except KeyError:
            raise MissingSymbolError(sym) from None

    def as_dict(self) -> dict:
        return {s: self.codeword(s) for s in self.symbols}

    def avg_len(self, freqs: FrequencyTable | None = None) -> float:
        freqs = freqs or self.freqs
        if freqs is None:
            raise ValueError("no frequency table attached")
        total = sum(c * self.length(s) for s, c in freqs.counts.items())
        return total / freqs.n

    def kraft_sum(self):
        from fractions import Fraction

        return sum(Fraction(1, 1 << int(ell)) for ell in self.lengths)

    def is_prefix_free(self) -> bool:
        words = sorted(self.codeword(s) for s in self.symbols)
        return all(not b.startswith(a) for a, b in zip(words, words[1:]))

    def is_canonical(self) -> bool:
        try:
            ref = CodeTable.canonical(self.symbols, self.lengths.tolist())
        except ValueError:
            return False
        return np.array_equal(ref.values, self.values)

    # symbol <-> dense index ----------------------------------------------

    def _index_dtype(self):
        return np.uint8 if len(self.symbols) <= 256 else np.int32

    def to_indices(self, text) -> np.ndarray:
        """Map a text onto dense code indices (uint8 for sigma <= 256, else int32)."""
        if isinstance(text, np.ndarray) and text.dtype.kind in "ui":
            syms = np.array([s if isinstance(s, (int, np.integer)) else -1 for s in self.symbols], dtype=np.int64)
            if text.size == 0:
                return np.zeros(0, dtype=self._index_dtype())
            lo = int(text.min())
            hi = int(text.max())
            if lo >= 0 and hi < (1 << 24):
                small = len(syms) <= 256
                lut = np.full(hi + 1, -1, dtype=np.int16 if small else np.int32)
                ok = (syms >= 0) & (syms <= hi)
                lut[syms[ok]] = np.flatnonzero(ok)
                idx = lut[text]
            else:
                order = np.argsort(syms)
                pos = np.searchsorted(syms[order], text)
                pos = np.minimum(pos, len(syms) - 1)
                hit = syms[order][pos] == text
                idx = np.where(hit, order[pos], -1).astype(np.int32)
            if (idx < 0).any():
                bad = text[np.flatnonzero(idx < 0)[0]]
                raise MissingSymbolError(bad.item())
            return idx.astype(self._index_dtype())
        index = self.index
        try:
            return np.fromiter((index[c] for c in text), dtype=self._index_dtype())
        except KeyError as exc:
            raise MissingSymbolError(exc.args[0]) from None

    def from_indices(self, idx: np.ndarray):
        """Inverse of :meth:`to_indices`: a str for 1-char alphabets, else an array or list."""
        syms = self.symbols
        if all(isinstance(s, str) and len(s) == 1 for s in syms):
            return "".join(syms[k] for k in idx)
        if all(isinstance(s, (int, np.integer)) for s in syms):
            return np.asarray(syms, dtype=np.int64)[np.asarray(idx, dtype=np.int64)]
        return [syms[k] for k in idx]


def encode_symbol(codes: CodeTable, c) -> str:
    return codes.codeword(c)


# Huffman construction ------------------------------------------------------


def _huffman_lengths(weights: list[int]) -> list[int]:
    """Optimal code lengths for leaf weights given in tie-break rank order.

    Among equal weights the most recently created internal node is merged
    first, then leaves in rank order.  On Fibonacci weights this yields the
    completely unbalanced tree.
    """
    m = len(weights)
    if m == 1:
        return [1]
    heap = [(w, 1, k, k) for k, w in enumerate(weights)]
    heapq.heapify(heap)
    parent = [-1] * m
    order = 0
    while len(heap) > 1:
        w1, _, _, a = heapq.heappop(heap)
        w2, _, _, b = heapq.heappop(heap)
        node = len(parent)
        parent.append(-1)
        parent[a] = node
        parent[b] = node
        order += 1
        heapq.heappush(heap, (w1 + w2, 0, -order, node))
    depth = [0] * len(parent)
    for v in range(len(parent) - 2, -1, -1):
        depth[v] = depth[parent[v]] + 1
    return depth[:m]


def build_code_table(freq: FrequencyTable) -> CodeTable:
    """Canonical Huffman code for a frequency table."""
    if freq.sigma == 0:
        raise ValueError("empty frequency table")
    ranked = sorted(freq.counts, key=lambda s: (freq.counts[s], _sort_key(s)))
    lengths = _huffman_lengths([freq.counts[s] for s in ranked])
    if max(lengths) > MAX_CODE_LENGTH:
        raise ValueError(f"Huffman code length {max(lengths)} exceeds {MAX_CODE_LENGTH}")
    by_len = {s: ell for s, ell in zip(ranked, lengths)}
    canon = sorted(freq.counts, key=lambda s: (by_len[s], -freq.counts[s], _sort_key(s)))
    return CodeTable.canonical(canon, [by_len[s] for s in canon], freq)


def huffman_codes(text) -> CodeTable:
    return build_code_table(count_frequencies(text))


# decode tree ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DecodeTree:
    """Binary code tree in flat arrays.

    ``left[x]``/``right[x]`` are child ids (-1 when absent) and ``symbol[x]``
    is the dense code index marked at ``x`` (-1 when none).  Node 0 is the
    root.  In a strict tree only leaves carry marks.
    """

    left: np.ndarray
    right: np.ndarray
    symbol: np.ndarray
    codes: CodeTable
    strict: bool = True

    @property
    def root(self) -> int:
        return 0

    def is_leaf(self, x: int) -> bool:
        return self.left[x] < 0 and self.right[x] < 0

    def walk(self, bits: str):
        """Decode a single code-word given as a bit string."""
        x = 0
        for ch in bits:
            x = int(self.right[x] if ch == "1" else self.left[x])
            if x < 0:
                raise KeyError(bits)
        if self.symbol[x] < 0:
            raise KeyError(bits)
        return self.codes.symbols[int(self.symbol[x])]

    def decode_bits(self, bits: str) -> list:
        """Decode a concatenation of code-words (plain sequential decoding)."""
        out, x = [], 0
        for ch in bits:
            x = int(self.right[x] if ch == "1" else self.left[x])
            if x < 0:
                raise ValueError("bit string is not a code-word sequence")
            if self.is_leaf(x):
                out.append(self.codes.symbols[int(self.symbol[x])])
                x = 0
        if x != 0:
            raise ValueError("trailing partial code-word")
        return out


def build_decode_tree(codes: CodeTable, strict: bool = True) -> DecodeTree:
    """Build the code tree of ``codes``.

    With ``strict`` (the default) a table that is not prefix-free raises
    :class:`PrefixError`.  Otherwise a code-word that prefixes another is kept
    as a mark on an internal node; decoders then prefer the longer code.
    """
    left, right, symbol = [-1], [-1], [-1]
    for k in range(len(codes)):
        word = codes.codeword(codes.symbols[k])
        x = 0
        for ch in word:
            if strict and symbol[x] >= 0:
                raise PrefixError(f"code-word {codes.codeword(codes.symbols[symbol[x]])!r} prefixes {word!r}")
            child = right if ch == "1" else left
            if child[x] < 0:
                child[x] = len(left)
                left.append(-1)
                right.append(-1)
                symbol.append(-1)
            x = child[x]
        if symbol[x] >= 0:
            raise PrefixError(f"duplicate code-word {word!r}")
        if strict and (left[x] >= 0 or right[x] >= 0):
            raise PrefixError(f"code-word {word!r} prefixes another code-word")
        symbol[x] = k
    return DecodeTree(
        np.array(left, dtype=np.int64),
        np.array(right, dtype=np.int64),
        np.array(symbol, dtype=np.int64),
        codes,
        strict,
    )
