"""Fixed-width bit vectors stored in 64-bit words, MSB-first.

Logical bit ``i`` lives in word ``i // 64`` at shift ``63 - i % 64``, so a
left-aligned block read from a layer compares like a lexicographic prefix.
"""

from __future__ import annotations

import numpy as np

WORD_BITS = 64
_WORD_MASK = (1 << WORD_BITS) - 1


def words_for(len_bits: int) -> int:
    return (len_bits + WORD_BITS - 1) // WORD_BITS


class BitLayer:
    """A bit vector of ``len_bits`` addressable bits.

    The backing store is a ``uint64`` numpy array; bits past ``len_bits`` in
    the final word are always zero.  Reads past the end of the layer (block
    reads only) return zero bits.
    """

    __slots__ = ("words", "len_bits")

    def __init__(self, len_bits: int, words: np.ndarray | None = None):
        if len_bits < 0:
            raise ValueError("len_bits must be non-negative")
        nwords = words_for(len_bits)
        if words is None:
            words = np.zeros(nwords, dtype=np.uint64)
        else:
            words = np.asarray(words, dtype=np.uint64)
            if words.ndim != 1 or words.shape[0] < nwords:
                raise ValueError("word array too short for len_bits")
            words = words[:nwords]
        self.words = words
        self.len_bits = len_bits

    # construction helpers -------------------------------------------------

    @classmethod
    def from_bits(cls, bits) -> "BitLayer":
        """Build a layer from an iterable of 0/1 values or a '0'/'1' string."""
        if isinstance(bits, str):
            arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
        else:
            arr = np.asarray(list(bits) if not hasattr(bits, "__len__") else bits, dtype=np.uint8)
        if arr.size and arr.max() > 1:
            raise ValueError("bits must be 0 or 1")
        n = int(arr.size)
        padded = np.zeros(words_for(n) * WORD_BITS, dtype=np.uint8)
        padded[:n] = arr
        packed = np.packbits(padded)  # MSB-first bytes
        words = packed.view(">u8").astype(np.uint64)
        return cls(n, words)

    @classmethod
    def from_bytes(cls, data: bytes, len_bits: int) -> "BitLayer":
        """Inverse of :meth:`to_bytes`; ``data`` holds whole big-endian words."""
        nwords = words_for(len_bits)
        if len(data) < nwords * 8:
            raise ValueError("not enough bytes for layer")
        words = np.frombuffer(data[: nwords * 8], dtype=">u8").astype(np.uint64)
        layer = cls(len_bits, words)
        layer._zero_padding()
        return layer

    def to_bytes(self) -> bytes:
        """Payload bytes, MSB-first, padded to a whole number of words."""
        return self.words.astype(">u8").tobytes()

    def to_bits(self) -> np.ndarray:
        raw = np.unpackbits(self.words.astype(">u8").view(np.uint8))
        return raw[: self.len_bits].copy()

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self.to_bits())

    def copy(self) -> "BitLayer":
        return BitLayer(self.len_bits, self.words.copy())

    def freeze(self) -> "BitLayer":
        self.words.setflags(write=False)
        return self

    def _zero_padding(self) -> None:
        tail = self.len_bits % WORD_BITS
        if tail and self.words.size:
            keep = ((1 << tail) - 1) << (WORD_BITS - tail)
            if int(self.words[-1]) & ~keep & _WORD_MASK:
                self.words = self.words.copy()
                self.words[-1] = np.uint64(int(self.words[-1]) & keep)

    # bit access -----------------------------------------------------------

    def __len__(self) -> int:
        return self.len_bits

    def _check(self, i: int) -> None:
        if not 0 <= i < self.len_bits:
            raise IndexError(f"bit index {i} out of range [0, {self.len_bits})")

    def read_bit(self, i: int) -> int:
        self._check(i)
        return (int(self.words[i >> 6]) >> (63 - (i & 63))) & 1

    def write_bit(self, i: int, b: int) -> None:
        self._check(i)
        if b not in (0, 1):
            raise ValueError("bit must be 0 or 1")
        mask = 1 << (63 - (i & 63))
        word = int(self.words[i >> 6])
        word = word | mask if b else word & ~mask
        self.words[i >> 6] = np.uint64(word & _WORD_MASK)

    def _word(self, k: int) -> int:
        if 0 <= k < self.words.shape[0]:
            return int(self.words[k])
        return 0

    def get_rblock(self, i: int, q: int) -> int:
        """Bits ``i .. i+q-1`` right-aligned in a word (``0^(w-q) . S[i..i+q-1]``)."""
        if not 1 <= q <= WORD_BITS:
            raise ValueError(f"block width {q} outside [1, {WORD_BITS}]")
        if i < 0:
            raise IndexError("negative bit index")
        k, s = divmod(i, WORD_BITS)
        mask = (1 << q) - 1
        if s <= WORD_BITS - q:
            return (self._word(k) >> (WORD_BITS - q - s)) & mask
        hi = self._word(k) << (s - WORD_BITS + q)
        lo = self._word(k + 1) >> (2 * WORD_BITS - q - s)
        return (hi | lo) & mask

    def get_lblock(self, i: int, q: int) -> int:
        """Bits ``i .. i+q-1`` left-aligned in a word (``S[i..i+q-1] . 0^(w-q)``)."""
        return (self.get_rblock(i, q) << (WORD_BITS - q)) & _WORD_MASK

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitLayer):
            return NotImplemented
        return self.len_bits == other.len_bits and np.array_equal(self.words, other.words)

    def __repr__(self) -> str:
        if self.len_bits <= 64:
            return f"BitLayer({self.to_string()!r})"
        return f"BitLayer(len_bits={self.len_bits})"

    __hash__ = None


def read_bit(layer: BitLayer, i: int) -> int:
    return layer.read_bit(i)


def write_bit(layer: BitLayer, i: int, b: int) -> None:
    layer.write_bit(i, b)


def get_rblock(layer: BitLayer, i: int, q: int) -> int:
    return layer.get_rblock(i, q)


def get_lblock(layer: BitLayer, i: int, q: int) -> int:
    return layer.get_lblock(i, q)
