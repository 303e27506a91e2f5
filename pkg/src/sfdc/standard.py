"""Standard layered encoding: ``lam - 1`` fixed layers plus one dynamic layer.

Bits of a code-word beyond the fixed layers are pending; they go to the
dynamic layer in the leftmost free slot, most recent character first, so a
character's tail never interleaves with an older character's tail.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .bitlayers import BitLayer
from .huffman import CodeTable, DecodeTree, build_decode_tree


class DecodeError(ValueError):
    """The layers do not spell a valid code-word sequence."""


@dataclass
class DelayStats:
    mean_delay: float
    n: int
    total_delay: int = 0
    bits_per_char: float | None = None
    idle_bits_per_char: float | None = None
    delays: np.ndarray | None = None

    @property
    def max_delay(self) -> int:
        if self.delays is None or self.delays.size == 0:
            raise ValueError("per-position delays were not retained")
        return int(self.delays.max())


def check_lambda(lam: int, lo: int = 2) -> int:
    lam = int(lam)
    if lam < lo:
        raise ValueError(f"lambda must be >= {lo}, got {lam}")
    if lam > 255:
        raise ValueError("lambda must fit in one byte")
    return lam


def code_arrays(codes: CodeTable):
    return codes.values, codes.lengths


def _tree_for(codes: CodeTable, tree: DecodeTree | None) -> DecodeTree:
    if tree is not None:
        return tree
    if codes.is_prefix_free():
        return build_decode_tree(codes)
    # externally supplied tables may not be prefix-free; decode by longest match
    return build_decode_tree(codes, strict=False)


def raise_status(st: int) -> None:
    if st == K.ERR_NO_CHILD:
        raise DecodeError("bit path leaves the code tree")
    if st == K.ERR_TRUNCATED:
        raise DecodeError("layers end before the code-word is complete")


def _check_range(i: int, j: int, n: int) -> None:
    if not (0 <= i <= j < n):
        raise IndexError(f"window ({i}, {j}) outside [0, {n})")


@dataclass(eq=False)
class SfdcContainer:
    lam: int
    n: int
    fixed_layers: list
    dynamic_layer: BitLayer
    codes: CodeTable
    tree: DecodeTree
    variant = "standard"

    @property
    def n_dyn(self) -> int:
        return self.dynamic_layer.len_bits

    @property
    def _fixed2d(self) -> np.ndarray:
        cached = self.__dict__.get("_f2d")
        if cached is None:
            nw = (self.n + 63) >> 6
            cached = np.zeros((self.lam - 1, nw), dtype=np.uint64)
            for h, layer in enumerate(self.fixed_layers):
                cached[h, :] = layer.words
            self.__dict__["_f2d"] = cached
        return cached

    def total_bits(self) -> int:
        return (self.lam - 1) * self.n + self.n_dyn

    def decode_window(self, i: int, j: int):
        return decode_window(self, i, j)

    def access(self, i: int):
        return access(self, i)

    def decode(self):
        return decode_window(self, 0, self.n - 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SfdcContainer):
            return NotImplemented
        return (
            self.lam == other.lam
            and self.n == other.n
            and self.codes.symbols == other.codes.symbols
            and np.array_equal(self.codes.lengths, other.codes.lengths)
            and np.array_equal(self.codes.values, other.codes.values)
            and self.fixed_layers == other.fixed_layers
            and self.dynamic_layer == other.dynamic_layer
        )


def _encode(y, codes: CodeTable, lam: int, record: bool):
    lam = check_lambda(lam)
    text = codes.to_indices(y)
    if text.size == 0:
        raise ValueError("cannot encode an empty text")
    fixed, dyn, n_dyn, log = K.encode_standard(text, codes.values, codes.lengths, lam, record)
    n = int(text.size)
    layers = [BitLayer(n, fixed[h]).freeze() for h in range(lam - 1)]
    cont = SfdcContainer(lam, n, layers, BitLayer(int(n_dyn), dyn).freeze(), codes, None)
    return cont, log


def encode(y, codes: CodeTable, lam: int, tree: DecodeTree | None = None) -> SfdcContainer:
    """Encode ``y`` with ``codes`` into ``lam - 1`` fixed layers and a dynamic layer."""
    cont, _ = _encode(y, codes, lam, False)
    cont.tree = _tree_for(codes, tree)
    return cont


def encode_with_log(y, codes: CodeTable, lam: int):
    """Like :func:`encode` but also return the placement log.

    Log rows are ``(position, bit index, dynamic position)``, one per pending bit
    in placement order.
    """
    cont, log = _encode(y, codes, lam, True)
    cont.tree = _tree_for(codes, None)
    return cont, log


def _tree_arrays(cont):
    t = cont.tree
    return t.left, t.right, t.symbol


def decode_window(cont: SfdcContainer, i: int, j: int):
    """Symbols ``y[i..j]`` (inclusive), in the container's text type."""
    idx, _ = decode_window_indices(cont, i, j)
    return cont.codes.from_indices(idx)


def decode_window_indices(cont: SfdcContainer, i: int, j: int):
    _check_range(i, j, cont.n)
    left, right, sym = _tree_arrays(cont)
    st, out, delays = K.decode_standard(
        cont._fixed2d, cont.dynamic_layer.words, cont.n, cont.n_dyn, cont.lam, left, right, sym, int(i), int(j)
    )
    raise_status(st)
    return out, delays


def access(cont: SfdcContainer, i: int):
    """``(y[i], delay)``; the delay counts characters past ``i`` read from the dynamic layer."""
    if not 0 <= i < cont.n:
        raise IndexError(f"position {i} outside [0, {cont.n})")
    idx, delays = decode_window_indices(cont, i, i)
    return cont.codes.symbols[int(idx[0])], int(delays[0])


def access_many(cont: SfdcContainer, positions):
    """Independent single-character accesses; returns ``(code indices, delays)``."""
    pos = np.ascontiguousarray(positions, dtype=np.int64)
    if pos.size and (pos.min() < 0 or pos.max() >= cont.n):
        raise IndexError("position out of range")
    left, right, sym = _tree_arrays(cont)
    st, out, delays = K.access_standard(
        cont._fixed2d, cont.dynamic_layer.words, cont.n, cont.n_dyn, cont.lam, left, right, sym, pos
    )
    raise_status(st)
    return out, delays


def compute_delay(y, codes: CodeTable, lam: int, keep: bool = False) -> DelayStats:
    """Mean decoding delay by simulating the dynamic layer (no layers are built)."""
    lam = check_lambda(lam)
    text = codes.to_indices(y)
    if text.size == 0:
        raise ValueError("empty text")
    total, n_dyn, delays = K.delay_standard(text, codes.lengths, lam, keep)
    n = int(text.size)
    bits = (lam - 1) * n + int(n_dyn)
    code_bits = int(K.total_bits(text, codes.lengths))
    return DelayStats(
        mean_delay=total / n,
        n=n,
        total_delay=int(total),
        bits_per_char=bits / n,
        idle_bits_per_char=(bits - code_bits) / n,
        delays=delays if keep else None,
    )


def stats(cont: SfdcContainer) -> DelayStats:
    """Space accounting and mean delay of an encoded container."""
    text, _ = decode_window_indices(cont, 0, cont.n - 1)
    total, _, _ = K.delay_standard(text.astype(np.int32), cont.codes.lengths, cont.lam, False)
    code_bits = int(K.total_bits(text, cont.codes.lengths))
    bits = cont.total_bits()
    return DelayStats(
        mean_delay=total / cont.n,
        n=cont.n,
        total_delay=int(total),
        bits_per_char=bits / cont.n,
        idle_bits_per_char=(bits - code_bits) / cont.n,
    )
