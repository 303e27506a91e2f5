"""Uniform-layer variant: ``lam`` layers, no fixed/dynamic split.

Each column takes the current character's whole code-word onto the stack and
then pops up to ``lam`` bits into layers ``0..lam-1``, so pending bits fill
any idle slot of later columns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .bitlayers import BitLayer
from .huffman import CodeTable, DecodeTree
from .standard import DelayStats, _check_range, _tree_for, check_lambda, raise_status


@dataclass(eq=False)
class GammaContainer:
    lam: int
    n: int
    layers: list
    codes: CodeTable
    tree: DecodeTree
    variant = "gamma"

    @property
    def n_gamma(self) -> int:
        return self.layers[0].len_bits

    @property
    def _layers2d(self) -> np.ndarray:
        cached = self.__dict__.get("_l2d")
        if cached is None:
            nw = (self.n_gamma + 63) >> 6
            cached = np.zeros((self.lam, nw), dtype=np.uint64)
            for h, layer in enumerate(self.layers):
                cached[h, :] = layer.words
            self.__dict__["_l2d"] = cached
        return cached

    def total_bits(self) -> int:
        return self.lam * self.n_gamma

    def decode(self):
        return gamma_decode_window(self, 0, self.n - 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GammaContainer):
            return NotImplemented
        return (
            self.lam == other.lam
            and self.n == other.n
            and self.codes.symbols == other.codes.symbols
            and np.array_equal(self.codes.lengths, other.codes.lengths)
            and np.array_equal(self.codes.values, other.codes.values)
            and self.layers == other.layers
        )


def _encode(y, codes, lam, record):
    lam = check_lambda(lam)
    text = codes.to_indices(y)
    if text.size == 0:
        raise ValueError("cannot encode an empty text")
    layers, n_gamma, log = K.encode_gamma(text, codes.values, codes.lengths, lam, record)
    n = int(text.size)
    out = [BitLayer(int(n_gamma), layers[h]).freeze() for h in range(lam)]
    return GammaContainer(lam, n, out, codes, None), log


def gamma_encode(y, codes: CodeTable, lam: int, tree: DecodeTree | None = None) -> GammaContainer:
    cont, _ = _encode(y, codes, lam, False)
    cont.tree = _tree_for(codes, tree)
    return cont


def gamma_encode_with_log(y, codes: CodeTable, lam: int):
    """Encode and return the log of ``(position, bit index, column, layer)`` rows."""
    cont, log = _encode(y, codes, lam, True)
    cont.tree = _tree_for(codes, None)
    return cont, log


def gamma_decode_window_indices(cont: GammaContainer, i: int, j: int):
    _check_range(i, j, cont.n)
    t = cont.tree
    st, out, delays = K.decode_gamma(
        cont._layers2d, cont.n, cont.n_gamma, cont.lam, t.left, t.right, t.symbol, int(i), int(j)
    )
    raise_status(st)
    return out, delays


def gamma_decode_window(cont: GammaContainer, i: int, j: int):
    idx, _ = gamma_decode_window_indices(cont, i, j)
    return cont.codes.from_indices(idx)


def gamma_access(cont: GammaContainer, i: int):
    """``(y[i], delay)`` with the delay in columns past ``i``."""
    if not 0 <= i < cont.n:
        raise IndexError(f"position {i} outside [0, {cont.n})")
    idx, delays = gamma_decode_window_indices(cont, i, i)
    return cont.codes.symbols[int(idx[0])], int(delays[0])


def gamma_access_many(cont: GammaContainer, positions):
    pos = np.ascontiguousarray(positions, dtype=np.int64)
    if pos.size and (pos.min() < 0 or pos.max() >= cont.n):
        raise IndexError("position out of range")
    t = cont.tree
    st, out, delays = K.access_gamma(
        cont._layers2d, cont.n, cont.n_gamma, cont.lam, t.left, t.right, t.symbol, pos
    )
    raise_status(st)
    return out, delays


def gamma_compute_delay(y, codes: CodeTable, lam: int, keep: bool = False) -> DelayStats:
    lam = check_lambda(lam)
    text = codes.to_indices(y)
    if text.size == 0:
        raise ValueError("empty text")
    total, n_gamma, delays = K.delay_gamma(text, codes.lengths, lam, keep)
    n = int(text.size)
    bits = lam * int(n_gamma)
    code_bits = int(K.total_bits(text, codes.lengths))
    return DelayStats(
        mean_delay=total / n,
        n=n,
        total_delay=int(total),
        bits_per_char=bits / n,
        idle_bits_per_char=(bits - code_bits) / n,
        delays=delays if keep else None,
    )


def gamma_stats(cont: GammaContainer) -> DelayStats:
    text, _ = gamma_decode_window_indices(cont, 0, cont.n - 1)
    total, _, _ = K.delay_gamma(text.astype(np.int32), cont.codes.lengths, cont.lam, False)
    code_bits = int(K.total_bits(text, cont.codes.lengths))
    bits = cont.total_bits()
    return DelayStats(
        mean_delay=total / cont.n,
        n=cont.n,
        total_delay=int(total),
        bits_per_char=bits / cont.n,
        idle_bits_per_char=(bits - code_bits) / cont.n,
    )
