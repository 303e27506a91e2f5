"""Closed-form Fibonacci model of code length, idle bits and decoding delay.

Everything is exact (``int`` / ``Fraction``); callers convert to float for
display.  Frequencies follow ``f(c_0) = 1`` and ``f(c_i) = F_i`` for
``1 <= i < sigma``, which makes the Huffman tree completely unbalanced.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil

import numpy as np

FIB_MAX_INDEX = 92  # F_92 is the largest Fibonacci number below 2**63


@lru_cache(maxsize=None)
def _fib_table():
    f = [0, 1]
    while len(f) <= FIB_MAX_INDEX:
        f.append(f[-1] + f[-2])
    return tuple(f)


def fib(k: int) -> int:
    if not 0 <= k <= FIB_MAX_INDEX:
        raise ValueError(f"fib index {k} outside [0, {FIB_MAX_INDEX}]")
    return _fib_table()[k]


def _check_sigma(sigma: int) -> None:
    if sigma < 2:
        raise ValueError("sigma must be >= 2")
    if sigma + 3 > FIB_MAX_INDEX:
        raise ValueError(f"sigma {sigma} too large for exact 64-bit Fibonacci values")


def _check_regime(sigma: int, lam: int) -> None:
    _check_sigma(sigma)
    if not 4 <= lam <= sigma - 1:
        raise ValueError(f"delay formulas need 4 <= lambda <= sigma-1 (got sigma={sigma}, lambda={lam})")


def fib_frequencies(sigma: int) -> list[int]:
    """Counts of ``c_0 .. c_{sigma-1}``: ``1, F_1, F_2, ..., F_{sigma-1}``."""
    _check_sigma(sigma)
    return [1] + [fib(i) for i in range(1, sigma)]


def fib_code_lengths(sigma: int) -> list[int]:
    """Code lengths of the unbalanced tree: ``sigma-1`` for ``c_0``, ``sigma-i`` for ``c_i``."""
    _check_sigma(sigma)
    return [sigma - 1] + [sigma - i for i in range(1, sigma)]


def expected_code_length(sigma: int) -> Fraction:
    _check_sigma(sigma)
    return Fraction(fib(sigma + 3) - 3, fib(sigma + 1))


def expected_idle_bits(sigma: int, lam: int) -> Fraction:
    if lam < 2:
        raise ValueError("lambda must be >= 2")
    return lam - expected_code_length(sigma)


def expected_delay_standard(sigma: int, lam: int) -> Fraction:
    _check_regime(sigma, lam)
    num = fib(sigma - lam + 3) - 3
    return Fraction(max(num, 0), fib(sigma + 1))


def gamma_delay_bounds(sigma: int, lam: int) -> tuple[Fraction, Fraction]:
    _check_regime(sigma, lam)
    num = max(fib(sigma - lam + 3) - 3, 0)
    den = lam * fib(sigma + 1) - fib(sigma + 3) + 3
    lower = Fraction(num, den)
    upper = lower + Fraction(fib(sigma - lam + 1), fib(sigma + 1))
    return lower, upper


def _ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def gamma_delay_ceil(sigma: int, lam: int) -> Fraction:
    """Sum over overflowing symbols of ``f^r(c) * ceil((|rho(c)| - lam) / (lam - e))``."""
    _check_sigma(sigma)
    if lam >= sigma - 1:
        return Fraction(0)
    e = expected_code_length(sigma)
    slack = lam - e
    if slack <= 0:
        raise ValueError("lambda must exceed the expected code length")
    freqs = fib_frequencies(sigma)
    lengths = fib_code_lengths(sigma)
    total = fib(sigma + 1)
    acc = Fraction(0)
    for i in range(sigma - lam):
        over = lengths[i] - lam
        if over > 0:
            acc += Fraction(freqs[i], total) * _ceil_fraction(Fraction(over) / slack)
    return acc


@dataclass(frozen=True)
class FibModel:
    sigma: int
    lam: int

    def code_length(self) -> Fraction:
        return expected_code_length(self.sigma)

    def idle_bits(self) -> Fraction:
        return expected_idle_bits(self.sigma, self.lam)

    def delay(self) -> Fraction:
        return expected_delay_standard(self.sigma, self.lam)

    def gamma_bounds(self):
        return gamma_delay_bounds(self.sigma, self.lam)

    def gamma_ceil(self) -> Fraction:
        return gamma_delay_ceil(self.sigma, self.lam)

    def rows(self) -> list[tuple[str, float]]:
        lo, hi = self.gamma_bounds()
        return [
            ("expected code length", float(self.code_length())),
            ("expected idle bits", float(self.idle_bits())),
            ("standard delay", float(self.delay())),
            ("gamma delay lower", float(lo)),
            ("gamma delay upper", float(hi)),
            ("gamma ceiling sum", float(self.gamma_ceil())),
        ]


def fib_text_length(sigma: int, scale: int = 1) -> int:
    _check_sigma(sigma)
    return scale * fib(sigma + 1)


def gen_fibonacci_text(sigma: int, scale: int = 1, seed: int | None = 0, max_len: int = 1 << 34) -> np.ndarray:
    """Shuffled text where symbol ``i`` occurs ``scale * f(c_i)`` times.

    Symbols are the integers ``0..sigma-1`` (``uint8`` when they fit).
    """
    _check_sigma(sigma)
    if scale < 1:
        raise ValueError("scale must be >= 1")
    n = fib_text_length(sigma, scale)
    if n > max_len:
        raise OverflowError(f"text length {n} exceeds limit {max_len}")
    dtype = np.uint8 if sigma <= 256 else np.uint32
    counts = np.array(fib_frequencies(sigma), dtype=np.int64) * scale
    text = np.repeat(np.arange(sigma, dtype=dtype), counts)
    np.random.default_rng(seed).shuffle(text)
    return text


def fib_sum_identity(n: int) -> bool:
    """Sum of F_0..F_n equals F_{n+2} - 1."""
    return sum(fib(i) for i in range(n + 1)) == fib(n + 2) - 1


def fib_weighted_sum_identity(n: int) -> bool:
    """Sum of i*F_i over 0..n equals n F_{n+2} - F_{n+3} + 2."""
    return sum(i * fib(i) for i in range(n + 1)) == n * fib(n + 2) - fib(n + 3) + 2


def min_lambda_for_delay(delays: dict, bound: float = 1.0):
    """Smallest layer count whose delay is below ``bound``, or None."""
    ok = [lam for lam, d in sorted(delays.items()) if d < bound]
    return ok[0] if ok else None


def ceil_mean_length(mean: float) -> int:
    return max(2, int(ceil(mean - 1e-12)))
