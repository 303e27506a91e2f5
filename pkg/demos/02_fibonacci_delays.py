# coding: utf-8

# # Worst-case texts: Fibonacci frequencies
#
# When symbol frequencies follow the Fibonacci numbers the Huffman tree is a
# path, so code lengths grow linearly. That is the hardest case for the
# layered layout. The closed forms in sfdc.analysis predict code length,
# idle bits and delay; here we put them next to a simulation.

from sfdc import analysis
from sfdc.gamma import gamma_compute_delay
from sfdc.huffman import huffman_codes
from sfdc.standard import compute_delay

for sigma in (10, 20):
    print(f"\nsigma = {sigma}, expected code length {float(analysis.expected_code_length(sigma)):.4f}")
    y = analysis.gen_fibonacci_text(sigma, scale=100, seed=1)
    codes = huffman_codes(y)
    print(f"text length {y.size}, measured mean length {codes.avg_len():.4f}")
    print(" lam   idle(th)  idle(sim)  delay(th)  delay(sim)  gamma lo..hi      gamma(sim)")
    for lam in range(5, 9):
        s = compute_delay(y, codes, lam)
        g = gamma_compute_delay(y, codes, lam)
        lo, hi = analysis.gamma_delay_bounds(sigma, lam)
        print(f"{lam:4d} {float(analysis.expected_idle_bits(sigma, lam)):9.4f} {s.idle_bits_per_char:10.4f}"
              f" {float(analysis.expected_delay_standard(sigma, lam)):10.4f} {s.mean_delay:11.4f}"
              f"  {float(lo):.4f}..{float(hi):.4f}  {g.mean_delay:10.4f}")

# The gamma variant packs leftover bits into every layer instead of a single
# extra row, and its delay never exceeds the standard one.
