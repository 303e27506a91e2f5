# coding: utf-8

# # Searching without decoding
#
# A pattern is encoded on its own with the text's code table. Because the
# first bits of each character always sit in the fixed layers, an occurrence
# in the text shows up as the same bit columns. The search compares those
# columns word by word and only decodes a short tail to confirm a hit.

import time

import numpy as np

from sfdc import encode, huffman_codes
from sfdc.search import compile_pattern, plain_skip_search, search

rng = np.random.default_rng(5)
words = [bytes(rng.integers(97, 123, int(k)).astype(np.uint8)) for k in rng.integers(2, 9, 500)]
corpus = b" ".join(words[int(i)] for i in rng.integers(0, 500, 200_000))
y = np.frombuffer(corpus, dtype=np.uint8)
codes = huffman_codes(y)
cont = encode(y, codes, 5)
print(f"{y.size} bytes, mean code length {codes.avg_len():.2f}, 5 layers")

# Compile one pattern so we can peek at it. The mask marks dynamic-layer
# slots the pattern fills itself; the rest may hold bits from earlier text.

x = y[1000:1064]
pat = compile_pattern(x, codes, 5)
print("mask :", pat.blind_mask.to_string()[:64])
print("chars decoded to confirm:", pat.m - pat.tail_start)

for m in (16, 64, 256):
    x = y[4321 : 4321 + m]
    t0 = time.perf_counter()
    hits = search(cont, x)
    t1 = time.perf_counter()
    ref = plain_skip_search(y, x)
    t2 = time.perf_counter()
    assert hits == ref
    print(f"m={m:4d}  hits={len(hits):3d}  layered {1e3 * (t1 - t0):7.2f} ms  plain {1e3 * (t2 - t1):7.2f} ms")
