# coding: utf-8

# # Layered Huffman text, step by step
#
# A Huffman code gives every character a variable number of bits. Here the
# first lambda-1 bits of each codeword sit in fixed layers, one column per
# character, and whatever is left over goes to a shared dynamic layer. That
# keeps character i at column i, so we can jump straight to it.

import numpy as np

from sfdc import access, decode_window, encode, gamma_encode, gamma_stats, huffman_codes, stats

text = "compression of compressed strings"
codes = huffman_codes(text)

for sym, word in sorted(codes.as_dict().items(), key=lambda kv: (len(kv[1]), kv[0])):
    print(f"{sym!r:>5} {word}")
print("mean code length:", round(codes.avg_len(), 3))

# Four layers are close to the mean length, so most codewords fit and only a
# few bits spill into the dynamic layer.

lam = 4
cont = encode(text, codes, lam)
for h, layer in enumerate(cont.fixed_layers):
    print(f"Y{h}", layer.to_string())
print("YD", cont.dynamic_layer.to_string())

# ## Random access
#
# access() returns the symbol and its delay. The delay is how many columns to
# the right we had to read before the last bit of that codeword showed up.

for i in (0, 3, 10, len(text) - 1):
    sym, delay = access(cont, i)
    print(f"position {i:2d}: {sym!r} delay {delay}")

print(repr(decode_window(cont, 15, 24)))

# ## Space versus delay
#
# More layers mean fewer deferred bits (lower delay) but more idle slots.

for lam in range(2, 8):
    s = stats(encode(text, codes, lam))
    g = gamma_stats(gamma_encode(text, codes, lam))
    print(f"lambda={lam}  bits/char={s.bits_per_char:5.2f}  delay standard={s.mean_delay:5.2f}  gamma={g.mean_delay:5.2f}")
