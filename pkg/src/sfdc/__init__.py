"""Layered variable-length encodings with direct access.

The standard layout keeps ``lam - 1`` fixed layers plus a dynamic layer for
overflow bits; the gamma layout uses ``lam`` uniform layers.  Both support
decoding any window or single position without decoding the prefix.
"""

from .analysis import (
    FibModel,
    expected_code_length,
    expected_delay_standard,
    expected_idle_bits,
    fib,
    gamma_delay_bounds,
    gamma_delay_ceil,
    gen_fibonacci_text,
)
from .bitlayers import BitLayer, get_lblock, get_rblock, read_bit, write_bit
from .container_io import FormatError, deserialize, ingest_text, serialize
from .gamma import (
    GammaContainer,
    gamma_access,
    gamma_compute_delay,
    gamma_decode_window,
    gamma_encode,
    gamma_stats,
)
from .huffman import (
    CodeTable,
    DecodeTree,
    FrequencyTable,
    MissingSymbolError,
    PrefixError,
    build_code_table,
    build_decode_tree,
    count_frequencies,
    encode_symbol,
    huffman_codes,
)
from .search import BlindPattern, BucketTable, build_buckets, compile_pattern, plain_skip_search, skip_search, verify
from .standard import DecodeError, DelayStats, SfdcContainer, access, compute_delay, decode_window, encode, stats

__version__ = "0.1.0"
