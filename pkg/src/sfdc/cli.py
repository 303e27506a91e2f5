"""Command-line front end (``sfdc`` / ``python -m sfdc``)."""

from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path

import numpy as np

from . import analysis
from .container_io import (
    FormatError,
    MODES,
    deserialize,
    emit_text,
    ingest_text,
    serialize,
)
from .gamma import gamma_access, gamma_compute_delay, gamma_decode_window, gamma_encode
from .huffman import MissingSymbolError, huffman_codes
from .search import VariantError, compile_pattern, plain_skip_search, skip_search
from .standard import DecodeError, access, access_many, compute_delay, decode_window, encode, stats


class CliError(Exception):
    def __init__(self, kind: str, msg: str, status: int = 1):
        super().__init__(msg)
        self.kind = kind
        self.status = status


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage", message, 2)


def _say(args, *parts):
    if not args.quiet:
        print(*parts)


def _lambda_arg(text: str) -> int:
    v = int(text)
    if v < 2 or v > 255:
        raise argparse.ArgumentTypeError(f"lambda must be in [2, 255], got {v}")
    return v


def _default_lambda(codes) -> int:
    return analysis.ceil_mean_length(codes.avg_len())


def _load(path):
    try:
        return deserialize(path)
    except FileNotFoundError:
        raise CliError("io", f"no such file: {path}") from None


def _decoded(cont, i, j):
    if cont.variant == "standard":
        return decode_window(cont, i, j)
    return gamma_decode_window(cont, i, j)


def _render(seq, mode) -> str:
    if isinstance(seq, str):
        return seq
    if mode == "bytes":
        return emit_text(seq, "bytes").decode("latin-1")
    if mode == "utf8":
        return "".join(chr(int(c)) for c in seq)
    return " ".join(str(int(v)) for v in seq)


# commands ---------------------------------------------------------------------


def cmd_encode(args) -> int:
    y = ingest_text(args.input, args.mode)
    if len(y) == 0:
        raise CliError("input", "empty input")
    codes = huffman_codes(y)
    lam = args.lam or _default_lambda(codes)
    if args.variant == "standard":
        cont = encode(y, codes, lam)
        st = compute_delay(y, codes, lam)
    else:
        cont = gamma_encode(y, codes, lam)
        st = gamma_compute_delay(y, codes, lam)
    nbytes = serialize(cont, args.output)
    _say(args, f"n={cont.n} lambda={lam} variant={args.variant} sigma={codes.sigma}")
    _say(args, f"bits/symbol={st.bits_per_char:.4f} idle bits/symbol={st.idle_bits_per_char:.4f} "
               f"mean delay={st.mean_delay:.4f} bytes={nbytes}")
    return 0


def cmd_decode(args) -> int:
    cont = _load(args.container)
    data = emit_text(_decoded(cont, 0, cont.n - 1), args.mode)
    if args.output in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(args.output).write_bytes(data)
    return 0


def _range_check(cont, *pos):
    for p in pos:
        if not 0 <= p < cont.n:
            raise CliError("range", f"position {p} outside [0, {cont.n})")


def cmd_access(args) -> int:
    cont = _load(args.container)
    _range_check(cont, args.i)
    fn = access if cont.variant == "standard" else gamma_access
    sym, delay = fn(cont, args.i)
    print(f"{_render([sym] if not isinstance(sym, str) else sym, args.mode)}\t{delay}")
    return 0


def cmd_window(args) -> int:
    cont = _load(args.container)
    _range_check(cont, args.i, args.j)
    if args.i > args.j:
        raise CliError("range", f"empty window ({args.i}, {args.j})")
    print(_render(_decoded(cont, args.i, args.j), args.mode))
    return 0


def _parse_range(text: str):
    lo, sep, hi = text.partition("..")
    if not sep:
        raise CliError("usage", f"expected a..b, got {text!r}", 2)
    lo, hi = int(lo), int(hi)
    if lo < 2 or hi < lo:
        raise CliError("usage", f"bad lambda range {text!r}", 2)
    return range(lo, hi + 1)


def cmd_delay(args) -> int:
    y = ingest_text(args.input, args.mode)
    codes = huffman_codes(y)
    variants = ["standard", "gamma"] if args.variant == "both" else [args.variant]
    table = {v: {} for v in variants}
    print("lambda\t" + "\t".join(variants))
    for lam in _parse_range(args.lambda_range):
        row = []
        for v in variants:
            fn = compute_delay if v == "standard" else gamma_compute_delay
            d = fn(y, codes, lam).mean_delay
            table[v][lam] = d
            row.append(f"{d:.4f}")
        print(f"{lam}\t" + "\t".join(row))
    for v in variants:
        best = analysis.min_lambda_for_delay(table[v], args.bound)
        print(f"min lambda with {v} delay < {args.bound}: {best if best is not None else 'none in range'}")
    return 0


def cmd_fibgen(args) -> int:
    y = analysis.gen_fibonacci_text(args.sigma, args.scale, args.seed)
    mode = args.mode
    if mode == "bytes" and args.sigma > 256:
        mode = "ints"
    data = emit_text(y, mode)
    if args.output in (None, "-"):
        sys.stdout.buffer.write(data)
    else:
        Path(args.output).write_bytes(data)
    counts = analysis.fib_frequencies(args.sigma)
    if not args.quiet:
        print(f"length={y.size} counts={[c * args.scale for c in counts]}", file=sys.stderr)
    return 0


def _read_pattern(args):
    if args.pattern_file:
        return ingest_text(args.pattern_file, args.mode)
    lit = args.pattern
    if lit is None:
        raise CliError("usage", "give --pattern or --pattern-file", 2)
    if args.mode == "bytes":
        return np.frombuffer(lit.encode("utf-8"), dtype=np.uint8).copy()
    if args.mode == "utf8":
        return lit
    return np.array([int(t) for t in lit.replace(",", " ").split()], dtype=np.int64)


def _pattern_for(cont, x):
    # containers store code points; map a str pattern onto them
    if isinstance(x, str) and cont.codes.symbols and not isinstance(cont.codes.symbols[0], str):
        return np.array([ord(ch) for ch in x], dtype=np.int64)
    return x


def cmd_search(args) -> int:
    cont = _load(args.container)
    if cont.variant != "standard":
        raise CliError("variant", "search needs a standard container")
    x = _pattern_for(cont, _read_pattern(args))
    t0 = time.perf_counter()
    pat = compile_pattern(x, cont.codes, cont.lam)
    if pat.possible and args.q and not 1 <= args.q <= min(pat.m, 16):
        raise CliError("usage", f"q must be in [1, {min(pat.m, 16)}]", 2)
    hits = skip_search(cont, pat, args.q, threads=args.threads)
    t_sfdc = time.perf_counter() - t0
    print(f"count={len(hits)}")
    if hits:
        print(" ".join(map(str, hits)))
    if args.baseline:
        y = _decoded(cont, 0, cont.n - 1)
        yi = np.array([ord(c) for c in y]) if isinstance(y, str) else y
        t0 = time.perf_counter()
        base = plain_skip_search(yi, x if not isinstance(x, str) else np.array([ord(c) for c in x]))
        t_plain = time.perf_counter() - t0
        if base != hits:
            raise CliError("mismatch", f"baseline found {len(base)} occurrences, layered search {len(hits)}")
        _say(args, f"baseline agrees; layered {cont.n / max(t_sfdc, 1e-9) / 1e6:.2f} Msym/s, "
                   f"plain {cont.n / max(t_plain, 1e-9) / 1e6:.2f} Msym/s")
    return 0


def cmd_theory(args) -> int:
    model = analysis.FibModel(args.sigma, args.lam)
    try:
        rows = model.rows()
    except ValueError as exc:
        raise CliError("range", str(exc)) from None
    print(f"sigma={args.sigma} lambda={args.lam}")
    for name, val in rows:
        print(f"{name:<22}{val:.4f}")
    return 0


BENCH_FIELDS = ["operation", "file", "lambda", "m", "bits_per_symbol", "mean_delay",
                "throughput_bytes_per_s", "occurrences"]


def _corpus_files(path: Path):
    if path.is_file():
        return [path]
    files = sorted(p for p in path.iterdir() if p.is_file())
    if not files:
        raise CliError("input", f"no files in {path}")
    return files


def _csv_ints(text: str):
    return [int(t) for t in text.split(",") if t.strip()]


def cmd_bench(args) -> int:
    rng = np.random.default_rng(args.seed)
    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    try:
        w = csv.DictWriter(out, fieldnames=BENCH_FIELDS)
        w.writeheader()
        for path in _corpus_files(Path(args.corpus)):
            y = ingest_text(path, "bytes")
            if y.size == 0:
                continue
            codes = huffman_codes(y)
            nbytes = y.size
            for lam in _csv_ints(args.lambdas):
                t0 = time.perf_counter()
                cont = encode(y, codes, lam)
                t_enc = time.perf_counter() - t0
                st = stats(cont)
                base = dict(file=path.name, bits_per_symbol=f"{st.bits_per_char:.4f}",
                            mean_delay=f"{st.mean_delay:.4f}")
                w.writerow(dict(base, operation="encode", **{"lambda": lam}, m="",
                                throughput_bytes_per_s=f"{nbytes / t_enc:.0f}", occurrences=""))
                t0 = time.perf_counter()
                dec = decode_window(cont, 0, cont.n - 1)
                t_dec = time.perf_counter() - t0
                if not np.array_equal(np.asarray(dec), y):
                    raise CliError("mismatch", f"decode of {path.name} differs from input")
                w.writerow(dict(base, operation="decode", **{"lambda": lam}, m="",
                                throughput_bytes_per_s=f"{nbytes / t_dec:.0f}", occurrences=""))
                k = min(args.accesses, cont.n)
                positions = rng.permutation(cont.n)[:k]
                t0 = time.perf_counter()
                idx, _ = access_many(cont, positions)
                t_acc = time.perf_counter() - t0
                w.writerow(dict(base, operation="access", **{"lambda": lam}, m="",
                                throughput_bytes_per_s=f"{k / t_acc:.0f}", occurrences=""))
                for m in _csv_ints(args.pattern_lengths):
                    if m > cont.n:
                        continue
                    h = int(rng.integers(0, cont.n - m + 1))
                    x = y[h : h + m].copy()
                    t0 = time.perf_counter()
                    hits = skip_search(cont, compile_pattern(x, codes, lam))
                    t_ss = time.perf_counter() - t0
                    t0 = time.perf_counter()
                    plain = plain_skip_search(y, x)
                    t_pl = time.perf_counter() - t0
                    if hits != plain:
                        raise CliError("mismatch", f"search results differ on {path.name} (m={m}, lambda={lam})")
                    w.writerow(dict(base, operation="search", **{"lambda": lam}, m=m,
                                    throughput_bytes_per_s=f"{nbytes / t_ss:.0f}", occurrences=len(hits)))
                    w.writerow(dict(base, operation="plain_search", **{"lambda": lam}, m=m,
                                    throughput_bytes_per_s=f"{nbytes / t_pl:.0f}", occurrences=len(plain)))
                    if not args.quiet:
                        print(f"# {path.name} lambda={lam} m={m}: layered/plain speed ratio "
                              f"{t_pl / max(t_ss, 1e-9):.2f}", file=sys.stderr)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


# parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sfdc", description="Layered variable-length codes with direct access.")
    p.add_argument("--seed", type=int, default=0, help="seed for every random choice (default 0)")
    p.add_argument("--threads", type=int, default=1, help="worker threads for search probing")
    p.add_argument("--quiet", action="store_true", help="suppress informational output")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("encode", help="encode a file into a container")
    e.add_argument("input")
    e.add_argument("output")
    e.add_argument("--lambda", dest="lam", type=_lambda_arg, help="layer count (default: ceil of mean code length)")
    e.add_argument("--variant", choices=["standard", "gamma"], default="standard")
    e.add_argument("--mode", choices=MODES, default="bytes")
    e.set_defaults(func=cmd_encode)

    d = sub.add_parser("decode", help="decode a container to its text")
    d.add_argument("container")
    d.add_argument("output", nargs="?")
    d.add_argument("--mode", choices=MODES, default="bytes")
    d.set_defaults(func=cmd_decode)

    a = sub.add_parser("access", help="print one symbol and its decoding delay")
    a.add_argument("container")
    a.add_argument("i", type=int)
    a.add_argument("--mode", choices=MODES, default="bytes")
    a.set_defaults(func=cmd_access)

    wn = sub.add_parser("window", help="print symbols i..j")
    wn.add_argument("container")
    wn.add_argument("i", type=int)
    wn.add_argument("j", type=int)
    wn.add_argument("--mode", choices=MODES, default="bytes")
    wn.set_defaults(func=cmd_window)

    dl = sub.add_parser("delay", help="mean decoding delay over a range of layer counts")
    dl.add_argument("input")
    dl.add_argument("--lambda-range", default="2..16")
    dl.add_argument("--variant", choices=["standard", "gamma", "both"], default="both")
    dl.add_argument("--bound", type=float, default=1.0)
    dl.add_argument("--mode", choices=MODES, default="bytes")
    dl.set_defaults(func=cmd_delay)

    f = sub.add_parser("fibgen", help="write a Fibonacci-frequency text")
    f.add_argument("--sigma", type=int, required=True)
    f.add_argument("--scale", type=int, default=1)
    f.add_argument("--mode", choices=MODES, default="bytes")
    f.add_argument("output", nargs="?")
    f.set_defaults(func=cmd_fibgen)

    s = sub.add_parser("search", help="find all occurrences of a pattern in a container")
    s.add_argument("container")
    s.add_argument("--pattern")
    s.add_argument("--pattern-file")
    s.add_argument("--q", type=int)
    s.add_argument("--baseline", action="store_true")
    s.add_argument("--mode", choices=MODES, default="bytes")
    s.set_defaults(func=cmd_search)

    t = sub.add_parser("theory", help="closed-form Fibonacci model values")
    t.add_argument("--sigma", type=int, required=True)
    t.add_argument("--lambda", dest="lam", type=int, required=True)
    t.set_defaults(func=cmd_theory)

    b = sub.add_parser("bench", help="encode/decode/access/search sweep over a corpus")
    b.add_argument("corpus")
    b.add_argument("--lambdas", default="4,6,8")
    b.add_argument("--pattern-lengths", default="16,64,256")
    b.add_argument("--accesses", type=int, default=10000)
    b.add_argument("--csv")
    b.set_defaults(func=cmd_bench)
    return p


_ERROR_KINDS = [
    (FormatError, "format"),
    (MissingSymbolError, "symbol"),
    (VariantError, "variant"),
    (DecodeError, "decode"),
    (IndexError, "range"),
    (FileNotFoundError, "io"),
    (OSError, "io"),
    (ValueError, "value"),
]


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads < 1:
            raise CliError("usage", "--threads must be >= 1", 2)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc.kind}: {exc}", file=sys.stderr)
        return exc.status
    except Exception as exc:  # noqa: BLE001 - every failure becomes a one-line message
        for cls, kind in _ERROR_KINDS:
            if isinstance(exc, cls):
                print(f"error: {kind}: {exc}", file=sys.stderr)
                return 1
        raise


if __name__ == "__main__":
    sys.exit(main())
