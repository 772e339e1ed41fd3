"""Command-line frontend.

Subcommands mirror the library functions; plain mode prints exactly the
decimal result and a newline, json mode prints one object with the inputs,
result and timings. `oracle` runs the brute-force reference instead, and
`bench` emits per-size phase timings plus a fitted log-log slope.
"""

import argparse
import json as json_mod
import math
import os
import sys
import time
from fractions import Fraction

from . import counting, oracles

ENV_PREFIX = "PRIMECONV_"

_FUNCTIONS = ("pi", "mertens", "sum-primes", "pi-mod", "squarefree",
              "totient-sum")


def _env(name, default=None):
    return os.environ.get(ENV_PREFIX + name, default)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="primeconv",
        description="Exact prime counting and Mobius summation in about "
                    "square-root time via cell-array convolution.")
    parser.add_argument("--delta-scale", default=None,
                        help="scale factor for the segmentation precision "
                             "(rational, default 1)")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: available parallelism)")
    parser.add_argument("--cutoff", type=int, default=None,
                        help="below this bound use the direct sieve")
    parser.add_argument("--chunk-size", type=int, default=None,
                        help="sieve chunk size (default: adaptive)")
    parser.add_argument("--json", action="store_true",
                        help="emit a JSON object instead of the bare result")
    parser.add_argument("--verify", action="store_true",
                        help="also run the oracle for moderate n and compare")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in _FUNCTIONS:
        p = sub.add_parser(name, help=f"compute {name}(N)")
        p.add_argument("n", type=int)
        if name == "sum-primes":
            p.add_argument("--power", type=int, default=1)
        if name == "pi-mod":
            p.add_argument("--modulus", type=int, required=True)
            p.add_argument("--residue", type=int, required=True)

    p = sub.add_parser("oracle", help="run the brute-force reference")
    p.add_argument("function", choices=_FUNCTIONS)
    p.add_argument("n", type=int)
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--modulus", type=int, default=None)
    p.add_argument("--residue", type=int, default=None)

    p = sub.add_parser("bench", help="time a geometric schedule of sizes")
    p.add_argument("--from", dest="start", type=int, required=True)
    p.add_argument("--to", dest="stop", type=int, required=True)
    p.add_argument("--factor", type=int, default=10)
    p.add_argument("--fn", choices=_FUNCTIONS, default="pi")
    return parser


def _config_from(args):
    kwargs = {}
    scale = args.delta_scale if args.delta_scale is not None else _env("DELTA_SCALE")
    if scale is not None:
        kwargs["delta_scale"] = Fraction(scale)
    threads = args.threads if args.threads is not None else _env("THREADS")
    if threads is not None:
        kwargs["threads"] = int(threads)
    cutoff = args.cutoff if args.cutoff is not None else _env("CUTOFF")
    if cutoff is not None:
        kwargs["cutoff"] = int(cutoff)
    chunk = args.chunk_size if args.chunk_size is not None else _env("CHUNK_SIZE")
    if chunk is not None:
        kwargs["chunk_size"] = int(chunk)
    config = counting.Config(**kwargs)
    if config.threads < 0 or config.cutoff < 0:
        raise ValueError("threads and cutoff must be non-negative")
    if Fraction(config.delta_scale) <= 0:
        raise ValueError("delta scale must be positive")
    return config


def _run_function(name, args, config):
    if name == "pi":
        return counting.count_primes_result(args.n, config)
    if name == "mertens":
        return counting.mertens_result(args.n, config)
    if name == "sum-primes":
        return counting.sum_over_primes_result(args.n, args.power, config)
    if name == "pi-mod":
        return counting.count_primes_mod_result(args.n, args.modulus,
                                                args.residue, config)
    if name == "squarefree":
        return counting.count_squarefree_result(args.n, config)
    if name == "totient-sum":
        return counting.totient_sum_result(args.n, config)
    raise AssertionError(name)


def _run_oracle(name, n, power=1, modulus=None, residue=None):
    if name == "pi":
        return oracles.pi_naive(n)
    if name == "mertens":
        return oracles.mertens_naive(n)
    if name == "sum-primes":
        return oracles.sum_primes_naive(n, power)
    if name == "pi-mod":
        if modulus is None or residue is None:
            raise ValueError("pi-mod oracle needs --modulus and --residue")
        return oracles.pi_mod_naive(n, modulus, residue)
    if name == "squarefree":
        return oracles.sqfree_naive(n)
    if name == "totient-sum":
        return oracles.totient_sum_naive(n)
    raise AssertionError(name)


def _emit(bundle, elapsed, as_json):
    if not as_json:
        print(bundle.value)
        return
    obj = {
        "function": bundle.function,
        "n": bundle.n,
        "result": bundle.value,
        "delta": float(bundle.delta) if bundle.delta is not None else None,
        "s": bundle.window,
        "time_ms": round(elapsed * 1000.0, 3),
        "moduli": list(bundle.moduli) if bundle.moduli else None,
        "timings_ms": {k: round(v * 1000.0, 3)
                       for k, v in bundle.timings.items()},
    }
    obj.update(bundle.extra)
    print(json_mod.dumps(obj))


def _verify_cutoff():
    return int(_env("VERIFY_CUTOFF", str(20_000_000)))


def _bench(args, config, as_json):
    rows = []
    n = args.start
    phases = ("params", "primes", "convolution", "correction", "combine",
              "sieve")
    while n <= args.stop:
        t0 = time.perf_counter()
        bundle = _run_function(args.fn, argparse.Namespace(
            n=n, power=1, modulus=3, residue=1), config)
        total = time.perf_counter() - t0
        row = {"n": n, "result": bundle.value, "total_s": total}
        for ph in phases:
            row[f"t_{ph}"] = bundle.timings.get(ph, 0.0)
        rows.append(row)
        n *= args.factor
    slope = None
    if len(rows) >= 2:
        xs = [math.log(r["n"]) for r in rows]
        ys = [math.log(max(r["total_s"], 1e-9)) for r in rows]
        xm = sum(xs) / len(xs)
        ym = sum(ys) / len(ys)
        slope = (sum((x - xm) * (y - ym) for x, y in zip(xs, ys))
                 / sum((x - xm) ** 2 for x in xs))
    if as_json:
        print(json_mod.dumps({"function": args.fn, "rows": rows,
                              "slope": slope}))
        return 0
    cols = ["n", "result", "total_s"] + [f"t_{ph}" for ph in phases]
    print(",".join(cols))
    for row in rows:
        print(",".join(_fmt(row[c]) for c in cols))
    print(f"slope,{_fmt(slope)}")
    return 0


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 2
    try:
        config = _config_from(args)
        if args.command == "bench":
            return _bench(args, config, args.json)
        if args.command == "oracle":
            t0 = time.perf_counter()
            value = _run_oracle(args.function, args.n, args.power,
                                args.modulus, args.residue)
            elapsed = time.perf_counter() - t0
            bundle = counting.ResultBundle(f"oracle-{args.function}", args.n,
                                           value, None, None, None)
            _emit(bundle, elapsed, args.json)
            return 0
        t0 = time.perf_counter()
        bundle = _run_function(args.command, args, config)
        elapsed = time.perf_counter() - t0
        if args.verify and args.n <= _verify_cutoff():
            kw = {}
            if args.command == "sum-primes":
                kw["power"] = args.power
            if args.command == "pi-mod":
                kw["modulus"] = args.modulus
                kw["residue"] = args.residue
            t1 = time.perf_counter()
            expected = _run_oracle(args.command, args.n, **kw)
            report = oracles.OracleReport(
                function=args.command, n=args.n, oracle_value=expected,
                main_value=bundle.value, match=expected == bundle.value,
                oracle_seconds=time.perf_counter() - t1, main_seconds=elapsed)
            if not report.match:
                print(f"verify mismatch: {report.function}({report.n}) = "
                      f"{report.main_value}, oracle says {report.oracle_value}",
                      file=sys.stderr)
                return 4
        _emit(bundle, elapsed, args.json)
        return 0
    except (counting.ResultRangeError, counting.ModulusSupportError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
