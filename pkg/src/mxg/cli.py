"""Command-line interface: ``mxg gen | gen-verify | bench | analyze | selftest | list``.

Standard output carries only payload; diagnostics, including the effective
configuration line every subcommand prints first, go to standard error.
Exit codes: 0 success, 1 usage error, 2 analysis or self-test failure.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import engine
from .params import UnknownParamsError, list_params, lookup, parse_param_file, requested_p

DEFAULT_SEED = 5489
BLOCK = 1 << 16


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _effective(cmd: str, **kw):
    items = " ".join(f"{k}={v}" for k, v in kw.items())
    print(f"# mxg {cmd} {items}", file=sys.stderr, flush=True)


def _params(args):
    extra = None
    if getattr(args, "param_file", None):
        with open(args.param_file, "rb") as fh:
            extra = {p.name: p for p in parse_param_file(fh.read())}
    try:
        return lookup(args.param, extra)
    except UnknownParamsError as e:
        raise UsageError(str(e)) from None


# ------------------------------------------------------------------- gen


def path_width(params, path: str) -> int:
    if path == "int32":
        return 32
    if path == "real64":
        return 64
    return params.w


def _path_block(params, st, path, mode, count):
    words = st.generate(engine.words_needed(params.w, path, count), mode)
    if path == "int32":
        return engine.int32_block(words, params.w)[:count]
    if path == "real64":
        return engine.real64_block(words, params.w)
    return words


def _raw_bytes(block, params, path) -> bytes:
    if path == "int32":
        return block.astype("<u4").tobytes()
    if path == "real64":
        return block.astype("<f8").tobytes()
    w = params.w
    if w == 128:
        hi, lo = block[:, 0], block[:, 1]
        return np.stack([lo, hi], axis=1).astype("<u8").tobytes()
    if w == 64:
        return block.astype("<u8").tobytes()
    if w == 32:
        return block.astype("<u4").tobytes()
    return block.astype({8: "u1", 16: "<u2"}.get(w, "u1")).tobytes()


def _text_lines(block, params, path, fmt) -> str:
    if path == "real64":
        vals = (float(x) for x in block)
        return "".join((v.hex() if fmt == "hex" else repr(v)) + "\n" for v in vals)
    width = path_width(params, path)
    from .fastpath import to_ints

    ints = to_ints(block, 128) if (path == "raw-words" and params.w == 128) else [int(x) for x in block]
    if fmt == "hex":
        digits = -(-width // 4)
        return "".join(f"{v:0{digits}x}\n" for v in ints)
    return "".join(f"{v}\n" for v in ints)


def cmd_gen(args, out=None) -> int:
    out = sys.stdout.buffer if out is None else out
    prm = _params(args)
    _effective(
        "gen", param=prm.name, seed=args.seed, mode=args.mode, path=args.path, count=args.count, format=args.format
    )
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    if args.mode == "linear" and prm.tempering_linear is None:
        raise UsageError(f"{prm.name} has no linear tempering")
    st = engine.seed(prm, args.seed)
    left = args.count
    # path blocks must not split the words behind one value
    while left:
        k = min(BLOCK, left)
        block = _path_block(prm, st, args.path, args.mode, k)
        if args.format == "raw":
            out.write(_raw_bytes(block, prm, args.path))
        else:
            out.write(_text_lines(block, prm, args.path, args.format).encode())
        left -= k
    out.flush()
    return 0


def cmd_gen_verify(args, inp=None, out=None) -> int:
    """Re-read a raw stream and print it as hex, for round-trip checks."""
    inp = sys.stdin.buffer if inp is None else inp
    out = sys.stdout.buffer if out is None else out
    prm = _params(args)
    _effective("gen-verify", param=prm.name, path=args.path)
    data = inp.read()
    if args.path == "real64":
        block = np.frombuffer(data, "<f8")
    elif args.path == "int32":
        block = np.frombuffer(data, "<u4")
    elif prm.w == 128:
        limbs = np.frombuffer(data, "<u8").reshape(-1, 2)
        block = np.stack([limbs[:, 1], limbs[:, 0]], axis=1)
    else:
        dt = {64: "<u8", 32: "<u4", 16: "<u2"}.get(prm.w, "u1")
        block = np.frombuffer(data, dt)
    out.write(_text_lines(block, prm, args.path, "hex").encode())
    out.flush()
    return 0


# ----------------------------------------------------------------- bench


def cmd_bench(args) -> int:
    from .bench import bench, format_table

    names = args.param or ["mxg32-521"]
    prms = []
    for name in names:
        args.param = name
        prms.append(_params(args))
    _effective(
        "bench",
        param=",".join(p.name for p in prms),
        modes=",".join(args.mode),
        duration=args.duration,
        reps=args.reps,
    )
    rows = bench(prms, tuple(args.mode), args.duration, args.reps, baselines=not args.no_baselines)
    sys.stdout.write(format_table(rows))
    return 0


# --------------------------------------------------------------- analyze


def cmd_analyze(args) -> int:
    from .gf2.charpoly import EXPENSIVE_DEGREE

    _effective(
        "analyze",
        kind=args.kind,
        param=args.param,
        expensive=args.expensive,
        tempering=args.tempering,
        out=args.out or "-",
    )
    # gate on the requested size first, so the hint does not depend on the table
    want = requested_p(args.param)
    if want is not None and want > EXPENSIVE_DEGREE and not args.expensive:
        raise UsageError(f"{args.param} has p = {want} > {EXPENSIVE_DEGREE}; rerun with --expensive (slow)")
    prm = _params(args)
    if prm.p > EXPENSIVE_DEGREE and not args.expensive:
        raise UsageError(f"{prm.name} has p = {prm.p} > {EXPENSIVE_DEGREE}; rerun with --expensive (slow)")
    t0 = time.perf_counter()
    if args.kind == "charpoly":
        from .gf2 import char_poly, is_irreducible_prime_degree, weight

        f = char_poly(prm)
        irr = is_irreducible_prime_degree(f, expensive=args.expensive)
        wt = weight(f)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(f.to_hex())
        el = time.perf_counter() - t0
        print(
            f"{prm.name}\tdegree={f.degree}\tweight={wt}\tweight_ratio={wt / f.degree:.4f}"
            f"\tirreducible={'true' if irr else 'false'}\telapsed={el:.2f}s"
        )
        return 0 if (irr and f.degree == prm.p) else 2
    from .equidist import full_report

    rep = full_report(prm, args.tempering, expensive=args.expensive)
    text = rep.to_tsv()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    el = time.perf_counter() - t0
    print(f"{prm.name}\ttempering={args.tempering}\ttotal_defect={rep.total_defect}\telapsed={el:.2f}s")
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    _effective("selftest")
    results = run_selftest()
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}\t{name}\t{detail}")
    failed = [name for name, ok, _ in results if not ok]
    if failed:
        print(f"selftest failed: {failed[0]}", file=sys.stderr)
        return 2
    print(f"selftest passed: {len(results)} checks")
    return 0


def cmd_list(args) -> int:
    _effective("list", w=args.w, p=args.p, toy=args.toy)
    for name, w, p, summary in list_params(args.w, args.p, include_toy=args.toy):
        print(f"{name}\t{w}\t{p}\t{summary}")
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="mxg", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def add_param(p, required=True):
        p.add_argument("--param", required=required, help="parameter set name, e.g. mxg32-521")
        p.add_argument("--param-file", help="extra parameter file to search before the embedded table")

    g = sub.add_parser("gen", help="write an output stream to stdout")
    add_param(g)
    g.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    g.add_argument("--mode", choices=engine.MODES, default="weyl")
    g.add_argument("--path", choices=("int32", "real64", "raw-words"), default="int32")
    g.add_argument("--count", type=int, required=True)
    g.add_argument("--format", choices=("raw", "hex", "dec"), default="raw")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("gen-verify", help="read a raw stream on stdin and print it as hex")
    add_param(v)
    v.add_argument("--path", choices=("int32", "real64", "raw-words"), default="int32")
    v.set_defaults(func=cmd_gen_verify)

    b = sub.add_parser("bench", help="throughput table (tab separated)")
    b.add_argument("--param", action="append", help="repeatable; default mxg32-521")
    b.add_argument("--param-file")
    b.add_argument("--mode", nargs="+", choices=engine.MODES, default=["none", "weyl"])
    b.add_argument("--duration", type=float, default=0.2, help="seconds per repetition")
    b.add_argument("--reps", type=int, default=5)
    b.add_argument("--no-baselines", action="store_true")
    b.set_defaults(func=cmd_bench)

    a = sub.add_parser("analyze", help="characteristic polynomial or equidistribution report")
    a.add_argument("kind", choices=("charpoly", "equidist"))
    add_param(a)
    a.add_argument("--expensive", action="store_true", help="allow p above 4423")
    a.add_argument("--tempering", choices=("none", "linear"), default="none")
    a.add_argument("--out", help="write the report (charpoly hex or equidist table) here")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("selftest", help="known answers, oracles and negative controls")
    s.set_defaults(func=cmd_selftest)

    ls = sub.add_parser("list", help="list embedded parameter sets")
    ls.add_argument("--w", type=int)
    ls.add_argument("--p", type=int)
    ls.add_argument("--toy", action="store_true")
    ls.set_defaults(func=cmd_list)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"mxg: error: {e}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 0
    except (ValueError, RuntimeError) as e:
        print(f"mxg: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
