"""Randomised search for hybrid parameter sets with primitive characteristic polynomials.

Usage::

    python tools/search_params.py 32 521 607 1279 --out tools/search_results.txt

Each hit is appended as a parameter-file record with a provenance comment.
Candidates are drawn from a ``random.Random`` seeded by (w, p, --seed), so a
run is reproducible.  Filters, cheapest first: Berlekamp-Massey degree on one
output bit, no linear factor, no factor of degree <= K (K grows with p, see
``sieve_depth``), then the full x^(2^p) = x test.  The sieve only discards
reducible polynomials, so its depth changes the run time but not the hit.
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from mxg.descriptors import LaggedXorshift, RecurrenceDescriptor, TwistedConcat, XorshiftOp
from mxg.gf2 import Gf2Poly, char_poly, is_irreducible_prime_degree, weight
from mxg.gf2.charpoly import output_bit_stream
from mxg.gf2.poly import Reducer, berlekamp_massey, poly_gcd, sqr
from mxg.params import GeneratorParams, serialize_params

WEYL = {32: 0x9E3779B9, 64: 0x9E3779B97F4A7C15, 128: 0x9E3779B97F4A7C15F39CC0605CEDC835}


def hybrid(name, w, p, m, a, b, c, d, weyl=None):
    n = -(-p // w)
    top = p - (n - 1) * w
    tm = ((1 << top) - 1) << (w - top)
    rec = RecurrenceDescriptor(
        (
            TwistedConcat(n, n - 1, tm, (XorshiftOp("L", a), XorshiftOp("R", b))),
            LaggedXorshift(n - m, (XorshiftOp("L", c), XorshiftOp("R", d))),
        )
    )
    return GeneratorParams(name, w, n, p, tm, rec, None, weyl if weyl is not None else WEYL.get(w, 1))


def small_factor_free(f: int, red: Reducer, kmax: int) -> bool:
    r = 0b10
    for k in range(1, kmax + 1):
        r = red.reduce(sqr(r))
        if k >= 2 and poly_gcd(f, r ^ 0b10) != 1:
            return False
    return True


def sieve_depth(p: int) -> int:
    # a gcd step costs a few squarings; a full test costs p of them
    return max(12, min(400, p // 25))


def search(w, p, seed, log, max_tries=10**9, lo_frac=8):
    n = -(-p // w)
    rng = random.Random(f"{w}-{p}-{seed}")
    t0 = time.time()
    stats = dict(tries=0, bm=0, lin=0, sieve=0, full=0)
    lo = max(1, w // lo_frac)
    for i in range(max_tries):
        m = rng.randint(2, max(2, n // 2))
        a, b, c, d = (rng.randint(lo, w - lo) for _ in range(4))
        prm = hybrid(f"mxg{w}-{p}", w, p, m, a, b, c, d)
        stats["tries"] += 1
        if i and i % 500 == 0:
            log(f"  w={w} p={p} {stats} {time.time() - t0:.0f}s")
        bits = output_bit_stream(prm, 0, 2 * p + 64, seed=1)
        f = berlekamp_massey(bits.tobytes()).coeffs
        if f.bit_length() - 1 != p:
            continue
        stats["bm"] += 1
        if poly_gcd(f, 0b110) != 1:
            continue
        stats["lin"] += 1
        red = Reducer(f)
        if not small_factor_free(f, red, sieve_depth(p)):
            continue
        stats["sieve"] += 1
        if not is_irreducible_prime_degree(Gf2Poly(f), expensive=True, use_cache=False):
            continue
        stats["full"] += 1
        g = char_poly(prm)
        assert g.coeffs == f, "projection disagreement"
        el = time.time() - t0
        log(f"hit w={w} p={p} idx={i} m={m} shifts={a},{b},{c},{d} weight={weight(g)} {stats} {el:.0f}s")
        prm = GeneratorParams(**{**prm.__dict__, "charpoly_weight": weight(g)})
        return prm, i, el, m, (a, b, c, d)
    return None


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("w", type=int)
    ap.add_argument("p", type=int, nargs="+")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", default="tools/search_results.txt")
    args = ap.parse_args(argv)

    def log(msg):
        print(msg, file=sys.stderr, flush=True)

    for p in args.p:
        res = search(args.w, p, args.seed, log)
        if res is None:
            continue
        prm, idx, el, m, shifts = res
        with open(args.out, "a") as fh:
            fh.write(f"# search seed {args.seed}, candidate {idx}, middle offset m={m}, {el:.0f}s\n")
            fh.write(serialize_params([prm]) + "\n")


if __name__ == "__main__":
    main()
