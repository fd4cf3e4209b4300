"""Re-certify every row of the embedded table from scratch.

Usage::

    python tools/verify_table.py [name ...]

For each row: Berlekamp-Massey characteristic polynomial, degree == p,
weight == charpoly_weight, then irreducibility (Mersenne p) or order of x
(toys).  No cache is used.  Prints one tab-separated line per row and exits
non-zero if any row fails.
"""

from __future__ import annotations

import sys
import time

from mxg.gf2 import char_poly, is_irreducible_prime_degree, is_primitive_small, weight
from mxg.params import registry


def main(argv=None) -> int:
    names = (argv if argv is not None else sys.argv[1:]) or sorted(registry(), key=lambda n: (registry()[n].w, registry()[n].p))
    bad = 0
    for name in names:
        prm = registry()[name]
        t0 = time.perf_counter()
        f = char_poly(prm)
        wt = weight(f)
        if prm.is_toy:
            ok = is_primitive_small(f)
        else:
            ok = is_irreducible_prime_degree(f, expensive=True, use_cache=False)
        ok = ok and f.degree == prm.p and wt == prm.charpoly_weight
        bad += not ok
        el = time.perf_counter() - t0
        print(f"{name}\tdegree={f.degree}\tweight={wt}\t{'ok' if ok else 'FAIL'}\t{el:.1f}s", flush=True)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
