"""Exhaustive search for toy parameter sets (w <= 8) with primitive characteristic polynomials."""

import itertools
import sys

sys.path.insert(0, "tools")
from search_params import hybrid  # noqa: E402

from mxg.gf2 import is_primitive_small, transition_matrix, weight  # noqa: E402


def primitive_sets(w, p):
    n = -(-p // w)
    for m in range(1, n):
        for a, b, c, d in itertools.product(range(1, w), repeat=4):
            prm = hybrid(f"toy{w}-{p}", w, p, m, a, b, c, d, weyl=0x9 if w == 4 else 0x0B)
            f = transition_matrix(prm).charpoly()
            if is_primitive_small(f):
                yield prm, m, (a, b, c, d), weight(f)


if __name__ == "__main__":
    for w, p in [(4, 7), (4, 11), (4, 13), (8, 11), (8, 13)]:
        hits = list(primitive_sets(w, p))
        print(w, p, len(hits), [(m, s, wt) for _, m, s, wt in hits[:6]])
