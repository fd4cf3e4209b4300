"""Dimension gaps of one parameter set with and without linear tempering.

    python demos/gap_table.py [name]
"""

import sys

from mxg.equidist import full_report
from mxg.params import lookup

name = sys.argv[1] if len(sys.argv) > 1 else "mxg32-521"
prm = lookup(name)
none, lin = full_report(prm, "none"), full_report(prm, "linear")

print(f"{name}: p={prm.p} w={prm.w}")
print("v\tk*\tnone\tlinear")
for a, b in zip(none.per_v, lin.per_v):
    print(f"{a.v}\t{a.k_star}\t{a.k_v}\t{b.k_v}")
print(f"total defect: none={none.total_defect} linear={lin.total_defect}")
