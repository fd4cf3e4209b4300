"""Seed a generator, draw words and reals, and skip ahead.

    python demos/quickstart.py
"""

import mxg
from mxg import engine
from mxg.gf2 import char_poly

prm = mxg.lookup("mxg32-521")
st = mxg.seed(prm, 5489)

print("first words:", [f"{w:08x}" for w in st.generate(4)])
print("a real in [0, 1):", st.next_real64())

# jump a copy 2^30 draws ahead; the original keeps its place
f = char_poly(prm)
far = mxg.jump(st, 1 << 30, f)
print("2^30 ahead:", [f"{w:08x}" for w in far.generate(4)])

# the same path the command line uses for --path real64
reals = engine.real64_block(st.generate(engine.words_needed(prm.w, "real64", 5)), prm.w)
print("reals:", reals.round(6).tolist())
