"""Built-in self-test: known answers, toy oracles and negative controls.

``run_selftest`` returns ``(name, ok, detail)`` triples in a fixed order; the
CLI reports the first failure.  The whole run stays well under a minute.
"""

from __future__ import annotations

import random
import traceback

from . import engine
from .bench import mt19937_init
from .equidist import exhaustive_k_of_v, k_of_v
from .gf2 import char_poly, is_irreducible_prime_degree, weight
from .params import GeneratorParams, embedded_table_text, parse_param_file, serialize_params, table_checksum
from .stat_smoke import bits_from_uint32, control_words, run_tests

# frozen by tools/build_table.py output; update together with the table
TABLE_SHA256 = "aa7913bb29d62da7da5894ac4297ac167cc48e64ef62c04178a4e08cfb18d57e"

# seed(mxg32-521, 5489): first four output words
KAT_MXG32_521_WEYL = (0xD1A984E2, 0x90AEAE04, 0xB8658F4B, 0xB8C0B265)
KAT_MXG32_521_RAW = (0x6D301C1C, 0x8DFDCB85, 0x177D3313, 0x79A0DC74)

# reference MT19937 init_genrand(5489), tempered
KAT_MT19937 = (3499211612, 581869302, 3890346734, 3586334585)

CONTROL_BYTES = 1 << 20


def _registry(text: str) -> dict[str, GeneratorParams]:
    return {p.name: p for p in parse_param_file(text)}


def _check_checksum(text, reg):
    got = table_checksum(text)
    return got == TABLE_SHA256, f"sha256 {got[:16]}..."


def _check_table(text, reg):
    rows = list(reg.values())
    for prm in rows:
        prm.validate()
    again = parse_param_file(serialize_params(rows))
    return again == rows, f"{len(rows)} rows validate and round-trip"


def _check_kat(text, reg):
    prm = reg["mxg32-521"]
    weyl = tuple(int(x) for x in engine.seed(prm, 5489).generate(4, "weyl"))
    st = engine.seed(prm, 5489)
    raw = tuple(st.next_raw() for _ in range(4))
    ok = weyl == KAT_MXG32_521_WEYL and raw == KAT_MXG32_521_RAW
    return ok, "weyl " + " ".join(f"{x:08x}" for x in weyl)


def _check_mt19937(text, reg):
    st = mt19937_init(5489)
    got = tuple(st.next_word("linear") for _ in range(4))
    blk = tuple(int(x) for x in mt19937_init(5489).generate(4, "linear"))
    return got == KAT_MT19937 and blk == KAT_MT19937, f"{got}"


def _toys(reg):
    return [p for p in reg.values() if p.is_toy]


def _check_toy_oracle(text, reg):
    n = 0
    for prm in _toys(reg):
        if prm.p > 11:
            continue
        modes = ["none"] + (["linear"] if prm.tempering_linear is not None else [])
        for mode in modes:
            for v in range(1, prm.w + 1):
                if k_of_v(prm, v, mode) != exhaustive_k_of_v(prm, v, mode):
                    return False, f"{prm.name} v={v} mode={mode}"
                n += 1
    return n > 0, f"{n} (set, v, mode) cases agree"


def _check_toy_period(text, reg):
    for prm in _toys(reg):
        if prm.p > 13:
            continue
        period = engine.empirical_period(engine.seed(prm, 1), 1 << prm.p)
        if period != (1 << prm.p) - 1:
            return False, f"{prm.name} period {period}"
    return True, "all toy periods are 2^p - 1"


def _check_fastpath(text, reg):
    for name in ("mxg32-521", "mxg64-521", "mxg128-521"):
        if name not in reg:
            continue
        prm = reg[name]
        a = engine.seed(prm, 7)
        b = a.copy()
        block = engine.fastpath.to_ints(a._raw_block(2000), prm.w)
        slow = [b.next_raw() for _ in range(2000)]
        if block != slow or a != b:
            return False, name
    return True, "block stepping equals the interpreter"


def _check_charpoly(text, reg):
    prm = reg["mxg32-521"]
    f = char_poly(prm)
    ok = f.degree == prm.p and is_irreducible_prime_degree(f, use_cache=False) and weight(f) == prm.charpoly_weight
    return ok, f"degree={f.degree} weight={weight(f)}"


def _check_jump(text, reg):
    prm = reg["mxg32-521"]
    f = char_poly(prm)
    st = engine.seed(prm, 11)
    jumped = engine.jump(st, 4321, f)
    for _ in range(4321):
        st.next_raw()
    return jumped.oldest_first() == st.oldest_first(), "jump(4321) equals stepping"


def _check_tempering(text, reg):
    rng = random.Random(3)
    for prm in reg.values():
        if prm.tempering_linear is None:
            continue
        ops = prm.tempering_linear.linear_ops
        for _ in range(50):
            y = rng.getrandbits(prm.w)
            if engine.untemper_linear(engine.temper_linear(y, ops, prm.w), ops, prm.w) != y:
                return False, prm.name
    prm = reg["mxg32-521"]
    a = engine.seed(prm, 5)
    b = a.copy()
    for _ in range(1000):
        out = a.next_word("weyl")
        if (out - a.weyl_acc) & prm.word_mask != b.next_raw():
            return False, "weyl output minus accumulator differs from raw"
    return True, "linear tempering inverts; weyl minus accumulator is raw"


def _check_controls(text, reg):
    for kind in ("zero", "one", "counter"):
        bits = bits_from_uint32(control_words(kind, CONTROL_BYTES // 4))
        worst = min(o.p_value for o in run_tests(bits))
        if not worst < 1e-6:
            return False, f"control {kind} min p = {worst:.3g}"
    return True, "zero, one and counter streams are rejected"


CHECKS = (
    ("table_checksum", _check_checksum),
    ("table_parse", _check_table),
    ("kat_mxg32_521", _check_kat),
    ("kat_mt19937", _check_mt19937),
    ("fastpath_vs_interpreter", _check_fastpath),
    ("toy_equidist_oracle", _check_toy_oracle),
    ("toy_full_period", _check_toy_period),
    ("charpoly_mxg32_521", _check_charpoly),
    ("jump_mxg32_521", _check_jump),
    ("tempering", _check_tempering),
    ("battery_negative_controls", _check_controls),
)


def run_selftest(table_text: str | None = None) -> list[tuple[str, bool, str]]:
    text = embedded_table_text() if table_text is None else table_text
    try:
        reg = _registry(text)
    except Exception as e:  # parse errors fail every table-dependent check
        reg = None
        parse_error = f"{type(e).__name__}: {e}"
    results = []
    for name, fn in CHECKS:
        if reg is None and name != "table_checksum":
            results.append((name, False, parse_error))
            continue
        try:
            ok, detail = fn(text, reg)
        except Exception as e:
            ok = False
            detail = f"{type(e).__name__}: {e} @ {traceback.extract_tb(e.__traceback__)[-1].name}"
        results.append((name, bool(ok), detail))
    return results

