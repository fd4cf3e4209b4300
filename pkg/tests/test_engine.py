import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import TOY_NAMES
from mxg import engine, fastpath
from mxg.gf2 import Gf2Poly, char_poly, transition_matrix
from mxg.params import lookup, registry
from mxg.selftest import KAT_MXG32_521_RAW, KAT_MXG32_521_WEYL
from straightline import StraightLine

ALL = sorted(registry())
FULL = [n for n in ALL if not n.startswith("toy")]
SMALL_FULL = ["mxg32-521", "mxg64-521", "mxg128-521", "mxg32-607"]


# --------------------------------------------------------------- seeding


def test_seed_deterministic():
    prm = lookup("toy8-11")
    assert engine.seed(prm, 1) == engine.seed(prm, 1)
    assert engine.seed(prm, 1) != engine.seed(prm, 2)


@pytest.mark.parametrize("name", TOY_NAMES + SMALL_FULL)
@pytest.mark.parametrize("s", [0, 1, 5489, 2**64 - 1])
def test_seed_nonzero_and_masked(name, s):
    prm = lookup(name)
    st_ = engine.seed(prm, s)
    assert st_.effective_bits() != 0
    assert st_.words[st_.cursor] & ~prm.top_mask == 0


def test_zero_state_repair(monkeypatch):
    def zeros(seed):
        while True:
            yield 0

    monkeypatch.setattr(engine, "_filler", zeros)
    prm = lookup("toy8-11")
    st_ = engine.seed(prm, 123)
    assert st_.repaired
    assert st_.effective_bits() != 0


def test_kat_matches_straightline():
    prm = lookup("mxg32-521")
    st_ = engine.seed(prm, 5489)
    assert tuple(st_.next_raw() for _ in range(4)) == KAT_MXG32_521_RAW
    assert tuple(int(x) for x in engine.seed(prm, 5489).generate(4)) == KAT_MXG32_521_WEYL
    ref = StraightLine(5489)
    assert tuple(ref.weyl() for _ in range(4)) == KAT_MXG32_521_WEYL


@pytest.mark.parametrize("s", [1, 5489, 2**63 + 17])
def test_straightline_long_run(s):
    a = engine.seed(lookup("mxg32-521"), s)
    ref = StraightLine(s)
    assert [a.next_word("none") for _ in range(3000)] == [ref.raw() for _ in range(3000)]
    block = a.generate(10_000, "weyl")
    assert block.tolist() == [ref.weyl() for _ in range(10_000)]


# ----------------------------------------------------------- raw stream


@pytest.mark.parametrize("name", TOY_NAMES)
def test_toy_full_period(name):
    prm = lookup(name)
    assert engine.empirical_period(engine.seed(prm, 3), 1 << prm.p) == (1 << prm.p) - 1


def test_raw_ignores_weyl_acc():
    prm = lookup("mxg32-521")
    a = engine.seed(prm, 9)
    b = a.copy()
    b.weyl_acc ^= 0x12345
    assert [a.next_raw() for _ in range(100)] == [b.next_raw() for _ in range(100)]


@pytest.mark.parametrize("name", TOY_NAMES)
def test_unit_state_output_matches_matrix(name):
    prm = lookup(name)
    m = transition_matrix(prm)
    rng = random.Random(5)
    for _ in range(20):
        bits = rng.getrandbits(prm.p) or 1
        s = engine.GeneratorState.from_effective_bits(prm, bits)
        s.next_raw()
        assert s.effective_bits() == m.apply(bits)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(ALL), st.integers(1, 2**20000), st.integers(1, 2**20000))
def test_raw_linearity(name, x, y):
    prm = lookup(name)
    mask = (1 << prm.p) - 1
    x, y = x & mask or 1, y & mask or 2
    sx, sy, sxy = (engine.GeneratorState.from_effective_bits(prm, v) for v in (x, y, x ^ y))
    for _ in range(3):
        assert sx.next_raw() ^ sy.next_raw() == sxy.next_raw()


@pytest.mark.parametrize("name", TOY_NAMES + SMALL_FULL)
def test_effective_bits_round_trip(name):
    prm = lookup(name)
    bits = random.Random(name).getrandbits(prm.p)
    assert engine.GeneratorState.from_effective_bits(prm, bits).effective_bits() == bits


# ---------------------------------------------------------------- modes


def test_mode_none_is_raw():
    prm = lookup("mxg32-521")
    a = engine.seed(prm, 4)
    b = a.copy()
    assert all(a.next_word("none") == b.next_raw() for _ in range(10_000))


@pytest.mark.parametrize("name", ALL)
def test_linear_tempering_round_trip(name):
    prm = lookup(name)
    ops = prm.tempering_linear.linear_ops
    rng = random.Random(name)
    for _ in range(300):
        y = rng.getrandbits(prm.w)
        assert engine.untemper_linear(engine.temper_linear(y, ops, prm.w), ops, prm.w) == y


def test_linear_mode_recovers_raw():
    prm = lookup("mxg64-521")
    a = engine.seed(prm, 4)
    b = a.copy()
    ops = prm.tempering_linear.linear_ops
    for _ in range(1000):
        assert engine.untemper_linear(a.next_word("linear"), ops, 64) == b.next_raw()


def test_weyl_toy8_11_straightline():
    prm = lookup("toy8-11")
    assert prm.weyl_increment == 0x0B
    a = engine.seed(prm, 77)
    b = a.copy()
    acc = a.weyl_acc
    for _ in range(5000):
        acc = (acc + 0x0B) & 0xFF
        assert a.next_word("weyl") == (b.next_raw() + acc) & 0xFF


def test_mode_errors():
    prm = lookup("mxg32-521")
    s = engine.seed(prm)
    with pytest.raises(engine.ConfigurationError):
        s.next_word("bogus")
    with pytest.raises(engine.ConfigurationError):
        s.generate(4, "bogus")
    import dataclasses

    bare = dataclasses.replace(prm, tempering_linear=None)
    with pytest.raises(engine.ConfigurationError):
        engine.seed(bare).next_word("linear")


@pytest.mark.parametrize("name", ["toy4-7", "toy8-13", *SMALL_FULL])
@pytest.mark.parametrize("mode", engine.MODES)
def test_block_equals_single_steps(name, mode):
    prm = lookup(name)
    a = engine.seed(prm, 21)
    b = a.copy()
    blk = a.generate(700, mode)
    ints = fastpath.to_ints(blk, 128) if prm.w == 128 else blk.tolist()
    assert ints == [b.next_word(mode) for _ in range(700)]
    assert a == b
    assert a.weyl_acc == b.weyl_acc


# ----------------------------------------------------------------- reals


@pytest.mark.parametrize("w", [4, 8, 32, 64, 128])
def test_real64_extremes(w):
    k = -(-64 // w)
    assert engine.words_to_real64([0] * k, w) == 0.0
    assert engine.words_to_real64([(1 << w) - 1] * k, w) == (2**53 - 1) / 2**53


def test_real64_assembly_w32():
    prm = lookup("mxg32-521")
    a = engine.seed(prm, 8)
    b = a.copy()
    for _ in range(200):
        hi, lo = b.next_word(), b.next_word()
        assert a.next_real64() == (((hi << 32) | lo) >> 11) * 2.0**-53


@pytest.mark.parametrize("name", ["toy8-11", "mxg32-521", "mxg64-521", "mxg128-521"])
def test_real64_block_matches_scalar(name):
    prm = lookup(name)
    a = engine.seed(prm, 8)
    b = a.copy()
    count = 300
    reals = engine.real64_block(a.generate(engine.words_needed(prm.w, "real64", count)), prm.w)
    assert reals.tolist() == [b.next_real64() for _ in range(count)]
    assert np.all((reals >= 0) & (reals < 1))


@pytest.mark.parametrize("name", ["toy8-11", "mxg32-521", "mxg64-521", "mxg128-521"])
def test_int32_parts_most_significant_first(name):
    prm = lookup(name)
    a = engine.seed(prm, 8)
    b = a.copy()
    words = a.generate(64)
    parts = engine.int32_block(words, prm.w).tolist()
    expect = []
    if prm.w >= 32:
        for _ in range(64):
            expect += engine.int32_parts(b.next_word(), prm.w)
    else:
        k = 32 // prm.w
        for _ in range(64 // k):
            v = 0
            for _ in range(k):
                v = (v << prm.w) | b.next_word()
            expect.append(v)
    assert parts == expect


# ------------------------------------------------------------------- jump


@pytest.fixture(scope="module")
def f521():
    return char_poly(lookup("mxg32-521"))


def test_jump_zero_and_one(f521):
    prm = lookup("mxg32-521")
    s = engine.seed(prm, 3)
    assert engine.jump(s, 0, f521) == s
    t = s.copy()
    t.next_word("weyl")
    assert engine.jump(s, 1, f521) == t


def test_jump_one_toy():
    prm = lookup("toy8-11")
    f = char_poly(prm)
    s = engine.seed(prm, 3)
    t = s.copy()
    t.next_word("weyl")
    assert engine.jump(s, 1, f) == t


def test_jump_2_20(f521):
    prm = lookup("mxg32-521")
    s = engine.seed(prm, 99)
    jumped = engine.jump(s, 1 << 20, f521)
    t = s.copy()
    t.generate(1 << 20, "weyl")
    assert jumped == t
    assert jumped.weyl_acc == (s.weyl_acc + (1 << 20) * prm.weyl_increment) & prm.word_mask


@pytest.mark.parametrize("name", ["mxg64-521", "mxg128-521", "toy4-13"])
def test_jump_other_widths(name):
    prm = lookup(name)
    f = char_poly(prm)
    s = engine.seed(prm, 5)
    t = s.copy()
    t.generate(12_345, "none")
    assert engine.jump(s, 12_345, f).oldest_first() == t.oldest_first()


def test_jump_beyond_period_wraps():
    prm = lookup("toy8-11")
    f = char_poly(prm)
    s = engine.seed(prm, 5)
    period = (1 << 11) - 1
    assert engine.jump(s, 5 * period + 3, f).oldest_first() == engine.jump(s, 3, f).oldest_first()


def test_jump_mismatch(f521):
    with pytest.raises(engine.CharpolyMismatchError):
        engine.jump(engine.seed(lookup("mxg32-607")), 5, f521)
    with pytest.raises(engine.CharpolyMismatchError):
        engine.jump(engine.seed(lookup("mxg32-521")), 5, Gf2Poly(0b1011))


# ------------------------------------------------------- fast path / limbs


@pytest.mark.parametrize("name", SMALL_FULL + ["toy8-11"])
def test_fastpath_matches_interpreter(name):
    prm = lookup(name)
    a = engine.seed(prm, 13)
    b = a.copy()
    got = fastpath.to_ints(a._raw_block(5000), prm.w)
    assert got == [b.next_raw() for _ in range(5000)]


@settings(max_examples=200)
@given(st.integers(0, 2**128 - 1), st.integers(0, 2**128 - 1), st.integers(1, 127))
def test_limbs_ops(x, y, s):
    M = 2**128 - 1
    a, b = fastpath.to_array([x], 128), fastpath.to_array([y], 128)
    assert fastpath.to_ints(a ^ b, 128) == [x ^ y]
    assert fastpath.to_ints(a << s, 128) == [(x << s) & M]
    assert fastpath.to_ints(a >> s, 128) == [x >> s]
    assert fastpath.to_ints(fastpath.add_block(a, b, 128), 128) == [(x + y) & M]
