"""State recurrence, output tempering, seeding and jump-ahead.

The hybrid generator keeps an incomplete array in the Mersenne-Twister manner
(n words, the oldest one masked down so the state has exactly p bits) and
builds each new word from xorshift factors of earlier words as in xorgens::

    x[k+n] = (x[k]^u | x[k+1]^l) (I+L^a)(I+R^b)  ^  x[k+m] (I+L^c)(I+R^d)

The exact shape is whatever the parameter set's ``RecurrenceDescriptor`` says;
this module interprets it.  The interpreter uses only ``^ & | << >>`` and
multiplication by a bit, so the same code steps a single state held in Python
ints or a whole batch of states held in numpy arrays.

Effective-state bit layout (used by analysis and the transition matrix):
bits ``[(o-1)w, o w)`` hold the word of age ``n-1-o`` for ``o = 1..n-1``
(offset ``o`` from the oldest word), and the top ``p-(n-1)w`` bits of the
oldest word sit at bits ``[(n-1)w, p)``.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from . import fastpath
from .descriptors import LaggedXorshift
from .gf2.poly import Gf2Poly, poly_powmod_x
from .params import GeneratorParams

__all__ = [
    "ConfigurationError",
    "CharpolyMismatchError",
    "GeneratorState",
    "MODES",
    "seed",
    "step_words",
    "temper_linear",
    "untemper_linear",
    "words_to_real64",
    "int32_parts",
    "jump",
]

MODES = ("none", "linear", "weyl")
_M64 = (1 << 64) - 1


class ConfigurationError(ValueError):
    pass


class CharpolyMismatchError(ValueError):
    pass


@lru_cache(maxsize=None)
def _plan(params: GeneratorParams):
    plan = []
    for t in params.recurrence.terms:
        ops = tuple((op.direction == "L", op.shift) for op in t.ops)
        if isinstance(t, LaggedXorshift):
            plan.append((False, t.lag, 0, 0, 0, ops, 0))
        else:
            a = t.twist.multiplier_mask if t.twist is not None else 0
            plan.append((True, t.lag_hi, t.lag_lo, t.split_mask, params.word_mask ^ t.split_mask, ops, a))
    return tuple(plan)


def step_words(params: GeneratorParams, words: list, cursor: int):
    """Advance a circular word buffer by one raw step, in place.

    ``words[cursor]`` is the oldest word.  Returns ``(new_word, new_cursor)``.
    Entries may be ints or equally-shaped numpy arrays.
    """
    n = params.n
    wmask = params.word_mask
    new = 0
    for concat, lag_a, lag_b, split, losplit, ops, twist in _plan(params):
        y = words[(cursor + n - lag_a) % n]
        if concat:
            y = (y & split) | (words[(cursor + n - lag_b) % n] & losplit)
        for left, s in ops:
            if left:
                y = y ^ ((y << s) & wmask)
            else:
                y = y ^ (y >> s)
        if twist:
            y = (y >> 1) ^ ((y & 1) * twist)
        new = new ^ y
    words[cursor] = new
    cursor = (cursor + 1) % n
    words[cursor] = words[cursor] & params.top_mask
    return new, cursor


def temper_linear(y, steps, w: int):
    wmask = (1 << w) - 1
    for st in steps:
        t = ((y << st.shift) & wmask) if st.direction == "L" else (y >> st.shift)
        if st.and_mask is not None:
            t = t & st.and_mask
        y = y ^ t
    return y


def untemper_linear(y, steps, w: int):
    """Inverse of :func:`temper_linear` (each step is unipotent)."""
    wmask = (1 << w) - 1
    for st in reversed(steps):
        mask = wmask if st.and_mask is None else st.and_mask
        x = y
        for _ in range(-(-w // st.shift)):
            t = ((x << st.shift) & wmask) if st.direction == "L" else (x >> st.shift)
            x = y ^ (t & mask)
        y = x
    return y


def words_to_real64(words, w: int, start: int = 0) -> float:
    """Real from the top 53 of the 64 bits assembled from consecutive words."""
    k = -(-64 // w)
    v = 0
    for i in range(k):
        v = (v << w) | int(words[start + i])
    v >>= k * w - 64
    return (v >> 11) * 2.0**-53


def int32_parts(word: int, w: int) -> list[int]:
    """32-bit parts of a word, most significant first (w >= 32)."""
    return [(word >> (w - 32 * (i + 1))) & 0xFFFFFFFF for i in range(w // 32)]


def _filler(seed: int):
    v = seed & _M64
    i = 0
    while True:
        yield v
        i += 1
        v = (6364136223846793005 * (v ^ (v >> 62)) + i) & _M64


class GeneratorState:
    """Mutable generator state: word buffer, cursor and Weyl accumulator."""

    __slots__ = ("params", "words", "cursor", "weyl_acc", "repaired")

    def __init__(self, params: GeneratorParams, words, cursor: int = 0, weyl_acc: int = 0, repaired: bool = False):
        if len(words) != params.n:
            raise ValueError(f"expected {params.n} words, got {len(words)}")
        self.params = params
        self.words = [int(x) & params.word_mask for x in words]
        self.cursor = cursor % params.n
        self.words[self.cursor] &= params.top_mask
        self.weyl_acc = weyl_acc & params.word_mask
        self.repaired = repaired

    @classmethod
    def from_effective_bits(cls, params: GeneratorParams, bits: int, weyl_acc: int = 0) -> "GeneratorState":
        w, n = params.w, params.n
        wmask = params.word_mask
        words = [(bits >> ((n - 1) * w)) << (w - params.top_bits)]
        words += [(bits >> ((o - 1) * w)) & wmask for o in range(1, n)]
        return cls(params, words, 0, weyl_acc)

    def effective_bits(self) -> int:
        w, n = self.params.w, self.params.n
        ordered = self.oldest_first()
        bits = ordered[0] >> (w - self.params.top_bits) << ((n - 1) * w)
        for o in range(1, n):
            bits |= ordered[o] << ((o - 1) * w)
        return bits

    def oldest_first(self) -> list[int]:
        c = self.cursor
        return self.words[c:] + self.words[:c]

    def copy(self) -> "GeneratorState":
        return GeneratorState(self.params, list(self.words), self.cursor, self.weyl_acc, self.repaired)

    def __eq__(self, other):
        if not isinstance(other, GeneratorState):
            return NotImplemented
        return (
            self.params == other.params
            and self.oldest_first() == other.oldest_first()
            and self.weyl_acc == other.weyl_acc
        )

    def __repr__(self):
        return f"GeneratorState({self.params.name}, cursor={self.cursor}, weyl_acc={self.weyl_acc:#x})"

    # -- single-word interface

    def next_raw(self) -> int:
        new, self.cursor = step_words(self.params, self.words, self.cursor)
        return new

    def next_word(self, mode: str = "weyl") -> int:
        prm = self.params
        if mode == "none":
            return self.next_raw()
        if mode == "linear":
            if prm.tempering_linear is None:
                raise ConfigurationError(f"{prm.name} has no linear tempering")
            return temper_linear(self.next_raw(), prm.tempering_linear.linear_ops, prm.w)
        if mode == "weyl":
            self.weyl_acc = (self.weyl_acc + prm.weyl_increment) & prm.word_mask
            return (self.next_raw() + self.weyl_acc) & prm.word_mask
        raise ConfigurationError(f"unknown mode {mode!r}; expected one of {MODES}")

    def next_real64(self, mode: str = "weyl") -> float:
        k = -(-64 // self.params.w)
        return words_to_real64([self.next_word(mode) for _ in range(k)], self.params.w)

    # -- block interface (fast path)

    def generate(self, count: int, mode: str = "weyl"):
        """Next ``count`` output words as a numpy block.

        Equivalent to ``count`` calls of :meth:`next_word`.  Words are uint32
        for w <= 32, uint64 for w = 64, and an (count, 2) uint64 array of
        (hi, lo) limbs for w = 128.
        """
        prm = self.params
        if mode not in MODES:
            raise ConfigurationError(f"unknown mode {mode!r}; expected one of {MODES}")
        if mode == "linear" and prm.tempering_linear is None:
            raise ConfigurationError(f"{prm.name} has no linear tempering")
        out = self._raw_block(count)
        if mode == "linear":
            out = fastpath.temper_block(out, prm.tempering_linear.linear_ops, prm.w)
        elif mode == "weyl":
            inc = prm.weyl_increment
            if prm.w == 128:
                acc = [(self.weyl_acc + inc * (i + 1)) & prm.word_mask for i in range(count)]
                seq = fastpath.to_array(acc, 128)
            else:
                dt = fastpath.word_dtype(prm.w)
                idx = np.arange(1, count + 1, dtype=np.uint64)
                seq = (np.uint64(self.weyl_acc) + idx * np.uint64(inc)) & np.uint64(prm.word_mask)
                seq = seq.astype(dt)
            out = fastpath.add_block(out, seq, prm.w)
            self.weyl_acc = (self.weyl_acc + inc * count) & prm.word_mask
        return out.stack() if isinstance(out, fastpath.Limbs) else out

    def _raw_block(self, count: int):
        prm = self.params
        stepper = _stepper(prm)
        buf = stepper.run(fastpath.to_array(self.oldest_first(), prm.w), count)
        tail = fastpath.to_ints(buf[len(buf) - prm.n :], prm.w)
        self.words = tail
        self.cursor = 0
        self.words[0] &= prm.top_mask
        return buf[prm.n :]


@lru_cache(maxsize=None)
def _stepper(params: GeneratorParams) -> fastpath.BlockStepper:
    return fastpath.BlockStepper(params)


def seed(params: GeneratorParams, seed: int = 5489) -> GeneratorState:
    """Deterministic state from a 64-bit seed.

    The seed drives the 64-bit multiplicative filler of MT19937-64's
    initialisation; w-bit words take the top w bits of each filler value
    (w = 128 joins two).  The oldest word is masked, an all-zero effective
    state is repaired by setting bit 0 of the second-oldest word (the masked
    word's low bits are not state), and n warm-up steps follow.
    """
    w, n = params.w, params.n
    fill = _filler(seed)
    if w <= 64:
        take = lambda: next(fill) >> (64 - w)  # noqa: E731
    else:
        take = lambda: (next(fill) << 64) | next(fill)  # noqa: E731
    words = [take() for _ in range(n)]
    acc = take()
    st = GeneratorState(params, words, 0, acc)
    if st.effective_bits() == 0:
        st.words[1] |= 1
        st.repaired = True
    for _ in range(n):
        st.next_raw()
    return st


def jump(state: GeneratorState, steps: int, charpoly: Gf2Poly) -> GeneratorState:
    """State after ``steps`` raw steps, in O(p^2) via x^steps mod charpoly.

    ``g = x^steps mod f`` is evaluated at the transition T: with the orbit
    words X[0], X[1], ... starting from the current state, ``T^i`` of the state
    is the window X[i : i+n], so g(T) applied to the state is the XOR of the
    windows at the set coefficients of g.
    """
    prm = state.params
    if charpoly.degree != prm.p:
        raise CharpolyMismatchError(f"charpoly degree {charpoly.degree} != p = {prm.p}")
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    g = poly_powmod_x(steps, charpoly)
    exps = np.array(g.exponents(), dtype=np.int64)
    n = prm.n
    buf = _stepper(prm).run(fastpath.to_array(state.oldest_first(), prm.w), prm.p)
    if prm.w == 128:
        arr = buf.stack()
    else:
        arr = buf
    out = []
    for o in range(n):
        sel = arr[exps + o]
        if len(sel) == 0:
            out.append(0)
            continue
        red = np.bitwise_xor.reduce(sel, axis=0)
        out.append(fastpath.to_ints(red.reshape(1, -1) if prm.w == 128 else red.reshape(1), prm.w)[0])
    new = GeneratorState(
        prm,
        out,
        0,
        (state.weyl_acc + steps * prm.weyl_increment) & prm.word_mask,
        state.repaired,
    )
    return new


def empirical_period(state: GeneratorState, limit: int) -> int | None:
    """Steps until the effective state recurs, or None within ``limit`` steps."""
    st = state.copy()
    start = st.effective_bits()
    for i in range(1, limit + 1):
        st.next_raw()
        if st.effective_bits() == start:
            return i
    return None


def batch_unit_states(params: GeneratorParams, columns=None):
    """Circular word buffer holding, in batch lane j, the unit state e_j.

    Lanes are numpy arrays (uint64, or object for w = 128) so
    :func:`step_words` advances every lane at once.
    """
    cols = list(range(params.p)) if columns is None else list(columns)
    return batch_states(params, [1 << j for j in cols])


def batch_states(params: GeneratorParams, bit_vectors):
    """Circular buffer (cursor 0) for many effective-state vectors at once."""
    n, w = params.n, params.w
    if w > 64:
        words = [np.empty(len(bit_vectors), dtype=object) for _ in range(n)]
        for j, bits in enumerate(bit_vectors):
            ws = GeneratorState.from_effective_bits(params, int(bits)).words
            for i in range(n):
                words[i][j] = ws[i]
        return words
    small = params.p <= 64
    vec = np.asarray(bit_vectors, dtype=np.uint64 if small else object)
    c = np.uint64 if small else int
    words = []
    for i in range(n):
        if i == 0:
            lane = (vec >> c((n - 1) * w)) << c(w - params.top_bits)
        else:
            lane = (vec >> c((i - 1) * w)) & c(params.word_mask)
        words.append(lane.astype(np.uint64))
    return words


def batch_effective_bits(params: GeneratorParams, words, cursor: int) -> list[int]:
    """Inverse of :func:`batch_states`: lane-wise effective-state integers."""
    n, w = params.n, params.w
    ordered = words[cursor:] + words[:cursor]
    lanes = len(ordered[0])
    out = [0] * lanes
    for j in range(lanes):
        bits = int(ordered[0][j]) >> (w - params.top_bits) << ((n - 1) * w)
        for o in range(1, n):
            bits |= int(ordered[o][j]) << ((o - 1) * w)
        out[j] = bits
    return out


def real64_block(words: np.ndarray, w: int) -> np.ndarray:
    """Reals from a block of words, :func:`words_to_real64` vectorised."""
    if w == 128:
        top = np.asarray(words)[:, 0]
    elif w == 64:
        top = np.asarray(words, np.uint64)
    elif w == 32:
        ws = np.asarray(words, np.uint64)
        ws = ws[: len(ws) // 2 * 2].reshape(-1, 2)
        top = (ws[:, 0] << np.uint64(32)) | ws[:, 1]
    else:
        k = -(-64 // w)
        ws = np.asarray(words, np.uint64)
        ws = ws[: len(ws) // k * k].reshape(-1, k)
        top = np.zeros(len(ws), np.uint64)
        for i in range(k):
            top = top | (ws[:, i] << np.uint64(64 - w * (i + 1)))
    return (top >> np.uint64(11)).astype(np.float64) * 2.0**-53


def int32_block(words: np.ndarray, w: int) -> np.ndarray:
    """32-bit integer stream from a block, most significant part first."""
    if w == 32:
        return np.asarray(words, np.uint32)
    if w == 64:
        ws = np.asarray(words, np.uint64)
        return np.stack([(ws >> np.uint64(32)), ws & np.uint64(0xFFFFFFFF)], axis=1).reshape(-1).astype(np.uint32)
    if w == 128:
        ws = np.asarray(words, np.uint64)
        hi, lo = ws[:, 0], ws[:, 1]
        m = np.uint64(0xFFFFFFFF)
        parts = [hi >> np.uint64(32), hi & m, lo >> np.uint64(32), lo & m]
        return np.stack(parts, axis=1).reshape(-1).astype(np.uint32)
    k = 32 // w
    ws = np.asarray(words, np.uint64)
    ws = ws[: len(ws) // k * k].reshape(-1, k)
    v = np.zeros(len(ws), np.uint64)
    for i in range(k):
        v = (v << np.uint64(w)) | ws[:, i]
    return v.astype(np.uint32)


def words_needed(w: int, path: str, count: int) -> int:
    """Output words consumed to produce ``count`` values on a path."""
    if path == "real64":
        return count * math.ceil(64 / w)
    if path == "int32":
        return -(-count * 32 // w) if w >= 32 else count * (32 // w)
    return count
