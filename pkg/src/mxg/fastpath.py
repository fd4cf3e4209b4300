"""Block generation with numpy, vectorised along the output sequence.

The recurrence ``x[t] = f(x[t - lag] for lag in lags)`` only looks back by at
least ``min(lags)`` words, so that many words can be produced per numpy
operation.  128-bit words are carried as two uint64 limbs.
"""

from __future__ import annotations

import numpy as np

from .descriptors import LaggedXorshift

__all__ = ["Limbs", "BlockStepper", "word_dtype", "to_array", "to_ints", "temper_block", "add_block"]

_M64 = (1 << 64) - 1


def word_dtype(w: int):
    if w <= 32:
        return np.uint32
    if w == 64:
        return np.uint64
    if w == 128:
        return None
    raise ValueError(f"unsupported word size {w}")


class Limbs:
    """128-bit words as (hi, lo) uint64 arrays; shifts carry across the limbs."""

    __slots__ = ("hi", "lo")

    def __init__(self, hi, lo):
        self.hi = hi
        self.lo = lo

    @classmethod
    def zeros(cls, k):
        return cls(np.zeros(k, np.uint64), np.zeros(k, np.uint64))

    def __len__(self):
        return len(self.lo)

    def __getitem__(self, sl):
        return Limbs(self.hi[sl], self.lo[sl])

    def __setitem__(self, sl, value):
        self.hi[sl] = value.hi
        self.lo[sl] = value.lo

    def __xor__(self, other):
        return Limbs(self.hi ^ other.hi, self.lo ^ other.lo)

    def __and__(self, mask: int):
        return Limbs(self.hi & np.uint64(mask >> 64), self.lo & np.uint64(mask & _M64))

    def __or__(self, other):
        return Limbs(self.hi | other.hi, self.lo | other.lo)

    def __lshift__(self, s: int):
        if s >= 64:
            return Limbs(self.lo << np.uint64(s - 64), np.zeros_like(self.lo))
        s64 = np.uint64(s)
        return Limbs((self.hi << s64) | (self.lo >> np.uint64(64 - s)), self.lo << s64)

    def __rshift__(self, s: int):
        if s >= 64:
            return Limbs(np.zeros_like(self.hi), self.hi >> np.uint64(s - 64))
        s64 = np.uint64(s)
        return Limbs(self.hi >> s64, (self.lo >> s64) | (self.hi << np.uint64(64 - s)))

    def low_bit_times(self, a: int):
        bit = self.lo & np.uint64(1)
        return Limbs(bit * np.uint64(a >> 64), bit * np.uint64(a & _M64))

    def copy(self):
        return Limbs(self.hi.copy(), self.lo.copy())

    def stack(self) -> np.ndarray:
        return np.stack([self.hi, self.lo], axis=-1)


def to_array(ints, w: int):
    if w == 128:
        return Limbs(
            np.array([v >> 64 for v in ints], np.uint64),
            np.array([v & _M64 for v in ints], np.uint64),
        )
    return np.array(ints, word_dtype(w))


def to_ints(arr, w: int) -> list[int]:
    """Python ints from a block: a 1-D word array, a Limbs pair or an (k, 2) limb array."""
    if isinstance(arr, Limbs):
        arr = arr.stack()
    if w == 128:
        return [(int(h) << 64) | int(lo) for h, lo in np.asarray(arr).reshape(-1, 2)]
    return [int(v) for v in arr]


def _xorshift(y, ops, wmask, narrow):
    for left, s in ops:
        if left:
            y = y ^ ((y << s) & wmask) if narrow else y ^ (y << s)
        else:
            y = y ^ (y >> s)
    return y


class BlockStepper:
    """Specialised stepper compiled from one parameter set."""

    def __init__(self, params):
        self.params = params
        self.w = w = params.w
        self.n = params.n
        self.wmask = (1 << w) - 1
        # uint32/uint64 arithmetic wraps by itself; only toy widths need masking
        self.narrow = w not in (32, 64, 128)
        plan = []
        for t in params.recurrence.terms:
            ops = tuple((op.direction == "L", self._shift(op.shift)) for op in t.ops)
            if isinstance(t, LaggedXorshift):
                plan.append(("x", t.lag, None, None, None, ops, None))
            else:
                split = t.split_mask
                twist = t.twist.multiplier_mask if t.twist is not None else None
                plan.append(("c", t.lag_hi, t.lag_lo, self._const(split), self._const(self.wmask ^ split), ops, twist))
        self.plan = plan
        self.chunk = min(min(t.lags) for t in params.recurrence.terms)
        self.top_mask = self._const(params.top_mask)

    def _shift(self, s):
        return s if self.w == 128 else word_dtype(self.w)(s)

    def _const(self, v):
        return v if self.w == 128 else word_dtype(self.w)(v)

    def _read(self, x, t, lag, k):
        v = x[t - lag : t - lag + k]
        if lag == self.n:
            v = v & self.top_mask
        return v

    def run(self, init, count: int):
        """Extend an oldest-first state block by ``count`` words.

        Returns the whole buffer; the outputs are ``buf[n:]`` and the final
        state is ``buf[-n:]`` (its oldest word still unmasked).
        """
        n, w = self.n, self.w
        total = n + count
        if w == 128:
            x = Limbs.zeros(total)
        else:
            x = np.empty(total, word_dtype(w))
        x[:n] = init
        narrow, wmask, plan, chunk = self.narrow, self.wmask, self.plan, self.chunk
        t = n
        while t < total:
            k = min(chunk, total - t)
            acc = None
            for kind, lag_a, lag_b, split, losplit, ops, twist in plan:
                if kind == "x":
                    y = self._read(x, t, lag_a, k)
                else:
                    y = (self._read(x, t, lag_a, k) & split) | (self._read(x, t, lag_b, k) & losplit)
                y = _xorshift(y, ops, wmask, narrow)
                if kind == "c" and twist is not None:
                    if w == 128:
                        y = (y >> 1) ^ y.low_bit_times(twist)
                    else:
                        y = (y >> y.dtype.type(1)) ^ ((y & y.dtype.type(1)) * y.dtype.type(twist))
                acc = y if acc is None else acc ^ y
            x[t : t + k] = acc
            t += k
        return x


def temper_block(y, steps, w: int):
    """Apply a linear tempering chain to a block of words."""
    wmask = (1 << w) - 1
    narrow = w not in (32, 64, 128)
    for st in steps:
        s = st.shift if w == 128 else word_dtype(w)(st.shift)
        sh = (y << s) if st.direction == "L" else (y >> s)
        if narrow and st.direction == "L":
            sh = sh & word_dtype(w)(wmask)
        if st.and_mask is not None:
            sh = sh & (st.and_mask if w == 128 else word_dtype(w)(st.and_mask))
        y = y ^ sh
    return y


def add_block(a, b, w: int):
    """Elementwise addition modulo 2^w."""
    if w == 128:
        lo = a.lo + b.lo
        carry = (lo < a.lo).astype(np.uint64)
        return Limbs(a.hi + b.hi + carry, lo)
    s = a + b
    if w not in (32, 64):
        s = s & word_dtype(w)((1 << w) - 1)
    return s
