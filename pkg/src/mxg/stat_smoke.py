"""A small built-in statistical battery for smoke-testing output streams.

Five classical tests on a bit stream: monobit frequency, block frequency
(m = 128), runs, 32x32 binary matrix rank, and the overlapping 16-bit serial
test (two statistics).  It is a desk-scale echo of a full external battery,
which is fed through ``mxg gen --format raw``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaincc

from . import engine
from .params import GeneratorParams

__all__ = [
    "TestOutcome",
    "monobit",
    "block_frequency",
    "runs",
    "matrix_rank",
    "serial",
    "run_tests",
    "run_battery",
    "stream_bits",
    "bits_from_uint32",
    "bits_from_real64",
    "control_words",
    "matrix_rank_probabilities",
]

MIN_BYTES = 1 << 20


@dataclass(frozen=True)
class TestOutcome:
    __test__ = False  # not a pytest class

    test_name: str
    stream_spec: dict = field(compare=False)
    sample_size: int
    statistic: float
    p_value: float

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p-value {self.p_value} outside [0, 1]")

    @property
    def two_sided(self) -> float:
        return 2 * min(self.p_value, 1 - self.p_value)

    def to_tsv(self) -> str:
        spec = ",".join(f"{k}={v}" for k, v in self.stream_spec.items())
        return f"{self.test_name}\t{spec}\t{self.sample_size}\t{self.statistic!r}\t{self.p_value!r}"

    @classmethod
    def from_tsv(cls, line: str) -> "TestOutcome":
        name, spec, size, stat, p = line.rstrip("\n").split("\t")
        kv = dict(item.split("=", 1) for item in spec.split(",") if item)
        return cls(name, kv, int(size), float(stat), float(p))


# ------------------------------------------------------------------ tests
# each takes a uint8 array of 0/1 values and returns (statistic, p_value)


def monobit(bits: np.ndarray):
    n = bits.size
    s = 2 * int(np.count_nonzero(bits)) - n
    stat = abs(s) / math.sqrt(n)
    return stat, math.erfc(stat / math.sqrt(2))


def block_frequency(bits: np.ndarray, m: int = 128):
    nblocks = bits.size // m
    ones = bits[: nblocks * m].reshape(nblocks, m).sum(axis=1, dtype=np.int64)
    chi2 = 4.0 * m * float(np.sum((ones / m - 0.5) ** 2))
    return chi2, float(gammaincc(nblocks / 2, chi2 / 2))


def runs(bits: np.ndarray):
    n = bits.size
    pi = np.count_nonzero(bits) / n
    if abs(pi - 0.5) >= 2 / math.sqrt(n):
        return float("nan"), 0.0
    v = 1 + int(np.count_nonzero(bits[1:] != bits[:-1]))
    num = abs(v - 2 * n * pi * (1 - pi))
    den = 2 * math.sqrt(2 * n) * pi * (1 - pi)
    return float(v), math.erfc(num / den)


def matrix_rank_probabilities(m: int = 32, q: int = 32):
    """Probabilities that a random m x q binary matrix has rank m, m-1, or less."""

    def prob(r):
        lg = (r * (q + m - r) - m * q) * math.log(2)
        for i in range(r):
            lg += math.log1p(-(2.0 ** (i - q))) + math.log1p(-(2.0 ** (i - m))) - math.log1p(-(2.0 ** (i - r)))
        return math.exp(lg)

    full, deficient = prob(m), prob(m - 1)
    return full, deficient, 1.0 - full - deficient


def _ranks32(rows: np.ndarray) -> np.ndarray:
    """GF(2) ranks of a stack of 32x32 matrices given as (N, 32) uint32 rows."""
    rows = rows.copy()
    n = len(rows)
    rank = np.zeros(n, dtype=np.int64)
    lanes = np.arange(n)
    rowidx = np.arange(32)
    for col in range(31, -1, -1):
        bit = np.uint32(1 << col)
        has = (rows & bit) != 0
        elig = has & (rowidx[None, :] >= rank[:, None])
        found = elig.any(axis=1)
        if not found.any():
            continue
        sel = lanes[found]
        r = rank[found]
        piv = np.argmax(elig[found], axis=1)
        a = rows[sel, r].copy()
        rows[sel, r] = rows[sel, piv]
        rows[sel, piv] = a
        prow = rows[sel, r]
        sub = rows[sel]
        hit = (sub & bit) != 0
        hit[np.arange(len(sel)), r] = False
        sub ^= np.where(hit, prow[:, None], np.uint32(0))
        rows[sel] = sub
        rank[found] += 1
    return rank


def matrix_rank(bits: np.ndarray):
    nmat = bits.size // 1024
    packed = np.packbits(bits[: nmat * 1024]).view(">u4").astype(np.uint32).reshape(nmat, 32)
    ranks = _ranks32(packed)
    counts = np.array([np.sum(ranks == 32), np.sum(ranks == 31), np.sum(ranks < 31)], dtype=np.float64)
    expect = nmat * np.array(matrix_rank_probabilities())
    chi2 = float(np.sum((counts - expect) ** 2 / expect))
    return chi2, math.exp(-chi2 / 2)


def _window_counts(bits: np.ndarray, m: int, chunk: int = 1 << 23) -> np.ndarray:
    """Counts of every m-bit pattern over the n cyclic overlapping windows."""
    n = bits.size
    ext = np.concatenate([bits, bits[: m - 1]])
    counts = np.zeros(1 << m, dtype=np.int64)
    if n % 8 == 0 and m <= 25:
        # a window at bit 8k+s is a shifted slice of the big-endian word at byte k
        nb = n // 8
        packed = np.zeros(nb + 4, dtype=np.uint32)
        pk = np.packbits(ext)
        packed[: pk.size] = pk
        mask = np.uint32((1 << m) - 1)
        step = max(1, chunk // 8)
        for start in range(0, nb, step):
            k = min(step, nb - start)
            v = packed[start : start + k] << np.uint32(24)
            v |= packed[start + 1 : start + k + 1] << np.uint32(16)
            v |= packed[start + 2 : start + k + 2] << np.uint32(8)
            v |= packed[start + 3 : start + k + 3]
            for s in range(8):
                counts += np.bincount((v >> np.uint32(32 - s - m)) & mask, minlength=1 << m)
        return counts
    for start in range(0, n, chunk):
        k = min(chunk, n - start)
        seg = ext[start : start + k + m - 1]
        val = np.zeros(k, dtype=np.uint32)
        for j in range(m):
            val = (val << np.uint32(1)) | seg[j : j + k]
        counts += np.bincount(val, minlength=1 << m)
    return counts


def serial(bits: np.ndarray, m: int = 16):
    """Overlapping serial test; returns ((d1, p1), (d2, p2))."""
    n = bits.size
    c = _window_counts(bits, m)
    psi = []
    for _ in range(3):
        psi.append((1 << (m - len(psi))) / n * float(np.sum(c.astype(np.float64) ** 2)) - n)
        c = c[0::2] + c[1::2]  # drop the last bit of every window
    d1 = psi[0] - psi[1]
    d2 = psi[0] - 2 * psi[1] + psi[2]
    return (d1, float(gammaincc(2 ** (m - 2), d1 / 2))), (d2, float(gammaincc(2 ** (m - 3), d2 / 2)))


def run_tests(bits: np.ndarray, spec: dict | None = None) -> list[TestOutcome]:
    spec = {} if spec is None else spec
    n = int(bits.size)
    out = []
    for name, fn in (
        ("monobit", monobit),
        ("block_frequency_128", block_frequency),
        ("runs", runs),
        ("matrix_rank_32x32", matrix_rank),
    ):
        stat, p = fn(bits)
        out.append(TestOutcome(name, spec, n, float(stat), min(max(float(p), 0.0), 1.0)))
    (d1, p1), (d2, p2) = serial(bits)
    out.append(TestOutcome("serial_16_delta1", spec, n, d1, min(max(p1, 0.0), 1.0)))
    out.append(TestOutcome("serial_16_delta2", spec, n, d2, min(max(p2, 0.0), 1.0)))
    return out


# ---------------------------------------------------------------- streams


def bits_from_uint32(words: np.ndarray) -> np.ndarray:
    """Bits of 32-bit integers, most significant first."""
    return np.unpackbits(np.asarray(words, dtype=">u4").view(np.uint8))


def bits_from_real64(reals: np.ndarray) -> np.ndarray:
    """The 53 significant bits of each real in [0, 1), most significant first."""
    ints = (np.asarray(reals) * 2.0**53).astype(np.uint64) << np.uint64(11)
    return np.unpackbits(ints.astype(">u8").view(np.uint8).reshape(-1, 8), axis=1)[:, :53].reshape(-1)


def stream_bits(params: GeneratorParams, seed: int, mode: str, path: str, nbytes: int) -> np.ndarray:
    """Bit stream for the battery: ``nbytes`` worth of the int32 or real64 path."""
    st = engine.seed(params, seed)
    if path == "int32":
        count = nbytes // 4
        words = st.generate(engine.words_needed(params.w, "int32", count), mode)
        return bits_from_uint32(engine.int32_block(words, params.w)[:count])
    if path == "real64":
        count = nbytes // 8
        words = st.generate(engine.words_needed(params.w, "real64", count), mode)
        return bits_from_real64(engine.real64_block(words, params.w))
    raise ValueError(f"unknown path {path!r}; expected int32 or real64")


def run_battery(params: GeneratorParams, seed: int, mode: str, path: str, nbytes: int) -> list[TestOutcome]:
    if nbytes < MIN_BYTES:
        raise ValueError(f"sample size must be at least {MIN_BYTES} bytes")
    bits = stream_bits(params, seed, mode, path, nbytes)
    spec = {"params": params.name, "seed": seed, "mode": mode, "path": path}
    return run_tests(bits, spec)


def control_words(kind: str, count: int) -> np.ndarray:
    """32-bit negative-control streams: all zero, all one, or a counter."""
    if kind == "zero":
        return np.zeros(count, np.uint32)
    if kind == "one":
        return np.full(count, 0xFFFFFFFF, np.uint32)
    if kind == "counter":
        return np.arange(count, dtype=np.uint32)
    raise ValueError(f"unknown control {kind!r}")
