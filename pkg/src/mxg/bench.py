"""Throughput measurement for block generation, with two in-repo baselines."""

from __future__ import annotations

import statistics
import time

from . import engine
from .descriptors import (
    LaggedXorshift,
    RecurrenceDescriptor,
    TemperingDescriptor,
    TemperStep,
    TwistedConcat,
    TwistRule,
    XorshiftOp,
)
from .params import GeneratorParams

__all__ = ["MT19937", "XORSHIFT128", "BenchRow", "bench_cell", "bench", "format_table", "mt19937_init"]

# MT19937 written as a descriptor: x[k+624] = x[k+397] ^ twist(x[k]^u | x[k+1]^l)
MT19937 = GeneratorParams(
    name="ref-mt19937",
    w=32,
    n=624,
    p=19937,
    top_mask=0x80000000,
    recurrence=RecurrenceDescriptor(
        (
            TwistedConcat(624, 623, 0x80000000, (), TwistRule(0x9908B0DF)),
            LaggedXorshift(227, ()),
        )
    ),
    tempering_linear=TemperingDescriptor(
        "linear",
        (TemperStep("R", 11), TemperStep("L", 7, 0x9D2C5680), TemperStep("L", 15, 0xEFC60000), TemperStep("R", 18)),
    ),
    weyl_increment=0x9E3779B9,
)

# Marsaglia's xorshift128: w ^= w >> 19 ^ t ^ t >> 8 with t = x ^ x << 11
XORSHIFT128 = GeneratorParams(
    name="ref-xorshift128",
    w=32,
    n=4,
    p=128,
    top_mask=0xFFFFFFFF,
    recurrence=RecurrenceDescriptor(
        (
            LaggedXorshift(4, (XorshiftOp("L", 11), XorshiftOp("R", 8))),
            LaggedXorshift(1, (XorshiftOp("R", 19),)),
        )
    ),
    tempering_linear=None,
    weyl_increment=0x9E3779B9,
)


def mt19937_init(seed: int) -> engine.GeneratorState:
    """MT19937 state from the reference ``init_genrand`` (no warm-up)."""
    mt = [seed & 0xFFFFFFFF]
    for i in range(1, 624):
        mt.append((1812433253 * (mt[-1] ^ (mt[-1] >> 30)) + i) & 0xFFFFFFFF)
    return engine.GeneratorState(MT19937, mt, 0, 0)


class BenchRow:
    __slots__ = ("name", "mode", "ns_per_word", "words_per_sec", "ratio_vs_none")

    def __init__(self, name, mode, ns_per_word, ratio_vs_none=float("nan")):
        self.name = name
        self.mode = mode
        self.ns_per_word = ns_per_word
        self.words_per_sec = 1e9 / ns_per_word
        self.ratio_vs_none = ratio_vs_none


def bench_cell(params: GeneratorParams, mode: str, duration: float = 0.2, reps: int = 5, block: int = 1 << 16) -> float:
    """Median ns/word of block generation over ``reps`` timed runs after a warm-up."""
    st = engine.seed(params, 5489)
    st.generate(block, mode)  # warm-up
    samples = []
    for _ in range(max(reps, 5)):
        words = 0
        t0 = time.perf_counter()
        while True:
            st.generate(block, mode)
            words += block
            el = time.perf_counter() - t0
            if el >= duration:
                break
        samples.append(el * 1e9 / words)
    return statistics.median(samples)


def bench(param_list, modes=("none", "weyl"), duration: float = 0.2, reps: int = 5, baselines: bool = True):
    rows = []
    targets = list(param_list)
    if baselines:
        targets += [XORSHIFT128, MT19937]
    for prm in targets:
        none_ns = None
        for mode in modes:
            if mode == "linear" and prm.tempering_linear is None:
                continue
            ns = bench_cell(prm, mode, duration, reps)
            if mode == "none":
                none_ns = ns
            rows.append(BenchRow(prm.name, mode, ns, ns / none_ns if none_ns else float("nan")))
    return rows


def format_table(rows) -> str:
    lines = ["param\tmode\tns_per_word\twords_per_sec\tratio_vs_none"]
    for r in rows:
        lines.append(f"{r.name}\t{r.mode}\t{r.ns_per_word:.3f}\t{r.words_per_sec:.0f}\t{r.ratio_vs_none:.3f}")
    return "\n".join(lines) + "\n"
