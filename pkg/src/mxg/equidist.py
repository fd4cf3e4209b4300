"""Equidistribution dimensions k(v) and dimension gaps.

k(v) is the largest k for which the map from the p state bits to the v most
significant bits of the first k outputs is onto, i.e. has rank k*v.  The
matrix of that map is read off the engine by stepping every unit state at
once; rows are bit-packed integers over the state bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import engine
from .gf2.charpoly import EXPENSIVE_DEGREE, ExpensiveOperationError, SizeError
from .gf2.matrix import EliminationBasis
from .params import GeneratorParams

__all__ = [
    "UnsupportedModeError",
    "GapRow",
    "EquidistReport",
    "OutputBitRows",
    "k_of_v",
    "full_report",
    "exhaustive_k_of_v",
]

EXHAUSTIVE_CAP = 20


class UnsupportedModeError(ValueError):
    pass


def _check_mode(params: GeneratorParams, mode: str):
    if mode == "weyl":
        raise UnsupportedModeError(
            "the Weyl output path adds with carries, which is not GF(2)-linear; "
            "rank-based equidistribution only applies to modes 'none' and 'linear'"
        )
    if mode not in ("none", "linear"):
        raise UnsupportedModeError(f"unknown mode {mode!r}")
    if mode == "linear" and params.tempering_linear is None:
        raise engine.ConfigurationError(f"{params.name} has no linear tempering")


def _temper(params, out, mode):
    if mode == "linear":
        return engine.temper_linear(out, params.tempering_linear.linear_ops, params.w)
    return out


class OutputBitRows:
    """Top output bits of the orbits of all unit states, produced on demand.

    ``row(i, b)`` is the bit vector over state bits j of bit b (0 = most
    significant) of output i from the unit state e_j.
    """

    def __init__(self, params: GeneratorParams, mode: str = "none", bits: int = 32, column_order=None):
        _check_mode(params, mode)
        self.params = params
        self.mode = mode
        self.bits = min(bits, params.w)
        self.columns = list(range(params.p)) if column_order is None else list(column_order)
        self._words = engine.batch_unit_states(params, self.columns)
        self._cursor = 0
        self._tops: list[np.ndarray] = []

    def _advance(self):
        prm = self.params
        new, self._cursor = engine.step_words(prm, self._words, self._cursor)
        out = _temper(prm, new, self.mode)
        top = out >> (prm.w - self.bits)
        self._tops.append(np.asarray(top).astype(np.uint64))

    def row(self, i: int, b: int) -> int:
        while len(self._tops) <= i:
            self._advance()
        lane_bits = ((self._tops[i] >> np.uint64(self.bits - 1 - b)) & np.uint64(1)).astype(np.uint8)
        return int.from_bytes(np.packbits(lane_bits, bitorder="little").tobytes(), "little")


def _rank_full(rows: OutputBitRows, k: int, v: int) -> bool:
    basis = EliminationBasis()
    for i in range(k):
        for b in range(v):
            if not basis.insert(rows.row(i, b)):
                return False
    return True


def _gate(params: GeneratorParams, expensive: bool):
    if params.p > EXPENSIVE_DEGREE and not expensive:
        raise ExpensiveOperationError(
            f"equidistribution of p = {params.p} > {EXPENSIVE_DEGREE} needs the expensive flag"
        )


def k_of_v(
    params: GeneratorParams,
    v: int,
    mode: str = "none",
    probe: str = "ascending",
    rows: OutputBitRows | None = None,
    expensive: bool = False,
) -> int:
    """Equidistribution dimension at resolution v.

    ``probe="ascending"`` adds rows output by output and stops at the first
    dependent one; ``probe="bisect"`` tests each candidate k from scratch.
    Both give the same answer because rank deficiency at k persists for all
    larger k.
    """
    _check_mode(params, mode)
    if not 1 <= v <= params.w:
        raise ValueError(f"v must be in [1, {params.w}]")
    _gate(params, expensive)
    kmax = params.p // v
    if kmax == 0:
        return 0
    if rows is None or rows.bits < v:
        rows = OutputBitRows(params, mode, bits=max(v, min(32, params.w)))
    if probe == "ascending":
        basis = EliminationBasis()
        for i in range(kmax):
            for b in range(v):
                if not basis.insert(rows.row(i, b)):
                    return i
        return kmax
    if probe == "bisect":
        lo, hi = 0, kmax  # invariant: full rank at lo
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if _rank_full(rows, mid, v):
                lo = mid
            else:
                hi = mid - 1
        return lo
    raise ValueError(f"unknown probe order {probe!r}")


@dataclass(frozen=True)
class GapRow:
    v: int
    k_star: int
    k_v: int

    @property
    def gap(self) -> int:
        return self.k_star - self.k_v


@dataclass(frozen=True)
class EquidistReport:
    param_name: str
    tempering_mode: str
    w_analyzed: int
    per_v: tuple[GapRow, ...]

    @property
    def total_defect(self) -> int:
        return sum(r.gap for r in self.per_v)

    def gaps(self) -> list[int]:
        return [r.gap for r in self.per_v]

    def to_tsv(self) -> str:
        lines = [
            f"# param={self.param_name} tempering={self.tempering_mode} w_analyzed={self.w_analyzed}",
            "v\tk_star\tk_v\tgap",
        ]
        lines += [f"{r.v}\t{r.k_star}\t{r.k_v}\t{r.gap}" for r in self.per_v]
        lines.append(f"total_defect={self.total_defect}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tsv(cls, text: str) -> "EquidistReport":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        meta = dict(kv.split("=", 1) for kv in lines[0].lstrip("# ").split())
        if lines[1].split("\t") != ["v", "k_star", "k_v", "gap"]:
            raise ValueError("missing column header")
        rows = []
        for ln in lines[2:-1]:
            v, k_star, k_v, gap = (int(x) for x in ln.split("\t"))
            row = GapRow(v, k_star, k_v)
            if row.gap != gap:
                raise ValueError(f"inconsistent gap at v={v}")
            rows.append(row)
        rep = cls(meta["param"], meta["tempering"], int(meta["w_analyzed"]), tuple(rows))
        if lines[-1] != f"total_defect={rep.total_defect}":
            raise ValueError("total_defect trailer does not match the rows")
        return rep


def full_report(
    params: GeneratorParams,
    mode: str = "none",
    w_analyzed: int | None = None,
    column_order=None,
    expensive: bool = False,
) -> EquidistReport:
    """k(v) and gaps for v = 1 .. w_analyzed (default min(w, 32))."""
    _check_mode(params, mode)
    _gate(params, expensive)
    wa = min(params.w, 32) if w_analyzed is None else w_analyzed
    rows = OutputBitRows(params, mode, bits=wa, column_order=column_order)
    per_v = tuple(
        GapRow(v, params.p // v, k_of_v(params, v, mode, rows=rows, expensive=expensive)) for v in range(1, wa + 1)
    )
    return EquidistReport(params.name, mode, wa, per_v)


def exhaustive_k_of_v(params: GeneratorParams, v: int, mode: str = "none") -> int:
    """k(v) by counting output tuples over every nonzero state.

    A k-tuple of v-bit prefixes is equidistributed when each nonzero value
    occurs 2^(p-kv) times and the zero value 2^(p-kv) - 1 times.
    """
    _check_mode(params, mode)
    p, w = params.p, params.w
    if p > EXHAUSTIVE_CAP:
        raise SizeError(f"exhaustive enumeration needs p <= {EXHAUSTIVE_CAP}, got {p}")
    if not 1 <= v <= w:
        raise ValueError(f"v must be in [1, {w}]")
    states = np.arange(1, 1 << p, dtype=np.uint64)
    words = engine.batch_states(params, states)
    cursor = 0
    value = np.zeros(len(states), dtype=np.uint64)
    best = 0
    for k in range(1, p // v + 1):
        new, cursor = engine.step_words(params, words, cursor)
        top = np.asarray(_temper(params, new, mode)).astype(np.uint64) >> np.uint64(w - v)
        value = (value << np.uint64(v)) | top
        counts = np.bincount(value.astype(np.int64), minlength=1 << (k * v))
        expect = 1 << (p - k * v)
        if counts[0] != expect - 1 or not np.all(counts[1:] == expect):
            break
        best = k
    return best
