"""Declarative description of an F2-linear recurrence and its output tempering.

A recurrence produces the next state word as the XOR of its terms.  Each term
reads one or two earlier words by *lag* (lag 1 is the newest word, lag n the
oldest) and pushes them through a chain of xorshift factors:

* ``LaggedXorshift``: ``x[-lag] (I + S1)(I + S2)...``
* ``TwistedConcat``: upper bits of ``x[-lag_hi]`` joined with the lower bits of
  ``x[-lag_lo]`` at ``split_mask``, then the xorshift chain, then an optional
  Mersenne-Twister style twist ``y -> (y >> 1) ^ (a if y & 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

__all__ = [
    "XorshiftOp",
    "TwistRule",
    "LaggedXorshift",
    "TwistedConcat",
    "Term",
    "RecurrenceDescriptor",
    "TemperStep",
    "TemperingDescriptor",
    "DescriptorError",
    "format_ops",
    "parse_ops",
]


class DescriptorError(ValueError):
    pass


@dataclass(frozen=True)
class XorshiftOp:
    direction: str  # "L" (x ^= x << s) or "R" (x ^= x >> s)
    shift: int

    def __post_init__(self):
        if self.direction not in ("L", "R"):
            raise DescriptorError(f"direction must be L or R, got {self.direction!r}")

    def __str__(self):
        return f"{self.direction}{self.shift}"


@dataclass(frozen=True)
class TwistRule:
    multiplier_mask: int


@dataclass(frozen=True)
class LaggedXorshift:
    lag: int
    ops: tuple[XorshiftOp, ...] = ()

    @property
    def lags(self) -> tuple[int, ...]:
        return (self.lag,)


@dataclass(frozen=True)
class TwistedConcat:
    lag_hi: int
    lag_lo: int
    split_mask: int
    ops: tuple[XorshiftOp, ...] = ()
    twist: TwistRule | None = None

    @property
    def lags(self) -> tuple[int, ...]:
        return (self.lag_hi, self.lag_lo)


Term = Union[LaggedXorshift, TwistedConcat]


@dataclass(frozen=True)
class RecurrenceDescriptor:
    terms: tuple[Term, ...]

    @property
    def lags(self) -> set[int]:
        return {lag for t in self.terms for lag in t.lags}

    def validate(self, w: int, n: int) -> None:
        wmask = (1 << w) - 1
        if not self.terms:
            raise DescriptorError("recurrence needs at least one term")
        lags = self.lags
        if len(lags) < 2:
            raise DescriptorError("recurrence must read at least two distinct lags")
        for lag in lags:
            if not 1 <= lag <= n:
                raise DescriptorError(f"lag {lag} outside [1, {n}]")
        for t in self.terms:
            for op in t.ops:
                if not 1 <= op.shift < w:
                    raise DescriptorError(f"shift {op.shift} outside [1, {w - 1}]")
            if isinstance(t, TwistedConcat):
                if t.split_mask & ~wmask:
                    raise DescriptorError("split_mask wider than the word")
                if t.twist is not None and t.twist.multiplier_mask & ~wmask:
                    raise DescriptorError("twist multiplier wider than the word")


@dataclass(frozen=True)
class TemperStep:
    direction: str
    shift: int
    and_mask: int | None = None  # None means all ones

    def __str__(self):
        if self.and_mask is None:
            return f"{self.direction}{self.shift}"
        return f"{self.direction}{self.shift}&{self.and_mask:#x}"


@dataclass(frozen=True)
class TemperingDescriptor:
    kind: str  # "none" | "linear" | "weyl"
    linear_ops: tuple[TemperStep, ...] = field(default=())

    def validate(self, w: int) -> None:
        if self.kind not in ("none", "linear", "weyl"):
            raise DescriptorError(f"unknown tempering kind {self.kind!r}")
        if self.kind != "linear" and self.linear_ops:
            raise DescriptorError(f"tempering kind {self.kind} takes no linear steps")
        if self.kind == "linear" and not self.linear_ops:
            raise DescriptorError("linear tempering needs at least one step")
        for st in self.linear_ops:
            if st.direction not in ("L", "R"):
                raise DescriptorError(f"direction must be L or R, got {st.direction!r}")
            if not 1 <= st.shift < w:
                raise DescriptorError(f"tempering shift {st.shift} outside [1, {w - 1}]")
            if st.and_mask is not None and st.and_mask >> w:
                raise DescriptorError("tempering mask wider than the word")


def format_ops(ops) -> str:
    return ",".join(str(op) for op in ops) if ops else "-"


def parse_ops(text: str) -> tuple[XorshiftOp, ...]:
    if text == "-":
        return ()
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if len(tok) < 2 or tok[0] not in "LR" or not tok[1:].isdigit():
            raise DescriptorError(f"bad xorshift op {tok!r}")
        out.append(XorshiftOp(tok[0], int(tok[1:])))
    return tuple(out)
