"""Generator parameter sets and the line-oriented parameter file format.

File grammar (UTF-8)::

    # comment                      anywhere; also after a value
    [name]                         starts a record
    key = value                    one per line inside a record

Keys, in canonical order:

    word_size        decimal, bits per word
    state_words      decimal, words in the state array
    effective_bits   decimal, dimension of the linear state space
    top_mask         hex, the bits of the oldest word that belong to the state
    term             repeatable, ordered; one of
                       xorshift lag=<d> ops=<op,op,...|->
                       concat hi=<d> lo=<d> split=<hex> ops=<...|-> [twist=<hex>]
                     where an op is L<s> (x ^= x << s) or R<s> (x ^= x >> s)
    tempering_linear optional; space separated steps L<s>[&<hex>] or R<s>[&<hex>]
    weyl_increment   hex, odd additive constant of the Weyl sequence
    charpoly_weight  optional decimal, recorded weight of the characteristic polynomial

Unknown keys are rejected.  Sizes must be decimal and masks hexadecimal with a
``0x`` prefix.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from types import MappingProxyType
from typing import Mapping

from .descriptors import (
    DescriptorError,
    LaggedXorshift,
    RecurrenceDescriptor,
    TemperingDescriptor,
    TemperStep,
    TwistedConcat,
    TwistRule,
    format_ops,
    parse_ops,
)

__all__ = [
    "GeneratorParams",
    "ParamFileError",
    "InvariantError",
    "UnknownParamsError",
    "MERSENNE_EXPONENTS",
    "parse_param_file",
    "serialize_params",
    "lookup",
    "list_params",
    "registry",
    "embedded_table_text",
    "table_checksum",
    "requested_p",
]

MERSENNE_EXPONENTS = (
    521, 607, 1279, 2203, 2281, 3217, 4253, 4423,
    9689, 9941, 11213, 19937, 21701, 23209, 44497,
)
WORD_SIZES = (32, 64, 128)
TOY_WORD_SIZES = (4, 8, 16)


class ParamFileError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InvariantError(ValueError):
    def __init__(self, name: str, field: str, message: str):
        super().__init__(f"{name}: {field}: {message}")
        self.field = field


class UnknownParamsError(LookupError):
    def __init__(self, name: str, available):
        self.available = sorted(available)
        super().__init__(f"unknown parameter set {name!r}; available: {', '.join(self.available)}")


@dataclass(frozen=True)
class GeneratorParams:
    name: str
    w: int
    n: int
    p: int
    top_mask: int
    recurrence: RecurrenceDescriptor
    tempering_linear: TemperingDescriptor | None
    weyl_increment: int
    charpoly_weight: int | None = None

    tempering_nonlinear = TemperingDescriptor("weyl")

    @property
    def is_toy(self) -> bool:
        return self.name.startswith("toy")

    @property
    def word_mask(self) -> int:
        return (1 << self.w) - 1

    @property
    def top_bits(self) -> int:
        return self.p - (self.n - 1) * self.w

    def summary(self) -> str:
        terms = "; ".join(_format_term(t) for t in self.recurrence.terms)
        return f"n={self.n} top_bits={self.top_bits} {terms}"

    def validate(self) -> None:
        name = self.name
        if self.is_toy:
            if self.w not in TOY_WORD_SIZES + WORD_SIZES:
                raise InvariantError(name, "word_size", f"{self.w} not a supported width")
            if self.p < 2:
                raise InvariantError(name, "effective_bits", "must be at least 2")
        else:
            if self.w not in WORD_SIZES:
                raise InvariantError(name, "word_size", f"{self.w} not in {WORD_SIZES}")
            if self.p not in MERSENNE_EXPONENTS:
                raise InvariantError(name, "effective_bits", f"{self.p} is not a tabulated Mersenne exponent")
        if self.n < 1 or not (self.n * self.w >= self.p > (self.n - 1) * self.w):
            raise InvariantError(name, "state_words", f"need n*w >= p > (n-1)*w, got n={self.n}")
        want = ((1 << self.top_bits) - 1) << (self.w - self.top_bits)
        if self.top_mask != want:
            raise InvariantError(
                name, "top_mask", f"expected the top {self.top_bits} bits ({want:#x}), got {self.top_mask:#x}"
            )
        if self.weyl_increment % 2 == 0:
            raise InvariantError(name, "weyl_increment", "must be odd")
        if self.weyl_increment >> self.w:
            raise InvariantError(name, "weyl_increment", "wider than the word")
        try:
            self.recurrence.validate(self.w, self.n)
        except DescriptorError as e:
            raise InvariantError(name, "term", str(e)) from None
        if self.tempering_linear is not None:
            try:
                self.tempering_linear.validate(self.w)
            except DescriptorError as e:
                raise InvariantError(name, "tempering_linear", str(e)) from None


# ---------------------------------------------------------------- parsing

_KEYS = (
    "word_size",
    "state_words",
    "effective_bits",
    "top_mask",
    "term",
    "tempering_linear",
    "weyl_increment",
    "charpoly_weight",
)
_REQUIRED = ("word_size", "state_words", "effective_bits", "top_mask", "term", "weyl_increment")
_HEADER = re.compile(r"^\[([A-Za-z0-9][A-Za-z0-9_.\-]*)\]$")
_DEC = re.compile(r"^[0-9]+$")
_HEX = re.compile(r"^0x[0-9a-fA-F]+$")


def _dec(value: str, lineno: int, key: str) -> int:
    if not _DEC.match(value):
        raise ParamFileError(lineno, f"{key} must be a decimal integer, got {value!r}")
    return int(value)


def _hex(value: str, lineno: int, key: str) -> int:
    if not _HEX.match(value):
        raise ParamFileError(lineno, f"{key} must be hex with 0x prefix, got {value!r}")
    return int(value, 16)


def _parse_term(value: str, lineno: int):
    kind, *fields = value.split()
    kv = {}
    for f in fields:
        if "=" not in f:
            raise ParamFileError(lineno, f"term field {f!r} is not key=value")
        k, v = f.split("=", 1)
        if k in kv:
            raise ParamFileError(lineno, f"repeated term field {k!r}")
        kv[k] = v
    try:
        if kind == "xorshift":
            if set(kv) != {"lag", "ops"}:
                raise ParamFileError(lineno, "xorshift term takes exactly lag= and ops=")
            return LaggedXorshift(_dec(kv["lag"], lineno, "lag"), parse_ops(kv["ops"]))
        if kind == "concat":
            allowed = {"hi", "lo", "split", "ops", "twist"}
            if not {"hi", "lo", "split", "ops"} <= set(kv) <= allowed:
                raise ParamFileError(lineno, "concat term takes hi=, lo=, split=, ops= and optional twist=")
            twist = TwistRule(_hex(kv["twist"], lineno, "twist")) if "twist" in kv else None
            return TwistedConcat(
                _dec(kv["hi"], lineno, "hi"),
                _dec(kv["lo"], lineno, "lo"),
                _hex(kv["split"], lineno, "split"),
                parse_ops(kv["ops"]),
                twist,
            )
    except DescriptorError as e:
        raise ParamFileError(lineno, str(e)) from None
    raise ParamFileError(lineno, f"unknown term kind {kind!r}")


def _parse_tempering(value: str, lineno: int) -> TemperingDescriptor:
    steps = []
    for tok in value.split():
        m = re.match(r"^([LR])([0-9]+)(?:&(0x[0-9a-fA-F]+))?$", tok)
        if not m:
            raise ParamFileError(lineno, f"bad tempering step {tok!r}")
        mask = int(m.group(3), 16) if m.group(3) else None
        steps.append(TemperStep(m.group(1), int(m.group(2)), mask))
    return TemperingDescriptor("linear", tuple(steps))


def _build(name: str, rec: dict, lineno: int) -> GeneratorParams:
    missing = [k for k in _REQUIRED if k not in rec]
    if missing:
        raise ParamFileError(lineno, f"[{name}] missing {', '.join(missing)}")
    params = GeneratorParams(
        name=name,
        w=rec["word_size"],
        n=rec["state_words"],
        p=rec["effective_bits"],
        top_mask=rec["top_mask"],
        recurrence=RecurrenceDescriptor(tuple(rec["term"])),
        tempering_linear=rec.get("tempering_linear"),
        weyl_increment=rec["weyl_increment"],
        charpoly_weight=rec.get("charpoly_weight"),
    )
    params.validate()
    return params


def parse_param_file(text: str | bytes) -> list[GeneratorParams]:
    """Parse a parameter file into validated records, in file order."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    out: list[GeneratorParams] = []
    seen: set[str] = set()
    name = None
    rec: dict = {}
    start = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            if name is not None:
                out.append(_build(name, rec, start))
            name, rec, start = m.group(1), {}, lineno
            if name in seen:
                raise ParamFileError(lineno, f"duplicate parameter set name {name!r}")
            seen.add(name)
            continue
        if line.startswith("["):
            raise ParamFileError(lineno, f"malformed header {line!r}")
        if "=" not in line:
            raise ParamFileError(lineno, f"expected 'key = value', got {line!r}")
        if name is None:
            raise ParamFileError(lineno, "key outside of a [name] record")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ParamFileError(lineno, f"unknown key {key!r}")
        if key == "term":
            rec.setdefault("term", []).append(_parse_term(value, lineno))
            continue
        if key in rec:
            raise ParamFileError(lineno, f"repeated key {key!r}")
        if key in ("word_size", "state_words", "effective_bits", "charpoly_weight"):
            rec[key] = _dec(value, lineno, key)
        elif key in ("top_mask", "weyl_increment"):
            rec[key] = _hex(value, lineno, key)
        else:
            rec[key] = _parse_tempering(value, lineno)
    if name is not None:
        out.append(_build(name, rec, start))
    return out


def _format_term(t) -> str:
    if isinstance(t, LaggedXorshift):
        return f"xorshift lag={t.lag} ops={format_ops(t.ops)}"
    s = f"concat hi={t.lag_hi} lo={t.lag_lo} split={t.split_mask:#x} ops={format_ops(t.ops)}"
    if t.twist is not None:
        s += f" twist={t.twist.multiplier_mask:#x}"
    return s


def serialize_params(rows) -> str:
    """Canonical text for a list of records; parses back to equal records."""
    chunks = []
    for prm in rows:
        lines = [
            f"[{prm.name}]",
            f"word_size = {prm.w}",
            f"state_words = {prm.n}",
            f"effective_bits = {prm.p}",
            f"top_mask = {prm.top_mask:#x}",
        ]
        lines += [f"term = {_format_term(t)}" for t in prm.recurrence.terms]
        if prm.tempering_linear is not None:
            lines.append("tempering_linear = " + " ".join(str(s) for s in prm.tempering_linear.linear_ops))
        lines.append(f"weyl_increment = {prm.weyl_increment:#x}")
        if prm.charpoly_weight is not None:
            lines.append(f"charpoly_weight = {prm.charpoly_weight}")
        chunks.append("\n".join(lines) + "\n")
    return "\n".join(chunks)


# ---------------------------------------------------------------- registry

_TABLE_FILE = "mxg_tables.txt"


def embedded_table_text() -> str:
    return resources.files("mxg.data").joinpath(_TABLE_FILE).read_text("utf-8")


def table_checksum(text: str | None = None) -> str:
    if text is None:
        text = embedded_table_text()
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@lru_cache(maxsize=1)
def registry() -> Mapping[str, GeneratorParams]:
    rows = parse_param_file(embedded_table_text())
    return MappingProxyType({r.name: r for r in rows})


_PATTERN = re.compile(r"^(mxg|toy)-?(\d+)-(\d+)$", re.IGNORECASE)


def lookup(name: str, extra: Mapping[str, GeneratorParams] | None = None) -> GeneratorParams:
    """Find a parameter set by name; ``mxg-32-521`` style spellings are accepted."""
    reg = dict(registry())
    if extra:
        reg.update(extra)
    if name in reg:
        return reg[name]
    m = _PATTERN.match(name.strip())
    if m:
        canon = f"{m.group(1).lower()}{int(m.group(2))}-{int(m.group(3))}"
        if canon in reg:
            return reg[canon]
    raise UnknownParamsError(name, reg)


def requested_p(name: str) -> int | None:
    """Effective bits encoded in a name such as ``mxg32-19937``, if any."""
    m = _PATTERN.match(name.strip())
    return int(m.group(3)) if m else None


def list_params(w: int | None = None, p: int | None = None, include_toy: bool = False):
    """(name, w, p, summary) for embedded rows, sorted by (w, p)."""
    rows = [r for r in registry().values() if include_toy or not r.is_toy]
    if w is not None:
        rows = [r for r in rows if r.w == w]
    if p is not None:
        rows = [r for r in rows if r.p == p]
    rows.sort(key=lambda r: (r.w, r.p, r.name))
    return [(r.name, r.w, r.p, r.summary()) for r in rows]
