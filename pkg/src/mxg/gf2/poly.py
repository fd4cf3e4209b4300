"""Polynomials over GF(2) packed into Python integers.

The coefficient of x^i is bit i of the integer, so ``0b1011`` is x^3 + x + 1.
All arithmetic is carry-less: addition is XOR, multiplication is shift-and-XOR.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "Gf2Poly",
    "PolyDomainError",
    "clmul",
    "sqr",
    "poly_divmod",
    "poly_mod",
    "poly_gcd",
    "poly_lcm",
    "Reducer",
    "poly_mul_mod",
    "poly_powmod_x",
    "berlekamp_massey",
    "weight",
]


class PolyDomainError(ValueError):
    """Raised when a modulus is zero or constant."""


@dataclass(frozen=True, slots=True)
class Gf2Poly:
    """Polynomial over GF(2); bit i of ``coeffs`` is the coefficient of x^i.

    The zero polynomial has degree -1 (standing in for minus infinity).
    """

    coeffs: int

    def __post_init__(self):
        if self.coeffs < 0:
            raise ValueError("coefficient bits must be a nonnegative integer")

    @classmethod
    def from_exponents(cls, exponents: Iterable[int]) -> "Gf2Poly":
        c = 0
        for e in exponents:
            c ^= 1 << e
        return cls(c)

    @property
    def degree(self) -> int:
        return self.coeffs.bit_length() - 1

    def exponents(self) -> list[int]:
        c, out, i = self.coeffs, [], 0
        while c:
            if c & 1:
                out.append(i)
            c >>= 1
            i += 1
        return out

    def __bool__(self):
        return self.coeffs != 0

    def __add__(self, other: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(self.coeffs ^ other.coeffs)

    __sub__ = __add__
    __xor__ = __add__

    def __mul__(self, other: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(clmul(self.coeffs, other.coeffs))

    def __mod__(self, other: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(poly_mod(self.coeffs, other.coeffs))

    def __floordiv__(self, other: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(poly_divmod(self.coeffs, other.coeffs)[0])

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for e in reversed(self.exponents()):
            terms.append("1" if e == 0 else "x" if e == 1 else f"x^{e}")
        return " + ".join(terms)

    def __repr__(self):
        return f"Gf2Poly({self})" if self.degree < 16 else f"Gf2Poly(deg={self.degree}, weight={weight(self)})"

    # export format: "deg=<d>" header line, then the coefficient bits as hex,
    # most significant limb first
    def to_hex(self) -> str:
        return f"deg={self.degree}\n{self.coeffs:x}\n"

    @classmethod
    def from_hex(cls, text: str) -> "Gf2Poly":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if len(lines) != 2 or not lines[0].startswith("deg="):
            raise ValueError("expected 'deg=<n>' header followed by one hex line")
        f = cls(int(lines[1], 16))
        if f.degree != int(lines[0][4:]):
            raise ValueError(f"header says degree {lines[0][4:]}, coefficients give {f.degree}")
        return f


def weight(f: Gf2Poly) -> int:
    """Number of nonzero coefficients."""
    return f.coeffs.bit_count()


def clmul(a: int, b: int) -> int:
    """Carry-less product of two coefficient integers."""
    if a.bit_count() < b.bit_count():
        a, b = b, a
    out = 0
    while b:
        low = b & -b
        out ^= a << (low.bit_length() - 1)
        b ^= low
    return out


def _spread_tables():
    lo = bytearray(256)
    hi = bytearray(256)
    for v in range(256):
        s = 0
        for i in range(8):
            if v >> i & 1:
                s |= 1 << (2 * i)
        lo[v] = s & 0xFF
        hi[v] = s >> 8
    return bytes(lo), bytes(hi)


_SPREAD_LO, _SPREAD_HI = _spread_tables()


def sqr(a: int) -> int:
    """Square by interleaving zero bits between the coefficients."""
    if a < 2:
        return a
    src = a.to_bytes((a.bit_length() + 7) // 8, "little")
    out = bytearray(2 * len(src))
    out[0::2] = src.translate(_SPREAD_LO)
    out[1::2] = src.translate(_SPREAD_HI)
    return int.from_bytes(out, "little")


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    db = b.bit_length()
    q = 0
    while a.bit_length() >= db:
        s = a.bit_length() - db
        q ^= 1 << s
        a ^= b << s
    return q, a


def poly_mod(a: int, b: int) -> int:
    if b == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def poly_lcm(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return poly_divmod(clmul(a, b), poly_gcd(a, b))[0]


class Reducer:
    """Reduction modulo a fixed polynomial, eight coefficients at a time.

    ``table[t]`` is the multiple of the modulus whose coefficients at
    x^d .. x^(d+7) spell out the byte ``t``; XOR-ing it in clears the top byte
    of the operand in one step.
    """

    __slots__ = ("modulus", "degree", "table")

    def __init__(self, modulus: int):
        if modulus.bit_length() < 2:
            raise PolyDomainError("modulus must have degree >= 1")
        self.modulus = modulus
        self.degree = d = modulus.bit_length() - 1
        table = [0] * 256
        for t in range(1, 256):
            u = t << d
            table[t] = u ^ poly_mod(u, modulus)
        self.table = table

    def reduce(self, a: int) -> int:
        d = self.degree
        table = self.table
        n = a.bit_length()
        while n > d + 8:
            s = n - 8 - d
            a ^= table[a >> (n - 8)] << s
            n = a.bit_length()
        if n > d:
            a ^= table[a >> d]
        return a

    def mul(self, a: int, b: int) -> int:
        return self.reduce(clmul(a, b))

    def sqr(self, a: int) -> int:
        return self.reduce(sqr(a))


def _check_modulus(m: Gf2Poly):
    if m.degree < 1:
        raise PolyDomainError(f"modulus must have degree >= 1, got {m}")


def poly_mul_mod(a: Gf2Poly, b: Gf2Poly, m: Gf2Poly) -> Gf2Poly:
    """a*b mod m."""
    _check_modulus(m)
    return Gf2Poly(poly_mod(clmul(a.coeffs, b.coeffs), m.coeffs))


def poly_powmod_x(e: int, m: Gf2Poly, reducer: Reducer | None = None) -> Gf2Poly:
    """x^e mod m by left-to-right square-and-multiply.

    Multiplying by x is a shift, so every step is one squaring plus at most
    one conditional subtraction of the modulus.
    """
    _check_modulus(m)
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    red = reducer if reducer is not None else Reducer(m.coeffs)
    mod, d = m.coeffs, m.degree
    r = 1
    for bit in bin(e)[2:]:
        r = red.sqr(r)
        if bit == "1":
            r <<= 1
            if r >> d:
                r ^= mod
    return Gf2Poly(r)


def berlekamp_massey(bits: Sequence[int] | bytes) -> Gf2Poly:
    """Minimal polynomial of a binary sequence.

    Returns the monic polynomial whose degree is the linear complexity of
    ``bits``; the all-zero sequence gives the constant 1.
    """
    c = 1  # connection polynomial, bit i = c_i
    b = 1
    length = 0
    shift = 1
    window = 0  # bit i = s_{n-i}
    for n, s in enumerate(bits):
        window = (window << 1) | (s & 1)
        if (c & window).bit_count() & 1:
            t = c
            c ^= b << shift
            if 2 * length <= n:
                length = n + 1 - length
                b = t
                shift = 1
            else:
                shift += 1
        else:
            shift += 1
    # reverse c over length + 1 coefficients to get the monic minimal polynomial
    width = length + 1
    rev = int(format(c, f"0{width}b")[::-1], 2)
    return Gf2Poly(rev)
