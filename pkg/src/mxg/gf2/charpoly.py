"""Characteristic polynomials of parameter sets and their certification."""

from __future__ import annotations

import hashlib
import os
import tempfile
from pathlib import Path

import numpy as np

from .. import engine
from ..params import GeneratorParams
from .matrix import Gf2Matrix
from .poly import Gf2Poly, Reducer, berlekamp_massey, poly_gcd, poly_lcm, poly_powmod_x, sqr

__all__ = [
    "DegenerateProjectionError",
    "UnsupportedDegreeError",
    "ExpensiveOperationError",
    "SizeError",
    "EXPENSIVE_DEGREE",
    "MATRIX_CAP",
    "char_poly",
    "is_irreducible_prime_degree",
    "is_primitive_small",
    "transition_matrix",
    "output_bit_stream",
    "cache_dir",
]

EXPENSIVE_DEGREE = 4423
MATRIX_CAP = 4096
CHARPOLY_SEED = 0x6D78672D63686172


class DegenerateProjectionError(ValueError):
    pass


class UnsupportedDegreeError(ValueError):
    pass


class ExpensiveOperationError(RuntimeError):
    pass


class SizeError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def output_bit_stream(params: GeneratorParams, bit: int, count: int, seed: int = CHARPOLY_SEED) -> np.ndarray:
    """Bit ``bit`` (0 = least significant) of the first ``count`` raw outputs."""
    st = engine.seed(params, seed)
    block = st.generate(count, "none")
    if params.w == 128:
        limb = block[:, 0] if bit >= 64 else block[:, 1]
        b = bit % 64
    else:
        limb, b = block, bit
    return ((limb >> limb.dtype.type(b)) & limb.dtype.type(1)).astype(np.uint8)


def char_poly(params: GeneratorParams) -> Gf2Poly:
    """Minimal polynomial of the raw transition, from output bit streams.

    Runs Berlekamp-Massey on 2p + 64 bits of the lowest and highest output bit
    positions and takes the lcm; a middle bit joins in if the degree is still
    short of p.
    """
    p, w = params.p, params.w
    count = 2 * p + 64
    positions = (0, w - 1, w // 2)
    f = 1
    for i, bit in enumerate(positions):
        g = berlekamp_massey(output_bit_stream(params, bit, count).tobytes())
        f = poly_lcm(f, g.coeffs)
        deg = f.bit_length() - 1
        if deg > p:
            raise DegenerateProjectionError(f"{params.name}: recovered degree {deg} exceeds p = {p}")
        if i >= 1 and deg == p:
            return Gf2Poly(f)
    raise DegenerateProjectionError(
        f"{params.name}: minimal polynomial degree {f.bit_length() - 1} < p = {p} "
        "after three bit positions; the parameters do not give a full-rank recurrence"
    )


def cache_dir() -> Path:
    d = os.environ.get("MXG_CACHE_DIR")
    return Path(d) if d else Path.home() / ".cache" / "mxg"


def _cache_get(key: str):
    path = cache_dir() / f"irred-{key}"
    try:
        return path.read_text().strip() == "1"
    except OSError:
        return None


def _cache_put(key: str, value: bool):
    d = cache_dir()
    try:
        d.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".irred-")
        with os.fdopen(fd, "w") as fh:
            fh.write("1\n" if value else "0\n")
        os.replace(tmp, d / f"irred-{key}")
    except OSError:
        pass


def is_irreducible_prime_degree(f: Gf2Poly, expensive: bool = False, use_cache: bool = True) -> bool:
    """Irreducibility of a polynomial of prime degree p.

    True iff x^(2^p) = x (mod f) and gcd(x^2 - x, f) = 1.  When 2^p - 1 is
    prime this also certifies primitivity.  Degrees above 4423 need
    ``expensive=True``.
    """
    p = f.degree
    if not _is_prime(p):
        raise UnsupportedDegreeError(f"degree {p} is not prime")
    if p > EXPENSIVE_DEGREE and not expensive:
        raise ExpensiveOperationError(f"certifying degree {p} > {EXPENSIVE_DEGREE} needs the expensive flag")
    if poly_gcd(f.coeffs, 0b110) != 1:
        return False
    key = hashlib.sha256(f"{f.coeffs:x}".encode()).hexdigest()[:32]
    if use_cache and p >= 256:
        hit = _cache_get(key)
        if hit is not None:
            return hit
    red = Reducer(f.coeffs)
    r = 0b10
    for _ in range(p):
        r = red.reduce(sqr(r))
    result = r == 0b10
    if use_cache and p >= 256:
        _cache_put(key, result)
    return result


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_primitive_small(f: Gf2Poly) -> bool:
    """Primitivity by the multiplicative order of x, for degree <= 32.

    x has order exactly 2^d - 1 modulo f only when f is primitive, so no
    separate irreducibility test is needed.
    """
    d = f.degree
    if d < 1 or d > 32:
        raise UnsupportedDegreeError("is_primitive_small handles degrees 1..32")
    order = (1 << d) - 1
    if poly_powmod_x(order, f).coeffs != 1:
        return False
    return all(poly_powmod_x(order // q, f).coeffs != 1 for q in _prime_factors(order))


def transition_matrix(params: GeneratorParams) -> Gf2Matrix:
    """p x p matrix of one raw step on the effective state bits.

    Column j is the image of the unit state e_j, obtained by stepping all unit
    states through the engine at once.
    """
    if params.p > MATRIX_CAP:
        raise SizeError(f"p = {params.p} exceeds the analysis cap {MATRIX_CAP}")
    words = engine.batch_unit_states(params)
    _, cursor = engine.step_words(params, words, 0)
    cols = engine.batch_effective_bits(params, words, cursor)
    return Gf2Matrix.from_columns(cols, params.p)
