"""Exact rational scalars and 8-vectors.

Vectors live in the GHZ-diagonal coordinate space: position ``i`` (1-based in
prose, 0-based in code) is the weight on the i-th GHZ projector, with the
projectors ordered lexicographically by their ``ijk`` label.  The same
coordinates describe states (spectra ``p``) and witnesses (``q``).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

DIM = 8

Rat = Fraction
Vec8 = tuple  # tuple[Fraction, ...] of length DIM
Ray = tuple  # tuple[int, ...], primitive

RatLike = Union[int, Fraction, str]


class ZeroVector(ValueError):
    """Raised where a nonzero direction is required."""


def rat(x: RatLike) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are rejected: they would silently leak rounding into exact code.
    """
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact scalar {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


def vec8(entries: Iterable[RatLike]) -> Vec8:
    v = tuple(rat(x) for x in entries)
    if len(v) != DIM:
        raise ValueError(f"expected {DIM} entries, got {len(v)}")
    return v


def unit(*indices: int) -> Vec8:
    """Sum of standard basis vectors, 1-based: ``unit(1, 8)`` is e1+e8."""
    v = [Fraction(0)] * DIM
    for i in indices:
        v[i - 1] += 1
    return tuple(v)


def pairing(p: Sequence, q: Sequence) -> Fraction:
    """The bilinear pairing sum_i p_i q_i (trace pairing of GHZ-diagonal matrices)."""
    if len(p) != len(q):
        raise ValueError("length mismatch")
    return sum((Fraction(a) * b for a, b in zip(p, q)), Fraction(0))


def add(*vs: Sequence) -> Vec8:
    return tuple(sum((Fraction(v[i]) for v in vs), Fraction(0)) for i in range(len(vs[0])))


def scale(c: RatLike, v: Sequence) -> Vec8:
    c = rat(c) if not isinstance(c, Fraction) else c
    return tuple(c * x for x in v)


def sub(u: Sequence, v: Sequence) -> Vec8:
    return tuple(Fraction(a) - b for a, b in zip(u, v))


def primitive(v: Sequence) -> Ray:
    """Unique primitive integer vector positively proportional to ``v`` (any length)."""
    if all(type(x) is int for x in v):
        ints = list(v)
        if not any(ints):
            raise ZeroVector("zero vector has no ray")
    else:
        fr = [Fraction(x) for x in v]
        if not any(fr):
            raise ZeroVector("zero vector has no ray")
        den = lcm(*(x.denominator for x in fr))
        ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def normalize_ray(v: Sequence) -> Ray:
    if len(v) != DIM:
        raise ValueError(f"expected {DIM} entries, got {len(v)}")
    return primitive(v)


def rat_to_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def vec_to_json(v: Sequence) -> list[str]:
    return [rat_to_str(x) for x in v]


def vec_from_json(data: Sequence) -> Vec8:
    return vec8(str(x) for x in data)


def parse_vec(text: str) -> Vec8:
    """Parse ``"2,1,0,1,1,0,1,0"`` or ``"1/2,0,..."`` into a Vec8."""
    parts = [s for s in text.replace(" ", "").split(",")]
    if any(not s for s in parts):
        raise ValueError(f"empty entry in {text!r}")
    return vec8(parts)


def format_vec(v: Sequence) -> str:
    return "(" + ", ".join(rat_to_str(x) for x in v) + ")"
