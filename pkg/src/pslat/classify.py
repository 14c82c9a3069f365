"""Partial-separability profiles of GHZ-diagonal states.

A profile records membership of a state in each of eighteen named cones
built from A, B, C.  The 18-character 0/1 string of memberships serves as the
class identifier.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .cone import Certificate, Cone, member, subset
from .exact import Vec8, rat_to_str, vec8, vec_to_json
from .lattice import Evaluator

NAMED_CONES: tuple[str, ...] = (
    "A",
    "B",
    "C",
    "A&B",
    "B&C",
    "C&A",
    "A|B|C",
    "A&B&C",
    "A|B",
    "B|C",
    "C|A",
    "A&(B|C)",
    "B&(C|A)",
    "C&(A|B)",
    "(A|B)&(A|C)",
    "(B|A)&(B|C)",
    "(C|A)&(C|B)",
    "(A|B)&(B|C)&(C|A)",
)


class NotGHZDiagonal(ValueError):
    pass


class NegativeEntry(ValueError):
    pass


@dataclass(frozen=True)
class XState:
    """Diagonal ``a`` (top half), ``b`` (bottom half, reversed) and anti-diagonal ``c``."""

    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]
    c: tuple[Fraction, ...]

    def __post_init__(self):
        for v in (self.a, self.b, self.c):
            if len(v) != 4:
                raise ValueError("X-state blocks have four entries")

    @property
    def is_ghz_diagonal(self) -> bool:
        return self.a == self.b

    @property
    def is_state(self) -> bool:
        """Positive semidefinite: a_i, b_i >= 0 and c_i^2 <= a_i b_i."""
        return all(
            x >= 0 and y >= 0 and z * z <= x * y for x, y, z in zip(self.a, self.b, self.c)
        )

    def matrix(self) -> list[list[Fraction]]:
        m = [[Fraction(0)] * 8 for _ in range(8)]
        for i in range(4):
            m[i][i] = self.a[i]
            m[7 - i][7 - i] = self.b[i]
            m[i][7 - i] = self.c[i]
            m[7 - i][i] = self.c[i]
        return m

    def to_json(self) -> dict:
        return {k: [rat_to_str(x) for x in getattr(self, k)] for k in "abc"}


def p_from_spectrum(p: Sequence) -> XState:
    """X-form of the GHZ-diagonal matrix with spectrum ``p``."""
    p = vec8(p)
    half = Fraction(1, 2)
    a = tuple(half * (p[i] + p[7 - i]) for i in range(4))
    c = tuple(half * (p[i] - p[7 - i]) for i in range(4))
    return XState(a, a, c)


def spectrum_from_x(x: XState) -> Vec8:
    if not x.is_ghz_diagonal:
        raise NotGHZDiagonal("a != b: not GHZ diagonal")
    p = [Fraction(0)] * 8
    for i in range(4):
        p[i] = x.a[i] + x.c[i]
        p[7 - i] = x.a[i] - x.c[i]
    return tuple(p)


@dataclass(frozen=True)
class Membership:
    cone: str
    member: bool
    certificate: Certificate


@dataclass(frozen=True)
class PSProfile:
    state: Vec8
    memberships: tuple[Membership, ...]

    @property
    def class_bits(self) -> str:
        return "".join("1" if m.member else "0" for m in self.memberships)

    def __getitem__(self, name: str) -> bool:
        for m in self.memberships:
            if m.cone == name:
                return m.member
        raise KeyError(name)

    def to_json(self, certificates: bool = False) -> dict:
        rows = []
        for m in self.memberships:
            row = {"cone": m.cone, "member": m.member}
            if certificates:
                row["certificate"] = m.certificate.to_json()
            rows.append(row)
        return {"state": vec_to_json(self.state), "profile": rows, "class_bits": self.class_bits}


class Classifier:
    """Holds the eighteen evaluated cones and their containment order."""

    def __init__(self, evaluator: Evaluator | None = None):
        ev = evaluator or Evaluator()
        self.cones: dict[str, Cone] = {name: ev(name) for name in NAMED_CONES}
        self.order: dict[tuple[str, str], bool] = {
            (s, t): subset(self.cones[s], self.cones[t]) for s in NAMED_CONES for t in NAMED_CONES
        }

    def profile(self, p: Sequence) -> PSProfile:
        state = vec8(p)
        if any(x < 0 for x in state):
            raise NegativeEntry("state spectrum must be entrywise nonnegative")
        rows = []
        for name in NAMED_CONES:
            cert = member(state, self.cones[name])
            rows.append(Membership(name, cert.inside, cert))
        return PSProfile(state, tuple(rows))

    def consistent(self, prof: PSProfile) -> bool:
        """Membership respects containment between the named cones."""
        have = {m.cone: m.member for m in prof.memberships}
        return all(
            have[t] for (s, t), inc in self.order.items() if inc and have[s]
        )


@lru_cache(maxsize=1)
def default_classifier() -> Classifier:
    return Classifier()


def ps_profile(p: Sequence) -> PSProfile:
    return default_classifier().profile(p)


def observed_patterns(points: Iterable[Sequence], classifier: Classifier | None = None) -> Counter:
    """How often each 18-bit class pattern occurs over ``points``.

    This only lists what the sample hits; it says nothing about patterns
    that were not sampled.
    """
    cl = classifier or default_classifier()
    return Counter(cl.profile(p).class_bits for p in points)
