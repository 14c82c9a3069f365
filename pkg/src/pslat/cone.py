"""Polyhedral cones in R^8 with exact generator and inequality descriptions.

A :class:`Cone` always carries both descriptions in canonical form:

* generators: a lineality basis plus extreme rays taken orthogonal to it;
* inequalities: an equality basis (the orthogonal complement of the span) plus
  facet normals taken orthogonal to it.

``vrep``/``hrep`` expose these as flat sorted ray sets, with lines and
equalities written as opposed pairs.  Two cones are equal as sets iff their
canonical descriptions coincide, so :func:`cone_equal` is a tuple comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence, Union

from . import dd
from .dd import ResourceExceeded, dot, neg
from .exact import DIM, Ray, Vec8, ZeroVector, primitive, rat_to_str

__all__ = [
    "Cone",
    "Inside",
    "Outside",
    "Certificate",
    "ResourceExceeded",
    "cone_from_generators",
    "cone_from_inequalities",
    "dd_convert",
    "join",
    "meet",
    "dual",
    "subset",
    "cone_equal",
    "member",
    "verify_certificate",
    "full_space",
    "zero_cone",
]


def _pairs(basis: Iterable[Ray]) -> list[Ray]:
    out = []
    for b in basis:
        out += [b, neg(b)]
    return out


@dataclass(frozen=True)
class Cone:
    """Canonical doubly-described cone.  Build with the module functions."""

    lineality: tuple[Ray, ...]
    rays: tuple[Ray, ...]
    equalities: tuple[Ray, ...]
    facets: tuple[Ray, ...]
    dim: int = DIM
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def vrep(self) -> tuple[Ray, ...]:
        """Generators as a sorted set; lines appear as opposed pairs."""
        if "vrep" not in self._cache:
            self._cache["vrep"] = tuple(sorted(set(self.rays) | set(_pairs(self.lineality))))
        return self._cache["vrep"]

    @property
    def hrep(self) -> tuple[Ray, ...]:
        """Inward normals as a sorted set; equalities appear as opposed pairs."""
        if "hrep" not in self._cache:
            self._cache["hrep"] = tuple(sorted(set(self.facets) | set(_pairs(self.equalities))))
        return self._cache["hrep"]

    @property
    def dim_hint(self) -> int:
        """Dimension of the linear span."""
        return self.dim - len(self.equalities)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    def contains(self, p: Sequence) -> bool:
        return all(dot(n, p) >= 0 for n in self.hrep)

    def __repr__(self) -> str:
        return (
            f"Cone(dim={self.dim_hint}/{self.dim}, rays={len(self.rays)}, "
            f"lineality={len(self.lineality)}, facets={len(self.facets)}, "
            f"equalities={len(self.equalities)})"
        )

    def to_json(self) -> dict:
        """``{"rays": [...], "facets": [...]}`` with integers as strings."""
        return {
            "rays": [[str(x) for x in r] for r in self.vrep],
            "facets": [[str(x) for x in r] for r in self.hrep],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Cone":
        rays = data.get("rays")
        facets = data.get("facets")
        if rays is None and facets is None:
            raise ValueError("cone JSON needs 'rays' or 'facets'")
        parse = lambda rows: [tuple(int(x) for x in r) for r in rows]  # noqa: E731
        if rays is not None:
            c = cone_from_generators(parse(rays)) if rays else zero_cone()
            if facets is not None and c != cone_from_inequalities(parse(facets)):
                raise ValueError("'rays' and 'facets' describe different cones")
            return c
        return cone_from_inequalities(parse(facets))


def _check(vs: Iterable[Sequence], dim: int) -> list[Sequence]:
    out = list(vs)
    for v in out:
        if len(v) != dim:
            raise ValueError(f"expected length {dim}, got {len(v)}")
    return out


def cone_from_generators(rays: Iterable[Sequence], dim: int = DIM, cap: int | None = None) -> Cone:
    """Conic hull of ``rays`` (at least one, none zero)."""
    gens = _check(rays, dim)
    if not gens:
        raise ValueError("need at least one generator")
    gens = [primitive(g) for g in gens]  # raises ZeroVector
    equalities, facets = dd.generators(gens, dim, cap)
    lineality = dd.nullspace(list(facets) + list(equalities), dim)
    extreme = dd.extreme_subset(gens, lineality, equalities, facets, dim)
    return Cone(lineality, extreme, equalities, facets, dim)


def cone_from_inequalities(
    normals: Iterable[Sequence], dim: int = DIM, cap: int | None = None
) -> Cone:
    """``{x : <n, x> >= 0 for every n}``; an empty list gives the whole space."""
    ineqs = _check(normals, dim)
    lineality, rays = dd.generators(ineqs, dim, cap)
    equalities = dd.nullspace(list(rays) + list(lineality), dim)
    nonzero = [a for a in ineqs if any(a)]
    facets = dd.extreme_subset(nonzero, equalities, lineality, rays, dim)
    return Cone(lineality, rays, equalities, facets, dim)


def full_space(dim: int = DIM) -> Cone:
    return cone_from_inequalities([], dim)


def zero_cone(dim: int = DIM) -> Cone:
    units = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    return cone_from_inequalities(_pairs(units), dim)


def dd_convert(c: Cone) -> Cone:
    """Both descriptions populated and canonical.

    Cones are canonicalised on construction, so this re-derives each side
    from the other and returns the (equal) result.
    """
    if c.lineality or c.rays:
        return cone_from_generators(c.vrep, c.dim)
    return cone_from_inequalities(c.hrep, c.dim)


def join(c1: Cone, c2: Cone, cap: int | None = None) -> Cone:
    """Convex (conic) hull of the union."""
    if c1 == c2:
        return c1
    gens = list(c1.vrep) + list(c2.vrep)
    if not gens:
        return c1
    return cone_from_generators(gens, c1.dim, cap)


def meet(c1: Cone, c2: Cone, cap: int | None = None) -> Cone:
    """Intersection."""
    if c1 == c2:
        return c1
    return cone_from_inequalities(list(c1.hrep) + list(c2.hrep), c1.dim, cap)


def dual(c: Cone) -> Cone:
    """``{y : <x, y> >= 0 for all x in c}``: generators and normals trade places."""
    return Cone(c.equalities, c.facets, c.lineality, c.rays, c.dim)


def subset(c1: Cone, c2: Cone) -> bool:
    return all(dot(n, g) >= 0 for g in c1.vrep for n in c2.hrep)


def cone_equal(c1: Cone, c2: Cone) -> bool:
    return c1 == c2


# -- membership certificates ------------------------------------------------


@dataclass(frozen=True)
class Inside:
    """``point`` equals the nonnegative combination ``sum(c * ray)``."""

    point: Vec8
    coefficients: tuple[tuple[Ray, Fraction], ...]

    inside = True

    def verify(self, cone: Cone | None = None) -> bool:
        if any(c < 0 for _, c in self.coefficients):
            return False
        if cone is not None and any(r not in cone.vrep for r, _ in self.coefficients):
            return False
        total = [Fraction(0)] * len(self.point)
        for r, c in self.coefficients:
            for i, x in enumerate(r):
                total[i] += c * x
        return tuple(total) == tuple(Fraction(x) for x in self.point)

    def to_json(self) -> dict:
        return {
            "verdict": "inside",
            "coefficients": [
                {"ray": [str(x) for x in r], "coefficient": rat_to_str(c)}
                for r, c in self.coefficients
            ],
        }


@dataclass(frozen=True)
class Outside:
    """``witness`` is nonnegative on the cone but negative on ``point``."""

    point: Vec8
    witness: Ray

    inside = False

    @property
    def value(self) -> Fraction:
        return Fraction(dot(self.witness, self.point))

    def verify(self, cone: Cone | None = None) -> bool:
        if self.value >= 0:
            return False
        if cone is None:
            return True
        return all(dot(self.witness, g) >= 0 for g in cone.vrep)

    def to_json(self) -> dict:
        return {
            "verdict": "outside",
            "witness": [str(x) for x in self.witness],
            "pairing": rat_to_str(self.value),
        }


Certificate = Union[Inside, Outside]


def verify_certificate(cert: Certificate, cone: Cone) -> bool:
    return cert.verify(cone)


def _incidence(c: Cone):
    """Per ray: bitmask of facets vanishing on it, and (facet, value) pairs with value > 0."""
    if "incidence" not in c._cache:
        rows = []
        for r in c.rays:
            zmask, pos = 0, []
            for k, f in enumerate(c.facets):
                v = dot(f, r)
                if v == 0:
                    zmask |= 1 << k
                elif v > 0:
                    pos.append((k, v))
            rows.append((r, zmask, pos))
        c._cache["incidence"] = rows
    return c._cache["incidence"]


def _integral(p: Sequence[Fraction]) -> tuple[list[int], int]:
    """``p = vec / den`` with integer ``vec``."""
    den = lcm(*(x.denominator for x in p))
    return [int(x * den) for x in p], den


def _decompose(p: Sequence[Fraction], c: Cone) -> tuple[tuple[Ray, Fraction], ...]:
    """Nonnegative coefficients over ``c.vrep`` summing to ``p`` (assumed inside).

    Lines are peeled off first; the rest walks down the face lattice: take a
    generator of the smallest face holding the current residual, subtract as
    much of it as stays feasible, repeat until the residual vanishes.
    """
    coeffs: dict[Ray, Fraction] = {}
    x = [Fraction(v) for v in p]
    if c.lineality:
        ortho = dd.orthogonal_basis(c.lineality)
        perp = dd.project_out(x, ortho)
        along = [a - b for a, b in zip(x, perp)]
        # canonical lineality basis is in echelon form: read coefficients at pivots
        for l in c.lineality:
            piv = next(i for i, v in enumerate(l) if v)
            t = along[piv] / l[piv]
            if t:
                along = [a - t * v for a, v in zip(along, l)]
                r, t = (l, t) if t > 0 else (neg(l), -t)
                coeffs[r] = coeffs.get(r, Fraction(0)) + t
        x = perp
    # residual is vec / den, kept integral
    vec, den = _integral(x)
    inc = _incidence(c)
    while any(vec):
        vals = [dot(f, vec) for f in c.facets]
        tight = 0
        for k, v in enumerate(vals):
            if v == 0:
                tight |= 1 << k
        g, _, pos = next(row for row in inc if row[1] & tight == tight)
        a, b = min(((vals[k], v) for k, v in pos), key=lambda ab: Fraction(ab[0], ab[1]))
        coeffs[g] = coeffs.get(g, Fraction(0)) + Fraction(a, den * b)
        vec = [b * u - a * w for u, w in zip(vec, g)]
        den *= b
        common = gcd(den, *vec)
        vec = [u // common for u in vec]
        den //= common
    return tuple(sorted(coeffs.items()))


def member(p: Sequence, c: Cone) -> Certificate:
    """Decide ``p in c`` and return a certificate either way."""
    point = tuple(Fraction(x) for x in p)
    if len(point) != c.dim:
        raise ValueError(f"expected length {c.dim}, got {len(point)}")
    vec, _ = _integral(point)
    violated = [(v, n) for n in c.hrep if (v := dot(n, vec)) < 0]
    if violated:
        return Outside(point, min(violated)[1])
    return Inside(point, _decompose(point, c))
