"""Double-description method over the integers, any ambient dimension.

Everything here works on tuples of Python ints (primitive vectors) and exact
``Fraction`` linear algebra.  The single entry point that matters is
:func:`generators`, which turns an inequality description
``{x : <a, x> >= 0 for all a}`` into a minimal generating system
(lineality basis plus extreme rays modulo lineality).  Because the dual of a
finitely generated cone is again described by inequalities, the same routine
converts in the other direction.
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exact import ZeroVector, primitive

DEFAULT_CAP = 10**6


class ResourceExceeded(RuntimeError):
    """An intermediate ray list grew past the configured cap."""

    def __init__(self, size: int, cap: int):
        super().__init__(f"double description grew to {size} rays (cap {cap})")
        self.size = size
        self.cap = cap


def dd_cap() -> int:
    """Current cap on intermediate ray counts; ``PSLAT_DD_CAP`` overrides."""
    env = os.environ.get("PSLAT_DD_CAP")
    return int(env) if env else DEFAULT_CAP


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def neg(v: Sequence[int]) -> tuple[int, ...]:
    return tuple(-x for x in v)


# -- exact linear algebra -----------------------------------------------------


def rref(rows: Iterable[Sequence], dim: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    rows = list(rows)
    if len(rows) > dim and all(type(x) is int for r in rows for x in r):
        rows = _independent(rows, dim)
    m = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(dim):
        pr = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][col]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _independent(
    rows: Iterable[Sequence[int]], dim: int, stop: int | None = None
) -> list[Sequence[int]]:
    """A maximal linearly independent subset of integer rows (fraction-free
    elimination), cut short once ``stop`` rows are kept."""
    if stop is None:
        stop = dim
    basis: dict[int, list[int]] = {}  # pivot column -> reduced row leading there
    keep = []
    for row in rows:
        v = list(row)
        for col in range(dim):
            x = v[col]
            if not x:
                continue
            b = basis.get(col)
            if b is None:
                basis[col] = v
                keep.append(row)
                break
            y = b[col]
            v = [y * a - x * c for a, c in zip(v, b)]
        if len(keep) >= stop:
            break
    return keep


def rank(rows: Iterable[Sequence[int]], dim: int, stop: int | None = None) -> int:
    """Rank of integer rows; gives up counting at ``stop``."""
    return len(_independent(rows, dim, stop))


def subspace_basis(vectors: Iterable[Sequence], dim: int) -> tuple[tuple[int, ...], ...]:
    """Canonical integer basis of the span: RREF rows made primitive."""
    rows, _ = rref(vectors, dim)
    return tuple(primitive(r) for r in rows)


def nullspace(rows: Iterable[Sequence], dim: int) -> tuple[tuple[int, ...], ...]:
    """Canonical basis of the orthogonal complement of span(rows)."""
    m, pivots = rref(rows, dim)
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * dim
        v[fc] = Fraction(1)
        for row, pc in zip(m, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return subspace_basis(basis, dim)


def orthogonal_basis(basis: Sequence[Sequence[int]]) -> list[tuple[list[Fraction], Fraction]]:
    """Gram-Schmidt without normalisation; pairs (u, <u,u>)."""
    out: list[tuple[list[Fraction], Fraction]] = []
    for b in basis:
        u = [Fraction(x) for x in b]
        for w, ww in out:
            c = dot(u, w) / ww
            u = [a - c * x for a, x in zip(u, w)]
        out.append((u, dot(u, u)))
    return out


def project_out(v: Sequence, ortho: list[tuple[list[Fraction], Fraction]]) -> list[Fraction]:
    """Component of ``v`` orthogonal to the subspace with orthogonal basis ``ortho``."""
    u = [Fraction(x) for x in v]
    for w, ww in ortho:
        c = dot(u, w) / ww
        if c:
            u = [a - c * x for a, x in zip(u, w)]
    return u


def canonical_rays(
    vectors: Iterable[Sequence], subspace: Sequence[Sequence[int]]
) -> tuple[tuple[int, ...], ...]:
    """Project out ``subspace``, make primitive, drop zeros, dedupe, sort."""
    ortho = orthogonal_basis(subspace)
    seen = set()
    for v in vectors:
        w = project_out(v, ortho) if ortho else v
        if any(w):
            seen.add(primitive(w))
    return tuple(sorted(seen))


# -- double description ---------------------------------------------------------


def _clean(ineqs: Iterable[Sequence], dim: int) -> list[tuple[int, ...]]:
    out = set()
    for a in ineqs:
        if len(a) != dim:
            raise ValueError(f"expected length {dim}, got {len(a)}")
        try:
            out.add(primitive(a))
        except ZeroVector:
            continue  # 0 >= 0 constrains nothing
    return sorted(out)


def _candidate_pairs(rays, pos, negs, nbits: int, need: int):
    """(pos, neg) index pairs sharing at least ``need`` tight constraints.

    Necessary for adjacency; counted for all pairs at once as a product of
    0/1 incidence matrices.
    """
    ip = [i for i, _ in pos]
    jn = [j for j, _ in negs]
    if need <= 0 or nbits == 0:
        return [(i, j) for i in ip for j in jn]
    nbytes = (nbits + 7) // 8

    def incidence(idx):
        raw = b"".join(rays[i][1].to_bytes(nbytes, "little") for i in idx)
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8).reshape(len(idx), nbytes),
                             axis=1, bitorder="little")
        return bits.astype(np.float32)

    # float32 counts are exact well past any constraint count we can reach
    counts = incidence(ip) @ incidence(jn).T
    rows, cols = np.nonzero(counts >= need)
    return [(ip[r], jn[c]) for r, c in zip(rows.tolist(), cols.tolist())]


def generators(
    ineqs: Iterable[Sequence], dim: int, cap: int | None = None
) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    """Minimal generators of ``{x : <a, x> >= 0 for every a in ineqs}``.

    Returns ``(lineality, rays)``: a canonical basis of the lineality space and
    the canonical extreme rays of the pointed part (projected orthogonally to
    the lineality space).  Constraints are inserted in sorted order, so the
    result is deterministic.  Raises :class:`ResourceExceeded` when the
    working ray list exceeds ``cap``.
    """
    if cap is None:
        cap = dd_cap()
    rows = _clean(ineqs, dim)
    lin: list[tuple[int, ...]] = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    # (vector, bitmask of processed constraints tight at the vector)
    rays: list[tuple[tuple[int, ...], int]] = []

    for idx, a in enumerate(rows):
        bit = 1 << idx
        lvals = [dot(a, l) for l in lin]
        piv = next((i for i, s in enumerate(lvals) if s != 0), None)
        if piv is not None:
            l0 = lin[piv]
            v0 = lvals[piv]
            if v0 < 0:
                l0, v0 = neg(l0), -v0
            new_lin = []
            for i, (l, s) in enumerate(zip(lin, lvals)):
                if i == piv:
                    continue
                new_lin.append(primitive([v0 * x - s * y for x, y in zip(l, l0)]) if s else l)
            new_rays = []
            for r, z in rays:
                s = dot(a, r)
                if s:
                    r = primitive([v0 * x - s * y for x, y in zip(r, l0)])
                new_rays.append((r, z | bit))
            # previous constraints all vanish on the lineality space
            new_rays.append((l0, bit - 1))
            lin, rays = new_lin, new_rays
            continue

        pos, zero, negs = [], [], []
        for i, (r, z) in enumerate(rays):
            s = dot(a, r)
            if s > 0:
                pos.append((i, s))
            elif s < 0:
                negs.append((i, s))
            else:
                zero.append((r, z | bit))
        new = [rays[i] for i, _ in pos] + zero
        if pos and negs:
            k = rank(lin + [r for r, _ in rays], dim) - len(lin)
            # column incidence: constraint index -> bitmask of rays tight on it
            tight: dict[int, int] = {}
            for i, (_, z) in enumerate(rays):
                while z:
                    low = z & -z
                    j = low.bit_length() - 1
                    tight[j] = tight.get(j, 0) | (1 << i)
                    z ^= low
            everything = (1 << len(rays)) - 1
            value = dict(pos + negs)
            for ip, jn in _candidate_pairs(rays, pos, negs, idx + 1, k - 2):
                (rp, zp), (rn, zn) = rays[ip], rays[jn]
                common = zp & zn
                # adjacent iff no third ray is tight on every common constraint
                pair = (1 << ip) | (1 << jn)
                acc, c = everything, common
                while c and acc != pair:
                    low = c & -c
                    acc &= tight[low.bit_length() - 1]
                    c ^= low
                if acc != pair:
                    continue
                sp, sn = value[ip], value[jn]
                v = [sp * y - sn * x for x, y in zip(rp, rn)]
                new.append((primitive(v), common | bit))
                if len(new) > cap:
                    raise ResourceExceeded(len(new), cap)
        rays = new

    lineality = subspace_basis(lin, dim)
    return lineality, canonical_rays((r for r, _ in rays), lineality)


def extreme_subset(
    candidates: Iterable[Sequence],
    lineality: Sequence[Sequence[int]],
    equalities: Sequence[Sequence[int]],
    facets: Sequence[Sequence[int]],
    dim: int,
) -> tuple[tuple[int, ...], ...]:
    """Canonical extreme rays among ``candidates`` for a cone known in H-form.

    ``candidates`` all lie in the cone.  A candidate spans an extreme ray (mod
    lineality) iff the equalities together with the facets tight at it have
    rank ``dim - len(lineality) - 1``.
    """
    target = dim - len(lineality) - 1
    keep = []
    for g in canonical_rays(candidates, lineality):
        tight = [f for f in facets if dot(f, g) == 0]
        if rank(list(equalities) + tight, dim, stop=target + 1) == target:
            keep.append(g)
    return tuple(keep)
