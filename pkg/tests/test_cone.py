import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from pslat.cone import (
    Cone,
    Inside,
    Outside,
    cone_equal,
    cone_from_generators,
    cone_from_inequalities,
    dd_convert,
    dual,
    full_space,
    join,
    meet,
    member,
    subset,
    zero_cone,
)
from pslat.dd import ResourceExceeded, generators
from pslat.exact import ZeroVector, normalize_ray, primitive, unit
from pslat.lattice import base_cones, dual_extreme_rays, extreme_rays

from conftest import DIM, nonneg_ray, random_point, ray_sets, small_ray_sets

E = [tuple(int(i == j) for j in range(DIM)) for i in range(DIM)]


def e(*idx):
    return tuple(int(x) for x in unit(*idx))


def hull(gens):
    return cone_from_generators(gens) if gens else zero_cone()


# -- brute-force oracle ---------------------------------------------------------


def _det(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    n, d = len(m), Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for r in range(c + 1, n):
            t = m[r][c] / m[c][c]
            m[r] = [a - t * b for a, b in zip(m[r], m[c])]
    return d


def _rank(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    for c in range(len(m[0]) if m else 0):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                t = m[r][c] / m[rank][c]
                m[r] = [a - t * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def _normal(rows, dim):
    """Generalised cross product of dim-1 rows; zero iff they are dependent."""
    return tuple(
        (-1) ** i * _det([r[:i] + r[i + 1:] for r in rows]) for i in range(dim)
    )


def _full_rank(gens, dim):
    return any(_det(list(S)) for S in itertools.combinations(gens, dim))


def _oriented(rows, pool, dim):
    out = set()
    for S in itertools.combinations(rows, dim - 1):
        n = _normal(list(S), dim)
        if not any(n):
            continue
        vals = [sum(a * b for a, b in zip(n, g)) for g in pool]
        if all(v >= 0 for v in vals):
            out.add(primitive(n))
        elif all(v <= 0 for v in vals):
            out.add(primitive(tuple(-x for x in n)))
    return out


def brute_facets(gens, dim):
    """Facets of a full-dimensional cone: hyperplanes through dim-1 independent generators."""
    return _oriented(sorted(set(gens)), gens, dim)


def brute_rays(facets, dim):
    """Extreme rays of a pointed full-dimensional cone, dually from its facets."""
    return _oriented(sorted(facets), facets, dim)


# -- construction examples ------------------------------------------------------------


def test_duplicate_ray_collapses():
    c = cone_from_generators([e(1, 4), tuple(2 * x for x in e(1, 4))])
    assert c.vrep == ((1, 0, 0, 1, 0, 0, 0, 0),)


def test_base_cone_generators_all_extreme():
    c = cone_from_generators(extreme_rays("A"))
    assert len(c.vrep) == 12
    assert set(c.vrep) == set(extreme_rays("A"))


def test_middle_ray_redundant():
    c = cone_from_generators([E[0], e(1, 2), E[1]])
    assert c.vrep == tuple(sorted([E[0], E[1]]))


def test_zero_generator_rejected():
    with pytest.raises(ZeroVector):
        cone_from_generators([(0,) * 8])
    with pytest.raises(ValueError):
        cone_from_generators([])


def test_from_inequalities_examples():
    c = cone_from_inequalities(dual_extreme_rays("A"))
    assert len(c.hrep) == 16
    full = cone_from_inequalities([])
    assert full.hrep == ()
    assert all(member(random_point(random.Random(i)), full).inside for i in range(20))
    half = cone_from_inequalities([E[0], tuple(-x for x in E[0])])
    assert half.dim_hint == 7
    assert half.contains((0, 5, -1, 2, 0, 0, 0, 3))
    assert not half.contains((1, 0, 0, 0, 0, 0, 0, 0))


def test_dd_convert_base_cones_both_directions():
    for name in "ABC":
        gens = {normalize_ray(r) for r in extreme_rays(name)}
        normals = {normalize_ray(n) for n in dual_extreme_rays(name)}
        v = dd_convert(cone_from_generators(extreme_rays(name)))
        h = dd_convert(cone_from_inequalities(dual_extreme_rays(name)))
        assert set(v.hrep) == normals and set(v.vrep) == gens
        assert set(h.vrep) == gens and set(h.hrep) == normals


def test_half_line_hrep():
    c = cone_from_generators([E[0]])
    neg = [tuple(-x for x in v) for v in E[1:]]
    assert set(c.hrep) == set(E[1:]) | set(neg) | {E[0]}


def test_degenerate_cones():
    z, f = zero_cone(), full_space()
    assert z.vrep == () and len(z.hrep) == 16
    assert f.hrep == () and len(f.vrep) == 16
    assert dual(f) == z and dual(z) == f
    assert member((0,) * 8, z).inside
    assert not member(E[0], z).inside


# -- join / meet / dual -------------------------------------------------------------


def test_join_examples():
    a = base_cones().alpha
    assert join(a, a) == a
    c = join(cone_from_generators([e(1, 4)]), cone_from_generators([e(2, 3)]))
    assert set(c.vrep) == {e(1, 4), e(2, 3)}
    ab = join(a, base_cones().beta)
    assert subset(a, ab) and subset(base_cones().beta, ab)


def test_meet_examples():
    bc = base_cones()
    a, b = bc.alpha, bc.beta
    assert meet(a, a) == a
    assert meet(full_space(), a) == a
    ab = meet(a, b)
    assert set(ab.hrep) <= set(a.hrep) | set(b.hrep)
    assert meet(b, a) == ab


def test_meet_against_inequality_oracle():
    bc = base_cones()
    ab = meet(bc.alpha, bc.beta)
    normals = dual_extreme_rays("A") + dual_extreme_rays("B")
    rng = random.Random(7)
    for _ in range(500):
        p = random_point(rng, nonneg=True)
        expect = all(sum(a * b for a, b in zip(n, p)) >= 0 for n in normals)
        assert ab.contains(p) == expect
        cert = member(p, ab)
        assert cert.inside == expect and cert.verify(ab)


def test_dual_examples():
    a = base_cones().alpha
    assert dual(dual(a)) == a
    assert set(dual(a).vrep) == {normalize_ray(n) for n in dual_extreme_rays("A")}
    assert dual(full_space()) == zero_cone()


def test_subset_and_equality_examples():
    a = base_cones().alpha
    assert subset(a, a)
    assert cone_equal(a, dd_convert(a))
    assert not subset(join(a, base_cones().beta), a)


# -- membership -------------------------------------------------------------------


def test_member_rho0_inside_alpha():
    a = base_cones().alpha
    cert = member((2, 1, 0, 1, 1, 0, 1, 0), a)
    assert isinstance(cert, Inside) and cert.verify(a)


def test_member_outside_alpha_witness():
    a = base_cones().alpha
    cert = member(e(1, 2), a)
    assert isinstance(cert, Outside)
    # both -e1+e4+e5+e8 and -e2+e3+e6+e7 pair to -1; the lexicographically first is reported
    violated = [n for n in dual_extreme_rays("A") if sum(x * y for x, y in zip(n, e(1, 2))) < 0]
    assert cert.witness in violated
    assert cert.witness == (-1, 0, 0, 1, 1, 0, 0, 1)
    assert cert.value == -1
    assert cert.verify(a)


def test_member_apex():
    cert = member((0,) * 8, base_cones().gamma)
    assert isinstance(cert, Inside) and cert.coefficients == ()


def test_member_with_lineality():
    c = cone_from_generators([E[0], tuple(-x for x in E[0]), E[1], e(2, 3)])
    p = (Fraction(-5, 2), 3, 1, 0, 0, 0, 0, 0)
    cert = member(p, c)
    assert cert.inside and cert.verify(c)
    assert not member((0, -1, 0, 0, 0, 0, 0, 0), c).inside


def test_resource_cap():
    with pytest.raises(ResourceExceeded):
        generators(dual_extreme_rays("A") + dual_extreme_rays("B"), DIM, cap=5)


def test_json_roundtrip():
    for c in [base_cones().alpha, zero_cone(), full_space(), cone_from_generators([E[2]])]:
        assert Cone.from_json(c.to_json()) == c
    assert Cone.from_json({"facets": c.to_json()["facets"]}) == c
    with pytest.raises(ValueError):
        Cone.from_json({"rays": base_cones().alpha.to_json()["rays"],
                        "facets": base_cones().beta.to_json()["facets"]})


# -- properties on random cones --------------------------------------------------

prop = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
@given(st.lists(nonneg_ray, min_size=8, max_size=10))
def test_dd_matches_brute_force_enumeration(gens):
    assume(_full_rank(gens, DIM))
    c = cone_from_generators(gens)
    assert set(c.facets) == brute_facets(gens, DIM)
    assert not c.equalities and not c.lineality
    facets = brute_facets(gens, DIM)
    extreme = {
        primitive(g) for g in gens
        if _rank([f for f in facets if not sum(a * b for a, b in zip(f, g))]) == DIM - 1
    }
    assert set(c.rays) == extreme


@prop
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4).filter(any).map(tuple),
                min_size=1, max_size=9))
def test_dd_matches_brute_force_low_dim(gens):
    assume(_full_rank(gens, 4))
    c = cone_from_generators(gens, dim=4)
    assert set(c.hrep) == brute_facets(gens, 4)
    if not c.lineality:
        assert set(c.rays) == brute_rays(c.facets, 4)


@prop
@given(ray_sets)
def test_generators_satisfy_inequalities(gens):
    c = cone_from_generators(gens)
    for g in gens:
        assert c.contains(g)
    for g in c.vrep:
        assert all(sum(a * b for a, b in zip(n, g)) >= 0 for n in c.hrep)


@prop
@given(ray_sets)
def test_round_trip(gens):
    c = cone_from_generators(gens)
    again = cone_from_inequalities(c.hrep)
    assert again == c
    assert dd_convert(again) == c
    assert cone_from_generators(again.vrep) == c


@prop
@given(ray_sets)
def test_double_dual_recomputed(gens):
    c = cone_from_generators(gens)
    d = hull(c.hrep)  # dual rebuilt from normals by DD
    assert d == dual(c)
    assert hull(d.hrep) == c


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(ray_sets)
def test_irredundant(gens):
    c = cone_from_generators(gens)
    for r in c.rays:
        rest = [g for g in c.vrep if g != r]
        if rest:
            assert cone_from_generators(rest) != c
    for f in c.facets:
        rest = [n for n in c.hrep if n != f]
        assert cone_from_inequalities(rest) != c


@prop
@given(ray_sets, ray_sets)
def test_join_meet_duality(g1, g2):
    c1, c2 = cone_from_generators(g1), cone_from_generators(g2)
    assert dual(meet(c1, c2)) == join(dual(c1), dual(c2))
    assert dual(join(c1, c2)) == meet(dual(c1), dual(c2))


@prop
@given(small_ray_sets, small_ray_sets, small_ray_sets)
def test_lattice_laws(g1, g2, g3):
    a, b, c = (cone_from_generators(g) for g in (g1, g2, g3))
    assert join(a, b) == join(b, a) and meet(a, b) == meet(b, a)
    assert join(join(a, b), c) == join(a, join(b, c))
    assert meet(meet(a, b), c) == meet(a, meet(b, c))
    assert join(a, a) == a and meet(a, a) == a
    assert meet(a, join(a, b)) == a and join(a, meet(a, b)) == a
    assert subset(meet(a, b), a) and subset(a, join(a, b))


@settings(max_examples=20, deadline=None)
@given(ray_sets, st.randoms(use_true_random=False))
def test_membership_paths_agree(gens, rng):
    c = cone_from_generators(gens)
    for _ in range(50):
        p = random_point(rng)
        if rng.random() < 0.3:
            # a point known to be inside: random nonnegative combination
            p = tuple(sum(Fraction(rng.randint(0, 3)) * g[i] for g in gens) for i in range(DIM))
        cert = member(p, c)
        assert cert.inside == c.contains(p)
        assert cert.verify(c)
