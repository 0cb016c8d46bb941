import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linegeom import classify, classify_bundles
from linegeom.errors import ColoringInconsistent, KindMismatch, NotIncident, SigmaDegenerate
from linegeom.incidence import (
    PLANE,
    POINT,
    Bundle,
    Geometry,
    bundle,
    incident_pairs,
    model_check_bundles,
    perp,
    point_plane_incident,
    sigma_split,
    skew,
    verify_unique_plane,
    verify_unique_point,
    verify_unique_transversal,
)
from linegeom.structure import IncidenceStructure, bits, mask_of

from oracles import dot


def concrete_sigma(model, a, b):
    """Σ(a, b) from coordinates: lines through the common point or in the common plane, minus the pencil."""
    la, lb = model.lines[a], model.lines[b]
    (pt,) = set(la.points) & set(lb.points)
    star = {l.id for l in model.lines if pt in l.points}
    vecs = la.span + lb.span
    plane = next(
        pl.values for pl in model.planes if all(dot(pl.values, v, model.q) == 0 for v in vecs)
    )
    flat = {
        l.id for l in model.lines if all(dot(plane, v, model.q) == 0 for v in l.span)
    }
    return star - flat, flat - star


def test_perp_examples(s2):
    assert perp(s2, []) == s2.full
    for l in range(35):
        assert perp(s2, [l]).bit_count() == 19
    u = 0
    v = bits(s2.skew_row(u))[0]
    w = bits(s2.skew_row(u) & s2.skew_row(v))[0]
    assert perp(s2, [u, v, w]).bit_count() == 3


def test_skew_examples(s2, model2):
    assert not skew(s2, 4, 4)
    for l in range(35):
        assert s2.skew_row(l).bit_count() == 16

    def through(*vals):
        return next(
            l.id for l in model2.lines if {model2.points[i].values for i in l.points} >= set(vals)
        )

    e01 = through((1, 0, 0, 0), (0, 1, 0, 0))
    e23 = through((0, 0, 1, 0), (0, 0, 0, 1))
    assert skew(s2, e01, e23)


@pytest.mark.parametrize("q,size", [(2, 4), (3, 9)])
def test_sigma_split_matches_coordinates(q, size, request):
    model = request.getfixturevalue(f"model{q}")
    s = request.getfixturevalue(f"s{q}")
    for a, b in list(incident_pairs(s))[:: 7 if q == 3 else 1]:
        split = sigma_split(s, a, b)
        assert split.class_one.bit_count() == split.class_two.bit_count() == size
        assert split.sigma == split.class_one | split.class_two
        got = {frozenset(bits(split.class_one)), frozenset(bits(split.class_two))}
        assert got == {frozenset(c) for c in concrete_sigma(model, a, b)}


def test_sigma_classes_are_cliques_with_ab(s2):
    for a, b in incident_pairs(s2):
        split = sigma_split(s2, a, b)
        for cls in (split.class_one, split.class_two):
            members = bits(cls) + [a, b]
            assert all(s2.incident(x, y) for x, y in itertools.combinations(members, 2))


def test_sigma_split_errors(s2):
    with pytest.raises(NotIncident):
        sigma_split(s2, 3, 3)
    v = bits(s2.skew_row(0))[0]
    with pytest.raises(NotIncident):
        sigma_split(s2, 0, v)
    # complete relation: Σ is empty
    full = IncidenceStructure.from_matrix([[True] * 4] * 4)
    with pytest.raises(SigmaDegenerate):
        sigma_split(full, 0, 1)


def test_identity_relation_has_no_incident_pairs():
    s = IncidenceStructure.from_matrix([[i == j for j in range(5)] for i in range(5)])
    assert list(incident_pairs(s)) == []
    assert classify_bundles(s) == ([], [])


@pytest.mark.parametrize("q,size", [(2, 7), (3, 13)])
def test_bundle_sizes(q, size, request):
    g = request.getfixturevalue(f"g{q}")
    s = g.structure
    for a, b in list(incident_pairs(s))[:60]:
        for side in (POINT, PLANE):
            B = g.bundle(a, b, side)
            assert len(B) == size
            assert B == g.bundle(b, a, side)
            assert a in B and b in B


def test_bundle_independent_of_witness(s3):
    for a, b in list(incident_pairs(s3))[::5]:
        split = sigma_split(s3, a, b)
        for cls in (split.class_one, split.class_two):
            sets = {perp(s3, [a, b, c]) for c in bits(cls)}
            assert len(sets) == 1


def test_bundle_function(s2, g2):
    assert bundle(s2, 0, 1, POINT) == g2.bundle(0, 1, POINT)


@pytest.mark.parametrize("q,count", [(2, 15), (3, 40)])
def test_classify_counts(q, count, request):
    g = request.getfixturevalue(f"g{q}")
    assert len(g.points) == len(g.planes) == count
    assert model_check_bundles(request.getfixturevalue(f"model{q}"), g) == "direct"


def test_swapped_classification_is_valid(model2, g2):
    sw = g2.swapped()
    assert model_check_bundles(model2, sw) == "swapped"
    assert verify_unique_plane(sw).ok and verify_unique_point(sw).ok


def test_point_plane_incidence(model2, g2):
    for P in g2.points:
        for pi in g2.planes:
            shared = (P.lines & pi.lines).bit_count()
            assert shared in (0, 3)
            assert point_plane_incident(P, pi) == (shared == 3)
    with pytest.raises(KindMismatch):
        point_plane_incident(g2.planes[0], g2.points[0])
    a, b = next(incident_pairs(g2.structure))
    assert point_plane_incident(g2.bundle(a, b, POINT), g2.bundle(a, b, PLANE))


def test_coloring_inconsistent_for_disjoint_union(s2):
    n = s2.n
    rows = tuple(s2.rows) + tuple(r << n for r in s2.rows)
    union = IncidenceStructure(tuple(f"A{i}" for i in range(n)) + tuple(f"B{i}" for i in range(n)), rows)
    with pytest.raises(ColoringInconsistent):
        classify(union)


@pytest.mark.parametrize("q,cases", [(2, 420), (3, 40 * (130 - 13))])
def test_unique_plane_and_point(q, cases, request):
    g = request.getfixturevalue(f"g{q}")
    for item in (verify_unique_plane(g), verify_unique_point(g)):
        assert item.ok and item.cases_checked == cases


@pytest.mark.parametrize("q,cases", [(2, 280 * 9), (3, 130 * 81 // 2 * (40 - 8))])
def test_unique_transversal(q, cases, request):
    item = verify_unique_transversal(request.getfixturevalue(f"g{q}"))
    assert item.ok and item.cases_checked == cases


def test_unique_transversal_eligible_points_brute_force(model2, s2):
    total = 0
    for u, v in itertools.combinations(range(35), 2):
        if s2.skew(u, v):
            on = set(model2.lines[u].points) | set(model2.lines[v].points)
            total += 15 - len(on)
    assert total == 2520


def test_missing_plane_is_reported(g2):
    g = Geometry(g2.structure, list(g2.points), list(g2.planes[1:]))
    item = verify_unique_plane(g)
    assert item.status == "FAIL"
    w = item.witness_dict()
    P = next(B for B in g2.points if B.generators == w["P"])
    assert w["l"] not in P
    dual = Geometry(g2.structure, list(g2.points[1:]), list(g2.planes))
    item = verify_unique_point(dual)
    assert item.status == "FAIL" and "plane" in item.witness_dict()


def test_transversal_fails_on_tampered_point(g2):
    P = g2.points[0]
    extra = bits(g2.structure.full & ~P.lines)[0]
    bad = Bundle(POINT, P.lines | 1 << extra, P.generators)
    g = Geometry(g2.structure, [bad] + list(g2.points[1:]), list(g2.planes))
    assert verify_unique_transversal(g).status == "FAIL"


subsets = st.lists(st.integers(0, 34), max_size=6)


@settings(max_examples=60, deadline=None)
@given(subsets, subsets)
def test_perp_is_antitone_galois_connection(s2, a, b):
    S, T = set(a), set(a) | set(b)
    pS, pT = perp(s2, S), perp(s2, T)
    assert pT & ~pS == 0
    assert mask_of(S) & ~perp(s2, perp(s2, S)) == 0
    assert perp(s2, perp(s2, pS)) == pS


@settings(max_examples=15, deadline=None)
@given(st.permutations(range(35)))
def test_classification_invariant_under_relabeling(s2, g2, perm):
    t = s2.relabel(perm)
    g = classify(t)

    def moved(group):
        return {mask_of(perm[i] for i in bits(B.lines)) for B in group}

    pts, pls = {B.lines for B in g.points}, {B.lines for B in g.planes}
    assert {frozenset(moved(g2.points)), frozenset(moved(g2.planes))} == {frozenset(pts), frozenset(pls)}
