"""Derived points and planes over an abstract incidence structure.

For distinct incident lines a, b the set Σ(a, b) = [ab] \\ [ab]^↓ falls into
two incidence cliques.  Each clique C yields a bundle [a b c] (any c in C);
one of the two is a point (star of lines), the other a plane.  Which bundles
are points is fixed globally by propagating from a seed bundle: two distinct
bundles of the same kind share exactly one line, bundles of opposite kinds
share none or at least two.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import ColoringInconsistent, KindMismatch, NotIncident, SigmaDegenerate
from .report import INFERRED, pick, timed, verdict
from .structure import bits, lowest, popcount

POINT = "POINT"
PLANE = "PLANE"


def perp(s, lines):
    return s.perp(lines)


def skew(s, a, b):
    return s.skew(a, b)


@dataclass(frozen=True)
class SigmaSplit:
    a: int
    b: int
    sigma: int
    class_one: int  # component holding the lowest line of sigma
    class_two: int


@dataclass(frozen=True, eq=False)
class Bundle:
    kind: str
    lines: int
    generators: tuple

    def __eq__(self, other):
        if not isinstance(other, Bundle):
            return NotImplemented
        return (self.kind, self.lines) == (other.kind, other.lines)

    def __hash__(self):
        return hash((self.kind, self.lines))

    def __len__(self):
        return popcount(self.lines)

    def __contains__(self, line):
        return bool(self.lines >> line & 1)


def _components(s, members):
    comps = []
    rest = members
    while rest:
        seed = lowest(rest)
        comp = 1 << seed
        frontier = comp
        while frontier:
            grow = 0
            for x in bits(frontier):
                grow |= s.rows[x]
            grow &= members & ~comp
            comp |= grow
            frontier = grow
        comps.append(comp)
        rest &= ~comp
    return comps


def sigma_split(s, a, b):
    if a == b or not s.incident(a, b):
        raise NotIncident(f"{s.labels[a]} and {s.labels[b]} are not a distinct incident pair")
    ab = s.rows[a] & s.rows[b]
    sigma = ab & ~s.perp(ab)
    comps = _components(s, sigma)
    if len(comps) != 2:
        raise SigmaDegenerate(
            f"Σ({s.labels[a]},{s.labels[b]}) has {len(comps)} incidence components, expected 2", a, b
        )
    for comp in comps:
        for x in bits(comp):
            if comp & ~s.rows[x]:
                raise SigmaDegenerate(
                    f"a component of Σ({s.labels[a]},{s.labels[b]}) is not a clique", a, b
                )
    return SigmaSplit(a, b, sigma, comps[0], comps[1])


def class_bundle_mask(s, a, b, cls):
    """[a b c] for c in ``cls``; raises if it depends on the choice of c."""
    ab = s.rows[a] & s.rows[b]
    members = bits(cls)
    mask = ab & s.rows[members[0]]
    for c in members[1:]:
        if ab & s.rows[c] != mask:
            raise SigmaDegenerate(
                f"[{s.labels[a]} {s.labels[b]} c] depends on the choice of c", a, b
            )
    return mask


def split_bundles(s, a, b):
    """The two bundles through (a, b): class-one mask first, with a witness c."""
    split = sigma_split(s, a, b)
    out = []
    for cls in (split.class_one, split.class_two):
        out.append((class_bundle_mask(s, a, b, cls), (min(a, b), max(a, b), lowest(cls))))
    return out


def incident_pairs(s):
    for a in range(s.n):
        for b in bits(s.rows[a] >> (a + 1) << (a + 1)):
            yield a, b


@dataclass(eq=False)
class Geometry:
    """A structure with its bundles classified into points and planes."""

    structure: object
    points: list
    planes: list
    _index: dict = field(default_factory=dict, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for i, P in enumerate(self.points):
            self._index[P.lines] = (POINT, i)
        for i, pi in enumerate(self.planes):
            self._index[pi.lines] = (PLANE, i)

    def kind_of(self, mask):
        return self._index[mask][0]

    def bundle(self, a, b, side):
        """a∨b for side POINT, a⊓b for side PLANE."""
        key = (min(a, b), max(a, b), side)
        if key in self._cache:
            return self._cache[key]
        s = self.structure
        for mask, gens in split_bundles(s, a, b):
            if self._index.get(mask, (None,))[0] == side:
                self._cache[key] = Bundle(side, mask, gens)
                return self._cache[key]
        raise SigmaDegenerate(f"no {side} bundle through {s.labels[a]}, {s.labels[b]}", a, b)

    def of_kind(self, kind):
        return self.points if kind == POINT else self.planes

    def swapped(self):
        pts = [Bundle(POINT, pi.lines, pi.generators) for pi in self.planes]
        pls = [Bundle(PLANE, P.lines, P.generators) for P in self.points]
        return Geometry(self.structure, pts, pls)


def all_bundles(s):
    """Distinct bundle masks in discovery order with their first generators."""
    found = {}
    for a, b in incident_pairs(s):
        for mask, gens in split_bundles(s, a, b):
            found.setdefault(mask, gens)
    return found


def classify(s):
    found = all_bundles(s)
    if not found:
        return Geometry(s, [], [])
    masks = list(found)
    seed = masks[0]
    color = {seed: 0}
    for m in masks[1:]:
        color[m] = 0 if popcount(seed & m) == 1 else 1
    for m1, m2 in itertools.combinations(masks, 2):
        same = popcount(m1 & m2) == 1
        if same != (color[m1] == color[m2]):
            raise ColoringInconsistent(
                f"bundles generated by {found[m1]} and {found[m2]} cannot be 2-colored",
                found[m1], found[m2],
            )
    points = [Bundle(POINT, m, found[m]) for m in masks if color[m] == 0]
    planes = [Bundle(PLANE, m, found[m]) for m in masks if color[m] == 1]
    return Geometry(s, points, planes)


def classify_bundles(s):
    g = classify(s)
    return g.points, g.planes


def bundle(s, a, b, side, geometry=None):
    geometry = geometry or classify(s)
    return geometry.bundle(a, b, side)


def point_plane_incident(P, pi):
    if P.kind != POINT or pi.kind != PLANE:
        raise KindMismatch(f"expected (POINT, PLANE), got ({P.kind}, {pi.kind})")
    shared = popcount(P.lines & pi.lines)
    # the coloring rule makes a single shared line impossible
    assert shared != 1, "point and plane share exactly one line"
    return shared > 0


def _gens(bundle):
    return tuple(bundle.generators)


@timed
def check_sigma_structure(s, sampler=None):
    """Every incident pair splits Σ into two cliques with c-independent bundles."""
    cases = 0
    pairs = pick(sampler, incident_pairs(s), "sigma")
    for a, b in pairs:
        cases += 1
        try:
            split_bundles(s, a, b)
        except SigmaDegenerate as exc:
            return verdict("sigma_classes", (("a", a), ("b", b)), cases, notes=[str(exc)])
    return verdict("sigma_classes", None, cases)


def _point_plane_tables(g):
    n = g.structure.n
    on_line_points = [[] for _ in range(n)]
    on_line_planes = [[] for _ in range(n)]
    for i, P in enumerate(g.points):
        for l in bits(P.lines):
            on_line_points[l].append(i)
    for j, pi in enumerate(g.planes):
        for l in bits(pi.lines):
            on_line_planes[l].append(j)
    # plane j -> bitset over point indices on it
    plane_points = [0] * len(g.planes)
    for j, pi in enumerate(g.planes):
        for i, P in enumerate(g.points):
            if P.lines & pi.lines:
                plane_points[j] |= 1 << i
    return on_line_points, on_line_planes, plane_points


@timed
def verify_unique_plane(g, sampler=None):
    """For a point P and a line l off P there is exactly one plane on both."""
    s = g.structure
    _, on_line_planes, plane_points = _point_plane_tables(g)
    cases = 0
    sample = None
    for i in pick(sampler, range(len(g.points)), "unique_plane"):
        P = g.points[i]
        for l in bits(s.full & ~P.lines):
            cases += 1
            hits = [j for j in on_line_planes[l] if plane_points[j] >> i & 1]
            if len(hits) != 1:
                return verdict(
                    "unique_plane", (("P", _gens(P)), ("l", l)), cases,
                    notes=[f"{len(hits)} planes through the point and the line"],
                )
            if sample is None:
                sample = (("P", _gens(P)), ("l", l), ("plane", _gens(g.planes[hits[0]])))
    return verdict("unique_plane", None, cases, sample)


@timed
def verify_unique_point(g, sampler=None):
    """For a plane π and a line l not in π there is exactly one point on both."""
    s = g.structure
    on_line_points, _, plane_points = _point_plane_tables(g)
    cases = 0
    sample = None
    for j in pick(sampler, range(len(g.planes)), "unique_point"):
        pi = g.planes[j]
        for l in bits(s.full & ~pi.lines):
            cases += 1
            hits = [i for i in on_line_points[l] if plane_points[j] >> i & 1]
            if len(hits) != 1:
                return verdict(
                    "unique_point", (("plane", _gens(pi)), ("l", l)), cases,
                    notes=[f"{len(hits)} points on the plane and the line"],
                )
            if sample is None:
                sample = (("plane", _gens(pi)), ("l", l), ("P", _gens(g.points[hits[0]])))
    return verdict("unique_point", None, cases, sample)


def skew_pairs(s):
    for u in range(s.n):
        for v in bits(s.skew_row(u) >> (u + 1) << (u + 1)):
            yield u, v


@timed
def verify_unique_transversal(g, sampler=None):
    """Through a point off two skew lines passes exactly one line meeting both."""
    s = g.structure
    cases = 0
    sample = None
    for u, v in pick(sampler, skew_pairs(s), "unique_transversal"):
        both = s.rows[u] & s.rows[v]
        for P in g.points:
            if P.lines >> u & 1 or P.lines >> v & 1:
                continue
            cases += 1
            hits = P.lines & both
            if popcount(hits) != 1:
                return verdict(
                    "unique_transversal", (("u", u), ("v", v), ("P", _gens(P))), cases,
                    notes=[f"{popcount(hits)} transversals through the point"],
                )
            if sample is None:
                sample = (("u", u), ("v", v), ("P", _gens(P)), ("m", lowest(hits)))
    return verdict("unique_transversal", None, cases, sample)


@timed
def check_join_unique(g, sampler=None):
    """Two distinct points share exactly one line; dually for planes."""
    cases = 0
    for kind in (POINT, PLANE):
        group = g.of_kind(kind)
        for i, j in pick(sampler, itertools.combinations(range(len(group)), 2), f"join_{kind}"):
            cases += 1
            if popcount(group[i].lines & group[j].lines) != 1:
                return verdict(
                    "join_unique_line", (("first", _gens(group[i])), ("second", _gens(group[j]))),
                    cases, notes=[INFERRED],
                )
    return verdict("join_unique_line", None, cases, notes=[INFERRED])


@timed
def check_join_in_plane(g, sampler=None):
    """A plane on two distinct points contains their joining line; dually."""
    cases = 0
    for kind, other in ((PLANE, POINT), (POINT, PLANE)):
        for host in pick(sampler, g.of_kind(kind), f"join_in_{kind}"):
            on = [B for B in g.of_kind(other) if B.lines & host.lines]
            for B1, B2 in itertools.combinations(on, 2):
                cases += 1
                join = B1.lines & B2.lines
                if not join or join & ~host.lines:
                    return verdict(
                        "join_in_plane",
                        (("host", _gens(host)), ("first", _gens(B1)), ("second", _gens(B2))),
                        cases, notes=[INFERRED],
                    )
    return verdict("join_in_plane", None, cases, notes=[INFERRED])


def model_check_bundles(model, g):
    """Compare classified bundles with the model's point stars and plane pencils.

    Returns ``"direct"`` when POINT bundles are the concrete points,
    ``"swapped"`` when they are the concrete planes; raises otherwise.
    """
    stars = set(model.point_stars)
    pencils = set(model.plane_pencils)
    pts = {P.lines for P in g.points}
    pls = {pi.lines for pi in g.planes}
    if pts == stars and pls == pencils:
        return "direct"
    if pts == pencils and pls == stars:
        return "swapped"
    raise AssertionError("classified bundles do not match the model's points and planes")
