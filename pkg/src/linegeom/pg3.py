"""Concrete PG(3,q): points, lines and planes over GF(q).

Line incidence is computed twice, once from shared points and once from the
Klein form of Plücker vectors, and the two must agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import IncidenceOracleMismatch
from .galois import FieldElement, FieldSpec
from .structure import IncidenceStructure, bits, mask_of

# (i, j) index pairs for the Plücker vector (p01, p02, p03, p23, p31, p12)
PLUCKER_PAIRS = ((0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2))


@dataclass(frozen=True)
class ProjPoint:
    coords: tuple

    @property
    def values(self):
        return tuple(c.value for c in self.coords)

    def __repr__(self):
        return f"{type(self).__name__}{self.values}"


class ProjPlane(ProjPoint):
    """Plane given by its dual coordinate vector."""


@dataclass(frozen=True)
class ModelLine:
    id: int
    points: tuple
    plucker: tuple
    span: tuple  # two spanning vectors as int tuples, kept for plane tests

    @property
    def plucker_values(self):
        return tuple(c.value for c in self.plucker)


@dataclass(frozen=True, eq=False)
class Pg3Model:
    spec: FieldSpec
    points: tuple
    lines: tuple
    planes: tuple
    incidence: tuple  # bitset rows over line ids
    point_stars: tuple  # per point, bitset of lines through it
    plane_pencils: tuple  # per plane, bitset of lines in it

    @property
    def q(self):
        return self.spec.q


def _normalized_vectors(spec):
    """Vectors with leading coordinate 1, ordered by leading position then lexicographically."""
    q = spec.q
    out = []
    for lead in range(4):
        for tail in itertools.product(range(q), repeat=3 - lead):
            out.append((0,) * lead + (1,) + tail)
    return out


def _normalize(spec, vec):
    for x in vec:
        if x:
            s = spec.iinv(x)
            return tuple(spec.imul(s, y) for y in vec)
    raise ValueError("zero vector has no projective normalization")


def _combine(spec, a, x, b, y):
    return tuple(spec.iadd(spec.imul(a, xi), spec.imul(b, yi)) for xi, yi in zip(x, y))


def _dot(spec, x, y):
    s = 0
    for xi, yi in zip(x, y):
        s = spec.iadd(s, spec.imul(xi, yi))
    return s


def _plucker(spec, x, y):
    raw = tuple(spec.isub(spec.imul(x[i], y[j]), spec.imul(x[j], y[i])) for i, j in PLUCKER_PAIRS)
    return _normalize(spec, raw)


def _klein_int(spec, p, r):
    terms = (
        spec.imul(p[0], r[3]), spec.imul(p[1], r[4]), spec.imul(p[2], r[5]),
        spec.imul(p[3], r[0]), spec.imul(p[4], r[1]), spec.imul(p[5], r[2]),
    )
    s = 0
    for t in terms:
        s = spec.iadd(s, t)
    return s


def enumerate_points(spec):
    return [ProjPoint(tuple(FieldElement(spec, v) for v in vec)) for vec in _normalized_vectors(spec)]


def enumerate_planes(spec):
    return [ProjPlane(tuple(FieldElement(spec, v) for v in vec)) for vec in _normalized_vectors(spec)]


def _row_reduced_pairs(q):
    """Each 2-dim subspace of GF(q)^4 once, as its reduced row echelon basis."""
    for i, j in itertools.combinations(range(4), 2):
        free1 = [k for k in range(i + 1, 4) if k != j]
        free2 = list(range(j + 1, 4))
        for vals1 in itertools.product(range(q), repeat=len(free1)):
            r1 = [0] * 4
            r1[i] = 1
            for k, v in zip(free1, vals1):
                r1[k] = v
            for vals2 in itertools.product(range(q), repeat=len(free2)):
                r2 = [0] * 4
                r2[j] = 1
                for k, v in zip(free2, vals2):
                    r2[k] = v
                yield tuple(r1), tuple(r2)


def enumerate_lines(spec, point_index=None):
    """All lines, sorted by their tuple of point indices."""
    if point_index is None:
        point_index = {vec: i for i, vec in enumerate(_normalized_vectors(spec))}
    q = spec.q
    raw = []
    for x, y in _row_reduced_pairs(q):
        pts = {point_index[x]}
        for a in range(q):
            pts.add(point_index[_normalize(spec, _combine(spec, a, x, 1, y))])
        raw.append((tuple(sorted(pts)), x, y))
    raw.sort()
    lines = []
    for lid, (pts, x, y) in enumerate(raw):
        pl = tuple(FieldElement(spec, v) for v in _plucker(spec, x, y))
        lines.append(ModelLine(lid, pts, pl, (x, y)))
    return lines


def klein_form(l, m):
    """Klein bilinear form of two lines' Plücker vectors; zero iff they meet."""
    p, r = l.plucker, m.plucker
    return p[0] * r[3] + p[1] * r[4] + p[2] * r[5] + p[3] * r[0] + p[4] * r[1] + p[5] * r[2]


def quadric_value(l):
    p = l.plucker
    return p[0] * p[3] + p[1] * p[4] + p[2] * p[5]


def build_model(spec):
    vectors = _normalized_vectors(spec)
    point_index = {vec: i for i, vec in enumerate(vectors)}
    points = [ProjPoint(tuple(FieldElement(spec, v) for v in vec)) for vec in vectors]
    planes = [ProjPlane(tuple(FieldElement(spec, v) for v in vec)) for vec in vectors]
    lines = enumerate_lines(spec, point_index)

    stars = [0] * len(points)
    for line in lines:
        for pt in line.points:
            stars[pt] |= 1 << line.id
    rows = []
    for line in lines:
        row = 0
        for pt in line.points:
            row |= stars[pt]
        rows.append(row)

    pluckers = [_plucker(spec, *line.span) for line in lines]
    for i, j in itertools.combinations(range(len(lines)), 2):
        meets = _klein_int(spec, pluckers[i], pluckers[j]) == 0
        if meets != bool(rows[i] >> j & 1):
            raise IncidenceOracleMismatch(
                f"lines {i} and {j}: shared-point says {not meets}, Klein form says {meets}"
            )

    pencils = []
    for plane in vectors:
        pencils.append(
            mask_of(
                line.id for line in lines
                if _dot(spec, plane, line.span[0]) == 0 and _dot(spec, plane, line.span[1]) == 0
            )
        )

    return Pg3Model(
        spec=spec,
        points=tuple(points),
        lines=tuple(lines),
        planes=tuple(planes),
        incidence=tuple(rows),
        point_stars=tuple(stars),
        plane_pencils=tuple(pencils),
    )


def line_label(line):
    return f"L{line.id}"


def export_structure(model):
    """Forget coordinates; keep line labels and the incidence relation."""
    labels = tuple(line_label(line) for line in model.lines)
    return IncidenceStructure(labels, model.incidence, model.q)


def plane_contains_point(plane, point):
    return sum((a * b for a, b in zip(plane.coords, point.coords)), plane.coords[0].spec.zero).value == 0


def lines_through(model, point_id):
    return bits(model.point_stars[point_id])
