"""Reguli [u v w], conjugate reguli and the regulus theorem checks."""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb

from .errors import ConjugateIllDefined, ConstructionFailed, EmptyRegulus, NotSkew, SigmaDegenerate
from .incidence import POINT, PLANE, skew_pairs
from .report import pick, timed, verdict
from .structure import bits, lowest, popcount


@dataclass(frozen=True, eq=False)
class Regulus:
    lines: int
    directrices: tuple

    def __eq__(self, other):
        if not isinstance(other, Regulus):
            return NotImplemented
        return self.lines == other.lines

    def __hash__(self):
        return hash(self.lines)

    def __len__(self):
        return popcount(self.lines)

    def __contains__(self, line):
        return bool(self.lines >> line & 1)

    def members(self):
        return bits(self.lines)


def _first_incident_pair(s, mask):
    for x in bits(mask):
        rest = mask & s.rows[x] & ~((2 << x) - 1)
        if rest:
            return x, lowest(rest)
    return None


def regulus(s, u, v, w):
    for x, y in ((u, v), (u, w), (v, w)):
        if not s.skew(x, y):
            raise NotSkew(f"{s.labels[x]} and {s.labels[y]} are not skew", (x, y))
    lines = s.rows[u] & s.rows[v] & s.rows[w]
    if not lines:
        raise EmptyRegulus(f"[{s.labels[u]} {s.labels[v]} {s.labels[w]}] is empty")
    bad = _first_incident_pair(s, lines)
    if bad:
        raise NotSkew(
            f"regulus members {s.labels[bad[0]]} and {s.labels[bad[1]]} are incident", bad
        )
    return Regulus(lines, tuple(sorted((u, v, w))))


# skew triples ------------------------------------------------------------

def _triples_for(rows, skews, leads):
    table = {}
    for u in leads:
        su = skews[u] >> (u + 1) << (u + 1)
        ru = rows[u]
        for v in bits(su):
            suv = su & skews[v] & ~((2 << v) - 1)
            puv = ru & rows[v]
            for w in bits(suv):
                r = puv & rows[w]
                hit = table.get(r)
                if hit is None:
                    table[r] = [(u, v, w), 1]
                else:
                    hit[1] += 1
    return table


def _worker_count():
    try:
        return max(1, int(os.environ.get("REGULUS_THREADS", "1")))
    except ValueError:
        return 1


def skew_triple_table(s, sampler=None, workers=None):
    """Map each set [u v w] over pairwise-skew triples u<v<w to (first triple, triple count).

    Insertion order follows the first generating triple lexicographically.
    The leading line ``u`` is the unit of sampling and of parallel work.
    """
    leads = pick(sampler, range(s.n), "triples")
    workers = workers or _worker_count()
    rows, skews = list(s.rows), [s.skew_row(i) for i in range(s.n)]
    if workers == 1 or len(leads) < 2 * workers:
        parts = [_triples_for(rows, skews, leads)]
    else:
        chunks = [leads[i::workers] for i in range(workers)]
        chunks = [sorted(c) for c in chunks if c]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_triples_for, [rows] * len(chunks), [skews] * len(chunks), chunks))
    merged = {}
    for part in parts:
        for r, (first, count) in part.items():
            hit = merged.get(r)
            if hit is None:
                merged[r] = [first, count]
            else:
                hit[0] = min(hit[0], first)
                hit[1] += count
    ordered = sorted(merged.items(), key=lambda kv: kv[1][0])
    return {r: (tuple(first), count) for r, (first, count) in ordered}


def enumerate_reguli(s, table=None):
    """Distinct sets [u v w], ordered by their first generating triple.

    Empty sets are left out; they are not reguli of any model.
    """
    table = skew_triple_table(s) if table is None else table
    return [Regulus(r, first) for r, (first, _) in table.items() if r]


# conjugates --------------------------------------------------------------

def conjugate(s, r, verify="all", sampler=None):
    """[x y z] for the three lowest lines of ``r``.

    ``verify="all"`` recomputes the set for every triple of distinct lines of
    ``r`` and raises ConjugateIllDefined on disagreement; ``"sample"`` checks
    a fixed-seed subset of triples; ``"none"`` skips the check.
    """
    members = r.members()
    if len(members) < 3:
        raise EmptyRegulus(f"regulus with {len(members)} lines has no conjugate")
    x, y, z = members[:3]
    canon = s.rows[x] & s.rows[y] & s.rows[z]
    if verify != "none":
        triples = itertools.combinations(members, 3)
        if verify == "sample":
            triples = pick(sampler, triples, "conjugate")
        for t in triples:
            other = s.rows[t[0]] & s.rows[t[1]] & s.rows[t[2]]
            if other != canon:
                raise ConjugateIllDefined(
                    "conjugate depends on the choice of triple", (x, y, z), t
                )
    return Regulus(canon, (x, y, z))


# skew pair extension -----------------------------------------------------

def _first_skew_triple(s, mask):
    for a in bits(mask):
        ra = mask & s.skew_row(a) & ~((2 << a) - 1)
        for b in bits(ra):
            rb = ra & s.skew_row(b) & ~((2 << b) - 1)
            if rb:
                return a, b, lowest(rb)
    return None


def extend_skew_pair(g, u, v):
    """Build pairwise-skew l1, l2, l3 with u, v in [l1 l2 l3].

    Takes the lowest skew triples u1,u2,u3 on u and v1,v2,v3 on v and lets
    li be the line shared by the points u∨ui and v∨vi.
    """
    s = g.structure
    if not s.skew(u, v):
        raise NotSkew(f"{s.labels[u]} and {s.labels[v]} are not skew", (u, v))
    us = _first_skew_triple(s, s.rows[u] & ~(1 << u))
    vs = _first_skew_triple(s, s.rows[v] & ~(1 << v))
    if us is None or vs is None:
        raise ConstructionFailed("no pairwise-skew triple incident to an input line", "triples")
    joins = []
    for ui, vi in zip(us, vs):
        try:
            P = g.bundle(u, ui, POINT)
            Q = g.bundle(v, vi, POINT)
        except SigmaDegenerate as exc:
            raise ConstructionFailed(str(exc), "points") from exc
        common = P.lines & Q.lines
        if popcount(common) != 1:
            raise ConstructionFailed(
                f"points share {popcount(common)} lines instead of one", "join"
            )
        joins.append(lowest(common))
    try:
        result = regulus(s, *joins)
    except (NotSkew, EmptyRegulus) as exc:
        raise ConstructionFailed(str(exc), "regulus") from exc
    if not (u in result and v in result):
        raise ConstructionFailed("constructed regulus misses an input line", "membership")
    return result


# checks ------------------------------------------------------------------

@timed
def check_regulus_basics(s, table):
    """Every [u v w] is nonempty, has at least three lines, and is pairwise skew.

    Returns the items ``regulus_nonempty`` and ``regulus_pairwise_skew``.
    """
    nonempty_fail = skew_fail = None
    small = 0
    cases = 0
    for r, (first, count) in table.items():
        cases += count
        if nonempty_fail is None and popcount(r) < 3:
            nonempty_fail = tuple(zip("uvw", first))
            small = popcount(r)
        if skew_fail is None:
            bad = _first_incident_pair(s, r)
            if bad:
                skew_fail = tuple(zip("uvw", first)) + (("x", bad[0]), ("y", bad[1]))
    sample = next((tuple(zip("uvw", f)) + (("m", lowest(r)),) for r, (f, _) in table.items()), None)
    notes = [f"a regulus has only {small} lines"] if nonempty_fail else []
    return [
        verdict("regulus_nonempty", nonempty_fail, cases, sample, notes),
        verdict("regulus_pairwise_skew", skew_fail, cases),
    ]


@timed
def check_skew_pair_extension(g, sampler=None):
    s = g.structure
    cases = 0
    sample = None
    for u, v in pick(sampler, skew_pairs(s), "extend"):
        cases += 1
        try:
            r = extend_skew_pair(g, u, v)
        except ConstructionFailed as exc:
            return verdict("skew_pair_extends", (("u", u), ("v", v)), cases, notes=[f"{exc.step}: {exc}"])
        third = r.lines & ~(1 << u) & ~(1 << v)
        if not third:
            return verdict("skew_pair_extends", (("u", u), ("v", v)), cases, notes=["no third line"])
        if sample is None:
            sample = (("u", u), ("v", v), ("directrices", r.directrices), ("w", lowest(third)))
    return verdict("skew_pair_extends", None, cases, sample)


@timed
def check_conjugates(s, reguli, sampler=None):
    """Triple-independence of the conjugate, and conjugation being an involution.

    Returns the items ``conjugate_well_defined`` and ``conjugate_involution``.
    """
    defined_fail = invol_fail = None
    defined_cases = invol_cases = 0
    for r in pick(sampler, reguli, "conjugates"):
        k = popcount(r.lines)
        if k < 3:
            continue
        defined_cases += comb(k, 3)
        try:
            c = conjugate(s, r)
        except ConjugateIllDefined as exc:
            if defined_fail is None:
                defined_fail = (("directrices", r.directrices), ("first", exc.first), ("second", exc.second))
            continue
        invol_cases += 1
        if invol_fail is not None:
            continue
        if popcount(c.lines) < 3:
            invol_fail = (("directrices", r.directrices), ("conjugate", c.directrices))
            continue
        back = conjugate(s, c, verify="none")
        if back.lines != r.lines:
            invol_fail = (("directrices", r.directrices), ("conjugate", c.directrices))
    return [
        verdict("conjugate_well_defined", defined_fail, defined_cases),
        verdict("conjugate_involution", invol_fail, invol_cases),
    ]


@timed
def check_two_line_intersection(s, reguli, sampler=None):
    """Distinct reguli share at most two lines.

    Equivalent to: no three lines lie in two distinct reguli, which is what
    is checked (one dictionary pass instead of all regulus pairs).
    """
    owner = {}
    cases = 0
    for r in reguli:
        cases += 1
        for t in itertools.combinations(r.members(), 3):
            prev = owner.setdefault(t, r)
            if prev is not r:
                return verdict(
                    "two_line_intersection",
                    (("first", prev.directrices), ("second", r.directrices), ("shared", t)),
                    cases,
                    notes=[f"reguli share {popcount(prev.lines & r.lines)} lines"],
                )
    return verdict("two_line_intersection", None, cases, notes=[f"{len(owner)} line triples covered"])


def _coverage(g, reguli, kind, name, sampler, notes=()):
    s = g.structure
    cases = 0
    group = g.of_kind(kind)
    for r in pick(sampler, reguli, name):
        if popcount(r.lines) < 3:
            continue
        c = conjugate(s, r, verify="none")
        for B in group:
            if B.lines & r.lines:
                cases += 1
                if not B.lines & c.lines:
                    return verdict(
                        name, (("directrices", r.directrices), (kind.lower(), tuple(B.generators))),
                        cases, notes=notes,
                    )
    return verdict(name, None, cases, notes=notes)


@timed
def check_point_coverage(g, reguli, sampler=None):
    """A point on a line of a regulus lies on a line of the conjugate."""
    return _coverage(g, reguli, POINT, "point_coverage", sampler)


@timed
def check_plane_coverage(g, reguli, sampler=None):
    return _coverage(g, reguli, PLANE, "plane_coverage", sampler, ["DUAL-OF point_coverage"])
