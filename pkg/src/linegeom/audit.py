"""Axiom checkers and the full audit driver.

Every checker returns AuditItem(s) carrying a counterexample on FAIL.  Cases
are visited in ascending line-id order, so the reported counterexample is the
lexicographically first one.
"""

from __future__ import annotations

import itertools
from math import comb

from .errors import ColoringInconsistent, SigmaDegenerate
from .incidence import (
    check_join_in_plane,
    check_join_unique,
    check_sigma_structure,
    classify,
    incident_pairs,
    split_bundles,
    verify_unique_plane,
    verify_unique_point,
    verify_unique_transversal,
)
from .reguli import (
    check_conjugates,
    check_plane_coverage,
    check_point_coverage,
    check_regulus_basics,
    check_skew_pair_extension,
    check_two_line_intersection,
    enumerate_reguli,
    skew_triple_table,
)
from .report import DEFAULT_SEED, AuditReport, Sampler, pick, skipped, timed, verdict
from .structure import bits, lowest, popcount

FULL = "full"
FAST = "fast"

AXIOM_ITEMS = (
    "axiom_1", "axiom_2.1", "axiom_2.2", "axiom_2.3", "axiom_3", "axiom_4", "axiom_P1", "axiom_P2",
)


def _above(x):
    return ~((2 << x) - 1)


def _skew_pair_in(s, mask):
    for x in bits(mask):
        rest = mask & s.skew_row(x) & _above(x)
        if rest:
            return x, lowest(rest)
    return None


@timed
def check_axiom1(s, sampler=None):
    """Each l^↓ contains three pairwise skew lines."""
    cases = 0
    sample = None
    for l in pick(sampler, range(s.n), "axiom_1"):
        cases += 1
        cand = s.rows[l]
        triple = None
        for x in bits(cand):
            rx = cand & s.skew_row(x) & _above(x)
            for y in bits(rx):
                rz = rx & s.skew_row(y) & _above(y)
                if rz:
                    triple = (x, y, lowest(rz))
                    break
            if triple:
                break
        if triple is None:
            return verdict("axiom_1", (("l", l),), cases)
        if sample is None:
            sample = (("l", l),) + tuple(zip("xyz", triple))
    return verdict("axiom_1", None, cases, sample)


@timed
def check_axiom2(s, sampler=None):
    """The three parts of the second axiom, as items axiom_2.1, 2.2, 2.3."""
    fail1 = fail2 = fail3 = None
    n1 = n2 = n3 = 0
    sample1 = None
    for a, b in pick(sampler, incident_pairs(s), "axiom_2"):
        ab = s.rows[a] & s.rows[b]
        n1 += 1
        pair = _skew_pair_in(s, ab)
        if pair is None:
            fail1 = fail1 or (("a", a), ("b", b))
        elif sample1 is None:
            sample1 = (("a", a), ("b", b), ("x", pair[0]), ("y", pair[1]))

        sigma = ab & ~s.perp(ab)
        for c in bits(sigma):
            n2 += 1
            if fail2 is None:
                bad = _skew_pair_in(s, ab & s.rows[c])
                if bad:
                    fail2 = (("a", a), ("b", b), ("c", c), ("x", bad[0]), ("y", bad[1]))

        for x in bits(ab):
            for y in bits(ab & s.skew_row(x) & _above(x)):
                n3 += 1
                if fail3 is None:
                    missing = ab & ~(s.rows[x] | s.rows[y])
                    if missing:
                        fail3 = (("a", a), ("b", b), ("x", x), ("y", y), ("missing", lowest(missing)))
        if fail1 and fail2 and fail3:
            break
    return [
        verdict("axiom_2.1", fail1, n1, sample1),
        verdict("axiom_2.2", fail2, n2),
        verdict("axiom_2.3", fail3, n3),
    ]


def bundle_table(s):
    """All sets [p q r] with p, q distinct incident and r in Σ(p, q).

    Maps each set to its first generating (p, q, r).  Pairs whose Σ is
    degenerate still contribute, one set per r, since the existential search
    ranges over all such triples.
    """
    found = {}
    for p, q in incident_pairs(s):
        pq = s.rows[p] & s.rows[q]
        sigma = pq & ~s.perp(pq)
        for r in bits(sigma):
            found.setdefault(pq & s.rows[r], (p, q, r))
    return found


@timed
def check_axiom3(s, sampler=None, bundles=None):
    """Every [a b c] (c in Σ(a,b)) is disjoint from some [p q r] (r in Σ(p,q))."""
    bundles = bundle_table(s) if bundles is None else bundles
    masks = list(bundles)
    partner = {}
    cases = 0
    sample = None
    for a, b in pick(sampler, incident_pairs(s), "axiom_3"):
        ab = s.rows[a] & s.rows[b]
        sigma = ab & ~s.perp(ab)
        for c in bits(sigma):
            cases += 1
            m = ab & s.rows[c]
            if m not in partner:
                partner[m] = next((x for x in masks if not x & m), None)
            hit = partner[m]
            if hit is None:
                return verdict("axiom_3", (("a", a), ("b", b), ("c", c)), cases)
            if sample is None:
                sample = (("a", a), ("b", b), ("c", c)) + tuple(zip("pqr", bundles[hit]))
    return verdict("axiom_3", None, cases, sample)


@timed
def check_axiom4(s, geometry=None, sampler=None):
    """Points pairwise share a line, and planes pairwise share a line.

    With a classified geometry this is checked on POINT and PLANE bundles.
    Without one, the orientation-free reading is used: for any two incident
    pairs, the two bundles of one can be matched with the two bundles of the
    other so that matched bundles meet.  Any point/plane labelling satisfying
    the axiom yields such a matching, so a FAIL here refutes the axiom under
    every labelling.
    """
    if geometry is not None:
        cases = 0
        for kind, group in (("points", geometry.points), ("planes", geometry.planes)):
            for X, Y in pick(sampler, itertools.combinations(group, 2), f"axiom_4_{kind}"):
                cases += 1
                if not X.lines & Y.lines:
                    return verdict(
                        "axiom_4", (("first", X.generators), ("second", Y.generators)), cases
                    )
        return verdict("axiom_4", None, cases)

    sides = {}
    degenerate = 0
    for a, b in incident_pairs(s):
        try:
            (m1, g1), (m2, g2) = split_bundles(s, a, b)
        except SigmaDegenerate:
            degenerate += 1
            continue
        sides.setdefault(frozenset((m1, m2)), ((m1, g1), (m2, g2)))
    if not sides:
        return skipped("axiom_4", "no incident pair has a two-class Σ")
    notes = ["orientation-free reading"]
    if degenerate:
        notes.append(f"{degenerate} incident pairs with degenerate Σ left out")
    entries = list(sides.values())
    cases = 0
    for (x1, x2), (y1, y2) in pick(sampler, itertools.combinations(entries, 2), "axiom_4"):
        cases += 1
        straight = x1[0] & y1[0] and x2[0] & y2[0]
        crossed = x1[0] & y2[0] and x2[0] & y1[0]
        if not (straight or crossed):
            return verdict(
                "axiom_4", (("first", x1[1]), ("second", y1[1])), cases, notes=notes
            )
    return verdict("axiom_4", None, cases, notes=notes)


def _exactly_three(s, quad):
    A, B, C, D = (s.rows[x] for x in quad)
    return (A & B & C & ~D) | (A & B & D & ~C) | (A & C & D & ~B) | (B & C & D & ~A)


@timed
def check_p1(s, table=None, sampler=None):
    """A line meeting three of four distinct lines of [u v w] meets the fourth."""
    table = skew_triple_table(s, sampler) if table is None else table
    cases = 0
    failure = None
    for r, (first, count) in table.items():
        k = popcount(r)
        if k < 4:
            continue
        cases += count * comb(k, 4)
        if failure is not None:
            continue
        for quad in itertools.combinations(bits(r), 4):
            bad = _exactly_three(s, quad)
            if bad:
                t = lowest(bad)
                missed = next(x for x in quad if not s.incident(t, x))
                failure = tuple(zip("uvw", first)) + tuple(zip("abcd", quad)) + (("t", t), ("missed", missed))
                break
    notes = ["distinct-lines reading of the four regulus lines"]
    return verdict("axiom_P1", failure, cases, notes=notes)


@timed
def check_p2(s, table=None, sampler=None):
    """For distinct x, y, z in [u v w]: every line of [u v w] meets every line of [x y z]."""
    table = skew_triple_table(s, sampler) if table is None else table
    cases = 0
    failure = None
    for r, (first, count) in table.items():
        members = bits(r)
        if len(members) < 3:
            continue
        cases += count * comb(len(members), 3)
        if failure is not None:
            continue
        for xyz in itertools.combinations(members, 3):
            conj = s.rows[xyz[0]] & s.rows[xyz[1]] & s.rows[xyz[2]]
            for l in members:
                bad = conj & s.skew_row(l)
                if bad:
                    failure = tuple(zip("uvw", first)) + tuple(zip("xyz", xyz)) + (("l", l), ("m", lowest(bad)))
                    break
            if failure:
                break
    return verdict("axiom_P2", failure, cases)


@timed
def check_p1_iff_p2(s, table=None, sampler=None, items=None):
    """The two projectivity checkers reach the same verdict."""
    if items is None:
        table = skew_triple_table(s, sampler) if table is None else table
        items = (check_p1(s, table), check_p2(s, table))
    p1, p2 = items
    notes = [f"P1={p1.status}", f"P2={p2.status}"]
    cases = p1.cases_checked + p2.cases_checked
    if p1.status != p2.status:
        return verdict("P1_iff_P2", p1.witness or p2.witness, cases, notes=notes)
    return verdict("P1_iff_P2", None, max(cases, 1), notes=notes)


BUNDLE_DEPENDENT = (
    "unique_plane", "unique_point", "unique_transversal", "join_unique_line", "join_in_plane",
    "skew_pair_extends", "point_coverage", "plane_coverage",
)


def run_audit(s, profile=FULL, seed=DEFAULT_SEED):
    """Run every axiom and theorem check on ``s``.

    FULL is exhaustive.  FAST subsamples the outer case list of each checker
    (at most ``Sampler.budget`` entries, fixed seed).
    """
    sampler = None if profile == FULL else Sampler(seed)
    items = [check_axiom1(s, sampler)]
    items += check_axiom2(s, sampler)
    items.append(check_axiom3(s, sampler))
    items.append(check_sigma_structure(s, sampler))

    geometry = None
    try:
        geometry = classify(s)
        items.append(verdict("bundle_coloring", None, len(geometry.points) + len(geometry.planes),
                             notes=[f"{len(geometry.points)} points, {len(geometry.planes)} planes"]))
    except (SigmaDegenerate, ColoringInconsistent) as exc:
        if isinstance(exc, SigmaDegenerate):
            witness = (("a", exc.a), ("b", exc.b))
        else:
            witness = (("first", exc.first), ("second", exc.second))
        items.append(verdict("bundle_coloring", witness, 1, notes=[str(exc)]))

    items.append(check_axiom4(s, geometry, sampler))
    table = skew_triple_table(s, sampler)
    p1 = check_p1(s, table)
    p2 = check_p2(s, table)
    items += [p1, p2, check_p1_iff_p2(s, items=(p1, p2))]

    if geometry is not None:
        items += [
            verify_unique_plane(geometry, sampler),
            verify_unique_point(geometry, sampler),
            verify_unique_transversal(geometry, sampler),
            check_join_unique(geometry, sampler),
            check_join_in_plane(geometry, sampler),
        ]

    items += check_regulus_basics(s, table)
    if geometry is not None:
        items.append(check_skew_pair_extension(geometry, sampler))
    reguli = enumerate_reguli(s, table)
    items += check_conjugates(s, reguli)
    items.append(check_two_line_intersection(s, reguli))
    if geometry is not None:
        items += [
            check_point_coverage(geometry, reguli, sampler),
            check_plane_coverage(geometry, reguli, sampler),
        ]
    else:
        items += [skipped(name, "bundles could not be classified") for name in BUNDLE_DEPENDENT]

    order = {name: i for i, name in enumerate(ITEM_ORDER)}
    items.sort(key=lambda it: order.get(it.name, len(order)))
    return AuditReport(s.digest(), items, profile, seed if profile != FULL else None)


ITEM_ORDER = (
    "axiom_1", "axiom_2.1", "axiom_2.2", "axiom_2.3", "axiom_3", "sigma_classes", "bundle_coloring",
    "axiom_4", "axiom_P1", "axiom_P2", "P1_iff_P2",
    "unique_plane", "unique_point", "unique_transversal", "join_unique_line", "join_in_plane",
    "regulus_nonempty", "regulus_pairwise_skew", "skew_pair_extends",
    "conjugate_well_defined", "conjugate_involution", "two_line_intersection",
    "point_coverage", "plane_coverage",
)


def axioms_failed(report):
    return [it.name for it in report.items if it.name in AXIOM_ITEMS and it.status == "FAIL"]
