"""Audit items, reports and deterministic case sampling."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from functools import wraps

PASS = "PASS"
FAIL = "FAIL"
SKIPPED = "SKIPPED"

VACUOUS = "VACUOUS"
INFERRED = "INFERRED"

FAST_BUDGET = 48
DEFAULT_SEED = 20150622


@dataclass
class AuditItem:
    """One verdict.

    ``witness`` is a tuple of ``(role, value)`` pairs where ``value`` is a
    line id or a tuple of line ids (for bundles and reguli, their generating
    lines).  A FAIL carries the counterexample; a PASS may carry a sample
    existential witness.
    """

    name: str
    status: str
    cases_checked: int = 0
    witness: tuple | None = None
    elapsed: float = 0.0
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if self.status == FAIL and not self.witness:
            raise ValueError(f"{self.name}: a FAIL needs a witness")
        if self.status == PASS and self.cases_checked == 0 and VACUOUS not in self.notes:
            self.notes.append(VACUOUS)

    @property
    def ok(self):
        return self.status == PASS

    def witness_dict(self):
        return dict(self.witness or ())


def verdict(name, failure, cases, witness=None, notes=None):
    """PASS unless ``failure`` (the counterexample witness) is set."""
    notes = list(notes or [])
    if failure is not None:
        return AuditItem(name, FAIL, cases, tuple(failure), notes=notes)
    return AuditItem(name, PASS, cases, tuple(witness) if witness else None, notes=notes)


def skipped(name, reason):
    return AuditItem(name, SKIPPED, 0, None, notes=[reason])


def timed(func):
    """Fill in ``elapsed`` on every AuditItem the checker returns."""

    @wraps(func)
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = func(*args, **kwargs)
        elapsed = time.perf_counter() - start
        items = result if isinstance(result, (list, tuple)) else [result]
        for item in items:
            item.elapsed = elapsed
        return result

    return wrapper


class Sampler:
    """Uniform fixed-seed subsampling of a checker's outer case list."""

    def __init__(self, seed=DEFAULT_SEED, budget=FAST_BUDGET):
        self.seed = seed
        self.budget = budget

    def pick(self, items, key):
        items = list(items)
        if len(items) <= self.budget:
            return items
        rng = random.Random(f"{self.seed}:{key}")
        chosen = sorted(rng.sample(range(len(items)), self.budget))
        return [items[i] for i in chosen]


def pick(sampler, items, key):
    return list(items) if sampler is None else sampler.pick(items, key)


@dataclass
class AuditReport:
    digest: str
    items: list
    profile: str = "full"
    seed: int | None = None

    @property
    def overall(self):
        return PASS if self.items and all(i.status == PASS for i in self.items) else FAIL

    def item(self, name):
        for it in self.items:
            if it.name == name:
                return it
        raise KeyError(name)

    def failures(self):
        return [i for i in self.items if i.status == FAIL]
