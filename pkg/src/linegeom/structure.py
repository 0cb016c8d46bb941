"""Finite line sets with a symmetric reflexive incidence relation.

Line sets are plain Python ints used as bitsets: bit ``i`` set means line
``i`` is a member.  Row ``i`` of a structure is the bitset of lines incident
to line ``i``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .errors import InvalidStructure


def bits(mask):
    """Member ids of a bitset, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def lowest(mask):
    return (mask & -mask).bit_length() - 1


def mask_of(ids):
    m = 0
    for i in ids:
        m |= 1 << i
    return m


def popcount(mask):
    return mask.bit_count()


@dataclass(frozen=True, eq=False)
class IncidenceStructure:
    """Lines ``0 .. n-1`` with labels and incidence rows.

    Construction validates reflexivity and symmetry.
    """

    labels: tuple
    rows: tuple
    q: int | None = None
    _skew: tuple = field(default=None, repr=False)

    def __post_init__(self):
        n = len(self.rows)
        if len(self.labels) != n:
            raise InvalidStructure(f"{len(self.labels)} labels for {n} rows")
        if len(set(self.labels)) != n:
            raise InvalidStructure("line labels must be unique")
        full = (1 << n) - 1
        for i, row in enumerate(self.rows):
            if row < 0 or row & ~full:
                raise InvalidStructure(f"row {i} has bits outside [0, {n})")
            if not row >> i & 1:
                raise InvalidStructure(f"relation is not reflexive at line {self.labels[i]}")
        for i, row in enumerate(self.rows):
            for j in bits(row):
                if not self.rows[j] >> i & 1:
                    raise InvalidStructure(
                        f"relation is not symmetric: {self.labels[i]} -> {self.labels[j]}"
                    )
        object.__setattr__(self, "_skew", tuple(full & ~row for row in self.rows))

    @classmethod
    def from_matrix(cls, matrix, labels=None, q=None):
        rows = tuple(mask_of(j for j, x in enumerate(r) if x) for r in matrix)
        if labels is None:
            labels = [f"L{i}" for i in range(len(rows))]
        return cls(tuple(labels), rows, q)

    @property
    def n(self):
        return len(self.rows)

    @property
    def full(self):
        return (1 << self.n) - 1

    def incident(self, a, b):
        return bool(self.rows[a] >> b & 1)

    def skew(self, a, b):
        """True iff ``a`` and ``b`` are not incident (never for ``a == b``)."""
        return not self.rows[a] >> b & 1

    def skew_row(self, a):
        return self._skew[a]

    def perp(self, lines):
        """Lines incident to every member of ``lines`` (bitset or iterable)."""
        if isinstance(lines, int):
            lines = bits(lines)
        result = self.full
        for line in lines:
            result &= self.rows[line]
        return result

    def matrix(self):
        return [[bool(row >> j & 1) for j in range(self.n)] for row in self.rows]

    def hex_rows(self):
        width = max(1, -(-self.n // 4))
        return [format(row, f"0{width}x") for row in self.rows]

    def digest(self):
        h = hashlib.sha256()
        h.update(f"{self.n}\n".encode())
        for row in self.hex_rows():
            h.update(row.encode())
            h.update(b"\n")
        return h.hexdigest()

    def relabel(self, perm):
        """Return the structure with line ``i`` moved to position ``perm[i]``."""
        n = self.n
        inv = [0] * n
        for i, j in enumerate(perm):
            inv[j] = i
        labels = tuple(self.labels[inv[j]] for j in range(n))
        rows = tuple(mask_of(perm[k] for k in bits(self.rows[inv[j]])) for j in range(n))
        return IncidenceStructure(labels, rows, self.q)

    def __eq__(self, other):
        if not isinstance(other, IncidenceStructure):
            return NotImplemented
        return (self.labels, self.rows, self.q) == (other.labels, other.rows, other.q)

    def __hash__(self):
        return hash((self.labels, self.rows))
