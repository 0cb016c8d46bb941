"""Seeded mutation corpus: each mutant toggles one symmetric off-diagonal pair."""

from __future__ import annotations

import random
from pathlib import Path

from .fileio import FORMAT_VERSION, atomic_write, dumps, save_structure
from .structure import IncidenceStructure


def flip(s, i, j):
    if i == j:
        raise ValueError("mutations never touch the diagonal")
    rows = list(s.rows)
    rows[i] ^= 1 << j
    rows[j] ^= 1 << i
    return IncidenceStructure(s.labels, tuple(rows), None)


def choose_flips(s, seed, count):
    """``count`` distinct pairs i < j, drawn with ``random.Random(seed)``."""
    n = s.n
    total = n * (n - 1) // 2
    if count > total:
        raise ValueError(f"only {total} distinct pairs available")
    rng = random.Random(seed)
    out = []
    for k in rng.sample(range(total), count):
        # unrank k into the k-th pair of the row-major upper triangle
        i = 0
        while k >= n - 1 - i:
            k -= n - 1 - i
            i += 1
        out.append((i, i + 1 + k))
    return out


def mutation_corpus(s, seed, count):
    return [(pair, flip(s, *pair)) for pair in choose_flips(s, seed, count)]


def write_corpus(s, seed, count, out_dir):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for k, ((i, j), mutant) in enumerate(mutation_corpus(s, seed, count)):
        name = f"mutant_{k:03d}.json"
        save_structure(mutant, out_dir / name)
        entries.append({
            "file": name,
            "flip": [s.labels[i], s.labels[j]],
            "digest": mutant.digest(),
        })
    manifest = {
        "format_version": FORMAT_VERSION,
        "source_digest": s.digest(),
        "seed": seed,
        "count": count,
        "mutants": entries,
    }
    atomic_write(out_dir / "manifest.json", dumps(manifest))
    return manifest


def replay_manifest(s, manifest):
    if manifest["source_digest"] != s.digest():
        raise ValueError("manifest was generated from a different structure")
    index = {label: i for i, label in enumerate(s.labels)}
    return [flip(s, index[a], index[b]) for a, b in (e["flip"] for e in manifest["mutants"])]
