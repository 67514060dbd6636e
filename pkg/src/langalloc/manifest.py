"""Deterministic training/validation manifests from an allocation vector.

Per source language, `amount` example ids are sampled without replacement
with a language-specific sub-seed; the concatenation is Fisher-Yates
shuffled with the top-level seed so the final record order carries no
language markers; the tail of the shuffle becomes the validation split.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .allocation import AllocationVector
from .errors import AvailabilityMismatchError, InputError
from .rng import Xoshiro256StarStar, mix64

TASKS = ("NER", "SENTIMENT", "OTHER")


@dataclass(frozen=True)
class DatasetIndex:
    """The example-id universe for one source language."""

    language: str
    example_ids: tuple[str, ...]
    task: str = "OTHER"

    def __post_init__(self):
        if self.task not in TASKS:
            raise InputError(f"{self.language}: unknown task {self.task!r}")
        if len(set(self.example_ids)) != len(self.example_ids):
            raise InputError(f"{self.language}: duplicate example ids in index")


@dataclass(frozen=True)
class ManifestRecord:
    source_language: str
    example_id: str
    split: str  # "train" or "validation"


@dataclass(frozen=True)
class Manifest:
    records: tuple[ManifestRecord, ...]
    allocation: AllocationVector
    seed: int
    val_fraction: float

    def to_jsonl(self) -> str:
        lines = [
            json.dumps(
                {
                    "source_language": r.source_language,
                    "example_id": r.example_id,
                    "split": r.split,
                },
                sort_keys=True,
            )
            for r in self.records
        ]
        return "\n".join(lines) + ("\n" if lines else "")


def build_manifest(
    allocation: AllocationVector,
    indexes: list[DatasetIndex],
    seed: int,
    val_fraction: float = 0.1,
) -> Manifest:
    """Sample, shuffle and split one manifest.

    The per-language sub-seed mixes the top-level seed with the language
    code, so adding a language to an allocation never perturbs the samples
    drawn for the others. The validation count is round-half-to-even of
    val_fraction * total, taken from the tail of the shuffled order.
    """
    if not 0.0 <= val_fraction < 1.0:
        raise InputError("val_fraction must be in [0, 1)")
    by_lang = {ix.language: ix for ix in indexes}
    if len(by_lang) != len(indexes):
        raise InputError("duplicate language among dataset indexes")

    pairs: list[tuple[str, str]] = []
    for entry in allocation.entries:
        if entry.amount == 0:
            continue
        ix = by_lang.get(entry.language)
        if ix is None:
            raise AvailabilityMismatchError(
                f"no dataset index for allocated language {entry.language!r}"
            )
        if len(ix.example_ids) < entry.amount:
            raise AvailabilityMismatchError(
                f"{entry.language}: allocation needs {entry.amount} examples "
                f"but the index holds only {len(ix.example_ids)}"
            )
        rng = Xoshiro256StarStar(mix64(seed, entry.language))
        chosen = rng.sample_indices(len(ix.example_ids), entry.amount)
        pairs.extend((entry.language, ix.example_ids[i]) for i in chosen)

    Xoshiro256StarStar(seed).shuffle(pairs)
    total = len(pairs)
    val_count = round(val_fraction * total)
    records = tuple(
        ManifestRecord(lang, ex, "validation" if i >= total - val_count else "train")
        for i, (lang, ex) in enumerate(pairs)
    )
    return Manifest(records, allocation, seed, val_fraction)


def seed_sweep(
    allocation: AllocationVector,
    indexes: list[DatasetIndex],
    seeds: list[int],
    val_fraction: float = 0.1,
) -> list[Manifest]:
    """One manifest per seed (the training protocol uses 42, 43, 44)."""
    if not seeds:
        raise InputError("seed list is empty")
    return [build_manifest(allocation, indexes, s, val_fraction) for s in seeds]


def load_index_file(path: str, language: str, task: str = "OTHER") -> DatasetIndex:
    """One example id per line; blank lines ignored."""
    with open(path, encoding="utf-8") as fh:
        ids = tuple(ln.strip() for ln in fh if ln.strip())
    return DatasetIndex(language, ids, task)
