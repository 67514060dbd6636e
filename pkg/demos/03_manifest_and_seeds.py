"""
Reproducible training manifests
===============================

Turn an allocation vector into a shuffled train/validation manifest, then
sweep seeds: membership changes with the seed, counts never do, and a rerun
with the same seed is byte-identical.
"""

from langalloc import (
    Candidate,
    DatasetIndex,
    SourcePool,
    StrategyConfig,
    allocate,
    build_manifest,
    seed_sweep,
)

pool = SourcePool("hau", (
    Candidate("swa", 500, 0.31),
    Candidate("yor", 500, 0.22),
    Candidate("amh", 500, 0.18),
))
vec = allocate(pool, StrategyConfig("top-k-proportional", budget=60, k=3))
print("allocation:", {e.language: e.amount for e in vec.entries})

indexes = [
    DatasetIndex(lang, tuple(f"{lang}-{i:04d}" for i in range(500)))
    for lang in ("swa", "yor", "amh")
]

manifest = build_manifest(vec, indexes, seed=42, val_fraction=0.1)
print(f"\nmanifest: {len(manifest.records)} records, "
      f"{sum(r.split == 'validation' for r in manifest.records)} validation")
print("first three lines of the JSONL output:")
for line in manifest.to_jsonl().splitlines()[:3]:
    print(" ", line)

rerun = build_manifest(vec, indexes, seed=42, val_fraction=0.1)
print("\nsame seed, byte-identical rerun:",
      manifest.to_jsonl() == rerun.to_jsonl())

print("\nseed sweep (42, 43, 44): per-language counts per manifest")
for seed, man in zip((42, 43, 44), seed_sweep(vec, indexes, [42, 43, 44])):
    counts = {}
    for r in man.records:
        counts[r.source_language] = counts.get(r.source_language, 0) + 1
    print(f"  seed {seed}: {counts}")
