"""Classify a small corpus and build the staged training manifest.

Icons land in one of four difficulty levels from their color category
and command count; the curriculum orders them easy to hard with the
default 1/1/3/3 epoch schedule.
"""

import json
import random

from svgforge import (
    build_curriculum,
    classify,
    normalize_document,
    parse_document,
    record_from_document,
)


def make_icon(rng: random.Random, n_paths: int, n_colors: int, segs: int) -> str:
    colors = [f"#{rng.randrange(1 << 24):06x}" for _ in range(n_colors)]
    parts = []
    for i in range(n_paths):
        x0, y0 = (i % 4) * 25, (i // 4) * 25
        d = f"M{x0 + 2} {y0 + 2}" + "".join(
            f"L{x0 + rng.randint(2, 22)} {y0 + rng.randint(2, 22)}" for _ in range(segs)
        ) + "Z"
        parts.append(f'<path d="{d}" fill="{colors[i % n_colors]}"/>')
    return f'<svg viewBox="0 0 100 100">{"".join(parts)}</svg>'


def main() -> None:
    rng = random.Random(12)
    corpus = {}
    for i in range(6):
        corpus[f"simple_{i}"] = make_icon(rng, n_paths=2, n_colors=1, segs=4)
    for i in range(4):
        corpus[f"detailed_{i}"] = make_icon(rng, n_paths=8, n_colors=1, segs=12)
    for i in range(5):
        corpus[f"colored_{i}"] = make_icon(rng, n_paths=3, n_colors=3, segs=5)
    for i in range(3):
        corpus[f"rich_{i}"] = make_icon(rng, n_paths=10, n_colors=4, segs=14)

    print(f"{'id':<12} {'category':<11} {'commands':>8} {'paths':>5}  level")
    records = []
    for name, text in corpus.items():
        doc, _ = parse_document(text)
        normalized, _ = normalize_document(doc)
        c = classify(normalized)
        records.append(record_from_document(name, normalized).to_dict())
        print(f"{name:<12} {c.color_category.value:<11} "
              f"{c.command_count:>8} {c.path_count:>5}  {c.level_name}")

    manifest = build_curriculum(records)
    print("\ncurriculum stages:")
    for stage in manifest["stages"]:
        print(f"  {stage['stage_name']:<22} epochs={stage['epochs']} "
              f"records={len(stage['record_ids'])}")
    if manifest["out_of_range"]:
        print(f"  out of range: {manifest['out_of_range']}")

    print("\none dataset record as JSONL:")
    row = dict(records[0])
    row["svg"] = row["svg"][:60] + "..."
    print(" ", json.dumps(row))


if __name__ == "__main__":
    main()
