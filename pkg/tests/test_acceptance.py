"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines. Every tolerance is pinned here; nothing is deferred to later
calibration.
"""

import json
import math
import random
import re
import time
from pathlib import Path

from corpus import colored_icons, full_corpus, random_normalized_document, random_raw_svg
from svgforge.augment import AugmentSpec
from svgforge.classifier import classify
from svgforge.model import (
    CubicTo,
    DifficultyLevel,
    Document,
    Hex,
    LineTo,
    MoveTo,
    NORMALIZED_VIEW_BOX,
    PathElement,
    Point,
    document_equal,
)
from svgforge.normalizer import arc_to_cubics, normalize_document
from svgforge.parser import parse_document, serialize_document
from svgforge.pipeline import (
    DEFAULT_EPOCHS,
    EXIT_OK,
    build_curriculum,
    run_augment,
    run_classify,
    run_normalize,
    run_verify,
)
from svgforge.rewards import (
    MatchSemantics,
    RewardParams,
    integrity_indicator,
    match_reward,
    total_reward,
)


def _ok(n, name, detail=""):
    print(f"\nACCEPTANCE {n} {name}: PASS {detail}".rstrip())


def test_criterion_1_alphabet_closure(corpus):
    assert len(corpus) >= 50
    # precondition: the corpus really covers all shapes and all 20 opcodes
    opcodes = set()
    shapes = set()
    for text in corpus.values():
        for m in re.finditer(r'd="([^"]*)"', text):
            opcodes |= {c for c in m.group(1) if c in "MmLlHhVvCcSsQqTtAaZz"}
        shapes |= set(re.findall(r"<(rect|circle|ellipse|line|polyline|polygon)\b", text))
    assert opcodes == set("MmLlHhVvCcSsQqTtAaZz")
    assert shapes == {"rect", "circle", "ellipse", "line", "polyline", "polygon"}

    start = time.perf_counter()
    for name, text in corpus.items():
        doc, _ = parse_document(text)
        normalized, _ = normalize_document(doc)
        for path in normalized.paths:
            assert all(
                isinstance(c, (MoveTo, LineTo, CubicTo)) for c in path.commands
            ), name
        serialized = serialize_document(normalized)
        for m in re.finditer(r'd="([^"]*)"', serialized):
            assert not set(m.group(1)) & set("mlhvcsqtazHVSQTAZ"), name
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    _ok(1, "alphabet closure", f"({len(corpus)} icons, all M/L/C, {elapsed:.2f}s)")


def test_criterion_2_geometric_fidelity(tmp_path, corpus, corpus_dir):
    normalized_dir = tmp_path / "normalized"
    assert run_normalize(corpus_dir, normalized_dir) == EXIT_OK
    assert run_verify(corpus_dir, normalized_dir, tolerance=0.5) == EXIT_OK

    # quarter-arc bound: radial error of the k = 4/3 tan(theta/4) cubic
    segs = arc_to_cubics(Point(1, 0), 1, 1, 0, 0, 1, Point(0, 1))
    assert len(segs) == 1
    c = segs[0]

    def radial_error(samples):
        worst = 0.0
        for i in range(samples + 1):
            t = i / samples
            s = 1 - t
            x = s**3 * 1 + 3 * s * s * t * c.c1.x + 3 * s * t * t * c.c2.x
            y = 3 * s * s * t * c.c1.y + 3 * s * t * t * c.c2.y + t**3 * 1
            worst = max(worst, abs(math.hypot(x, y) - 1.0))
        return worst

    coarse, fine = radial_error(4000), radial_error(8000)
    assert fine < 3e-4
    assert abs(fine - coarse) < 1e-5  # sampling resolves the max to 1e-5
    _ok(2, "geometric fidelity", f"(corpus at 0.5, quarter-arc error {fine:.6e} < 3e-4)")


def test_criterion_3_idempotence_and_roundtrip(corpus):
    rng = random.Random(2024)
    checked = 0
    for _ in range(700):
        doc = random_normalized_document(rng)
        normalized, _ = normalize_document(doc)
        again, _ = normalize_document(normalized)
        assert document_equal(again, normalized)
        reparsed, _ = parse_document(serialize_document(normalized))
        assert document_equal(reparsed, normalized)
        checked += 1
    for _ in range(300):
        raw, _ = parse_document(random_raw_svg(rng))
        normalized, _ = normalize_document(raw)
        again, _ = normalize_document(normalized)
        assert document_equal(again, normalized)
        reparsed, _ = parse_document(serialize_document(normalized))
        assert document_equal(reparsed, normalized)
        checked += 1
    for name, text in corpus.items():
        doc, _ = parse_document(text)
        normalized, _ = normalize_document(doc)
        again, _ = normalize_document(normalized)
        assert document_equal(again, normalized), name
        reparsed, _ = parse_document(serialize_document(normalized))
        assert document_equal(reparsed, normalized), name
        checked += 1
    assert checked >= 1000 + len(corpus)
    _ok(3, "idempotence and roundtrip", f"({checked} documents)")


def test_criterion_4_classifier_conformance():
    def doc_with(n, fills):
        if not fills:
            return Document(NORMALIZED_VIEW_BOX, (), normalized=True)
        paths = []
        remaining = n
        for i, fill in enumerate(fills):
            budget = remaining if i == len(fills) - 1 else max(1, remaining // (len(fills) - i))
            cmds = [MoveTo(Point(0, 0))]
            cmds.extend(LineTo(Point(j + 1, j + 1)) for j in range(budget - 1))
            paths.append(PathElement(tuple(cmds), fill))
            remaining -= budget
        return Document(NORMALIZED_VIEW_BOX, tuple(paths), normalized=True)

    mono = [Hex("000000")]
    multi = [Hex("ff0000"), Hex("00ff00")]
    cases = [
        (0, [], DifficultyLevel.MONOCOLOR_EASY),
        (49, mono, DifficultyLevel.MONOCOLOR_EASY),
        (50, mono, DifficultyLevel.MONOCOLOR_DIFFICULT),
        (200, mono, DifficultyLevel.MONOCOLOR_DIFFICULT),
        (201, mono, None),
        (49, multi, DifficultyLevel.MULTICOLOR_EASY),
        (99, multi, DifficultyLevel.MULTICOLOR_EASY),
        (100, multi, DifficultyLevel.MULTICOLOR_DIFFICULT),
        (200, multi, DifficultyLevel.MULTICOLOR_DIFFICULT),
        (201, multi, None),
    ]
    for count, fills, expected in cases:
        got = classify(doc_with(count, fills))
        assert got.level is expected, (count, fills, got)
        assert got.command_count == count
    _ok(4, "classifier conformance", f"({len(cases)} boundary cases exact)")


def test_criterion_5_reward_oracle():
    def svg_with_paths(n):
        body = "".join(
            f'<path d="M{i * 20} 0L{i * 20 + 10} 0L{i * 20 + 10} 10Z" fill="#000000"/>'
            for i in range(n)
        )
        return f'<svg viewBox="0 0 1024 1024">{body}</svg>'

    prose = RewardParams()
    literal = RewardParams(match_semantics=MatchSemantics.LITERAL_FORMULA)
    cache = {n: svg_with_paths(n) for n in range(1, 41)}

    assert match_reward(cache[5], cache[5], prose) == 1.0
    assert math.isclose(
        match_reward(cache[4], cache[5], prose), math.exp(-1), rel_tol=0, abs_tol=1e-12
    )
    assert match_reward(cache[7], cache[5], prose) == 1.0
    assert match_reward(cache[7], cache[5], literal) == 1.0
    assert math.isclose(
        match_reward(cache[4], cache[5], literal), math.e, rel_tol=0, abs_tol=1e-12
    )

    # independently coded one-line oracle for the total reward
    oracle = lambda n, ngt: 1.0 + (1.0 if n >= ngt else math.exp(-(ngt - n)))
    rng = random.Random(1337)
    for _ in range(1000):
        n, ngt = rng.randint(1, 40), rng.randint(1, 40)
        r = total_reward(cache[n], cache[ngt], prose)
        assert math.isclose(r.total, oracle(n, ngt), rel_tol=0, abs_tol=1e-12)
        assert math.isclose(r.total, r.integrity + r.match, rel_tol=0, abs_tol=1e-12)
    _ok(5, "reward oracle", "(exact boundary values, 1000 random pairs to 1e-12)")


def test_criterion_6_integrity_detector(corpus):
    originals = [t for t in corpus.values() if 'd="' in t][:40]
    for text in originals:
        assert integrity_indicator(text) == 1

    rng = random.Random(60)
    variants = []
    while len(variants) < 200:
        text = rng.choice(originals)
        mode = len(variants) % 3
        if mode == 0:  # truncate at a random offset inside the document
            cut = rng.randrange(1, len(text.rstrip()) - 1)
            variants.append(text[:cut])
        elif mode == 1:  # delete the closing root tag
            variants.append(text.replace("</svg>", "", 1))
        else:  # mangle a d attribute with an illegal token
            m = list(re.finditer(r'd="([^"]+)"', text))[0]
            inside = rng.randrange(m.start(1) + 1, m.end(1))
            variants.append(text[:inside] + "@" + text[inside:])
    broken = sum(1 for v in variants if integrity_indicator(v) == 0)
    assert broken == len(variants) == 200
    _ok(6, "integrity detector", "(200/200 corrupted -> 0, originals -> 1)")


def test_criterion_7_augmentation(tmp_path, colored_corpus, colored_dir):
    records = tmp_path / "records.jsonl"
    assert run_classify(colored_dir, records) == EXIT_OK
    source_rows = {
        json.loads(line)["id"]: json.loads(line)
        for line in records.read_text().splitlines()
    }
    assert len(source_rows) == 100

    out1 = tmp_path / "aug1.jsonl"
    out2 = tmp_path / "aug2.jsonl"
    spec = AugmentSpec(seed=7, n_variants=2)
    assert run_augment(records, out1, spec) == EXIT_OK
    assert run_augment(records, out2, spec) == EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()

    rows = [json.loads(line) for line in out1.read_text().splitlines()]
    assert len(rows) == 200  # expansion ratio 2.0
    for row in rows:
        src = source_rows[row["augmented_from"]]
        assert row["color_category"] == src["color_category"]
        assert row["difficulty_level"] == src["difficulty_level"]
        assert row["command_count"] == src["command_count"]
        assert integrity_indicator(row["svg"]) == 1
    _ok(7, "augmentation invariants", "(100 -> 200, classification preserved, reruns byte-identical)")


def test_criterion_8_curriculum_manifest():
    def rec(rid, level, color, count):
        return {
            "id": rid, "svg": "<svg/>", "color_category": color,
            "difficulty_level": level, "command_count": count, "path_count": 1,
        }

    rows = []
    for i in range(10):
        rows.append(rec(f"me{i}", "Monocolor_easy", "Monochrome", 10))
        rows.append(rec(f"md{i}", "Monocolor_difficult", "Monochrome", 60))
        rows.append(rec(f"xe{i}", "Multicolor_easy", "Multicolor", 40))
        rows.append(rec(f"xd{i}", "Multicolor_difficult", "Multicolor", 150))
    assert len(rows) == 40
    manifest = build_curriculum(rows)
    names = [s["stage_name"] for s in manifest["stages"]]
    assert names == [
        "Monocolor_easy", "Monocolor_difficult", "Multicolor_easy", "Multicolor_difficult",
    ]
    assert tuple(s["epochs"] for s in manifest["stages"]) == DEFAULT_EPOCHS == (1, 1, 3, 3)
    staged = [rid for s in manifest["stages"] for rid in s["record_ids"]]
    assert sorted(staged) == sorted(r["id"] for r in rows)
    assert manifest["out_of_range"] == []
    for stage in manifest["stages"]:
        assert len(stage["record_ids"]) == 10
    _ok(8, "curriculum manifest", "(40 records, stages ordered, epochs 1,1,3,3, ids conserved)")


def test_criterion_9_throughput_and_parallel_consistency(tmp_path, corpus_dir):
    texts = list(colored_icons(150, seed=5).values())
    texts += list(full_corpus().values())
    docs = []
    for text in texts:
        doc, _ = parse_document(text)
        normalized, _ = normalize_document(doc)
        if classify(normalized).command_count <= 200:
            docs.append(text)
    assert len(docs) >= 200

    start = time.perf_counter()
    for text in docs:
        doc, _ = parse_document(text)
        normalized, _ = normalize_document(doc)
        classify(normalized)
    elapsed = time.perf_counter() - start
    rate = len(docs) / elapsed
    assert rate >= 500, f"throughput {rate:.0f} icons/s"

    out1, out8 = tmp_path / "jobs1.jsonl", tmp_path / "jobs8.jsonl"
    assert run_classify(corpus_dir, out1, jobs=1) == EXIT_OK
    assert run_classify(corpus_dir, out8, jobs=8) == EXIT_OK
    assert out1.read_bytes() == out8.read_bytes()

    norm1, norm8 = tmp_path / "n1", tmp_path / "n8"
    assert run_normalize(corpus_dir, norm1, jobs=1) == EXIT_OK
    assert run_normalize(corpus_dir, norm8, jobs=8) == EXIT_OK
    for rel in sorted(p.relative_to(norm1) for p in norm1.rglob("*.svg")):
        assert (norm1 / rel).read_bytes() == (norm8 / rel).read_bytes()
    _ok(9, "throughput sanity", f"({rate:.0f} icons/s single-threaded, jobs 1 == jobs 8)")
