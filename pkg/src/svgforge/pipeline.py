"""Batch pipeline: directories of SVG in, JSONL datasets and reports out.

All subcommand bodies live here as plain functions so they are usable as
a library; the CLI module only does argument wiring. Outputs are
deterministic for fixed inputs, flags and seeds: work may fan out across
threads but results are assembled in sorted order before anything is
written, so any ``--jobs`` level produces identical bytes.
"""

from __future__ import annotations

import hashlib
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .augment import AugmentSpec, replace_colors, swap_paths
from .classifier import classify
from .errors import InvalidReference, SchemaError, SvgForgeError
from .model import DifficultyLevel, Document
from .normalizer import NormalizeReport, normalize_document
from .parser import parse_document, serialize_document
from .rewards import RewardParams, total_reward
from .verifier import verify_normalization

log = logging.getLogger("svgforge")

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_USAGE = 2
EXIT_VERIFY_FAILED = 3

STAGE_ORDER = (
    DifficultyLevel.MONOCOLOR_EASY,
    DifficultyLevel.MONOCOLOR_DIFFICULT,
    DifficultyLevel.MULTICOLOR_EASY,
    DifficultyLevel.MULTICOLOR_DIFFICULT,
)
DEFAULT_EPOCHS = (1, 1, 3, 3)


@dataclass(frozen=True)
class DatasetRecord:
    """One training-ready JSONL row."""

    id: str
    svg: str
    color_category: str
    difficulty_level: str
    command_count: int
    path_count: int
    augmented_from: str | None = None

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "svg": self.svg,
            "color_category": self.color_category,
            "difficulty_level": self.difficulty_level,
            "command_count": self.command_count,
            "path_count": self.path_count,
        }
        if self.augmented_from is not None:
            out["augmented_from"] = self.augmented_from
        return out


def record_from_document(
    doc_id: str, doc: Document, augmented_from: str | None = None
) -> DatasetRecord:
    """Build a self-validating record from a normalized document."""
    c = classify(doc)
    return DatasetRecord(
        id=doc_id,
        svg=serialize_document(doc),
        color_category=c.color_category.value,
        difficulty_level=c.level_name,
        command_count=c.command_count,
        path_count=c.path_count,
        augmented_from=augmented_from,
    )


def file_id(relpath: Path | str) -> str:
    """Stable record id: relative path, extension stripped, '/' -> '__'."""
    p = Path(relpath)
    return str(p.with_suffix("")).replace("\\", "/").replace("/", "__")


def iter_svg_files(root: Path) -> list[Path]:
    """Relative paths of all .svg files under ``root``, sorted."""
    return sorted(p.relative_to(root) for p in root.rglob("*.svg") if p.is_file())


def _parallel_map(fn, items, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _write_jsonl(path: Path, rows: list[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


def _read_jsonl(path: Path) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}:{lineno}: not valid JSON: {exc}") from None
            if not isinstance(row, dict):
                raise SchemaError(f"{path}:{lineno}: row is not an object")
            rows.append(row)
    return rows


def _errors_path(out_path: Path) -> Path:
    return out_path.parent / "errors.jsonl"


# --- normalize ---------------------------------------------------------------


def run_normalize(
    input_dir: Path,
    output_dir: Path,
    strict: bool = False,
    report_path: Path | None = None,
    jobs: int = 1,
) -> int:
    """Normalize every .svg under ``input_dir`` into ``output_dir``.

    Output files keep their relative paths. Failures are logged and
    skipped (exit 1), or abort immediately under ``strict`` (exit 2).
    """
    input_dir, output_dir = Path(input_dir), Path(output_dir)
    if not input_dir.is_dir():
        log.error("input directory %s does not exist", input_dir)
        return EXIT_USAGE
    files = iter_svg_files(input_dir)

    def work(rel: Path):
        try:
            text = (input_dir / rel).read_text(encoding="utf-8")
            doc, _ = parse_document(text)
            normalized, report = normalize_document(doc)
            return rel, serialize_document(normalized), report, None
        except (SvgForgeError, OSError, UnicodeDecodeError) as exc:
            return rel, None, None, f"{type(exc).__name__}: {exc}"

    results = _parallel_map(work, files, jobs)

    aggregate = NormalizeReport()
    failures = 0
    for rel, text, report, error in results:
        if error is not None:
            failures += 1
            log.warning("failed %s: %s", rel, error)
            if strict:
                log.error("aborting on first failure (--strict)")
                return EXIT_USAGE
            continue
        out_file = output_dir / rel
        out_file.parent.mkdir(parents=True, exist_ok=True)
        out_file.write_text(text, encoding="utf-8", newline="\n")
        aggregate.merge(report)

    if report_path is not None:
        summary = aggregate.as_dict()
        summary["files_total"] = len(files)
        summary["files_failed"] = failures
        Path(report_path).parent.mkdir(parents=True, exist_ok=True)
        Path(report_path).write_text(
            json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    log.info("normalized %d/%d files", len(files) - failures, len(files))
    return EXIT_PARTIAL if failures else EXIT_OK


# --- classify ----------------------------------------------------------------


def run_classify(input_dir: Path, out_path: Path, jobs: int = 1) -> int:
    """Emit one DatasetRecord per document, sorted by id.

    Inputs that are not yet normalized are normalized on the fly and the
    record notes it. Per-file errors land in a sidecar errors.jsonl.
    """
    input_dir, out_path = Path(input_dir), Path(out_path)
    if not input_dir.is_dir():
        log.error("input directory %s does not exist", input_dir)
        return EXIT_USAGE
    files = iter_svg_files(input_dir)

    def work(rel: Path):
        rid = file_id(rel)
        try:
            text = (input_dir / rel).read_text(encoding="utf-8")
            doc, _ = parse_document(text)
            normalized, _ = normalize_document(doc)
            record = record_from_document(rid, normalized)
            row = record.to_dict()
            if record.svg != text.strip():
                row["auto_normalized"] = True
            return rid, row, None
        except (SvgForgeError, OSError, UnicodeDecodeError) as exc:
            return rid, None, {"id": rid, "error": f"{type(exc).__name__}: {exc}"}

    results = sorted(_parallel_map(work, files, jobs), key=lambda r: r[0])
    rows = [row for _, row, _ in results if row is not None]
    errors = [err for _, _, err in results if err is not None]
    _write_jsonl(out_path, rows)
    if errors:
        _write_jsonl(_errors_path(out_path), errors)
    log.info("classified %d records, %d errors", len(rows), len(errors))
    return EXIT_PARTIAL if errors else EXIT_OK


# --- stats -------------------------------------------------------------------

_REQUIRED_RECORD_FIELDS = {
    "id": str,
    "svg": str,
    "color_category": str,
    "difficulty_level": str,
    "command_count": int,
    "path_count": int,
}


def _check_record(row: dict, where: str) -> None:
    for name, kind in _REQUIRED_RECORD_FIELDS.items():
        if name not in row:
            raise SchemaError(f"{where}: missing field {name!r}")
        if not isinstance(row[name], kind):
            raise SchemaError(f"{where}: field {name!r} is not {kind.__name__}")


def run_stats(records_path: Path, out_path: Path | None = None) -> tuple[int, dict]:
    """Histogram of command counts per color category plus level shares."""
    rows = _read_jsonl(Path(records_path))
    histogram: dict[str, dict[str, int]] = {}
    levels: dict[str, int] = {}
    for i, row in enumerate(rows, 1):
        _check_record(row, f"record {i}")
        bucket = histogram.setdefault(row["color_category"], {})
        bin_start = (row["command_count"] // 10) * 10
        key = f"{bin_start}-{bin_start + 9}"
        bucket[key] = bucket.get(key, 0) + 1
        levels[row["difficulty_level"]] = levels.get(row["difficulty_level"], 0) + 1

    total = len(rows)
    summary = {
        "records": total,
        "command_histogram": {
            cat: dict(sorted(bins.items(), key=lambda kv: int(kv[0].split("-")[0])))
            for cat, bins in sorted(histogram.items())
        },
        "level_counts": dict(sorted(levels.items())),
        "level_proportions": {
            name: (count / total if total else 0.0)
            for name, count in sorted(levels.items())
        },
    }
    if out_path is not None:
        Path(out_path).write_text(
            json.dumps(summary, indent=2) + "\n", encoding="utf-8"
        )
    return EXIT_OK, summary


# --- curriculum ----------------------------------------------------------------


def build_curriculum(
    rows: list[dict],
    epochs: tuple[int, ...] = DEFAULT_EPOCHS,
    extra_stage: str | None = None,
) -> dict:
    """Partition records into the fixed easy-to-hard stage order.

    Out-of-range records are excluded and listed. ``extra_stage`` appends
    an empty named stage (an extension point for data this tool does not
    produce); ``epochs`` may carry a fifth value for it.
    """
    if len(epochs) not in (4, 5):
        raise SchemaError(f"expected 4 or 5 epoch values, got {len(epochs)}")
    by_level: dict[str, list[str]] = {level.value: [] for level in STAGE_ORDER}
    out_of_range: list[str] = []
    for i, row in enumerate(rows, 1):
        _check_record(row, f"record {i}")
        level = row["difficulty_level"]
        if level in by_level:
            by_level[level].append(row["id"])
        else:
            out_of_range.append(row["id"])
    stages = [
        {
            "stage_name": level.value,
            "difficulty_level": level.value,
            "epochs": epochs[i],
            "record_ids": sorted(by_level[level.value]),
        }
        for i, level in enumerate(STAGE_ORDER)
    ]
    if extra_stage is not None:
        stages.append(
            {
                "stage_name": extra_stage,
                "difficulty_level": None,
                "epochs": epochs[4] if len(epochs) == 5 else 3,
                "record_ids": [],
            }
        )
    return {"stages": stages, "out_of_range": sorted(out_of_range)}


def run_curriculum(
    records_path: Path,
    out_path: Path,
    epochs: tuple[int, ...] = DEFAULT_EPOCHS,
    extra_stage: str | None = None,
) -> int:
    rows = _read_jsonl(Path(records_path))
    manifest = build_curriculum(rows, epochs, extra_stage)
    Path(out_path).write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )
    log.info(
        "curriculum over %d records (%d out of range)",
        sum(len(s["record_ids"]) for s in manifest["stages"]),
        len(manifest["out_of_range"]),
    )
    return EXIT_OK


# --- score ---------------------------------------------------------------------


def run_score(
    pairs_path: Path,
    out_path: Path,
    params: RewardParams = RewardParams(),
    jobs: int = 1,
) -> int:
    """Score {id, generated, reference} rows; appends the reward breakdown."""
    rows = _read_jsonl(Path(pairs_path))
    for i, row in enumerate(rows, 1):
        for name in ("id", "generated", "reference"):
            if name not in row:
                raise SchemaError(f"pair {i}: missing field {name!r}")

    def work(row: dict):
        try:
            r = total_reward(row["generated"], row["reference"], params)
        except InvalidReference as exc:
            return None, {"id": row["id"], "error": f"InvalidReference: {exc}"}
        scored = dict(row)
        scored.update(
            integrity=r.integrity,
            match=r.match,
            total=r.total,
            n_generated=r.n_generated,
            n_reference=r.n_reference,
        )
        return scored, None

    results = _parallel_map(work, rows, jobs)
    scored = [s for s, _ in results if s is not None]
    errors = [e for _, e in results if e is not None]
    _write_jsonl(Path(out_path), scored)
    if errors:
        _write_jsonl(_errors_path(Path(out_path)), errors)
    log.info("scored %d pairs, %d invalid references", len(scored), len(errors))
    return EXIT_PARTIAL if errors else EXIT_OK


# --- augment ---------------------------------------------------------------------


def _variant_seed(master_seed: int, record_id: str, k: int) -> int:
    digest = hashlib.sha256(f"{master_seed}:{record_id}:{k}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def run_augment(
    records_path: Path,
    out_path: Path,
    spec: AugmentSpec,
    ops: tuple[str, ...] = ("recolor", "swap"),
) -> int:
    """Emit ``n_variants`` augmented records per input record.

    Each variant recolors through a seeded injective map and, when a safe
    adjacent pair exists, swaps it. Variants that cannot be produced under
    the requested ops (too few paths for a swap-only run, palette smaller
    than the fill set) are logged and skipped.
    """
    rows = _read_jsonl(Path(records_path))
    out_rows: list[dict] = []
    skipped = 0
    errors = 0
    for row in rows:
        _check_record(row, f"record {row.get('id', '?')!r}")
        rid = row["id"]
        try:
            doc, _ = parse_document(row["svg"])
            normalized, _ = normalize_document(doc)
        except SvgForgeError as exc:
            log.warning("augment: cannot parse record %s: %s", rid, exc)
            errors += 1
            continue
        for k in range(spec.n_variants):
            seed_k = _variant_seed(spec.seed, rid, k)
            variant = normalized
            changed = False
            try:
                if "recolor" in ops:
                    variant = replace_colors(
                        variant,
                        AugmentSpec(
                            seed=seed_k,
                            palette=spec.palette,
                            allow_overlap_swap=spec.allow_overlap_swap,
                        ),
                    )
                    changed = True
                if "swap" in ops:
                    if len(variant.paths) < 2:
                        if not changed:
                            log.info("augment: %s variant %d: TooFewPaths", rid, k)
                            skipped += 1
                            continue
                    else:
                        variant, note = swap_paths(
                            variant, seed_k + 1, spec.allow_overlap_swap
                        )
                        if note is not None:
                            log.info("augment: %s variant %d: %s", rid, k, note)
                            if not changed:
                                skipped += 1
                                continue
                        else:
                            changed = True
            except SvgForgeError as exc:
                log.warning("augment: %s variant %d skipped: %s", rid, k, exc)
                skipped += 1
                continue
            record = record_from_document(f"{rid}__aug{k + 1}", variant, augmented_from=rid)
            out_rows.append(record.to_dict())
    _write_jsonl(Path(out_path), out_rows)
    log.info(
        "augmented %d records into %d variants (%d skipped)",
        len(rows), len(out_rows), skipped,
    )
    return EXIT_PARTIAL if errors else EXIT_OK


# --- verify ----------------------------------------------------------------------


def run_verify(
    raw_dir: Path,
    normalized_dir: Path,
    tolerance: float = 0.5,
    out_path: Path | None = None,
    jobs: int = 1,
) -> int:
    """Geometry-check normalized outputs against their raw sources."""
    raw_dir, normalized_dir = Path(raw_dir), Path(normalized_dir)
    if not raw_dir.is_dir() or not normalized_dir.is_dir():
        log.error("both directories must exist")
        return EXIT_USAGE
    files = iter_svg_files(raw_dir)

    def work(rel: Path):
        rid = file_id(rel)
        try:
            raw_doc, _ = parse_document((raw_dir / rel).read_text(encoding="utf-8"))
            norm_doc, _ = parse_document(
                (normalized_dir / rel).read_text(encoding="utf-8")
            )
            norm_doc, _ = normalize_document(norm_doc)
            result = verify_normalization(raw_doc, norm_doc, tolerance)
            return rid, result.passed, result.worst, None
        except (SvgForgeError, OSError) as exc:
            return rid, False, float("inf"), f"{type(exc).__name__}: {exc}"

    results = sorted(_parallel_map(work, files, jobs), key=lambda r: r[0])
    rows = []
    worst_id, worst_dev = None, -1.0
    failures = 0
    for rid, passed, worst, error in results:
        row = {"id": rid, "pass": passed, "worst_path_deviation": worst}
        if error:
            row["error"] = error
        rows.append(row)
        if not passed:
            failures += 1
            if worst > worst_dev:
                worst_id, worst_dev = rid, worst
    if out_path is not None:
        _write_jsonl(Path(out_path), rows)
    if failures:
        log.error(
            "verification failed for %d/%d files; worst offender %s at %.6g",
            failures, len(rows), worst_id, worst_dev,
        )
        return EXIT_VERIFY_FAILED
    log.info("verified %d files within tolerance %g", len(rows), tolerance)
    return EXIT_OK
