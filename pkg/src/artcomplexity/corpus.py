"""Corpus ingestion, per-dataset score conventions, and the measure cache.

Manifests are CSV files with a `path,score[,category]` header.  Scores are
validated per dataset: integer 0..10 for `lomas` (0 marks an unrated or
failed form and is excluded from analysis), [0,1] for `linedrawing`,
finite non-negative for `dla3d`, any finite value for `custom`.

Measure vectors are cached in a single SQLite file keyed by the image
content hash plus the parameter fingerprint; any cache corruption falls
back to recomputation.
"""

from __future__ import annotations

import csv
import hashlib
import json
import sqlite3
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .config import RunConfig
from .errors import ManifestError
from .image import load_image
from .measures import MeasureVector, measure_all_detailed

DATASET_TAGS = ("lomas", "dla3d", "linedrawing", "custom")


@dataclass(frozen=True)
class CorpusRecord:
    image_path: Path
    score: float
    dataset: str
    category: str | None = None
    included: bool = True


def _validate_score(raw: str, dataset: str, where: str) -> tuple[float, bool]:
    try:
        score = float(raw)
    except ValueError as exc:
        raise ManifestError(f"{where}: score {raw!r} is not a number") from exc
    if not (score == score and abs(score) != float("inf")):
        raise ManifestError(f"{where}: score must be finite")
    if dataset == "lomas":
        if score != int(score) or not 0 <= score <= 10:
            raise ManifestError(f"{where}: lomas scores are integers in 0..10, got {raw}")
        return score, score != 0
    if dataset == "linedrawing":
        if not 0.0 <= score <= 1.0:
            raise ManifestError(f"{where}: linedrawing scores lie in [0, 1], got {raw}")
        return score, True
    if dataset == "dla3d":
        if score < 0:
            raise ManifestError(f"{where}: dla3d scores are non-negative, got {raw}")
        return score, True
    return score, True


def load_manifest(path: str | Path, dataset_tag: str) -> list[CorpusRecord]:
    """Parse a manifest CSV into validated records.

    Image paths are resolved relative to the manifest's directory.
    """
    if dataset_tag not in DATASET_TAGS:
        raise ManifestError(f"unknown dataset tag {dataset_tag!r}; expected one of {DATASET_TAGS}")
    path = Path(path)
    if not path.is_file():
        raise ManifestError(f"manifest not found: {path}")
    base = path.parent
    records: list[CorpusRecord] = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ManifestError(f"{path}: empty manifest") from None
        cols = [c.strip().lower() for c in header]
        if cols[:2] != ["path", "score"]:
            raise ManifestError(f"{path}: header must start with 'path,score', got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) < 2:
                raise ManifestError(f"{path}:{lineno}: expected path,score[,category]")
            image = row[0].strip()
            if not image:
                raise ManifestError(f"{path}:{lineno}: empty image path")
            score, included = _validate_score(row[1].strip(), dataset_tag, f"{path}:{lineno}")
            category = row[2].strip() if len(row) > 2 and row[2].strip() else None
            records.append(
                CorpusRecord(
                    image_path=(base / image) if not Path(image).is_absolute() else Path(image),
                    score=score,
                    dataset=dataset_tag,
                    category=category,
                    included=included,
                )
            )
    return records


class MeasureCache:
    """Single-file key-value store for measure vectors.

    Keys are (content hash, parameter fingerprint); a hit requires both to
    match.  Read errors of any kind count as misses.
    """

    _SCHEMA = (
        "CREATE TABLE IF NOT EXISTS measures ("
        " content_hash TEXT NOT NULL,"
        " fingerprint TEXT NOT NULL,"
        " payload TEXT NOT NULL,"
        " created_at REAL NOT NULL,"
        " PRIMARY KEY (content_hash, fingerprint))"
    )

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._conn = sqlite3.connect(self.path)
        try:
            self._conn.execute(self._SCHEMA)
            self._conn.commit()
        except sqlite3.DatabaseError:
            # corrupt cache file: start over rather than fail the run
            self._conn.close()
            self.path.unlink(missing_ok=True)
            self._conn = sqlite3.connect(self.path)
            self._conn.execute(self._SCHEMA)
            self._conn.commit()

    def get(self, content_hash: str, fingerprint: str) -> tuple[MeasureVector, dict] | None:
        try:
            row = self._conn.execute(
                "SELECT payload FROM measures WHERE content_hash = ? AND fingerprint = ?",
                (content_hash, fingerprint),
            ).fetchone()
            if row is None:
                return None
            doc = json.loads(row[0])
            return MeasureVector(**doc["measures"]), doc.get("notes", {})
        except (sqlite3.Error, json.JSONDecodeError, KeyError, TypeError):
            return None

    def put(self, content_hash: str, fingerprint: str, vector: MeasureVector, notes: dict) -> None:
        payload = json.dumps({"measures": vector.as_dict(), "notes": notes}, sort_keys=True)
        try:
            self._conn.execute(
                "INSERT OR REPLACE INTO measures VALUES (?, ?, ?, ?)",
                (content_hash, fingerprint, payload, time.time()),
            )
            self._conn.commit()
        except sqlite3.Error:
            pass  # a cache that cannot persist only costs recomputation

    def close(self) -> None:
        self._conn.close()


@dataclass(frozen=True)
class RunRow:
    record: CorpusRecord
    vector: MeasureVector | None
    notes: dict
    error: str | None
    from_cache: bool


@dataclass(frozen=True)
class CorpusResult:
    rows: tuple[RunRow, ...]
    cache_hits: int
    cache_misses: int

    def usable_rows(self) -> list[RunRow]:
        return [r for r in self.rows if r.record.included and r.vector is not None]


def _measure_path(path: Path, config: RunConfig) -> tuple[MeasureVector, dict]:
    return measure_all_detailed(load_image(path), config)


def _measure_path_worker(args: tuple[str, RunConfig]):
    path, config = args
    try:
        vector, notes = _measure_path(Path(path), config)
        return vector, notes, None
    except Exception as exc:  # per-record failure, never aborts the run
        return None, {}, f"{type(exc).__name__}: {exc}"


def run_corpus(
    records: list[CorpusRecord],
    config: RunConfig | None = None,
    cache: MeasureCache | None = None,
) -> CorpusResult:
    """Measure every included record, in manifest order, cache-backed.

    Per-record failures (missing or undecodable images) are recorded on
    their row; the run itself always completes.
    """
    config = config or RunConfig()
    fingerprint = config.fingerprint()
    results: dict[int, RunRow] = {}
    to_compute: list[tuple[int, CorpusRecord, str | None]] = []
    hits = misses = 0

    for idx, record in enumerate(records):
        if not record.included:
            results[idx] = RunRow(record, None, {}, None, False)
            continue
        content_hash = None
        if cache is not None:
            # hashing needs the file bytes anyway, so unreadable images
            # surface here; the uncached path hits them in the worker
            try:
                content = record.image_path.read_bytes()
            except OSError as exc:
                results[idx] = RunRow(record, None, {}, f"unreadable image: {exc}", False)
                continue
            content_hash = hashlib.sha256(content).hexdigest()
            cached = cache.get(content_hash, fingerprint)
            if cached is not None:
                vector, notes = cached
                results[idx] = RunRow(record, vector, notes, None, True)
                hits += 1
                continue
        misses += 1
        to_compute.append((idx, record, content_hash))

    if to_compute:
        if config.workers > 1:
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                outcomes = list(
                    pool.map(
                        _measure_path_worker,
                        [(str(rec.image_path), config) for _, rec, _ in to_compute],
                    )
                )
        else:
            outcomes = [
                _measure_path_worker((str(rec.image_path), config)) for _, rec, _ in to_compute
            ]
        for (idx, record, content_hash), (vector, notes, error) in zip(to_compute, outcomes):
            results[idx] = RunRow(record, vector, notes, error, False)
            if vector is not None and cache is not None and content_hash is not None:
                cache.put(content_hash, fingerprint, vector, notes)

    return CorpusResult(
        rows=tuple(results[i] for i in range(len(records))),
        cache_hits=hits,
        cache_misses=misses,
    )
