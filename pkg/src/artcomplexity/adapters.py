"""Manifest builders for locally downloaded dataset copies.

Each adapter walks a dataset directory and writes the standard
`path,score[,category]` manifest next to it.  Expected layouts (see
README for details):

- lomas:       images at the top level (or one level down) plus a scores
               CSV (`scores.csv` or `ratings.csv`) mapping image file name
               to the 0..10 integer rating, optionally with a category.
- dla3d:       `perspective/` and `orthographic/` image directories plus a
               scores CSV mapping the form's file name to its measured
               complexity; the perspective renders are the default.
- linedrawing: images plus a scores CSV with [0,1] ratings.

If your copy is organized differently, write the manifest directly; it is
three columns of CSV.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .errors import ManifestError

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")
SCORE_FILE_NAMES = ("scores.csv", "ratings.csv")


def _find_scores_file(root: Path) -> Path:
    for name in SCORE_FILE_NAMES:
        candidate = root / name
        if candidate.is_file():
            return candidate
    raise ManifestError(
        f"no scores file in {root}; expected one of {', '.join(SCORE_FILE_NAMES)}"
    )


def read_scores(path: str | Path) -> dict[str, tuple[str, str | None]]:
    """Read a scores CSV into {file name: (score, category)}.

    The first column is the image file name, the second the score; an
    optional third column is kept as the category.  A header row is
    detected by a non-numeric second field and skipped.
    """
    path = Path(path)
    scores: dict[str, tuple[str, str | None]] = {}
    with path.open(newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) < 2:
                raise ManifestError(f"{path}:{lineno}: expected name,score[,category]")
            name, raw = row[0].strip(), row[1].strip()
            try:
                float(raw)
            except ValueError:
                if lineno == 1:
                    continue  # header
                raise ManifestError(f"{path}:{lineno}: score {raw!r} is not a number") from None
            category = row[2].strip() if len(row) > 2 and row[2].strip() else None
            scores[name] = (raw, category)
    if not scores:
        raise ManifestError(f"{path}: no scores found")
    return scores


def build_manifest(
    image_dir: str | Path,
    scores: dict[str, tuple[str, str | None]],
    out_path: str | Path,
) -> int:
    """Write a manifest for every scored image under image_dir.

    Returns the number of rows written; images without a score entry are
    skipped, score entries without an image raise.
    """
    image_dir = Path(image_dir)
    out_path = Path(out_path)
    found: dict[str, Path] = {}
    for path in sorted(image_dir.rglob("*")):
        if path.suffix.lower() in IMAGE_SUFFIXES:
            found.setdefault(path.name, path)
    missing = sorted(set(scores) - set(found))
    if missing:
        raise ManifestError(
            f"{len(missing)} scored images not found under {image_dir} "
            f"(first: {missing[0]})"
        )
    rows = []
    for name in sorted(scores):
        score, category = scores[name]
        rel = found[name].relative_to(out_path.parent) if out_path.parent in found[name].parents else found[name]
        rows.append((str(rel), score, category))
    with out_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path", "score", "category"])
        for rel, score, category in rows:
            writer.writerow([rel, score, category or ""])
    return len(rows)


def lomas_manifest(root: str | Path, out_path: str | Path | None = None) -> Path:
    root = Path(root)
    out = Path(out_path) if out_path else root / "manifest.csv"
    build_manifest(root, read_scores(_find_scores_file(root)), out)
    return out


def dla3d_manifest(
    root: str | Path,
    out_path: str | Path | None = None,
    projection: str = "perspective",
) -> Path:
    root = Path(root)
    if projection not in ("perspective", "orthographic"):
        raise ManifestError(f"projection must be perspective or orthographic, got {projection!r}")
    image_dir = root / projection
    if not image_dir.is_dir():
        raise ManifestError(f"{image_dir} not found; expected a {projection}/ image directory")
    out = Path(out_path) if out_path else root / "manifest.csv"
    build_manifest(image_dir, read_scores(_find_scores_file(root)), out)
    return out


def linedrawing_manifest(root: str | Path, out_path: str | Path | None = None) -> Path:
    root = Path(root)
    out = Path(out_path) if out_path else root / "manifest.csv"
    build_manifest(root, read_scores(_find_scores_file(root)), out)
    return out
