"""Command-line interface.

Subcommands: `measure` (one image, full vector), `correlate` (corpus run
plus correlation report files), `preview` (dump a preprocessing
intermediate as PNG).  Exit codes: 0 success, 1 usage error, 2 data error.
Flags default to the reference settings, so a bare invocation runs the
standard pipeline; report files embed the full configuration and codec
version and are byte-identical across reruns.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .codec import CODEC_VERSION, lossy_encode
from .config import CONVENTIONS, RunConfig, build_config, parse_config_file
from .corpus import MeasureCache, load_manifest, run_corpus
from .errors import ArtComplexityError, InvalidParameterError
from .image import GrayImage, load_image, save_gray_png
from .measures import MEASURE_NAMES, measure_all_detailed
from .preprocess import adaptive_binarize, coarse_grain, morphological_binarize, sobel_edges
from .stats import correlation_matrix

USAGE_ERROR = 1
DATA_ERROR = 2

PREVIEW_STAGES = ("morph-binarize", "adaptive-binarize", "sobel", "coarse-grain", "lossy-roundtrip")

# Measures ranked against the score by default; skew joins via --include-skew.
DEFAULT_RANKED = tuple(name for name in MEASURE_NAMES if name != "skew")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("measure parameters")
    group.add_argument("--rcg", type=int, help="coarse-grain radius in pixels (default 5)")
    group.add_argument("--delta", type=float, help="tri-level split threshold (default 0.23)")
    group.add_argument("--fractal-radius", type=int, dest="fractal_radius",
                       help="adaptive binarization radius (default 2)")
    group.add_argument("--quality", type=float, help="lossy codec quality in (0,1] (default 0.75)")
    group.add_argument("--fa-peak", type=float, dest="fa_peak",
                       help="preferred fractal dimension (default 1.35)")
    group.add_argument("--fa-sigma", type=float, dest="fa_sigma",
                       help="preference curve width (default 0.2)")
    group.add_argument("--bins", type=int, help="histogram bins (default 256)")
    group.add_argument("--workers", type=int, help="parallel workers (default 1)")
    group.add_argument("--cache", help="measure cache file (or set ARTCOMPLEXITY_CACHE_DIR)")
    group.add_argument("--format", choices=("csv", "json"), dest="output_format",
                       help="output format (default csv)")
    group.add_argument("--config", help="key=value config file, overridden by flags")


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    settings: dict[str, object] = {}
    if args.config:
        settings.update(parse_config_file(args.config))
    for key in ("rcg", "delta", "fractal_radius", "quality", "fa_peak", "fa_sigma",
                "bins", "workers", "cache", "output_format"):
        value = getattr(args, key, None)
        if value is not None:
            settings["format" if key == "output_format" else key] = value
    config = build_config(settings)
    if config.cache_path is None:
        cache_dir = os.environ.get("ARTCOMPLEXITY_CACHE_DIR")
        if cache_dir:
            config = config.replace(cache_path=str(Path(cache_dir) / "measure-cache.sqlite"))
    return config


def _fmt(value) -> str:
    if value is None:
        return ""
    return repr(value) if isinstance(value, float) else str(value)


def cmd_measure(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    try:
        img = load_image(args.image)
    except (OSError, ArtComplexityError) as exc:
        print(f"error: cannot read image {args.image}: {exc}", file=sys.stderr)
        return DATA_ERROR
    vector, notes = measure_all_detailed(img, config)
    for name, note in sorted(notes.items()):
        print(f"warning: {name}: {note}", file=sys.stderr)
    record = vector.as_dict()
    if config.output_format == "json":
        print(json.dumps(record, sort_keys=True))
    else:
        print(",".join(MEASURE_NAMES))
        print(",".join(_fmt(record[name]) for name in MEASURE_NAMES))
    return 0


def measures_table_csv(rows) -> str:
    header = ["path", "dataset", "score", "included", "status"] + list(MEASURE_NAMES)
    lines = [",".join(header)]
    for row in rows:
        rec = row.record
        status = "ok" if row.vector is not None else ("excluded" if not rec.included else "failed")
        cells = [str(rec.image_path), rec.dataset, _fmt(rec.score),
                 "1" if rec.included else "0", status]
        values = row.vector.as_dict() if row.vector is not None else {}
        cells += [_fmt(values.get(name)) for name in MEASURE_NAMES]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def measures_table_json(rows, config: RunConfig) -> str:
    docs = []
    for row in rows:
        rec = row.record
        docs.append(
            {
                "path": str(rec.image_path),
                "dataset": rec.dataset,
                "score": rec.score,
                "included": rec.included,
                "error": row.error,
                "measures": row.vector.as_dict() if row.vector is not None else None,
            }
        )
    doc = {"config": config.to_dict(), "codec_version": CODEC_VERSION, "rows": docs}
    return json.dumps(doc, indent=2, sort_keys=True)


def cmd_correlate(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    try:
        records = load_manifest(args.manifest, args.dataset)
    except ArtComplexityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR

    cache = MeasureCache(config.cache_path) if config.cache_path else None
    try:
        result = run_corpus(records, config, cache)
    finally:
        if cache is not None:
            cache.close()

    for row in result.rows:
        if row.error is not None:
            print(f"warning: {row.record.image_path}: {row.error}", file=sys.stderr)

    usable = result.usable_rows()
    if len(usable) < 3:
        print(f"error: only {len(usable)} usable records; need at least 3", file=sys.stderr)
        return DATA_ERROR

    columns: dict[str, list] = {name: [] for name in MEASURE_NAMES}
    columns["Sc"] = []
    for row in usable:
        values = row.vector.as_dict()
        for name in MEASURE_NAMES:
            columns[name].append(values[name])
        columns["Sc"].append(row.record.score)
    matrix = correlation_matrix(columns)

    ranked_names = MEASURE_NAMES if args.include_skew else DEFAULT_RANKED
    ranking = []
    for name in ranked_names:
        r, p, n = matrix.cell("Sc", name)
        if r == r:  # not NaN
            ranking.append({"measure": name, "r": r, "abs_r": abs(r), "p": p, "n": n})
    ranking.sort(key=lambda item: -item["abs_r"])
    top = ranking[0]["measure"] if ranking else None

    warnings = []
    r_se, _, _ = matrix.cell("S", "E")
    if r_se == r_se and r_se > -0.9:
        warnings.append(
            f"corr(S, E) = {r_se:.3f} is above -0.9; the histogram-energy "
            "reading of E deserves review on this corpus"
        )
    for message in warnings:
        print(f"warning: {message}", file=sys.stderr)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if config.output_format == "json":
        (out / "measures.json").write_text(measures_table_json(result.rows, config))
    else:
        (out / "measures.csv").write_text(measures_table_csv(result.rows))
    (out / "correlations.csv").write_text(matrix.to_csv())
    corr_doc = json.loads(matrix.to_json())
    corr_doc["config"] = config.to_dict()
    corr_doc["codec_version"] = CODEC_VERSION
    (out / "correlations.json").write_text(json.dumps(corr_doc, indent=2, sort_keys=True))

    summary = {
        "dataset": args.dataset,
        "manifest": str(args.manifest),
        "records": len(records),
        "included": sum(1 for r in records if r.included),
        "measured": len(usable),
        "failed": sum(1 for row in result.rows if row.error is not None),
        "top_measure": top,
        "score_correlations": ranking,
        "warnings": warnings,
        "config": config.to_dict(),
        "conventions": CONVENTIONS,
        "codec_version": CODEC_VERSION,
        "version": __version__,
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True))
    if top is not None:
        print(f"top measure vs score: {top} (r = {ranking[0]['r']:.3f}, n = {ranking[0]['n']})")
    print(f"report written to {out}")
    return 0


def cmd_preview(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    try:
        img = load_image(args.image)
    except (OSError, ArtComplexityError) as exc:
        print(f"error: cannot read image {args.image}: {exc}", file=sys.stderr)
        return DATA_ERROR
    out = Path(args.out) if args.out else Path(args.image).with_name(
        f"{Path(args.image).stem}-{args.stage}.png"
    )
    try:
        if args.stage == "morph-binarize":
            save_gray_png(morphological_binarize(img), out)
        elif args.stage == "adaptive-binarize":
            save_gray_png(adaptive_binarize(img, config.binarization), out)
        elif args.stage == "sobel":
            save_gray_png(sobel_edges(img), out)
        elif args.stage == "coarse-grain":
            tri = coarse_grain(img, config.structural)
            lut = np.array([1.0, 128 / 255, 0.0])
            save_gray_png(GrayImage(lut[tri.pixels]), out)
        else:  # lossy-roundtrip
            _, recon = lossy_encode(img, config.lossy)
            save_gray_png(recon, out)
    except ArtComplexityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR
    print(out)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="artcomplexity",
                     description="Complexity measures for generative art images.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_measure = sub.add_parser("measure", help="print the measure vector of one image")
    p_measure.add_argument("image")
    _add_config_flags(p_measure)
    p_measure.set_defaults(func=cmd_measure)

    p_corr = sub.add_parser("correlate", help="measure a corpus and correlate against its scores")
    p_corr.add_argument("manifest", help="CSV manifest: path,score[,category]")
    p_corr.add_argument("--dataset", choices=("lomas", "dla3d", "linedrawing", "custom"),
                        default="custom")
    p_corr.add_argument("--out", default="report", help="output directory (default ./report)")
    p_corr.add_argument("--include-skew", action="store_true",
                        help="let skew compete in the top-measure ranking")
    _add_config_flags(p_corr)
    p_corr.set_defaults(func=cmd_correlate)

    p_prev = sub.add_parser("preview", help="write a preprocessing intermediate as PNG")
    p_prev.add_argument("image")
    p_prev.add_argument("stage", choices=PREVIEW_STAGES)
    p_prev.add_argument("--out", help="output PNG path")
    _add_config_flags(p_prev)
    p_prev.set_defaults(func=cmd_preview)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ArtComplexityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
