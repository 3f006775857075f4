"""Acceptance suite: one test per release criterion, each printing a
PASS line with the values it checked.

Criteria 5-7 replicate the published corpus analyses and need the three
datasets on disk (they are distributed separately).  Point
ARTCOMPLEXITY_DATA at a directory containing lomas/, dla3d/ and
linedrawing/ subdirectories, each with a manifest.csv (path,score rows;
see README), to enable them; without it they skip.
"""

from __future__ import annotations

import json
import math
import os
import time
from pathlib import Path

import numpy as np
import pytest

from artcomplexity.cli import main
from artcomplexity.codec import LossyCodecParams, lossy_encode, lzw_compress, lzw_decompress
from artcomplexity.codec import _lzw_py
from artcomplexity.config import RunConfig
from artcomplexity.corpus import load_manifest, run_corpus
from artcomplexity.errors import ArtComplexityError
from artcomplexity.geometry import (
    Layer,
    LayeredForm,
    Polyline,
    layer_angle_qcd,
    layer_convexity_deviation,
    physical_complexity,
)
from artcomplexity.image import GrayImage, save_gray_png
from artcomplexity.measures import (
    MEASURE_NAMES,
    algorithmic_complexity,
    contours,
    dimension_from_mask,
    energy,
    entropy,
    euler,
    fractal_aesthetic_from_dimension,
    fractal_dimension,
    measure_all,
    mc_complexity,
    mc_complexity_edges,
    skew,
    structural_complexity,
)
from artcomplexity.stats import correlation_matrix, pearson

from conftest import make_annulus_image
from test_measures import brute_energy, brute_entropy, brute_skew

DATA_ROOT = os.environ.get("ARTCOMPLEXITY_DATA")


def _load_dataset(name: str):
    if not DATA_ROOT:
        pytest.skip(
            f"criterion needs the {name} dataset: set ARTCOMPLEXITY_DATA to a directory "
            f"with {name}/manifest.csv (datasets are distributed separately)"
        )
    manifest = Path(DATA_ROOT) / name / "manifest.csv"
    if not manifest.is_file():
        pytest.skip(f"{manifest} not found; cannot run the {name} reproduction")
    return load_manifest(manifest, name)


def _score_columns(records, config=None):
    result = run_corpus(records, config or RunConfig())
    columns = {name: [] for name in MEASURE_NAMES}
    columns["Sc"] = []
    for row in result.usable_rows():
        values = row.vector.as_dict()
        for name in MEASURE_NAMES:
            columns[name].append(values[name])
        columns["Sc"].append(row.record.score)
    return columns


def test_criterion_1_analytic_invariants():
    constant = GrayImage(np.full((32, 32), 0.5))
    assert entropy(constant) == 0.0
    assert energy(constant) == 1.0

    half = np.zeros((16, 16))
    half[:8] = 1.0
    assert abs(entropy(GrayImage(half)) - math.log(2)) < 1e-12

    assert fractal_aesthetic_from_dimension(1.35) == 1.0
    for dx in (0.05, 0.25, 0.6):
        low = fractal_aesthetic_from_dimension(1.35 - dx)
        high = fractal_aesthetic_from_dimension(1.35 + dx)
        assert low == pytest.approx(high, rel=1e-13)

    annulus = make_annulus_image(64)
    assert contours(annulus) == 2
    assert euler(annulus) == 0

    x = np.random.default_rng(7).random(500)
    assert pearson(x, x) == 1.0

    skewed = np.full((10, 10), 0.1)
    skewed[0] = 0.9
    s_pos = skew(GrayImage(skewed))
    s_neg = skew(GrayImage(1.0 - skewed))
    assert s_neg == pytest.approx(-s_pos, rel=1e-9)

    print("\nACCEPTANCE 1 PASS: analytic invariants "
          "(S=0, E=1, ln2, D_a peak/symmetry, annulus T/gamma, self-r, skew antisymmetry)")


def test_criterion_2_oracle_equivalence():
    rng = np.random.default_rng(20240214)
    cfg = RunConfig()
    worst = 0.0
    for _ in range(50):
        px = rng.random((8, 8))
        img = GrayImage(px)
        worst = max(
            worst,
            abs(entropy(img) - brute_entropy(px)),
            abs(energy(img) - brute_energy(px)),
            abs(skew(img) - brute_skew(px)),
        )
        assert abs(entropy(img) - brute_entropy(px)) < 1e-10
        assert abs(energy(img) - brute_energy(px)) < 1e-10
        assert abs(skew(img) - brute_skew(px)) < 1e-10

        vec = measure_all(img, cfg)
        assert vec.S == entropy(img, cfg.bins)
        assert vec.E == energy(img, cfg.bins)
        assert vec.T == contours(img)
        assert vec.gamma == euler(img)
        assert vec.C_a == algorithmic_complexity(img)
        assert vec.C_s == structural_complexity(img, cfg.structural)
        assert vec.C_mc == mc_complexity(img, cfg.lossy)
        assert vec.C_mc_E == mc_complexity_edges(img, cfg.lossy)
        with pytest.raises(ArtComplexityError):
            fractal_dimension(img, cfg.binarization)  # image below the size floor
        assert vec.D is None and vec.D_a is None
        assert vec.skew == skew(img)
    print(f"\nACCEPTANCE 2 PASS: 50 random 8x8 oracle equivalence, "
          f"worst |delta| = {worst:.2e} (< 1e-10); measure_all == individual calls")


def test_criterion_3_known_fractals():
    start = time.perf_counter()

    full = np.ones((729, 729), dtype=bool)
    d_full = dimension_from_mask(full)
    assert abs(d_full - 2.0) <= 0.05

    line = np.zeros((729, 729), dtype=bool)
    line[364] = True
    d_line = dimension_from_mask(line)
    assert abs(d_line - 1.0) <= 0.1

    carpet = np.ones((1, 1), dtype=bool)
    pattern = np.ones((3, 3), dtype=bool)
    pattern[1, 1] = False
    for _ in range(6):
        carpet = np.kron(carpet, pattern)
    assert carpet.shape == (729, 729)
    d_carpet = dimension_from_mask(carpet)
    target = math.log(8) / math.log(3)
    assert abs(d_carpet - target) <= 0.05

    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    print(f"\nACCEPTANCE 3 PASS: D(square)={d_full:.4f}, D(line)={d_line:.4f}, "
          f"D(carpet)={d_carpet:.4f} vs {target:.4f}, runtime {elapsed:.2f}s")


def test_criterion_4_codec_properties():
    rng = np.random.default_rng(99)
    for i in range(1000):
        n = int(rng.integers(0, 1200))
        if i % 3 == 0:
            payload = rng.integers(0, 256, size=n, dtype=np.uint8).tobytes()
        elif i % 3 == 1:
            payload = rng.integers(0, 4, size=n, dtype=np.uint8).tobytes()
        else:
            payload = bytes(rng.integers(0, 256, size=1, dtype=np.uint8)) * n
        assert lzw_decompress(lzw_compress(payload)) == payload

    qualities = [0.05, 0.15, 0.3, 0.5, 0.65, 0.75, 0.85, 0.95, 1.0]
    fixtures = []
    for k in range(10):
        if k % 2 == 0:
            fixtures.append(GrayImage(rng.random((40 + 2 * k, 48))))
        else:
            xs = np.linspace(0, 1, 48)
            base = np.tile(xs, (40 + 2 * k, 1))
            fixtures.append(GrayImage(np.clip(base + 0.05 * k * rng.random(base.shape), 0, 1)))
    for img in fixtures:
        sizes = [lossy_encode(img, LossyCodecParams(q))[0] for q in qualities]
        assert all(a <= b for a, b in zip(sizes, sizes[1:])), sizes

    # determinism: identical bytes across repeated runs, and across the two
    # independent implementations (the strongest cross-platform check
    # available in one process)
    payload = rng.integers(0, 256, size=30_000, dtype=np.uint8).tobytes()
    assert lzw_compress(payload) == lzw_compress(payload)
    assert lzw_compress(payload) == _lzw_py.lzw_compress(payload)
    img = fixtures[0]
    from artcomplexity.codec import lossy_encode_blob

    blob1, _ = lossy_encode_blob(img, LossyCodecParams(0.75))
    blob2, _ = lossy_encode_blob(img, LossyCodecParams(0.75))
    assert blob1 == blob2
    print("\nACCEPTANCE 4 PASS: 1000 LZW round trips, lossy size monotone on 10 fixtures, "
          "byte-identical reruns and backend agreement")


def test_criterion_5_table_reproduction_full_scale():
    results = {}
    checks = []

    lomas = _load_dataset("lomas")
    cols = _score_columns(lomas)
    matrix = correlation_matrix(cols)
    r_cmc, _, n = matrix.cell("Sc", "C_mc")
    ranked = {m: abs(matrix.cell("Sc", m)[0]) for m in MEASURE_NAMES
              if m != "skew" and not math.isnan(matrix.cell("Sc", m)[0])}
    argmax = max(ranked, key=ranked.get)
    checks.append(("lomas corr(Sc, C_mc)", r_cmc, 0.873, argmax, "C_mc"))
    assert argmax == "C_mc", f"lomas argmax measure is {argmax}, expected C_mc"
    assert abs(r_cmc - 0.873) <= 0.10, f"lomas corr(Sc,C_mc)={r_cmc:.3f} outside 0.873 +/- 0.10"
    results["lomas"] = (r_cmc, n)

    dla = _load_dataset("dla3d")
    cols = _score_columns(dla)
    matrix = correlation_matrix(cols)
    r_cs, _, n = matrix.cell("Sc", "C_s")
    ranked = {m: abs(matrix.cell("Sc", m)[0]) for m in MEASURE_NAMES
              if m != "skew" and not math.isnan(matrix.cell("Sc", m)[0])}
    argmax = max(ranked, key=ranked.get)
    assert argmax == "C_s", f"dla3d argmax measure is {argmax}, expected C_s"
    assert abs(r_cs - 0.774) <= 0.10, f"dla3d corr(Sc,C_s)={r_cs:.3f} outside 0.774 +/- 0.10"
    results["dla3d"] = (r_cs, n)

    lines = _load_dataset("linedrawing")
    cols = _score_columns(lines)
    matrix = correlation_matrix(cols)
    r_t, _, n = matrix.cell("Sc", "T")
    r_skew, _, _ = matrix.cell("Sc", "skew")
    assert abs(r_t - 0.565) <= 0.10, f"linedrawing corr(Sc,T)={r_t:.3f} outside 0.565 +/- 0.10"
    assert abs(r_skew - 0.583) <= 0.10, (
        f"linedrawing corr(Sc,skew)={r_skew:.3f} outside 0.583 +/- 0.10"
    )
    results["linedrawing"] = ((r_t, r_skew), n)

    print(f"\nACCEPTANCE 5 PASS: table reproduction {results}")


def test_criterion_6_structural_relations():
    report = {}

    lomas_cols = _score_columns(_load_dataset("lomas"))
    lomas = correlation_matrix(lomas_cols)
    assert lomas.cell("S", "E")[0] <= -0.9
    assert lomas.cell("T", "gamma")[0] <= -0.99
    assert lomas.cell("C_a", "C_s")[0] >= 0.5
    sc_abs = {m: abs(lomas.cell("Sc", m)[0]) for m in MEASURE_NAMES if m != "skew"}
    fractal_worst = max(sc_abs["D"], sc_abs["D_a"])
    others_best = min(v for k, v in sc_abs.items() if k not in ("D", "D_a"))
    assert fractal_worst < others_best, (
        f"fractal measures should have the lowest |corr| on lomas: "
        f"max(D,D_a)={fractal_worst:.3f}, min(others)={others_best:.3f}"
    )
    report["lomas"] = {"S,E": lomas.cell("S", "E")[0], "T,g": lomas.cell("T", "gamma")[0],
                       "Ca,Cs": lomas.cell("C_a", "C_s")[0]}

    dla = correlation_matrix(_score_columns(_load_dataset("dla3d")))
    assert dla.cell("S", "E")[0] <= -0.9
    assert dla.cell("C_a", "C_s")[0] >= 0.5
    report["dla3d"] = {"S,E": dla.cell("S", "E")[0], "Ca,Cs": dla.cell("C_a", "C_s")[0]}

    lines = correlation_matrix(_score_columns(_load_dataset("linedrawing")))
    assert lines.cell("T", "gamma")[0] <= -0.99
    assert lines.cell("C_a", "C_s")[0] >= 0.5
    report["linedrawing"] = {"T,g": lines.cell("T", "gamma")[0],
                             "Ca,Cs": lines.cell("C_a", "C_s")[0]}

    print(f"\nACCEPTANCE 6 PASS: structural relations {report}")


def test_criterion_7_lomas_significance():
    cols = _score_columns(_load_dataset("lomas"))
    matrix = correlation_matrix(cols)
    worst = 0.0
    for name in MEASURE_NAMES:
        r, p, n = matrix.cell("Sc", name)
        if math.isnan(r):
            continue
        assert p < 1e-3, f"corr(Sc,{name}) = {r:.3f} has p = {p:.2e} >= 1e-3 at n = {n}"
        worst = max(worst, p)
    print(f"\nACCEPTANCE 7 PASS: all Lomas score correlations significant, worst p = {worst:.2e}")


def test_criterion_8_geometry_fixtures():
    hexagon = Polyline(
        np.array(
            [[math.cos(a), math.sin(a)] for a in np.linspace(0, 2 * math.pi, 6, endpoint=False)]
        )
    )
    stack = LayeredForm(tuple(Layer((hexagon,)) for _ in range(5)))
    sc = physical_complexity(stack)
    assert sc == pytest.approx(0.0, abs=1e-12)

    cross = Polyline(
        np.array(
            [
                [1, 0], [2, 0], [2, 1], [3, 1], [3, 2], [2, 2],
                [2, 3], [1, 3], [1, 2], [0, 2], [0, 1], [1, 1],
            ],
            dtype=float,
        )
    )
    deviation = layer_convexity_deviation(Layer((cross,)))
    assert deviation == pytest.approx(2.0 / 7.0, abs=1e-9)

    star = Polyline(
        np.column_stack(
            [
                np.where(np.arange(10) % 2 == 0, 2.0, 0.7)
                * np.cos(np.linspace(0, 2 * math.pi, 10, endpoint=False)),
                np.where(np.arange(10) % 2 == 0, 2.0, 0.7)
                * np.sin(np.linspace(0, 2 * math.pi, 10, endpoint=False)),
            ]
        )
    )
    base_qcd = layer_angle_qcd(Layer((star,)))
    scaled_qcd = layer_angle_qcd(Layer((Polyline(star.vertices * 10.0),)))
    assert scaled_qcd == pytest.approx(base_qcd, abs=1e-12)

    print(f"\nACCEPTANCE 8 PASS: stack Sc={sc}, cross deviation={deviation:.9f} "
          f"(2/7={2/7:.9f}), QCD scale-invariant ({base_qcd:.6f})")


def test_criterion_9_report_determinism(tmp_path):
    rng = np.random.default_rng(5)
    rows = ["path,score"]
    for i in range(5):
        px = np.clip(rng.random((48, 48)) * (0.25 + 0.18 * i), 0.0, 1.0)
        save_gray_png(GrayImage(px), tmp_path / f"img{i}.png")
        rows.append(f"img{i}.png,{0.1 + 0.15 * i:.2f}")
    manifest = tmp_path / "manifest.csv"
    manifest.write_text("\n".join(rows) + "\n")

    cache = tmp_path / "cache.sqlite"
    outs = []
    for name, extra in (
        ("no-cache", []),
        ("cold-cache", ["--cache", str(cache)]),
        ("warm-cache", ["--cache", str(cache)]),
    ):
        out = tmp_path / name
        assert main(["correlate", str(manifest), "--out", str(out)] + extra) == 0
        outs.append(out)

    files = ("measures.csv", "correlations.csv", "correlations.json", "summary.json")
    for fname in files:
        blobs = [(o / fname).read_bytes() for o in outs]
        assert blobs[0] == blobs[1] == blobs[2], f"{fname} differs between reruns"
    report = json.loads((outs[0] / "summary.json").read_text())
    print(f"\nACCEPTANCE 9 PASS: byte-identical reports no-cache/cold/warm, "
          f"top measure {report['top_measure']}")
