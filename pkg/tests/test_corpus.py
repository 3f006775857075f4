from __future__ import annotations

import numpy as np
import pytest

from artcomplexity.config import RunConfig
from artcomplexity.corpus import (
    CorpusRecord,
    MeasureCache,
    load_manifest,
    run_corpus,
)
from artcomplexity.errors import ManifestError
from artcomplexity.image import GrayImage, save_gray_png
from artcomplexity.preprocess import StructuralParams

FAST_CONFIG = RunConfig()


def write_corpus(tmp_path, rng, n=4, size=48, scores=None, dataset="custom"):
    rows = ["path,score"]
    for i in range(n):
        px = np.clip(rng.random((size, size)) * (0.3 + 0.2 * i), 0.0, 1.0)
        name = f"img{i}.png"
        save_gray_png(GrayImage(px), tmp_path / name)
        score = scores[i] if scores else round(0.1 + 0.2 * i, 2)
        rows.append(f"{name},{score}")
    manifest = tmp_path / "manifest.csv"
    manifest.write_text("\n".join(rows) + "\n")
    return manifest


class TestLoadManifest:
    def test_lomas_exclusion_rule(self, tmp_path, rng):
        manifest = write_corpus(tmp_path, rng, n=3, scores=[7, 0, 3], dataset="lomas")
        records = load_manifest(manifest, "lomas")
        assert len(records) == 3
        assert [r.included for r in records] == [True, False, True]
        assert records[1].score == 0

    def test_lomas_score_range(self, tmp_path):
        manifest = tmp_path / "m.csv"
        manifest.write_text("path,score\na.png,11\n")
        with pytest.raises(ManifestError):
            load_manifest(manifest, "lomas")
        manifest.write_text("path,score\na.png,6.5\n")
        with pytest.raises(ManifestError):
            load_manifest(manifest, "lomas")

    def test_linedrawing_range(self, tmp_path):
        manifest = tmp_path / "m.csv"
        manifest.write_text("path,score\na.png,1.2\n")
        with pytest.raises(ManifestError):
            load_manifest(manifest, "linedrawing")
        manifest.write_text("path,score\na.png,0.8\n")
        assert load_manifest(manifest, "linedrawing")[0].score == 0.8

    def test_dla3d_non_negative(self, tmp_path):
        manifest = tmp_path / "m.csv"
        manifest.write_text("path,score\na.png,-0.5\n")
        with pytest.raises(ManifestError):
            load_manifest(manifest, "dla3d")

    def test_bad_row_reports_line_number(self, tmp_path):
        manifest = tmp_path / "m.csv"
        manifest.write_text("path,score\na.png,0.5\nb.png,not-a-number\n")
        with pytest.raises(ManifestError, match=":3"):
            load_manifest(manifest, "custom")

    def test_category_column(self, tmp_path):
        manifest = tmp_path / "m.csv"
        manifest.write_text("path,score,category\na.png,0.5,spiral\n")
        assert load_manifest(manifest, "custom")[0].category == "spiral"

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(ManifestError):
            load_manifest(tmp_path / "absent.csv", "custom")

    def test_bad_header(self, tmp_path):
        manifest = tmp_path / "m.csv"
        manifest.write_text("file,rating\na.png,0.5\n")
        with pytest.raises(ManifestError):
            load_manifest(manifest, "custom")

    def test_unknown_tag(self, tmp_path):
        manifest = tmp_path / "m.csv"
        manifest.write_text("path,score\na.png,0.5\n")
        with pytest.raises(ManifestError):
            load_manifest(manifest, "surrealism")


class TestRunCorpus:
    def test_basic_run_in_manifest_order(self, tmp_path, rng):
        manifest = write_corpus(tmp_path, rng, n=4)
        records = load_manifest(manifest, "custom")
        result = run_corpus(records, FAST_CONFIG)
        assert len(result.rows) == 4
        assert [r.record.image_path.name for r in result.rows] == [
            f"img{i}.png" for i in range(4)
        ]
        assert all(row.vector is not None for row in result.rows)

    def test_excluded_records_not_measured(self, tmp_path, rng):
        manifest = write_corpus(tmp_path, rng, n=3, scores=[7, 0, 3], dataset="lomas")
        records = load_manifest(manifest, "lomas")
        result = run_corpus(records, FAST_CONFIG)
        assert result.rows[1].vector is None
        assert result.rows[1].error is None
        assert len(result.usable_rows()) == 2

    def test_unreadable_image_recorded_not_fatal(self, tmp_path, rng):
        manifest = write_corpus(tmp_path, rng, n=2)
        records = load_manifest(manifest, "custom") + [
            CorpusRecord(tmp_path / "ghost.png", 0.5, "custom")
        ]
        result = run_corpus(records, FAST_CONFIG)
        assert result.rows[2].error is not None
        assert result.rows[2].vector is None
        assert all(r.vector is not None for r in result.rows[:2])

    def test_cold_then_warm_cache(self, tmp_path, rng):
        manifest = write_corpus(tmp_path, rng, n=3)
        records = load_manifest(manifest, "custom")
        cache = MeasureCache(tmp_path / "cache.sqlite")
        cold = run_corpus(records, FAST_CONFIG, cache)
        assert cold.cache_hits == 0 and cold.cache_misses == 3
        warm = run_corpus(records, FAST_CONFIG, cache)
        assert warm.cache_hits == 3 and warm.cache_misses == 0
        for a, b in zip(cold.rows, warm.rows):
            assert a.vector == b.vector
        cache.close()

    def test_parameter_change_invalidates_cache(self, tmp_path, rng):
        manifest = write_corpus(tmp_path, rng, n=2)
        records = load_manifest(manifest, "custom")
        cache = MeasureCache(tmp_path / "cache.sqlite")
        run_corpus(records, FAST_CONFIG, cache)
        perturbed = FAST_CONFIG.replace(structural=StructuralParams(r_cg=3, delta=0.23))
        rerun = run_corpus(records, perturbed, cache)
        assert rerun.cache_hits == 0 and rerun.cache_misses == 2
        cache.close()

    def test_cache_corruption_recomputes(self, tmp_path, rng):
        manifest = write_corpus(tmp_path, rng, n=2)
        records = load_manifest(manifest, "custom")
        cache_path = tmp_path / "cache.sqlite"
        cache = MeasureCache(cache_path)
        baseline = run_corpus(records, FAST_CONFIG, cache)
        cache.close()
        cache_path.write_bytes(b"garbage not a database")
        cache = MeasureCache(cache_path)  # corrupt file is rebuilt
        result = run_corpus(records, FAST_CONFIG, cache)
        assert result.cache_misses == 2
        for a, b in zip(baseline.rows, result.rows):
            assert a.vector == b.vector
        # and the rebuilt cache works again
        warm = run_corpus(records, FAST_CONFIG, cache)
        assert warm.cache_hits == 2
        cache.close()

    def test_run_determinism(self, tmp_path, rng):
        manifest = write_corpus(tmp_path, rng, n=3)
        records = load_manifest(manifest, "custom")
        r1 = run_corpus(records, FAST_CONFIG)
        r2 = run_corpus(records, FAST_CONFIG)
        for a, b in zip(r1.rows, r2.rows):
            assert a.vector == b.vector

    def test_parallel_workers_match_serial(self, tmp_path, rng):
        manifest = write_corpus(tmp_path, rng, n=4)
        records = load_manifest(manifest, "custom")
        serial = run_corpus(records, FAST_CONFIG)
        parallel = run_corpus(records, FAST_CONFIG.replace(workers=2))
        for a, b in zip(serial.rows, parallel.rows):
            assert a.vector == b.vector

    def test_parallel_run_fills_cache(self, tmp_path, rng):
        manifest = write_corpus(tmp_path, rng, n=4)
        records = load_manifest(manifest, "custom")
        cache = MeasureCache(tmp_path / "cache.sqlite")
        cold = run_corpus(records, FAST_CONFIG.replace(workers=2), cache)
        assert cold.cache_misses == 4
        warm = run_corpus(records, FAST_CONFIG.replace(workers=2), cache)
        assert warm.cache_hits == 4
        for a, b in zip(cold.rows, warm.rows):
            assert a.vector == b.vector
        cache.close()


class TestMeasureCacheDirect:
    def test_put_get_round_trip(self, tmp_path, rng):
        from artcomplexity.measures import MeasureVector

        cache = MeasureCache(tmp_path / "c.sqlite")
        vec = MeasureVector(S=1.0, E=0.5, T=2, gamma=1, C_a=0.3, C_s=0.2,
                            C_mc=0.01, C_mc_E=0.02, D=1.4, D_a=0.9, skew=None)
        cache.put("hash", "fp", vec, {"skew": "undefined"})
        got = cache.get("hash", "fp")
        assert got is not None
        assert got[0] == vec
        assert got[1] == {"skew": "undefined"}
        assert cache.get("hash", "other-fp") is None
        assert cache.get("other-hash", "fp") is None
        cache.close()
