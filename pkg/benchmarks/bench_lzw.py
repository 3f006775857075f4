"""Benchmark: compiled LZW core vs the pure-Python fallback.

Times both implementations on payloads shaped like the library's real
workloads (8-bit gray planes, tri-level planes, lossy-codec token
streams), then times the full per-image measure vector under each
backend.  Run directly:

    python benchmarks/bench_lzw.py [--size 512] [--repeats 3]
"""

from __future__ import annotations

import argparse
import os
import statistics
import sys
import time

import numpy as np


def _time(fn, repeats):
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return min(samples), statistics.mean(samples)


def payloads(size: int) -> dict[str, bytes]:
    rng = np.random.default_rng(7)
    smooth = np.clip(
        np.cumsum(rng.normal(0, 0.004, (size, size)), axis=1) + 0.5, 0, 1
    )
    organic = np.clip(
        np.kron(rng.random((size // 16, size // 16)), np.ones((16, 16)))
        + rng.normal(0, 0.02, (size, size)),
        0,
        1,
    )
    tri = (rng.random((size, size)) < 0.2).astype(np.uint8) * 127 + 128
    return {
        "smooth gradient plane": np.rint(smooth * 255).astype(np.uint8).tobytes(),
        "organic form plane": np.rint(organic * 255).astype(np.uint8).tobytes(),
        "tri-level plane": tri.tobytes(),
        "incompressible noise": rng.integers(0, 256, size * size, dtype=np.uint8).tobytes(),
    }


def bench_codecs(size: int, repeats: int) -> None:
    from artcomplexity.codec import _lzw_py

    try:
        from artcomplexity.codec import _lzwc
    except ImportError:
        _lzwc = None
        print("compiled extension not available; timing pure Python only\n")

    print(f"LZW compress, {size}x{size} planes ({size * size / 1e6:.2f} MB each)")
    header = f"{'payload':<26} {'pure py':>12} {'compiled':>12} {'speedup':>9} {'ratio':>7}"
    print(header)
    print("-" * len(header))
    for name, payload in payloads(size).items():
        best_py, _ = _time(lambda: _lzw_py.lzw_compress(payload), repeats)
        line = f"{name:<26} {best_py * 1e3:>10.1f}ms"
        if _lzwc is not None:
            best_c, _ = _time(lambda: _lzwc.lzw_compress(payload), repeats)
            out = _lzwc.lzw_compress(payload)
            assert out == _lzw_py.lzw_compress(payload), "backends disagree!"
            line += f" {best_c * 1e3:>10.1f}ms {best_py / best_c:>8.1f}x"
        else:
            out = _lzw_py.lzw_compress(payload)
            line += f" {'-':>12} {'-':>9}"
        line += f" {len(out) / len(payload):>7.3f}"
        print(line)


def bench_measures(size: int, repeats: int) -> None:
    import importlib

    import artcomplexity.codec as codec_pkg

    rng = np.random.default_rng(11)
    pixels = np.clip(
        np.kron(rng.random((size // 16, size // 16)), np.ones((16, 16)))
        + rng.normal(0, 0.02, (size, size)),
        0,
        1,
    )

    def run_with_backend(pure: bool) -> float:
        if pure:
            os.environ["ARTCOMPLEXITY_PURE_PYTHON"] = "1"
        else:
            os.environ.pop("ARTCOMPLEXITY_PURE_PYTHON", None)
        importlib.reload(codec_pkg)
        for mod in ("artcomplexity.measures", "artcomplexity.config"):
            importlib.reload(importlib.import_module(mod))
        from artcomplexity.image import GrayImage
        from artcomplexity.measures import measure_all

        img = GrayImage(pixels)
        best, _ = _time(lambda: measure_all(img), repeats)
        return best

    print(f"\nFull measure vector on one {size}x{size} image")
    t_py = run_with_backend(pure=True)
    print(f"{'pure python codec':<26} {t_py * 1e3:>10.1f}ms")
    try:
        import artcomplexity.codec._lzwc  # noqa: F401
    except ImportError:
        return
    t_c = run_with_backend(pure=False)
    print(f"{'compiled codec':<26} {t_c * 1e3:>10.1f}ms {t_py / t_c:>8.1f}x")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=512, help="plane side in pixels")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    bench_codecs(args.size, args.repeats)
    bench_measures(args.size, args.repeats)
    return 0


if __name__ == "__main__":
    sys.exit(main())
