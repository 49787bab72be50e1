"""Time the numpy and numba kernel backends on representative workloads.

Each kernel is timed best-of-N on the shapes the codec actually uses:
8x8 DCT batches of 2816 tiles (one 512x512 image's worth), 128x128 Haar
levels, full-frame edge detection stages and the 3x3 median. Two
end-to-end rows time embed and extract with the whole kernel set swapped
to one backend at a time.

Run:  python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from blindmark import codec, fixtures, kernels
from blindmark.kernels import numpy_impl

try:
    from blindmark.kernels import numba_impl
except ImportError:
    numba_impl = None

KERNEL_NAMES = ("dct2_batch", "idct2_batch", "haar_fwd", "haar_inv",
                "gaussian_smooth", "sobel_gradients", "nms", "hysteresis",
                "median_filter")


def best_of(fn, repeats):
    fn()  # warmup: first numba call may compile
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def make_workloads():
    rng = np.random.default_rng(99)
    tiles = np.ascontiguousarray(rng.standard_normal((2816, 8, 8)) * 200.0)
    coeffs = numpy_impl.dct2_batch(tiles)
    block = np.ascontiguousarray(rng.standard_normal((128, 128)) * 100.0)
    subbands = numpy_impl.haar_fwd(block)
    subbands = tuple(np.ascontiguousarray(s) for s in subbands)
    frame = np.ascontiguousarray(
        fixtures.make("texture").astype(np.float64))
    taps = kernels.gaussian_taps(1.4, 4)
    smoothed = numpy_impl.gaussian_smooth(frame, taps)
    gx, gy = numpy_impl.sobel_gradients(smoothed)
    mag = np.ascontiguousarray(np.hypot(gx, gy))
    weak = np.ascontiguousarray(mag >= 0.1 * mag.max())
    strong = np.ascontiguousarray(mag >= 0.2 * mag.max())
    img_u8 = fixtures.make("texture")
    return {
        "dct2_batch": lambda impl: impl.dct2_batch(tiles),
        "idct2_batch": lambda impl: impl.idct2_batch(coeffs),
        "haar_fwd": lambda impl: impl.haar_fwd(block),
        "haar_inv": lambda impl: impl.haar_inv(*subbands),
        "gaussian_smooth": lambda impl: impl.gaussian_smooth(frame, taps),
        "sobel_gradients": lambda impl: impl.sobel_gradients(smoothed),
        "nms": lambda impl: impl.nms(mag, gx, gy),
        "hysteresis": lambda impl: impl.hysteresis(strong, weak),
        "median_filter": lambda impl: impl.median_filter(img_u8, 3),
    }


def swap_backend(impl):
    for name in KERNEL_NAMES:
        setattr(kernels, name, getattr(impl, name))


def end_to_end_rows(repeats):
    img = fixtures.make("texture")
    payload = codec.random_payload(np.random.default_rng(7))
    params = codec.EmbedParams()
    marked = codec.embed(img, payload, params)
    rows = []
    active = {name: getattr(kernels, name) for name in KERNEL_NAMES}
    try:
        times = {}
        for label, impl in (("numpy", numpy_impl), ("numba", numba_impl)):
            swap_backend(impl)
            times[label] = (
                best_of(lambda: codec.embed(img, payload, params), repeats),
                best_of(lambda: codec.extract(marked, params), repeats),
            )
        rows.append(("embed 512x512", times["numpy"][0], times["numba"][0]))
        rows.append(("extract 512x512", times["numpy"][1], times["numba"][1]))
    finally:
        for name, fn in active.items():
            setattr(kernels, name, fn)
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing repetitions per row (best is reported)")
    args = parser.parse_args()
    if numba_impl is None:
        print("numba backend not importable; nothing to compare")
        return 1

    workloads = make_workloads()
    rows = []
    for name, call in workloads.items():
        t_np = best_of(lambda: call(numpy_impl), args.repeats)
        t_nb = best_of(lambda: call(numba_impl), args.repeats)
        rows.append((name, t_np, t_nb))
    rows.extend(end_to_end_rows(args.repeats))

    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'numpy':>10}  {'numba':>10}  {'speedup':>7}")
    for name, t_np, t_nb in rows:
        print(f"{name:<{width}}  {t_np * 1e3:>8.3f}ms  {t_nb * 1e3:>8.3f}ms  "
              f"{t_np / t_nb:>6.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
