"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--size 256] [--repeat 3]
"""

import argparse
import timeit

import numpy as np
from scipy import ndimage

from regionxfer import _kernels
from regionxfer.boundary import _gradient_bins


def inputs(size, seed=0):
    rng = np.random.default_rng(seed)
    img = ndimage.gaussian_filter(rng.random((size, size)), 2.0)
    gx = ndimage.sobel(img, axis=1)
    gy = ndimage.sobel(img, axis=0)
    mag = np.hypot(gx, gy)
    bins = _gradient_bins(gx, gy)
    tol = 1e-9 * mag.max()
    rr, cc = np.indices((size, size))
    mask = np.hypot(rr - size / 2, cc - size / 2) < size * 0.4
    sites = rng.random((size, size)) < 0.01
    removable = rng.random((size, size)) < 0.8
    return {
        "nearest_sites": (sites,),
        "nms": (mag, bins, tol),
        "hysteresis": (mag, 0.1 * mag.max(), 0.3 * mag.max()),
        "bfs_refine": (mask, removable, sites),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=256)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    data = inputs(args.size)
    names = sorted(_kernels.BACKENDS)
    print(f"{args.size}x{args.size}, best of {args.repeat}")
    print(f"{'kernel':<15}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for kernel, call_args in data.items():
        times = {}
        for name in names:
            fn = getattr(_kernels.BACKENDS[name], kernel)
            times[name] = min(timeit.repeat(lambda: fn(*call_args), number=1, repeat=args.repeat))
        row = f"{kernel:<15}" + "".join(f"{times[n] * 1e3:>10.2f}ms" for n in names)
        if "cython" in times:
            row += f"{times['python'] / times['cython']:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
