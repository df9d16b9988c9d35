"""Pure-Python implementations of the hot kernels.

These mirror ``_core.pyx`` exactly and are used when the compiled extension
is unavailable (or when ``REGIONXFER_PURE_PYTHON=1``).
"""

from collections import deque

import numpy as np
from scipy import ndimage

# (drow, dcol) of the gradient direction for each quantized angle bin
NMS_OFFSETS = ((0, 1), (1, 1), (1, 0), (1, -1))


def nearest_sites(sites):
    """Nearest site of every pixel under exact Euclidean distance.

    Ties go to the smaller site row, then the smaller site column.  Returns
    ``(rows, cols)`` int64 arrays holding -1 when there are no sites.

    Separable two-pass algorithm.  The column pass finds the nearest site in
    each column (upper one on ties).  The row pass takes the lower envelope
    of the parabolas ``K^2 (x - c)^2 + C_c`` with
    ``C_c = K^2 g_c + row_c K + c``, which folds the tie-break keys into
    integers so no two parabolas are equal at an integer abscissa.
    """
    sites = np.asarray(sites, dtype=bool)
    h, w = sites.shape
    out_r = np.full((h, w), -1, dtype=np.int64)
    out_c = np.full((h, w), -1, dtype=np.int64)
    if not sites.any():
        return out_r, out_c

    k = max(h, w) + 1
    k2 = k * k
    # column pass: vertical squared distance and row of the chosen site
    g = [[-1] * w for _ in range(h)]
    srow = [[-1] * w for _ in range(h)]
    for c in range(w):
        col = sites[:, c].tolist()
        above = [-1] * h
        last = -1
        for r in range(h):
            if col[r]:
                last = r
            above[r] = last
        last = -1
        for r in range(h - 1, -1, -1):
            if col[r]:
                last = r
            a = above[r]
            if a < 0 and last < 0:
                continue
            if a >= 0 and (last < 0 or r - a <= last - r):
                best = a
            else:
                best = last
            g[r][c] = (r - best) * (r - best)
            srow[r][c] = best

    for r in range(h):
        gr = g[r]
        cols = [c for c in range(w) if gr[c] >= 0]
        if not cols:
            continue
        const = {c: k2 * gr[c] + srow[r][c] * k + c for c in cols}

        def f(x, c):
            return k2 * (x - c) * (x - c) + const[c]

        def sep(i, u):
            # last x at which parabola i is below parabola u (i < u)
            return (const[u] - const[i] + k2 * (u * u - i * i)) // (2 * k2 * (u - i))

        s = [0] * len(cols)
        t = [0] * len(cols)
        q = 0
        s[0] = cols[0]
        t[0] = 0
        for u in cols[1:]:
            while q >= 0 and f(t[q], s[q]) > f(t[q], u):
                q -= 1
            if q < 0:
                q = 0
                s[0] = u
                t[0] = 0
            else:
                wpos = 1 + sep(s[q], u)
                if wpos < w:
                    q += 1
                    s[q] = u
                    t[q] = wpos
        for x in range(w - 1, -1, -1):
            c = s[q]
            out_c[r, x] = c
            out_r[r, x] = srow[r][c]
            if x == t[q]:
                q -= 1
    return out_r, out_c


def nms(mag, bins, tol):
    """Non-maximum suppression along quantized gradient directions.

    A pixel survives when it exceeds its backward neighbor by more than
    ``tol`` and is not exceeded by its forward neighbor by more than ``tol``.
    Border pixels are suppressed.
    """
    mag = np.asarray(mag, dtype=np.float64)
    bins = np.asarray(bins)
    h, w = mag.shape
    out = np.zeros_like(mag)
    if h < 3 or w < 3:
        return out
    core = mag[1:-1, 1:-1]
    keep = np.zeros(core.shape, dtype=bool)
    for b, (dr, dc) in enumerate(NMS_OFFSETS):
        fwd = mag[1 + dr : h - 1 + dr, 1 + dc : w - 1 + dc]
        back = mag[1 - dr : h - 1 - dr, 1 - dc : w - 1 - dc]
        sel = bins[1:-1, 1:-1] == b
        keep |= sel & (core > tol) & (core - back > tol) & (fwd - core <= tol)
    out[1:-1, 1:-1] = np.where(keep, core, 0.0)
    return out


def hysteresis(thin, low, high):
    """8-connected hysteresis: weak pixels survive if linked to a strong one."""
    thin = np.asarray(thin, dtype=np.float64)
    weak = (thin > 0) & (thin >= low)
    strong = weak & (thin >= high)
    labels, n = ndimage.label(weak, structure=np.ones((3, 3), dtype=bool))
    if n == 0:
        return np.zeros(thin.shape, dtype=np.uint8)
    keep = np.zeros(n + 1, dtype=bool)
    keep[np.unique(labels[strong])] = True
    keep[0] = False
    return keep[labels].astype(np.uint8)


def bfs_refine(mask, removable, barrier):
    """Peel ``mask`` inward from its periphery.

    Seeds are mask pixels with a 4-neighbor outside the mask or outside the
    image, queued in row-major order.  A dequeued pixel that is
    ``removable`` is cleared; unless it is a ``barrier`` pixel its unvisited
    4-neighbors inside the mask are queued.  Non-removable pixels are skipped.
    """
    m = np.asarray(mask, dtype=bool)
    rem = np.asarray(removable, dtype=bool)
    bar = np.asarray(barrier, dtype=bool)
    h, w = m.shape
    out = m.astype(np.uint8)
    visited = np.zeros((h, w), dtype=bool)
    queue = deque()
    for r in range(h):
        for c in range(w):
            if not m[r, c]:
                continue
            if (
                r == 0 or c == 0 or r == h - 1 or c == w - 1
                or not m[r - 1, c] or not m[r + 1, c]
                or not m[r, c - 1] or not m[r, c + 1]
            ):
                queue.append((r, c))
    while queue:
        r, c = queue.popleft()
        if visited[r, c]:
            continue
        visited[r, c] = True
        if not rem[r, c]:
            continue
        out[r, c] = 0
        if bar[r, c]:
            continue
        for nr, nc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            if 0 <= nr < h and 0 <= nc < w and m[nr, nc] and not visited[nr, nc]:
                queue.append((nr, nc))
    return out
