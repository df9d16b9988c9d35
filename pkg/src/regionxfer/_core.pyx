# cython: cdivision=True, boundscheck=False, wraparound=False, initializedcheck=False, nonecheck=False
"""Compiled kernels; see ``_purepy`` for the reference semantics."""

import numpy as np
cimport cython
from libc.stdint cimport int64_t, uint8_t


@cython.cdivision(True)
cdef inline int64_t _sep(int64_t ci, int64_t cu, int64_t i, int64_t u, int64_t k2) noexcept nogil:
    # floor division by a positive denominator; the numerator may be negative
    cdef int64_t num = cu - ci + k2 * (u * u - i * i)
    cdef int64_t den = 2 * k2 * (u - i)
    cdef int64_t quo = num / den
    if num % den != 0 and num < 0:
        quo -= 1
    return quo


def nearest_sites(sites):
    cdef uint8_t[:, ::1] s = np.ascontiguousarray(sites, dtype=np.uint8)
    cdef Py_ssize_t h = s.shape[0], w = s.shape[1]
    out_r_arr = np.full((h, w), -1, dtype=np.int64)
    out_c_arr = np.full((h, w), -1, dtype=np.int64)
    cdef int64_t[:, ::1] out_r = out_r_arr
    cdef int64_t[:, ::1] out_c = out_c_arr
    if h == 0 or w == 0 or not np.asarray(s).any():
        return out_r_arr, out_c_arr

    cdef int64_t k = max(h, w) + 1
    cdef int64_t k2 = k * k
    g_arr = np.full((h, w), -1, dtype=np.int64)
    srow_arr = np.full((h, w), -1, dtype=np.int64)
    above_arr = np.empty(h, dtype=np.int64)
    cdef int64_t[:, ::1] g = g_arr
    cdef int64_t[:, ::1] srow = srow_arr
    cdef int64_t[::1] above = above_arr
    cdef Py_ssize_t r, c, x
    cdef int64_t last, a, best

    with nogil:
        for c in range(w):
            last = -1
            for r in range(h):
                if s[r, c]:
                    last = r
                above[r] = last
            last = -1
            for r in range(h - 1, -1, -1):
                if s[r, c]:
                    last = r
                a = above[r]
                if a < 0 and last < 0:
                    continue
                if a >= 0 and (last < 0 or r - a <= last - r):
                    best = a
                else:
                    best = last
                g[r, c] = (r - best) * (r - best)
                srow[r, c] = best

    cols_arr = np.empty(w, dtype=np.int64)
    const_arr = np.empty(w, dtype=np.int64)
    sv_arr = np.empty(w, dtype=np.int64)
    tv_arr = np.empty(w, dtype=np.int64)
    cdef int64_t[::1] cols = cols_arr
    cdef int64_t[::1] const = const_arr
    cdef int64_t[::1] sv = sv_arr
    cdef int64_t[::1] tv = tv_arr
    cdef Py_ssize_t n, j, q
    cdef int64_t u, wpos, tq, sq, cc

    with nogil:
        for r in range(h):
            n = 0
            for c in range(w):
                if g[r, c] >= 0:
                    cols[n] = c
                    const[c] = k2 * g[r, c] + srow[r, c] * k + c
                    n += 1
            if n == 0:
                continue
            q = 0
            sv[0] = cols[0]
            tv[0] = 0
            for j in range(1, n):
                u = cols[j]
                while q >= 0:
                    tq = tv[q]
                    sq = sv[q]
                    if k2 * (tq - sq) * (tq - sq) + const[sq] > k2 * (tq - u) * (tq - u) + const[u]:
                        q -= 1
                    else:
                        break
                if q < 0:
                    q = 0
                    sv[0] = u
                    tv[0] = 0
                else:
                    wpos = 1 + _sep(const[sv[q]], const[u], sv[q], u, k2)
                    if wpos < w:
                        q += 1
                        sv[q] = u
                        tv[q] = wpos
            for x in range(w - 1, -1, -1):
                cc = sv[q]
                out_c[r, x] = cc
                out_r[r, x] = srow[r, cc]
                if x == tv[q]:
                    q -= 1
    return out_r_arr, out_c_arr


def nms(mag, bins, double tol):
    cdef double[:, ::1] m = np.ascontiguousarray(mag, dtype=np.float64)
    cdef uint8_t[:, ::1] b = np.ascontiguousarray(bins, dtype=np.uint8)
    cdef Py_ssize_t h = m.shape[0], w = m.shape[1]
    out_arr = np.zeros((h, w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t r, c, dr, dc
    cdef double v, fwd, back
    if h < 3 or w < 3:
        return out_arr
    with nogil:
        for r in range(1, h - 1):
            for c in range(1, w - 1):
                v = m[r, c]
                if not v > tol:
                    continue
                if b[r, c] == 0:
                    dr = 0
                    dc = 1
                elif b[r, c] == 1:
                    dr = 1
                    dc = 1
                elif b[r, c] == 2:
                    dr = 1
                    dc = 0
                else:
                    dr = 1
                    dc = -1
                fwd = m[r + dr, c + dc]
                back = m[r - dr, c - dc]
                if v - back > tol and fwd - v <= tol:
                    out[r, c] = v
    return out_arr


def hysteresis(thin, double low, double high):
    cdef double[:, ::1] t = np.ascontiguousarray(thin, dtype=np.float64)
    cdef Py_ssize_t h = t.shape[0], w = t.shape[1]
    out_arr = np.zeros((h, w), dtype=np.uint8)
    stack_arr = np.empty(h * w, dtype=np.int64)
    cdef uint8_t[:, ::1] out = out_arr
    cdef int64_t[::1] stack = stack_arr
    cdef Py_ssize_t top = 0, r, c, rr, cc, nr, nc
    cdef int64_t idx
    cdef double v
    with nogil:
        for r in range(h):
            for c in range(w):
                v = t[r, c]
                if v > 0 and v >= low and v >= high and not out[r, c]:
                    out[r, c] = 1
                    stack[top] = r * w + c
                    top += 1
                    while top > 0:
                        top -= 1
                        idx = stack[top]
                        rr = idx // w
                        cc = idx % w
                        for nr in range(rr - 1, rr + 2):
                            if nr < 0 or nr >= h:
                                continue
                            for nc in range(cc - 1, cc + 2):
                                if nc < 0 or nc >= w or out[nr, nc]:
                                    continue
                                v = t[nr, nc]
                                if v > 0 and v >= low:
                                    out[nr, nc] = 1
                                    stack[top] = nr * w + nc
                                    top += 1
    return out_arr


def bfs_refine(mask, removable, barrier):
    cdef uint8_t[:, ::1] m = np.ascontiguousarray(mask, dtype=np.uint8)
    cdef uint8_t[:, ::1] rem = np.ascontiguousarray(removable, dtype=np.uint8)
    cdef uint8_t[:, ::1] bar = np.ascontiguousarray(barrier, dtype=np.uint8)
    cdef Py_ssize_t h = m.shape[0], w = m.shape[1]
    out_arr = (np.asarray(m) != 0).astype(np.uint8)
    visited_arr = np.zeros((h, w), dtype=np.uint8)
    # each pixel is queued at most once per 4-neighbor plus once as a seed
    queue_arr = np.empty(5 * h * w + 1, dtype=np.int64)
    cdef uint8_t[:, ::1] out = out_arr
    cdef uint8_t[:, ::1] visited = visited_arr
    cdef int64_t[::1] queue = queue_arr
    cdef Py_ssize_t head = 0, tail = 0, r, c, nr, nc, k
    cdef int64_t idx
    cdef int dr[4]
    cdef int dc[4]
    dr[:] = [-1, 1, 0, 0]
    dc[:] = [0, 0, -1, 1]
    with nogil:
        for r in range(h):
            for c in range(w):
                if not m[r, c]:
                    continue
                if (r == 0 or c == 0 or r == h - 1 or c == w - 1
                        or not m[r - 1, c] or not m[r + 1, c]
                        or not m[r, c - 1] or not m[r, c + 1]):
                    queue[tail] = r * w + c
                    tail += 1
        while head < tail:
            idx = queue[head]
            head += 1
            r = idx // w
            c = idx % w
            if visited[r, c]:
                continue
            visited[r, c] = 1
            if not rem[r, c]:
                continue
            out[r, c] = 0
            if bar[r, c]:
                continue
            for k in range(4):
                nr = r + dr[k]
                nc = c + dc[k]
                if 0 <= nr < h and 0 <= nc < w and m[nr, nc] and not visited[nr, nc]:
                    queue[tail] = nr * w + nc
                    tail += 1
    return out_arr
