"""Polyline geometry: self-intersection sweep, closure tests, bounds.

The intersection test is a spatial-hash sweep: segments are binned into
grid cells keyed by their bounding boxes, candidate pairs are collected per
cell, and the exact segment-pair predicate runs vectorized over the
candidates.  Adjacent segments of the same polyline (including the wrap
pair of a closed curve) share an endpoint by construction and are excluded.
"""

from __future__ import annotations

import numpy as np


def curve_diameter(points: np.ndarray) -> float:
    """Bounding-box diagonal of a complex polyline."""
    if points.size == 0:
        return 0.0
    dx = points.real.max() - points.real.min()
    dy = points.imag.max() - points.imag.min()
    return float(np.hypot(dx, dy))


def is_closed(points: np.ndarray, rel_tol: float = 1e-6) -> bool:
    """Endpoints match within rel_tol times the curve diameter."""
    d = curve_diameter(points)
    if d == 0.0:
        return True
    return bool(abs(points[0] - points[-1]) <= rel_tol * d)


def _orient(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _pairs_intersect(p0, p1, q0, q1) -> np.ndarray:
    """Vectorized proper-or-touching intersection test for segment pairs."""
    ax, ay = p0.real, p0.imag
    bx, by = p1.real, p1.imag
    cx, cy = q0.real, q0.imag
    dx, dy = q1.real, q1.imag
    d1 = _orient(cx, cy, dx, dy, ax, ay)
    d2 = _orient(cx, cy, dx, dy, bx, by)
    d3 = _orient(ax, ay, bx, by, cx, cy)
    d4 = _orient(ax, ay, bx, by, dx, dy)
    proper = ((d1 > 0) != (d2 > 0)) & ((d3 > 0) != (d4 > 0)) \
        & (d1 != 0) & (d2 != 0) & (d3 != 0) & (d4 != 0)

    def on_seg(ox, oy, ux, uy, vx, vy):
        return (
            (np.minimum(ox, ux) <= vx) & (vx <= np.maximum(ox, ux))
            & (np.minimum(oy, uy) <= vy) & (vy <= np.maximum(oy, uy))
        )

    touch = ((d1 == 0) & on_seg(cx, cy, dx, dy, ax, ay)) \
        | ((d2 == 0) & on_seg(cx, cy, dx, dy, bx, by)) \
        | ((d3 == 0) & on_seg(ax, ay, bx, by, cx, cy)) \
        | ((d4 == 0) & on_seg(ax, ay, bx, by, dx, dy))
    return proper | touch


def find_intersections(curves, closed=None, max_report: int = 32):
    """All intersecting segment pairs among a family of complex polylines.

    ``curves`` is a sequence of complex ndarrays; ``closed`` flags (optional)
    extend the adjacency exclusion across the wrap of closed curves.  Returns
    a list of ((curve_i, seg_i), (curve_j, seg_j)) pairs, at most
    ``max_report`` entries.
    """
    if closed is None:
        closed = [False] * len(curves)
    p0s, p1s, cid, sid, nseg = [], [], [], [], []
    for k, c in enumerate(curves):
        c = np.asarray(c, dtype=np.complex128)
        if c.size < 2:
            nseg.append(0)
            continue
        p0s.append(c[:-1])
        p1s.append(c[1:])
        cid.append(np.full(c.size - 1, k))
        sid.append(np.arange(c.size - 1))
        nseg.append(c.size - 1)
    if not p0s:
        return []
    p0 = np.concatenate(p0s)
    p1 = np.concatenate(p1s)
    cid = np.concatenate(cid)
    sid = np.concatenate(sid)

    xmin = np.minimum(p0.real, p1.real)
    xmax = np.maximum(p0.real, p1.real)
    ymin = np.minimum(p0.imag, p1.imag)
    ymax = np.maximum(p0.imag, p1.imag)
    lengths = np.abs(p1 - p0)
    cell = max(2.0 * np.median(lengths[lengths > 0]), 1e-300)

    buckets: dict[tuple[int, int], list[int]] = {}
    ix0 = np.floor(xmin / cell).astype(np.int64)
    ix1 = np.floor(xmax / cell).astype(np.int64)
    iy0 = np.floor(ymin / cell).astype(np.int64)
    iy1 = np.floor(ymax / cell).astype(np.int64)
    for s in range(p0.size):
        for gx in range(ix0[s], ix1[s] + 1):
            for gy in range(iy0[s], iy1[s] + 1):
                buckets.setdefault((gx, gy), []).append(s)

    cand = set()
    for members in buckets.values():
        m = len(members)
        if m < 2:
            continue
        for a in range(m):
            for b in range(a + 1, m):
                i, j = members[a], members[b]
                if i > j:
                    i, j = j, i
                cand.add((i, j))
    if not cand:
        return []
    ii = np.fromiter((c[0] for c in cand), dtype=np.int64, count=len(cand))
    jj = np.fromiter((c[1] for c in cand), dtype=np.int64, count=len(cand))

    same = cid[ii] == cid[jj]
    gap = np.abs(sid[ii] - sid[jj])
    adjacent = same & (gap <= 1)
    for k, cl in enumerate(closed):
        if cl and nseg[k] > 2:
            wrap = same & (cid[ii] == k) & (gap == nseg[k] - 1)
            adjacent |= wrap
    keep = ~adjacent
    ii, jj = ii[keep], jj[keep]
    if ii.size == 0:
        return []
    hits = _pairs_intersect(p0[ii], p1[ii], p0[jj], p1[jj])
    out = []
    for i, j in zip(ii[hits], jj[hits]):
        out.append(((int(cid[i]), int(sid[i])), (int(cid[j]), int(sid[j]))))
        if len(out) >= max_report:
            break
    return out


def mirror_fit(u: np.ndarray, v: np.ndarray):
    """Fit the anti-conformal involution v = b - conj(c) * conj(u).

    Returns (c, b, max residual).  For a mirror symmetry |c| = 1 and the
    axis passes through b/ (1 + conj(c)) directions; callers only need the
    residual and |c|.
    """
    du = np.conj(u - u[0])
    dv = v - v[0]
    mask = np.abs(du) > 1e-12 * np.abs(du).max()
    c_est = np.median((-dv[mask] / du[mask]).real) + 1j * np.median(
        (-dv[mask] / du[mask]).imag
    )
    b_est = np.median((v + c_est * np.conj(u)).real) + 1j * np.median(
        (v + c_est * np.conj(u)).imag
    )
    res = np.abs(v - (b_est - c_est * np.conj(u))).max()
    return c_est, b_est, float(res)
