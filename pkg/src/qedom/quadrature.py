"""Adaptive contour quadrature and path utilities.

Complex line integrals are computed with a vectorized adaptive
Gauss-Kronrod (G7, K15) rule: all active sub-segments are evaluated in one
batched call to the integrand, segments whose K15-G7 discrepancy exceeds
their error budget are bisected, and the budget is split proportionally so
the per-segment tolerance is respected by the sum of the parts.

Paths are polylines of straight segments.  ``build_avoiding_path``
constructs a deterministic dog-leg between two points that keeps a stated
clearance from a list of singular points, detouring through a horizontal
"highway" and offsetting vertical legs sideways when they would otherwise
run over a pole column.
"""

from __future__ import annotations

import numpy as np

from .errors import PathError, QuadratureError

# G7/K15 nodes and weights on [-1, 1]; Gauss points are the odd-index nodes.
_XK = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0, 0.207784955007898, 0.405845151377397,
    0.586087235467691, 0.741531185599394, 0.864864423359769,
    0.949107912342759, 0.991455371120813,
])
_WK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529,
])
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870,
])
_GIDX = np.arange(1, 15, 2)


def integrate_segments(fun, z0, z1, tol: float = 1e-10, max_rounds: int = 48,
                       limit: int = 200_000):
    """Integrate ``fun`` along each straight segment z0[i] -> z1[i].

    ``fun`` must accept a flat complex ndarray and return values of the same
    shape.  Returns a complex ndarray of per-segment integrals (scalar in,
    scalar out).  ``tol`` is the absolute error budget per input segment.
    """
    a = np.atleast_1d(np.asarray(z0, dtype=np.complex128))
    b = np.atleast_1d(np.asarray(z1, dtype=np.complex128))
    if a.shape != b.shape:
        raise ValueError("segment endpoint arrays must have equal shape")
    scalar = np.isscalar(z0) or np.asarray(z0).shape == ()
    n = a.size
    result = np.zeros(n, dtype=np.complex128)

    act_a, act_b = a.copy(), b.copy()
    act_idx = np.arange(n)
    act_tol = np.full(n, tol)

    for _ in range(max_rounds):
        if act_a.size == 0:
            break
        if act_a.size > limit:
            raise QuadratureError(
                f"adaptive quadrature exceeded {limit} active sub-segments"
            )
        mid = 0.5 * (act_a + act_b)
        half = 0.5 * (act_b - act_a)
        nodes = mid[:, None] + half[:, None] * _XK[None, :]
        f = np.asarray(fun(nodes.ravel()), dtype=np.complex128).reshape(nodes.shape)
        if not np.all(np.isfinite(f)):
            raise QuadratureError("integrand returned non-finite values on path")
        k15 = half * (f @ _WK)
        g7 = half * (f[:, _GIDX] @ _WG)
        err = np.abs(k15 - g7)
        # noise floor: |K15 - G7| cannot beat the integrand's own evaluation
        # noise, which scales with the integral of |f| (not with |K15|,
        # where cancellation hides it)
        resabs = np.abs(half) * (np.abs(f) @ _WK)
        floor = 2e-12 * resabs
        done = (err <= np.maximum(act_tol, floor)) | (
            np.abs(half) <= 1e-14 * (1.0 + np.abs(mid))
        )
        np.add.at(result, act_idx[done], k15[done])
        if np.all(done):
            act_a = act_a[:0]
            break
        keep = ~done
        ka, kb, ki, kt = act_a[keep], act_b[keep], act_idx[keep], act_tol[keep]
        km = 0.5 * (ka + kb)
        act_a = np.concatenate([ka, km])
        act_b = np.concatenate([km, kb])
        act_idx = np.concatenate([ki, ki])
        act_tol = np.concatenate([0.5 * kt, 0.5 * kt])
    else:
        raise QuadratureError("adaptive quadrature failed to converge")

    return complex(result[0]) if scalar else result.reshape(np.asarray(z0).shape)


def integrate_path(fun, waypoints, tol: float = 1e-10) -> complex:
    """Integral of ``fun`` along the polyline through ``waypoints``."""
    pts = np.asarray(waypoints, dtype=np.complex128)
    if pts.size < 2:
        return 0.0 + 0.0j
    vals = integrate_segments(fun, pts[:-1], pts[1:], tol=tol)
    return complex(np.sum(vals))


def integrate_circle(fun, center: complex, radius: float, tol: float = 1e-10,
                     n_arcs: int = 8) -> complex:
    """Counterclockwise contour integral of ``fun`` over a circle."""
    th = np.linspace(0.0, 2.0 * np.pi, n_arcs + 1)

    def g(t):
        z = center + radius * np.exp(1j * t)
        return fun(z) * 1j * radius * np.exp(1j * t)

    vals = integrate_segments(g, th[:-1].astype(complex), th[1:].astype(complex),
                              tol=tol / n_arcs)
    return complex(np.sum(vals))


def cumulative_integral(fun, points, tol: float = 1e-12) -> np.ndarray:
    """Antiderivative values of ``fun`` at polyline vertices, zero at the first."""
    pts = np.asarray(points, dtype=np.complex128)
    segs = integrate_segments(fun, pts[:-1], pts[1:], tol=tol)
    out = np.empty(pts.size, dtype=np.complex128)
    out[0] = 0.0
    np.cumsum(segs, out=out[1:])
    return out


def segment_clearance(z0: complex, z1: complex, points) -> float:
    """Minimum distance from segment [z0, z1] to any of ``points``."""
    pts = np.asarray(points, dtype=np.complex128)
    if pts.size == 0:
        return np.inf
    d = z1 - z0
    den = abs(d) ** 2
    if den == 0.0:
        return float(np.min(np.abs(pts - z0)))
    t = np.clip(((pts - z0) * np.conj(d)).real / den, 0.0, 1.0)
    return float(np.min(np.abs(pts - (z0 + t * d))))


def path_clearance(waypoints, points) -> float:
    pts = list(waypoints)
    return min(
        segment_clearance(pts[i], pts[i + 1], points) for i in range(len(pts) - 1)
    )


def build_avoiding_path(z0: complex, z1: complex, singularities,
                        clearance: float, highway_im: float) -> list[complex]:
    """Deterministic polyline from z0 to z1 keeping ``clearance`` from poles.

    Candidates, in order: the straight segment; an L/U path through the
    horizontal line Im z = highway_im; the same with the vertical legs
    offset sideways (both signs) when they would run over a pole column.
    """
    sing = np.asarray(singularities, dtype=np.complex128)
    if segment_clearance(z0, z1, sing) >= clearance:
        return [z0, z1]
    candidates = []
    h0 = complex(z0.real, highway_im)
    h1 = complex(z1.real, highway_im)
    candidates.append([z0, h0, h1, z1])
    step = 4.0 * clearance
    for s0 in (0.0, step, -step):
        for s1 in (0.0, step, -step):
            p = [z0, complex(z0.real + s0, z0.imag), complex(z0.real + s0, highway_im),
                 complex(z1.real + s1, highway_im), complex(z1.real + s1, z1.imag), z1]
            candidates.append(p)
    for path in candidates:
        if path_clearance(path, sing) >= clearance:
            return path
    raise PathError(
        f"no integration path from {z0} to {z1} clears the singular set"
    )


def winding_number(fun, param_to_z, t0: float, t1: float, n0: int = 256,
                   max_points: int = 65536) -> float:
    """Winding of ``fun`` along the closed curve t -> param_to_z(t), t in [t0, t1].

    Samples the curve, sums principal-value argument increments, and refines
    wherever a step turns by more than pi/2 until the increments are resolved.
    Returns the (real) total turning divided by 2*pi.
    """
    t = np.linspace(t0, t1, n0 + 1)
    f = np.asarray(fun(param_to_z(t)), dtype=np.complex128)
    while True:
        dphi = np.angle(f[1:] / f[:-1])
        bad = np.abs(dphi) > 0.5 * np.pi
        if not np.any(bad):
            return float(np.sum(dphi) / (2.0 * np.pi))
        if t.size > max_points:
            raise QuadratureError(
                "winding-number refinement exceeded the sample budget "
                "(contour passes too close to a zero or pole)"
            )
        tm = 0.5 * (t[:-1][bad] + t[1:][bad])
        fm = np.asarray(fun(param_to_z(tm)), dtype=np.complex128)
        t = np.insert(t, np.flatnonzero(bad) + 1, tm)
        f = np.insert(f, np.flatnonzero(bad) + 1, fm)


def rect_param(corner0: complex, corner1: complex):
    """Parametrization of the axis-aligned rectangle boundary (ccw), t in [0, 4]."""
    x0, y0 = corner0.real, corner0.imag
    x1, y1 = corner1.real, corner1.imag

    def pz(t):
        t = np.asarray(t, dtype=np.float64)
        t = np.mod(t, 4.0)
        z = np.empty(t.shape, dtype=np.complex128)
        m = t < 1.0
        z[m] = x0 + (x1 - x0) * t[m] + 1j * y0
        m = (t >= 1.0) & (t < 2.0)
        z[m] = x1 + 1j * (y0 + (y1 - y0) * (t[m] - 1.0))
        m = (t >= 2.0) & (t < 3.0)
        z[m] = x1 + (x0 - x1) * (t[m] - 2.0) + 1j * y1
        m = t >= 3.0
        z[m] = x0 + 1j * (y1 + (y0 - y1) * (t[m] - 3.0))
        return z

    return pz


def circle_param(center: complex, radius: float):
    """Parametrization of a ccw circle, t in [0, 1]."""

    def pz(t):
        t = np.asarray(t, dtype=np.float64)
        return center + radius * np.exp(2j * np.pi * t)

    return pz
