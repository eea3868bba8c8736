"""Slow independent oracles used only by the test suite.

Direct lattice sums (Eisenstein series, Laurent-style wp/zeta sums, the
sigma product) truncated over a symmetric square of lattice indices.  The
symmetric truncation pairs w with -w so the conditionally convergent pieces
cancel exactly; the remaining truncation error scales like R^-2 for the
wp/zeta/sigma sums and R^-2 relative for g2/g3.  Comparison tolerances in
the tests carry that limit (the implementation itself is pinned much
tighter by the identity battery).

Also: composite Simpson on complex segments, central finite differences.
"""

from __future__ import annotations

import numpy as np


def _lattice_points(gen1: complex, gen2: complex, radius: int):
    m, n = np.meshgrid(
        np.arange(-radius, radius + 1), np.arange(-radius, radius + 1)
    )
    w = m.ravel() * gen1 + n.ravel() * gen2
    nz = w != 0
    return w[nz]


def g2_series(gen1: complex, gen2: complex, radius: int = 200) -> complex:
    w = _lattice_points(gen1, gen2, radius)
    return 60.0 * np.sum(w**-4.0)


def g3_series(gen1: complex, gen2: complex, radius: int = 200) -> complex:
    w = _lattice_points(gen1, gen2, radius)
    return 140.0 * np.sum(w**-6.0)


def wp_series(z: complex, gen1: complex, gen2: complex, radius: int = 300) -> complex:
    w = _lattice_points(gen1, gen2, radius)
    return 1.0 / z**2 + np.sum(1.0 / (z - w) ** 2 - 1.0 / w**2)


def wp_prime_series(z: complex, gen1: complex, gen2: complex, radius: int = 300) -> complex:
    w = _lattice_points(gen1, gen2, radius)
    return -2.0 / z**3 - 2.0 * np.sum(1.0 / (z - w) ** 3)


def zeta_series(z: complex, gen1: complex, gen2: complex, radius: int = 300) -> complex:
    w = _lattice_points(gen1, gen2, radius)
    return 1.0 / z + np.sum(1.0 / (z - w) + 1.0 / w + z / w**2)


def sigma_product(z: complex, gen1: complex, gen2: complex, radius: int = 200) -> complex:
    w = _lattice_points(gen1, gen2, radius)
    # log-space product for stability
    terms = np.log1p(-z / w) + z / w + z**2 / (2.0 * w**2)
    return z * np.exp(np.sum(terms))


def simpson_path(fun, z0: complex, z1: complex, n: int = 512) -> complex:
    """Composite Simpson along the straight segment z0 -> z1 (n even)."""
    if n % 2:
        n += 1
    t = np.linspace(0.0, 1.0, n + 1)
    z = z0 + (z1 - z0) * t
    f = fun(z)
    h = 1.0 / n
    s = f[0] + f[-1] + 4.0 * np.sum(f[1:-1:2]) + 2.0 * np.sum(f[2:-1:2])
    return s * h / 3.0 * (z1 - z0)


def central_diff(fun, z: complex, h: float = 1e-6) -> complex:
    """Complex-plane central difference along the real direction."""
    return (fun(z + h) - fun(z - h)) / (2.0 * h)


def cauchy_riemann_residual(fun, z: complex, h: float = 1e-6) -> float:
    """|d/dx f + i d/dy f| at z; zero for holomorphic f."""
    dx = (fun(z + h) - fun(z - h)) / (2.0 * h)
    dy = (fun(z + 1j * h) - fun(z - 1j * h)) / (2.0 * h)
    return abs(dx + 1j * dy)
