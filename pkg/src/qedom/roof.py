"""Roof-field derivative in closed form, and the roof function by path integration.

The pullback roof function v lives on the rectangle
G = (0, 4w) x (0, Im w') and is recovered from its holomorphic z-derivative:

* doubly connected family:  v_z = -i wp(z) + i c0,  one double pole per
  period at the lattice points of (2w, 2w');
* periodic family:          v_z = -i wp(z) / (1 + c wp(z)) + i c0,  simple
  poles at +-i*eps (mod the lattice), with small real c = -1/wp(i eps).

c0 places the two critical points at w + i Im(w')/2 and 3w + i Im(w')/2.
v itself is v(z) = base_value + 2 Re \int v_z dz along singularity-avoiding
paths; the antiderivative also has a closed form (used as an independent
cross-check), built from zeta for the first family and from log|sigma|
ratios for the second.

A RoofField is immutable after construction and every evaluator is a pure
function, so concurrent use needs no locking; the anchor integrals behind
``boundary_constants`` are computed once at build time.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .elliptic import Lattice, sigma_w, wp, wp_prime, zeta_w
from .errors import RoofConstructionError
from .quadrature import build_avoiding_path, integrate_path

_CRIT_TOL = 1e-10


class DomainKind(enum.Enum):
    TypeI = "i"
    TypeII = "ii"


@dataclass(frozen=True)
class RoofField:
    kind: DomainKind
    lat: Lattice
    c0: float
    c_pole: float | None
    epsilon: float | None
    boundary_constants: tuple[float, float]
    base_point: complex
    base_value: float

    @property
    def rect_width(self) -> float:
        # the construction rectangle spans two real periods of the field
        return 4.0 * self.half_omega

    @property
    def rect_height(self) -> float:
        return self.lat.half_period_imag

    @property
    def half_omega(self) -> float:
        # the scale w: the field's real period is 2w
        return self.lat.half_period_real

    @property
    def critical_points(self) -> tuple[complex, complex]:
        w = self.half_omega
        h = self.rect_height
        return (w + 0.5j * h, 3.0 * w + 0.5j * h)

    def singular_points(self, pad: int = 1) -> np.ndarray:
        """Poles of v_z in and around the rectangle G (pad extra cells)."""
        w = self.half_omega
        h = self.rect_height
        ms = np.arange(-pad, 2 + pad + 1)
        ns = np.arange(-pad, pad + 1)
        base = (2.0 * w * ms[:, None] + 2j * h * ns[None, :]).ravel()
        if self.kind is DomainKind.TypeI:
            return base
        return np.concatenate([base + 1j * self.epsilon, base - 1j * self.epsilon])


def build_roof(kind: DomainKind, lat: Lattice, epsilon: float | None = None) -> RoofField:
    """Determine the construction constants and anchor the roof function."""
    w = lat.half_period_real
    h = lat.half_period_imag
    crit = w + 0.5j * h

    if kind is DomainKind.TypeI:
        if epsilon is not None:
            raise RoofConstructionError("epsilon is only meaningful for the periodic family")
        p_crit = wp(crit, lat)
        if abs(p_crit.imag) > 1e-10 * (1.0 + abs(p_crit)):
            raise RoofConstructionError(
                f"wp at the critical point is not real: {p_crit}"
            )
        c0 = p_crit.real
        c_pole = None
    elif kind is DomainKind.TypeII:
        if epsilon is None:
            raise RoofConstructionError("the periodic family requires epsilon")
        if not (0.0 < epsilon < 0.5 * h):
            raise RoofConstructionError(
                f"epsilon must lie in (0, {0.5 * h}), got {epsilon}"
            )
        p_eps = wp(1j * epsilon, lat)
        if abs(p_eps) < 1e-12:
            raise RoofConstructionError("wp(i eps) vanishes; pole coefficient undefined")
        if abs(p_eps.imag) > 1e-10 * abs(p_eps):
            raise RoofConstructionError(f"wp(i eps) is not real: {p_eps}")
        c_pole = -1.0 / p_eps.real
        p_crit = wp(crit, lat)
        if abs(c_pole * p_crit) >= 1.0:
            raise RoofConstructionError(
                "pole coefficient too large: |c wp| >= 1 at the critical point"
            )
        c0c = p_crit / (1.0 + c_pole * p_crit)
        if abs(c0c.imag) > 1e-10 * (1.0 + abs(c0c)):
            raise RoofConstructionError(f"critical-point constant is not real: {c0c}")
        c0 = c0c.real
    else:  # pragma: no cover - exhaustive enum
        raise RoofConstructionError(f"unknown kind {kind}")

    rf = RoofField(
        kind=kind, lat=lat, c0=c0, c_pole=c_pole, epsilon=epsilon,
        boundary_constants=(0.0, 0.0), base_point=complex(w), base_value=0.0,
    )

    # both prescribed critical points must be zeros of the field
    for pt in rf.critical_points:
        r = abs(v_z(rf, pt))
        if r > _CRIT_TOL * (1.0 + abs(c0)):
            raise RoofConstructionError(
                f"critical-point residual {r:.3e} at {pt} exceeds {_CRIT_TOL}"
            )

    # side constants: integrate up the pole-free vertical line Re z = w,
    # then shift so the smaller side constant is zero (v > 0 inside).
    top = complex(w, h)
    delta = 2.0 * integrate_path(lambda z: v_z(rf, z), [complex(w), top]).real
    if delta >= 0.0:
        consts = (0.0, delta)
        base_value = 0.0
    else:
        consts = (-delta, 0.0)
        base_value = -delta
    object.__setattr__(rf, "boundary_constants", consts)
    object.__setattr__(rf, "base_value", base_value)
    return rf


def v_z(rf: RoofField, z):
    """Holomorphic derivative of the roof function (vectorized)."""
    arr = np.asarray(z, dtype=np.complex128)
    scalar = np.isscalar(z) or arr.shape == ()
    flat = arr.ravel()
    if rf.kind is DomainKind.TypeI:
        out = -1j * wp(flat, rf.lat) + 1j * rf.c0
    else:
        c = rf.c_pole
        g1 = rf.lat.generators[0]
        g3 = rf.lat.generators[1]
        m = np.round(flat.real / g1.real)
        n = np.round(flat.imag / g3.imag)
        zr = flat - m * g1 - n * g3
        near = np.abs(zr) < 1e-4
        out = np.empty_like(flat)
        if np.any(~near):
            p = wp(flat[~near], rf.lat)
            out[~near] = -1j * p / (1.0 + c * p) + 1j * rf.c0
        if np.any(near):
            # regular point of the field but a pole of wp: use 1/wp series
            zr2 = zr[near] ** 2
            g2 = rf.lat.invariants_g2
            g3i = rf.lat.invariants_g3
            inv_p = zr2 * (1.0 - g2 * zr2**2 / 20.0 - g3i * zr2**3 / 28.0)
            out[near] = -1j / (inv_p + c) + 1j * rf.c0
    return complex(out[0]) if scalar else out.reshape(arr.shape)


def v_z_prime(rf: RoofField, z):
    """Derivative of v_z (used by argument-principle contour counts)."""
    arr = np.asarray(z, dtype=np.complex128)
    scalar = np.isscalar(z) or arr.shape == ()
    flat = arr.ravel()
    pp = wp_prime(flat, rf.lat)
    if rf.kind is DomainKind.TypeI:
        out = -1j * pp
    else:
        c = rf.c_pole
        p = wp(flat, rf.lat)
        out = -1j * pp / (1.0 + c * p) ** 2
    return complex(out[0]) if scalar else out.reshape(arr.shape)


def v_value(rf: RoofField, z: complex, path_hint=None, tol: float = 1e-11) -> float:
    """Roof-function value by path integration of v_z.

    The default path is a dog-leg from the anchor on the bottom side through
    the mid-height line, offset around pole columns; pass ``path_hint`` (a
    waypoint sequence ending at z) to override.
    """
    if path_hint is not None:
        path = list(path_hint)
        if path[0] != rf.base_point:
            path = [rf.base_point] + path
        if path[-1] != z:
            path = path + [z]
    else:
        clearance = 0.04 * min(2.0 * rf.half_omega, rf.rect_height)
        path = build_avoiding_path(
            rf.base_point, z, rf.singular_points(),
            clearance=clearance, highway_im=0.5 * rf.rect_height,
        )
    integral = integrate_path(lambda t: v_z(rf, t), path, tol=tol)
    return rf.base_value + 2.0 * integral.real


def v_closed_form(rf: RoofField, z):
    """Closed-form antiderivative route to v (independent of quadrature).

    For the doubly connected family v = -2 Im zeta(z) - 2 c0 Im z + C; for
    the periodic family the partial-fraction integral of v_z gives
    v = 2a (log|sigma(z - i eps)| - log|sigma(z + i eps)|) + b Im z + C.
    Used as the cross-check oracle for ``v_value`` and to grid v cheaply.
    """
    arr = np.asarray(z, dtype=np.complex128)
    scalar = np.isscalar(z) or arr.shape == ()
    flat = arr.ravel()
    if rf.kind is DomainKind.TypeI:
        raw = -2.0 * np.imag(zeta_w(flat, rf.lat)) - 2.0 * rf.c0 * flat.imag
        base_raw = (
            -2.0 * np.imag(zeta_w(rf.base_point, rf.lat))
            - 2.0 * rf.c0 * rf.base_point.imag
        )
    else:
        a = 1j * rf.epsilon
        p_eps = wp(a, rf.lat).real
        coef = p_eps / (rf.c_pole * wp_prime(a, rf.lat))  # purely imaginary
        if abs(coef.real) > 1e-9 * abs(coef):
            raise RoofConstructionError(
                f"log coefficient not purely imaginary: {coef}"
            )
        alpha = coef.imag
        zeta_a = zeta_w(a, rf.lat)
        lin = 1.0 / rf.c_pole + 2.0 * (coef * zeta_a).real - rf.c0

        def raw_at(pts):
            s_m = np.abs(sigma_w(pts - a, rf.lat))
            s_p = np.abs(sigma_w(pts + a, rf.lat))
            return 2.0 * alpha * (np.log(s_m) - np.log(s_p)) + 2.0 * lin * np.imag(pts)

        raw = raw_at(flat)
        base_raw = raw_at(np.array([rf.base_point], dtype=np.complex128))[0]
    out = raw - base_raw + rf.base_value
    return float(out[0]) if scalar else out.reshape(arr.shape)


def pole_residue(rf: RoofField) -> float:
    """Residue of v_z at i*eps (closed form; real and negative).

    The matching pole at 2w + i*eps carries the same residue by periodicity.
    """
    if rf.kind is not DomainKind.TypeII:
        raise RoofConstructionError("residues exist only for the periodic family")
    a = 1j * rf.epsilon
    res = -1j * wp(a, rf.lat) / (rf.c_pole * wp_prime(a, rf.lat))
    if abs(res.imag) > 1e-9 * abs(res):
        raise RoofConstructionError(f"pole residue is not real: {res}")
    return float(res.real)


def saddle_value(rf: RoofField) -> float:
    """Roof-function value at the critical points (both are equal)."""
    return v_closed_form(rf, rf.critical_points[0])


def side_constant_residuals(rf: RoofField, n: int = 16) -> tuple[float, float]:
    """Max deviation of v from its side constant along each horizontal side."""
    w = rf.half_omega
    h = rf.rect_height
    xs = np.linspace(0.35 * w, 3.65 * w, n)
    bot = max(
        abs(v_value(rf, complex(x)) - rf.boundary_constants[0]) for x in xs
    )
    top = max(
        abs(v_value(rf, complex(x, h)) - rf.boundary_constants[1]) for x in xs
    )
    return (bot, top)
