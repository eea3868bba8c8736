"""Weierstrass sigma / zeta / wp / wp' on rectangular lattices.

Evaluation route: Jacobi theta-1 q-series in the reduced variable, after
argument reduction to the fundamental cell with quasi-periodicity
bookkeeping.  Half-period convention used throughout:

* a lattice has generators (P1, P3) with P1 > 0 real and P3 purely
  imaginary, Im P3 > 0;
* half-periods are w1 = P1/2, w3 = P3/2;
* eta1 = zeta(w1), eta3 = zeta(w3), and the Legendre relation reads
  eta1*w3 - eta3*w1 = i*pi/2.

eta3 is computed from the zeta series at w3 (not via Legendre), so the
Legendre identity remains a live consistency check on the whole kernel.

All evaluators are pure functions of (z, Lattice); a Lattice is immutable
after construction, so concurrent evaluation needs no synchronization.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import theta1_bundle
from .errors import LatticeParameterError, PoleProximityError

POLE_DISTANCE = 1e-13  # absolute pole-proximity cutoff
_NOME_LIMIT = 1.0 - 1e-6


class GeneratorChoice(enum.Enum):
    """Which generator pair to derive from the construction scale (w, Im w').

    The three lattices showing up in the domain constructions differ only
    in their real period: the roof field is elliptic on (2w, 2w'), while
    the boundary factor and the sigma-quotient both live on (4w, 2w').
    """

    RoofLattice = "roof"
    BLattice = "b"
    SigmaLattice = "sigma"


@dataclass(frozen=True, eq=False)
class Lattice:
    """Rectangular period lattice with precomputed invariants.

    Fields mirror the construction data: generators, half-periods, the
    invariants g2/g3, the sigma quasi-period constants eta1/eta3 and the
    nome.  Array fields are the private theta-series coefficients.
    """

    half_period_real: float
    half_period_imag: float
    generators: tuple[complex, complex]
    invariants_g2: complex
    invariants_g3: complex
    eta1: complex
    eta3: complex
    nome_q: float
    _coef: np.ndarray = field(repr=False)
    _kodd: np.ndarray = field(repr=False)
    _t1p0: float = field(repr=False)

    @property
    def e_values(self) -> tuple[complex, complex, complex]:
        """wp at the three half-periods (w1, w1+w3, w3)."""
        w1 = self.half_period_real
        w3 = 1j * self.half_period_imag
        return (wp(w1, self), wp(w1 + w3, self), wp(w3, self))


def _nterms(q: float) -> int:
    # tail of the theta series is < q^((N+1/2)^2 - (N+1/2)) within the cell
    target = 48.0
    im_tau_pi = -math.log(q)
    n = math.sqrt(target / im_tau_pi + 0.25) + 0.5
    return max(6, int(math.ceil(n)) + 2)


def lattice_build(
    half_period_real: float,
    half_period_imag: float,
    generator_choice: GeneratorChoice = GeneratorChoice.RoofLattice,
) -> Lattice:
    """Build a rectangular lattice from the construction scale (w, Im w').

    ``half_period_real`` is the scale w (so the roof field has real period
    2w) and ``half_period_imag`` is Im w'.  The generator pair is selected
    by ``generator_choice``: (2w, 2iw') for the roof lattice, (4w, 2iw')
    for the boundary-factor and sigma lattices.
    """
    w = float(half_period_real)
    wpim = float(half_period_imag)
    if not (w > 0.0 and wpim > 0.0):
        raise LatticeParameterError(
            f"half-periods must be positive, got ({half_period_real}, {half_period_imag})"
        )
    if generator_choice is GeneratorChoice.RoofLattice:
        p1 = 2.0 * w
    else:
        p1 = 4.0 * w
    p3 = 2j * wpim

    w1 = p1 / 2.0
    w3im = wpim
    q = math.exp(-math.pi * w3im / w1)
    if q >= _NOME_LIMIT:
        raise LatticeParameterError(
            f"degenerate aspect ratio: nome {q:.8f} >= {_NOME_LIMIT}"
        )

    n = _nterms(q)
    idx = np.arange(n)
    coef = 2.0 * (-1.0) ** idx * q ** ((idx + 0.5) ** 2)
    kodd = (2.0 * idx + 1.0).astype(np.float64)

    t1p0 = float(np.sum(coef * kodd))
    t1ppp0 = float(-np.sum(coef * kodd**3))
    s = math.pi / (2.0 * w1)
    eta1 = -(math.pi**2) / (12.0 * w1) * (t1ppp0 / t1p0)

    lat = Lattice(
        half_period_real=w1,
        half_period_imag=w3im,
        generators=(complex(p1), p3),
        invariants_g2=0j,
        invariants_g3=0j,
        eta1=complex(eta1),
        eta3=0j,
        nome_q=q,
        _coef=coef,
        _kodd=kodd,
        _t1p0=t1p0,
    )

    # eta3 from the zeta series at w3: keeps Legendre non-circular.
    u3 = np.array([s * (1j * w3im)], dtype=np.complex128)
    t1, t1p, _, _ = theta1_bundle(u3, coef, kodd)
    eta3 = eta1 * (1j * w3im) / w1 + s * (t1p[0] / t1[0])
    object.__setattr__(lat, "eta3", complex(eta3))

    e1, e2, e3 = lat.e_values
    g2 = 2.0 * (e1 * e1 + e2 * e2 + e3 * e3)
    g3 = 4.0 * e1 * e2 * e3
    object.__setattr__(lat, "invariants_g2", complex(g2))
    object.__setattr__(lat, "invariants_g3", complex(g3))
    return lat


def _reduce(z: np.ndarray, lat: Lattice):
    """Translate each point into the centered fundamental cell."""
    p1 = lat.generators[0].real
    p3 = lat.generators[1].imag
    m = np.round(z.real / p1)
    n = np.round(z.imag / p3)
    zr = z - m * p1 - 1j * (n * p3)
    return zr, m, n


def _as_array(z):
    arr = np.asarray(z, dtype=np.complex128)
    return arr.ravel(), arr.shape, np.isscalar(z) or arr.shape == ()


def _bundle(zr: np.ndarray, lat: Lattice):
    s = math.pi / (2.0 * lat.half_period_real)
    return theta1_bundle(s * zr, lat._coef, lat._kodd), s


def _check_poles(zr: np.ndarray, what: str):
    if np.any(np.abs(zr) < POLE_DISTANCE):
        raise PoleProximityError(
            f"{what}: argument within {POLE_DISTANCE} of a lattice point"
        )


def wp(z, lat: Lattice):
    """Weierstrass wp; poles (order 2) at lattice points."""
    flat, shape, scalar = _as_array(z)
    zr, _, _ = _reduce(flat, lat)
    _check_poles(zr, "wp")
    (t1, t1p, t1pp, _), s = _bundle(zr, lat)
    val = -lat.eta1 / lat.half_period_real - s * s * (t1pp * t1 - t1p * t1p) / (t1 * t1)
    return complex(val[0]) if scalar else val.reshape(shape)


def wp_prime(z, lat: Lattice):
    """Derivative of wp; poles (order 3) at lattice points."""
    flat, shape, scalar = _as_array(z)
    zr, _, _ = _reduce(flat, lat)
    _check_poles(zr, "wp_prime")
    (t1, t1p, t1pp, t1ppp), s = _bundle(zr, lat)
    r = t1p / t1
    val = -(s**3) * (t1ppp / t1 - 3.0 * t1pp * r / t1 + 2.0 * r**3)
    return complex(val[0]) if scalar else val.reshape(shape)


def zeta_w(z, lat: Lattice):
    """Weierstrass zeta; simple poles at lattice points, zeta' = -wp."""
    flat, shape, scalar = _as_array(z)
    zr, m, n = _reduce(flat, lat)
    _check_poles(zr, "zeta_w")
    (t1, t1p, _, _), s = _bundle(zr, lat)
    val = (
        lat.eta1 * zr / lat.half_period_real
        + s * t1p / t1
        + 2.0 * (m * lat.eta1 + n * lat.eta3)
    )
    return complex(val[0]) if scalar else val.reshape(shape)


def sigma_w(z, lat: Lattice):
    """Weierstrass sigma (entire, odd, sigma'(0) = 1)."""
    flat, shape, scalar = _as_array(z)
    zr, m, n = _reduce(flat, lat)
    (t1, _, _, _), s = _bundle(zr, lat)
    w1 = lat.half_period_real
    w3 = 1j * lat.half_period_imag
    base = (1.0 / s) * np.exp(lat.eta1 * zr * zr / (2.0 * w1)) * t1 / lat._t1p0
    eta_shift = 2.0 * (m * lat.eta1 + n * lat.eta3)
    sign = np.where((m + n + m * n) % 2 == 0, 1.0, -1.0)
    val = base * sign * np.exp(eta_shift * (zr + m * w1 + n * w3))
    return complex(val[0]) if scalar else val.reshape(shape)
