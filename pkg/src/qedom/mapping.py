"""Conformal map assembly, boundary tracing, and univalence checks.

The map derivative F is available in two independent closed forms that are
cross-checked at build time:

* product form: F = v_z * B (the semantic route);
* sigma-quotient form: a ratio of Weierstrass sigma factors on the
  (4w, 2w') lattice whose zero/pole placement mirrors the product, with one
  pole representative moved to an equivalent lattice point so the zero and
  pole sums agree exactly (plots use this route).

The two agree up to one global constant mu; normalization then fixes the
overall scale: RawSigmaRatio keeps the bare quotient, NeumannUnit rescales
so F = 2 v_z B exactly, which makes the boundary speed |2 v_z / F| = 1/|B|
equal to one on the horizontal sides.

The primitive f is anchored to 0 at the bottom-side point w and computed by
adaptive path integration; boundary traces integrate cumulatively along the
sides.  For the periodic family, f is multivalued around the interior poles
of F and all default paths cross between the pole columns through the
mid-height line at Re z = w, which fixes the branch deterministically.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

from .blaschke import BFactor, b_eval, build_b
from .elliptic import GeneratorChoice, Lattice, lattice_build, sigma_w
from .errors import CrossFormError, PathError, TopologyError
from .geometry import curve_diameter, find_intersections
from .quadrature import (
    build_avoiding_path,
    cumulative_integral,
    integrate_path,
    integrate_segments,
)
from .roof import DomainKind, RoofField, build_roof, pole_residue, v_z

BOUNDARY_CUTOFF = 1e-4  # arc-length cutoff at singular boundary points, x scale w
_CROSS_FORM_TOL = 1e-7


class Normalization(enum.Enum):
    RawSigmaRatio = "raw"
    NeumannUnit = "neumann"


@dataclass(frozen=True)
class DomainSpec:
    """User-facing parameters selecting the family and the lattice data."""

    kind: DomainKind
    omega: float
    omega_prime_imag: float
    epsilon: float | None = None
    samples_per_side: int = 1024
    normalization: Normalization = Normalization.NeumannUnit

    def __post_init__(self):
        if self.omega <= 0.0 or self.omega_prime_imag <= 0.0:
            raise ValueError("omega and Im(omega') must be positive")
        if self.samples_per_side < 64:
            raise ValueError("samples_per_side must be at least 64")
        if self.kind is DomainKind.TypeII and self.epsilon is None:
            raise ValueError("the periodic family requires epsilon")
        if self.kind is DomainKind.TypeI and self.epsilon is not None:
            raise ValueError("epsilon is only meaningful for the periodic family")
        if self.omega_prime_imag <= self.omega:
            warnings.warn(
                f"aspect condition Im(omega') > omega not met "
                f"({self.omega_prime_imag} <= {self.omega}); construction "
                "proceeds but positivity of the roof function is not guaranteed",
                stacklevel=2,
            )

    @property
    def rect_width(self) -> float:
        return 4.0 * self.omega

    @property
    def rect_height(self) -> float:
        return self.omega_prime_imag


@dataclass(frozen=True, eq=False)
class ConstructedMap:
    spec: DomainSpec
    roof: RoofField
    bfac: BFactor
    sigma_lat: Lattice
    sigma_zeros: tuple[complex, ...]
    sigma_poles: tuple[complex, ...]
    mu: complex
    scale: complex
    f_cache: tuple[tuple[complex, complex], ...] = field(default=())
    image_period: complex | None = None

    @property
    def base_point(self) -> complex:
        return complex(self.spec.omega)

    def singular_points(self, pad: int = 1) -> np.ndarray:
        """Poles of F in and around the closed rectangle."""
        w = self.spec.omega
        h = self.spec.rect_height
        ms = np.arange(-pad, pad + 2)
        ns = np.arange(-pad, pad + 1)
        lam = (4.0 * w * ms[:, None] + 2j * h * ns[None, :]).ravel()
        if self.spec.kind is DomainKind.TypeI:
            reps = np.array([0.0, 2.0 * w], dtype=np.complex128)
        else:
            e = self.spec.epsilon
            reps = np.array(
                [1j * e, -1j * e, 2.0 * w + 1j * e, 2.0 * w - 1j * e],
                dtype=np.complex128,
            )
        return (reps[:, None] + lam[None, :]).ravel()


def _sigma_factors(spec: DomainSpec):
    w = spec.omega
    h = spec.rect_height
    zeros = (w - 0.5j * h, 3.0 * w - 0.5j * h)  # each of multiplicity two
    if spec.kind is DomainKind.TypeI:
        poles = (0.0 + 0.0j, 0.0 + 0.0j, 2.0 * w + 0.0j, 6.0 * w - 2j * h)
    else:
        e = spec.epsilon
        poles = (1j * e, -1j * e, 2.0 * w + 1j * e, 6.0 * w - 1j * e - 2j * h)
    return zeros, poles


def f_sigma_ratio(cm: ConstructedMap, z):
    """Bare sigma-quotient form of the map derivative (before ``scale``)."""
    arr = np.asarray(z, dtype=np.complex128)
    scalar = np.isscalar(z) or arr.shape == ()
    flat = arr.ravel()
    lat = cm.sigma_lat
    num = np.ones_like(flat)
    for s in cm.sigma_zeros:
        num = num * sigma_w(flat - s, lat) ** 2
    den = np.ones_like(flat)
    for p in cm.sigma_poles:
        den = den * sigma_w(flat - p, lat)
    out = num / den
    return complex(out[0]) if scalar else out.reshape(arr.shape)


def f_derivative(cm: ConstructedMap, z):
    """The map derivative F with the normalization scale applied."""
    out = cm.scale * np.asarray(f_sigma_ratio(cm, z))
    return complex(out) if out.shape == () else out


def f_derivative_product(cm: ConstructedMap, z):
    """Product-form F (v_z * B route), scaled to match ``f_derivative``."""
    out = cm.scale * cm.mu * np.asarray(v_z(cm.roof, z)) * np.asarray(
        b_eval(cm.bfac, z)
    )
    return complex(out) if out.shape == () else out


def gradient_modulus(cm: ConstructedMap, z):
    """|grad u| at the image of z, i.e. |2 v_z / F| in the pullback."""
    return np.abs(2.0 * np.asarray(v_z(cm.roof, z)) / np.asarray(f_derivative(cm, z)))


def _consistency_points(spec: DomainSpec, n: int, seed: int = 718281) -> np.ndarray:
    """Deterministic interior sample points away from zeros/poles of the forms."""
    w = spec.omega
    h = spec.rect_height
    avoid = [w + 0.5j * h, 3.0 * w + 0.5j * h]  # critical points / B poles
    if spec.kind is DomainKind.TypeI:
        avoid += [0.0 + 0.0j, 2.0 * w, 4.0 * w]
    else:
        e = spec.epsilon
        avoid += [1j * e, 2.0 * w + 1j * e, 0.0 + 0.0j, 2.0 * w + 0j, 4.0 * w + 0j]
    avoid = np.asarray(avoid, dtype=np.complex128)
    rng = np.random.default_rng(seed)
    out = []
    clearance = 0.08 * min(w, h)
    while len(out) < n:
        cand = rng.uniform(0.02, 3.98) * w + 1j * rng.uniform(0.05, 0.95) * h
        if np.min(np.abs(cand - avoid)) > clearance:
            out.append(cand)
    return np.asarray(out, dtype=np.complex128)


def build_map(spec: DomainSpec) -> ConstructedMap:
    """Assemble both F forms, cross-check them, normalize, anchor f."""
    roof_lat = lattice_build(spec.omega, spec.omega_prime_imag,
                             GeneratorChoice.RoofLattice)
    rf = build_roof(spec.kind, roof_lat, spec.epsilon)
    b_lat = lattice_build(spec.omega, spec.omega_prime_imag,
                          GeneratorChoice.BLattice)
    bf = build_b(b_lat)
    sigma_lat = lattice_build(spec.omega, spec.omega_prime_imag,
                              GeneratorChoice.SigmaLattice)
    zeros, poles = _sigma_factors(spec)

    cm = ConstructedMap(
        spec=spec, roof=rf, bfac=bf, sigma_lat=sigma_lat,
        sigma_zeros=tuple(map(complex, zeros)),
        sigma_poles=tuple(map(complex, poles)),
        mu=1.0 + 0j, scale=1.0 + 0j,
    )

    pts = _consistency_points(spec, 100)
    ratio = f_sigma_ratio(cm, pts) / (v_z(rf, pts) * b_eval(bf, pts))
    mu = complex(np.mean(ratio))
    spread = float(np.std(ratio) / abs(mu))
    if spread > _CROSS_FORM_TOL:
        raise CrossFormError(
            f"sigma-quotient and product forms disagree: relative spread "
            f"{spread:.3e} over {pts.size} points (tolerance {_CROSS_FORM_TOL})"
        )

    # zero-free in the open rectangle: probe a grid between the singular rows
    w, h = spec.omega, spec.rect_height
    gx, gy = np.meshgrid(np.linspace(0.03, 3.97, 60) * w,
                         np.linspace(0.04, 0.96, 40) * h)
    absf = np.abs(f_sigma_ratio(cm, gx + 1j * gy))
    if absf.min() < 1e-6 * np.median(absf):
        raise CrossFormError(
            f"map derivative vanishes inside the rectangle "
            f"(min {absf.min():.3e} vs median {np.median(absf):.3e})"
        )

    scale = 1.0 + 0j if spec.normalization is Normalization.RawSigmaRatio \
        else 2.0 / mu
    cm = ConstructedMap(
        spec=spec, roof=rf, bfac=bf, sigma_lat=sigma_lat,
        sigma_zeros=cm.sigma_zeros, sigma_poles=cm.sigma_poles,
        mu=mu, scale=complex(scale),
    )

    # f anchors: base on the bottom side, one per additional side/arc
    anchors = [(cm.base_point, 0.0 + 0.0j)]
    fun = lambda t: f_derivative(cm, t)  # noqa: E731
    top_anchor = complex(w, h)
    val_top = integrate_path(fun, [cm.base_point, top_anchor])
    anchors.append((top_anchor, val_top))
    if spec.kind is DomainKind.TypeI:
        p = [cm.base_point, complex(w, 0.5 * h), complex(3.0 * w, 0.5 * h),
             complex(3.0 * w)]
        anchors.append((complex(3.0 * w), integrate_path(fun, p)))

    period = None
    if spec.kind is DomainKind.TypeII:
        res_f = scale * mu * b_eval(bf, 1j * spec.epsilon) * pole_residue(rf)
        period = complex(2j * np.pi * res_f)

    return ConstructedMap(
        spec=spec, roof=rf, bfac=bf, sigma_lat=sigma_lat,
        sigma_zeros=cm.sigma_zeros, sigma_poles=cm.sigma_poles,
        mu=mu, scale=complex(scale),
        f_cache=tuple((complex(p), complex(v)) for p, v in anchors),
        image_period=period,
    )


def f_eval(cm: ConstructedMap, z: complex, path_hint=None, tol: float = 1e-11) -> complex:
    """Primitive of F, anchored to f(base) = 0, by adaptive path integration."""
    fun = lambda t: f_derivative(cm, t)  # noqa: E731
    if path_hint is not None:
        path = list(path_hint)
        if path[0] != cm.base_point:
            path = [cm.base_point] + path
        if path[-1] != z:
            path = path + [z]
        return complex(integrate_path(fun, path, tol=tol))
    w, h = cm.spec.omega, cm.spec.rect_height
    clearance = 0.04 * min(2.0 * w, h)
    sing = cm.singular_points()
    if np.min(np.abs(np.asarray(z) - sing)) < 2e-4 * w:
        raise PathError(
            f"f_eval target {z} is adjacent to a singular boundary point; "
            "pass an explicit path_hint"
        )
    path = build_avoiding_path(cm.base_point, z, sing, clearance=clearance,
                               highway_im=0.5 * h)
    return complex(integrate_path(fun, path, tol=tol))


@dataclass(frozen=True)
class BoundaryTrace:
    curves: list
    pullback: list
    labels: list
    closed: list
    closure_residuals: list

    def diameter(self) -> float:
        return max(curve_diameter(c) for c in self.curves)


def _side_values(cm: ConstructedMap, xs: np.ndarray, y: float,
                 anchor: complex, anchor_value: complex) -> np.ndarray:
    """f along a horizontal side, cumulative from its first sample."""
    fun = lambda t: f_derivative(cm, t)  # noqa: E731
    z = xs + 1j * y
    start = complex(z[0])
    f0 = anchor_value - integrate_path(fun, [start, anchor], tol=1e-12)
    return f0 + cumulative_integral(fun, z)


def trace_boundary(cm: ConstructedMap, samples_per_side: int | None = None) -> BoundaryTrace:
    """Images of the horizontal sides, split at singular boundary points."""
    spec = cm.spec
    n = samples_per_side or spec.samples_per_side
    w, h = spec.omega, spec.rect_height
    cache = dict(cm.f_cache)
    base = cm.base_point
    top_anchor = complex(w, h)

    curves, pullback, labels, closed, residuals = [], [], [], [], []

    if spec.kind is DomainKind.TypeI:
        cut = BOUNDARY_CUTOFF * w
        xs1 = np.linspace(cut, 2.0 * w - cut, n)
        f1 = _side_values(cm, xs1, 0.0, base, cache[base])
        xs2 = np.linspace(2.0 * w + cut, 4.0 * w - cut, n)
        f2 = _side_values(cm, xs2, 0.0, complex(3.0 * w), cache[complex(3.0 * w)])
        xst = np.linspace(0.0, 4.0 * w, n + 1)
        ft = _side_values(cm, xst, h, top_anchor, cache[top_anchor])
        curves += [f1, f2, ft]
        pullback += [xs1 + 0j, xs2 + 0j, xst + 1j * h]
        labels += ["bottom-left-arc", "bottom-right-arc", "top-closed"]
        for f, want in zip((f1, f2, ft), (False, False, True)):
            d = curve_diameter(f)
            r = float(abs(f[0] - f[-1]) / d) if d else 0.0
            got = r <= 1e-6
            if got != want:
                raise TopologyError(
                    f"unexpected closure (residual {r:.3e}) while tracing"
                )
            closed.append(got)
            residuals.append(float(r))
    else:
        xs = np.linspace(0.0, 4.0 * w, n + 1)
        fb = _side_values(cm, xs, 0.0, base, cache[base])
        ft = _side_values(cm, xs, h, top_anchor, cache[top_anchor])
        curves += [fb, ft]
        pullback += [xs + 0j, xs + 1j * h]
        labels += ["bubble-1", "bubble-2"]
        for f in (fb, ft):
            d = curve_diameter(f)
            r = float(abs(f[0] - f[-1]) / d)
            if r > 1e-6:
                raise TopologyError(
                    f"bubble boundary failed to close (residual {r:.3e})"
                )
            closed.append(True)
            residuals.append(float(r))

    return BoundaryTrace(curves=curves, pullback=pullback, labels=labels,
                         closed=closed, closure_residuals=residuals)


def validate_trace_injectivity(cm: ConstructedMap, trace: BoundaryTrace):
    """Segment-sweep self-intersection test over all traced curves.

    On failure for the doubly connected family the error names which of the
    six monotonicity/ordering statements broke numerically.
    """
    hits = find_intersections(trace.curves, closed=trace.closed)
    if not hits:
        return
    detail = f"{len(hits)} intersecting segment pair(s), first {hits[0]}"
    if cm.spec.kind is DomainKind.TypeI:
        failing = [r.name for r in check_claims_1_to_6(cm) if not r.passed]
        detail += f"; failing boundary statements: {failing or 'none detected'}"
    raise TopologyError(f"boundary self-intersection: {detail}")


@dataclass(frozen=True)
class ZeroPeriodResult:
    residual: float
    bound: float
    line_length: float
    max_abs_f: float

    @property
    def passed(self) -> bool:
        return self.residual < self.bound


def zero_period_check(cm: ConstructedMap, y: float, perturbation: float = 0.0,
                      tol: float = 1e-12) -> ZeroPeriodResult:
    """|integral of F over one horizontal period| at height y.

    ``perturbation`` multiplies the integrand by (1 + p*sin(pi x / (2w)))
    and is the negative control used to prove the check can fail.
    """
    spec = cm.spec
    w, h = spec.omega, spec.rect_height
    if not (0.0 < y < h):
        raise ValueError(f"height must lie inside (0, {h})")
    if spec.kind is DomainKind.TypeII and abs(y - spec.epsilon) < 0.02 * h:
        raise ValueError("horizontal line passes too close to an interior pole")

    def fun(z):
        vals = f_derivative(cm, z)
        if perturbation:
            vals = vals * (1.0 + perturbation * np.sin(np.pi * z.real / (2.0 * w)))
        return vals

    length = 4.0 * w
    total = integrate_path(fun, [1j * y, length + 1j * y], tol=tol)
    xs = np.linspace(0.0, length, 257) + 1j * y
    max_abs = float(np.abs(f_derivative(cm, xs)).max())
    return ZeroPeriodResult(
        residual=abs(total), bound=1e-8 * length * max_abs,
        line_length=length, max_abs_f=max_abs,
    )


@dataclass(frozen=True)
class ClaimResult:
    name: str
    passed: bool
    margin: float
    description: str


def _monotone_margin(vals: np.ndarray, increasing: bool = True) -> float:
    """Smallest consecutive step in the demanded direction (> 0 means strict)."""
    d = np.diff(vals)
    if not increasing:
        d = -d
    return float(d.min())


def check_claims_1_to_6(cm: ConstructedMap, samples_per_side: int | None = None):
    """Numeric translations of the six boundary ordering statements.

    Only meaningful for the doubly connected family, whose univalence
    reduces to injectivity on the horizontal sides.  Each statement becomes
    a monotonicity, extremum-location, or strict-ordering check on the
    sampled boundary values of f, reported with its margin.
    """
    spec = cm.spec
    if spec.kind is not DomainKind.TypeI:
        raise ValueError("boundary ordering statements apply to the doubly "
                         "connected family only")
    n = samples_per_side or spec.samples_per_side
    n -= n % 4  # claim points sit at quarter-width positions
    w, h = spec.omega, spec.rect_height
    cache = dict(cm.f_cache)

    xst = np.linspace(0.0, 4.0 * w, n + 1)
    ft = _side_values(cm, xst, h, complex(w, h), cache[complex(w, h)])
    cut = BOUNDARY_CUTOFF * w
    xs1 = np.linspace(cut, 2.0 * w - cut, n)
    f1 = _side_values(cm, xs1, 0.0, cm.base_point, cache[cm.base_point])
    xs2 = np.linspace(2.0 * w + cut, 4.0 * w - cut, n)
    f2 = _side_values(cm, xs2, 0.0, complex(3.0 * w), cache[complex(3.0 * w)])

    half = n // 2
    quarter = n // 4
    results = []

    m1a = _monotone_margin(ft[: half + 1].real, increasing=True)
    m1b = _monotone_margin(ft[half:].real, increasing=False)
    m1 = min(m1a, m1b)
    results.append(ClaimResult(
        "claim-1", m1 > 0.0, m1,
        "Re f increases on the first half of the top side, decreases on the second",
    ))

    ref = ft[0].imag
    m2a = float((ref - ft[1 : half + 1].imag).min())
    m2b = float((ft[half:-1].imag - ref).min())
    m2 = min(m2a, m2b)
    results.append(ClaimResult(
        "claim-2", m2 > 0.0, m2,
        "Im f on the top side lies below its corner value on the first half, "
        "above on the second",
    ))

    imin = int(np.argmin(ft.imag))
    imax = int(np.argmax(ft.imag))
    off3 = max(abs(imin - quarter), abs(imax - 3 * quarter))
    results.append(ClaimResult(
        "claim-3", off3 <= 1, float(1 - off3),
        "Im f on the top side is extremal at the quarter-width points",
    ))

    m4a = _monotone_margin(f1.real, increasing=True)
    m4b = _monotone_margin(f2.real, increasing=False)
    m4 = min(m4a, m4b)
    results.append(ClaimResult(
        "claim-4", m4 > 0.0, m4,
        "Re f increases along the left bottom arc and decreases along the right",
    ))

    k5a = int(np.argmax(f1.imag))
    k5b = int(np.argmin(f2.imag))
    step = xs1[1] - xs1[0]
    off5 = max(abs(xs1[k5a] - w), abs(xs2[k5b] - 3.0 * w))
    results.append(ClaimResult(
        "claim-5", off5 <= step, float(step - off5),
        "Im f peaks at the midpoint of the left arc and dips at the midpoint "
        "of the right arc",
    ))

    chain = (
        0.0,  # f at the base point w is the anchor zero
        ft[quarter].imag,
        ft[3 * quarter].imag,
        cache[complex(3.0 * w)].imag,
    )
    gaps = np.diff(chain)
    m6 = float(gaps.min())
    results.append(ClaimResult(
        "claim-6", m6 > 0.0, m6,
        "Im f is strictly ordered: bottom-left peak < top quarter points < "
        "bottom-right dip",
    ))
    return results
