"""Exception types shared across the package."""

from __future__ import annotations


class QedomError(Exception):
    """Base class for package errors."""


class LatticeParameterError(QedomError):
    """Invalid or degenerate lattice parameters."""


class PoleProximityError(QedomError):
    """Evaluation requested within 1e-13 of a pole or lattice point.

    Raised distinctly from ordinary argument errors so callers can tell a
    genuinely singular request from a malformed one.
    """


class RoofConstructionError(QedomError):
    """Roof-field constants failed their residual or range checks."""


class NormalizationError(QedomError):
    """Blaschke-factor normalization failed its symmetry residual."""


class CrossFormError(QedomError):
    """The sigma-quotient and product forms of the map derivative disagree."""


class QuadratureError(QedomError):
    """Adaptive contour quadrature failed to converge or hit a singularity."""


class PathError(QedomError):
    """Integration path passes too close to a singular point."""


class TopologyError(QedomError):
    """Traced boundary has the wrong closure structure or self-intersects."""
