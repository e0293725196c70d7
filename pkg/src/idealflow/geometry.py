"""Two intersecting circles meeting at a common point, in both geometries.

Circles of radius r_i and r_j around vertices i and j overlap at angle theta
in (0, pi). The centers and one intersection point span a triangle whose
apex angle at the intersection is pi - theta; everything here is a closed
form on that triangle.

All functions broadcast over numpy arrays. Formulas are arranged so no
catastrophic cancellation occurs anywhere on the domain r > 0, including the
degenerate limit r -> 0; in particular cosh(l) - 1 is computed as a sum of
two nonnegative terms rather than by subtraction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GeometryMismatchError
from .validation import check_geometry


def _cosh_l_minus_1(r_i, r_j, theta):
    # cosh(l) - 1 = 2 sinh^2((r_i - r_j)/2) + 2 sinh(r_i) sinh(r_j) cos^2(theta/2)
    return 2.0 * (
        np.sinh(0.5 * (r_i - r_j)) ** 2
        + np.sinh(r_i) * np.sinh(r_j) * np.cos(0.5 * theta) ** 2
    )


def _sq_length_euclidean(r_i, r_j, theta):
    # l^2 = (r_i - r_j)^2 + 4 r_i r_j cos^2(theta/2), a sum of nonnegative terms
    return (r_i - r_j) ** 2 + 4.0 * r_i * r_j * np.cos(0.5 * theta) ** 2


def edge_length(geometry: str, r_i, r_j, theta):
    """Distance between the two circle centers."""
    if check_geometry(geometry) == "euclidean":
        return np.sqrt(_sq_length_euclidean(r_i, r_j, theta))
    d = _cosh_l_minus_1(r_i, r_j, theta)
    return np.log1p(d + np.sqrt(d * (d + 2.0)))


def inner_angle(geometry: str, r_i, r_j, theta):
    """Angle of the center triangle at the first vertex.

    Euclidean: atan2(r_j sin theta, r_i + r_j cos theta); hyperbolic is the
    same expression with sinh/cosh stretch factors. Exact on the whole
    domain, decreasing in r_i, increasing in r_j.
    """
    if check_geometry(geometry) == "euclidean":
        return np.arctan2(r_j * np.sin(theta), r_i + r_j * np.cos(theta))
    return np.arctan2(
        np.sinh(r_j) * np.sin(theta),
        np.sinh(r_i) * np.cosh(r_j) + np.cosh(r_i) * np.sinh(r_j) * np.cos(theta),
    )


def inner_angles(geometry: str, r_i, r_j, theta):
    return inner_angle(geometry, r_i, r_j, theta), inner_angle(geometry, r_j, r_i, theta)


def triangle_area_hyp(r_i, r_j, theta):
    """Hyperbolic area of the center triangle: theta - theta_i - theta_j."""
    th_i, th_j = inner_angles("hyperbolic", r_i, r_j, theta)
    return theta - th_i - th_j


def angle_partials(geometry: str, r_i, r_j, theta):
    """Closed-form partial derivatives of the two inner angles.

    Returns (d theta_i / d r_i, d theta_i / d r_j, d theta_j / d r_i,
    d theta_j / d r_j). The mixed partials satisfy the exchange symmetry
    d theta_i / d r_j * s(r_j) = d theta_j / d r_i * s(r_i) with s the
    geometry's stretch factor (identity or sinh).
    """
    s = np.sin(theta)
    if check_geometry(geometry) == "euclidean":
        l2 = _sq_length_euclidean(r_i, r_j, theta)
        return (-r_j * s / l2, r_i * s / l2, r_j * s / l2, -r_i * s / l2)
    d = _cosh_l_minus_1(r_i, r_j, theta)
    sl2 = d * (d + 2.0)  # sinh^2 l
    sh_i, sh_j = np.sinh(r_i), np.sinh(r_j)
    return (
        -sh_j * s * (1.0 + d) / sl2,
        sh_i * s / sl2,
        sh_j * s / sl2,
        -sh_i * s * (1.0 + d) / sl2,
    )


def conductance(r_i, r_j, theta):
    """Euclidean Laplacian weight r_i r_j sin(theta) / l^2.

    Equals r_j * d theta_i / d r_j and is bounded above by 1 / sin(theta).
    """
    return r_i * r_j * np.sin(theta) / _sq_length_euclidean(r_i, r_j, theta)


def conductance_hyp(r_i, r_j, theta):
    """Hyperbolic analogue sinh(r_i) sinh(r_j) sin(theta) / sinh^2(l).

    Equals sinh(r_j) * d theta_i / d r_j, symmetric in (r_i, r_j).
    """
    d = _cosh_l_minus_1(r_i, r_j, theta)
    return np.sinh(r_i) * np.sinh(r_j) * np.sin(theta) / (d * (d + 2.0))


def area_partial_u(r_i, r_j, theta):
    """sinh(r_i) * d Area / d r_i, strictly positive.

    Closed form sinh(r_i) sinh(r_j) sin(theta) / (cosh(l) + 1); symmetric in
    (r_i, r_j), so it is also the derivative in the other log coordinate.
    """
    d = _cosh_l_minus_1(r_i, r_j, theta)
    return np.sinh(r_i) * np.sinh(r_j) * np.sin(theta) / (d + 2.0)


@dataclass(frozen=True)
class TwoCircleConfig:
    """One weighted edge's circle pair; scalar convenience over the kernels."""

    geometry: str
    r_i: float
    r_j: float
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "geometry", check_geometry(self.geometry))
        for name in ("r_i", "r_j"):
            value = float(getattr(self, name))
            if not np.isfinite(value) or value <= 0.0:
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
            object.__setattr__(self, name, value)
        theta = float(self.theta)
        if not 0.0 < theta < np.pi:
            raise ValueError(f"theta must lie in (0, pi), got {theta!r}")
        object.__setattr__(self, "theta", theta)

    def edge_length(self) -> float:
        return float(edge_length(self.geometry, self.r_i, self.r_j, self.theta))

    def inner_angles(self) -> tuple[float, float]:
        th_i, th_j = inner_angles(self.geometry, self.r_i, self.r_j, self.theta)
        return float(th_i), float(th_j)

    def angle_partials(self) -> tuple[float, float, float, float]:
        return tuple(
            float(x) for x in angle_partials(self.geometry, self.r_i, self.r_j, self.theta)
        )

    def triangle_area(self) -> float:
        if self.geometry != "hyperbolic":
            raise GeometryMismatchError("triangle area defect is hyperbolic-only")
        return float(triangle_area_hyp(self.r_i, self.r_j, self.theta))

    def conductance(self) -> float:
        if self.geometry != "euclidean":
            raise GeometryMismatchError("conductance in this form is euclidean-only")
        return float(conductance(self.r_i, self.r_j, self.theta))

    def area_partial_u(self) -> float:
        if self.geometry != "hyperbolic":
            raise GeometryMismatchError("area derivative is hyperbolic-only")
        return float(area_partial_u(self.r_i, self.r_j, self.theta))
