"""Vertex curvature, its Jacobian, and derived energies for circle patterns.

A pattern state assigns a radius to every primal vertex of a triangulated
complex. Around each vertex the triangles of all incident face slots
contribute inner angles; the discrete curvature is the angle defect

    K_i = 2 pi - sum over corners (i, e, f) of the corner angle.

Star vertices carry no curvature by construction and are omitted.

Flows act on log-scale coordinates u: u = log r (euclidean, any real) or
u = log tanh(r/2) (hyperbolic, always negative). In these coordinates the
curvature Jacobian L = dK/du is symmetric, positive semidefinite with
kernel spanned by the all-ones vector in the euclidean case, and positive
definite in the hyperbolic case.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cellcomplex import CellComplex, Triangulation
from .errors import DomainError, QuadratureError
from .validation import check_geometry, check_radii, check_u


# ---------------------------------------------------------------------------
# Coordinates


def to_u(geometry: str, r):
    """Log-scale coordinates from radii."""
    r = np.asarray(r, dtype=float)
    if check_geometry(geometry) == "euclidean":
        return np.log(r)
    # log tanh(r/2) = -log1p(2 / expm1(r)), stable for both small and large r
    return -np.log1p(2.0 / np.expm1(r))


def from_u(geometry: str, u):
    """Radii from log-scale coordinates."""
    u = np.asarray(u, dtype=float)
    if check_geometry(geometry) == "euclidean":
        return np.exp(u)
    if np.any(u >= 0.0):
        raise DomainError("hyperbolic coordinates must be strictly negative")
    # r = 2 artanh(e^u) = log(1 + e^u) - log(1 - e^u); the second term needs
    # log1p when e^u is tiny but expm1 when it is close to one
    x = np.exp(u)
    with np.errstate(divide="ignore"):
        far = np.log1p(x) - np.log1p(-x)
        near = np.log1p(x) - np.log(-np.expm1(u))
    return np.where(u < -0.7, far, near)


@dataclass(frozen=True)
class PatternState:
    """Radii and matching log coordinates for one geometry."""

    geometry: str
    r: np.ndarray
    u: np.ndarray

    @classmethod
    def from_radii(cls, geometry: str, r) -> "PatternState":
        geometry = check_geometry(geometry)
        r = np.array(r, dtype=float)
        if r.ndim == 0:
            raise DomainError("radii must be a vector")
        r = check_radii(r, len(r))
        u = to_u(geometry, r)
        if not np.all(np.isfinite(u)):
            raise DomainError("radii map outside the representable coordinate range")
        r.setflags(write=False)
        u.setflags(write=False)
        return cls(geometry, r, u)

    @classmethod
    def from_log(cls, geometry: str, u) -> "PatternState":
        geometry = check_geometry(geometry)
        u = np.array(u, dtype=float)
        u = check_u(u, len(u), geometry)
        r = from_u(geometry, u)
        if not np.all(np.isfinite(r)) or np.any(r <= 0.0):
            raise DomainError("coordinates map outside the valid radius range")
        r.setflags(write=False)
        u.setflags(write=False)
        return cls(geometry, r, u)

    @property
    def num_vertices(self) -> int:
        return len(self.r)


# ---------------------------------------------------------------------------
# Curvature


def _stretch(geometry: str, r):
    """(s, c) with s = sinh r, c = cosh r hyperbolic; s = r, c = 1 euclidean."""
    if geometry == "euclidean":
        return r, np.ones_like(r)
    return np.sinh(r), np.cosh(r)


def _corner_angles(t: Triangulation, state: PatternState) -> np.ndarray:
    s, c = _stretch(state.geometry, state.r)
    cv, co = t.corner_vertex, t.corner_other
    th = t.corner_theta
    return np.arctan2(
        s[co] * np.sin(th), s[cv] * c[co] + c[cv] * s[co] * np.cos(th)
    )


def curvature_vector(t: Triangulation, state: PatternState) -> np.ndarray:
    """K_i = 2 pi - sum of corner angles at vertex i."""
    angles = _corner_angles(t, state)
    K = np.full(t.num_vertices, 2.0 * np.pi)
    np.subtract.at(K, t.corner_vertex, angles)
    return K


def calabi_energy(K: np.ndarray) -> float:
    return float(np.dot(K, K))


def k_average(c: CellComplex) -> float:
    """Target curvature 2 pi chi / |V| of the euclidean normalized flow."""
    return 2.0 * np.pi * c.euler_characteristic() / c.num_vertices


@dataclass(frozen=True)
class CurvatureReport:
    geometry: str
    K: np.ndarray
    calabi_energy: float
    total_area: float | None
    gauss_bonnet_residual: float


def curvature_map(t: Triangulation, state: PatternState) -> CurvatureReport:
    """Curvature vector plus the global identities it must satisfy.

    The residual is sum(K) - 2 pi chi in the euclidean case and
    sum(K) - 2 pi chi - total area in the hyperbolic case; both vanish
    identically whenever the star condition holds.
    """
    angles = _corner_angles(t, state)
    K = np.full(t.num_vertices, 2.0 * np.pi)
    np.subtract.at(K, t.corner_vertex, angles)
    chi = t.complex.euler_characteristic()
    if state.geometry == "hyperbolic":
        slot_area = t.slot_theta - angles.reshape(-1, 2).sum(axis=1)
        total_area = float(slot_area.sum())
        residual = float(K.sum() - 2.0 * np.pi * chi - total_area)
    else:
        total_area = None
        residual = float(K.sum() - 2.0 * np.pi * chi)
    return CurvatureReport(
        geometry=state.geometry,
        K=K,
        calabi_energy=calabi_energy(K),
        total_area=total_area,
        gauss_bonnet_residual=residual,
    )


def gauss_bonnet_residual(t: Triangulation, state: PatternState) -> float:
    return curvature_map(t, state).gauss_bonnet_residual


# ---------------------------------------------------------------------------
# Jacobian dK/du


@dataclass(frozen=True)
class JacobianMatrix:
    """Symmetric Jacobian L = dK/du with its structural split.

    Hyperbolic: L = diag(A) + L_B with A > 0 the area-growth part and L_B a
    weighted graph Laplacian, so L is positive definite. Euclidean: A is
    absent and L = L_B is twice the conductance-weighted Laplacian, positive
    semidefinite with kernel spanned by the all-ones vector.
    """

    geometry: str
    L: np.ndarray
    A_diag: np.ndarray | None
    L_B: np.ndarray


def curvature_jacobian(t: Triangulation, state: PatternState) -> JacobianMatrix:
    n = t.num_vertices
    cv, co = t.corner_vertex, t.corner_other
    th = t.corner_theta
    r = state.r
    nonloop = cv != co
    L = np.zeros((n, n))
    if state.geometry == "euclidean":
        ri, rj = r[cv], r[co]
        l2 = (ri - rj) ** 2 + 4.0 * ri * rj * np.cos(0.5 * th) ** 2
        w = ri * rj * np.sin(th) / l2
        # loop corners cancel: the angle is scale invariant in r_i alone
        np.add.at(L, (cv[nonloop], cv[nonloop]), w[nonloop])
        np.add.at(L, (cv[nonloop], co[nonloop]), -w[nonloop])
        return JacobianMatrix(geometry="euclidean", L=L, A_diag=None, L_B=L)

    sh, ch = np.sinh(r), np.cosh(r)
    shi, shj = sh[cv], sh[co]
    d = 2.0 * (np.sinh(0.5 * (r[cv] - r[co])) ** 2 + shi * shj * np.cos(0.5 * th) ** 2)
    w = shi * shj * np.sin(th) / (d * (d + 2.0))
    # per corner: dK_i/du_i gains w cosh(l) = w (1 + d); a loop corner gains
    # w d because its two radius slots coincide and the off-diagonal folds in
    diag_term = np.where(nonloop, w * (1.0 + d), w * d)
    np.add.at(L, (cv, cv), diag_term)
    np.add.at(L, (cv[nonloop], co[nonloop]), -w[nonloop])
    A = np.zeros(n)
    np.add.at(A, cv, w * d)  # area growth, every corner counts
    L_B = L - np.diag(A)
    return JacobianMatrix(geometry="hyperbolic", L=L, A_diag=A, L_B=L_B)


def spectral_gap(jac: JacobianMatrix) -> float:
    """Smallest relevant eigenvalue of L.

    Hyperbolic: the smallest eigenvalue outright. Euclidean: the smallest on
    the subspace orthogonal to the all-ones kernel direction; NaN for a
    single vertex, where that subspace is empty.
    """
    vals = np.linalg.eigvalsh(jac.L)
    if jac.geometry == "hyperbolic":
        return float(vals[0])
    if len(vals) < 2:
        return float("nan")
    return float(vals[1])


# ---------------------------------------------------------------------------
# Flow potential


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _leg_integral(t, geometry, a, delta, panels):
    """Gauss-Legendre estimate of int_0^1 K(a + s delta) . delta ds."""
    total = 0.0
    width = 1.0 / panels
    for p in range(panels):
        mid = (p + 0.5) * width
        s_nodes = mid + 0.5 * width * _GL_NODES
        for s, wgt in zip(s_nodes, _GL_WEIGHTS):
            state = PatternState.from_log(geometry, a + s * delta)
            K = curvature_vector(t, state)
            total += 0.5 * width * wgt * float(np.dot(K, delta))
    return total


def ricci_potential(
    t: Triangulation,
    geometry: str,
    u_base,
    u,
    waypoints=(),
    tol: float = 1e-10,
    max_doublings: int = 12,
) -> float:
    """Line integral of the curvature 1-form sum K_i du_i from u_base to u.

    The symmetric Jacobian makes the form closed, so the value is path
    independent; ``waypoints`` selects an explicit piecewise-linear path for
    cross-checks. Each leg uses composite 16-node Gauss-Legendre quadrature,
    doubling the panel count until successive estimates differ by under
    ``tol``.
    """
    geometry = check_geometry(geometry)
    n = t.num_vertices
    points = [check_u(np.asarray(p, dtype=float), n, geometry)
              for p in (u_base, *waypoints, u)]
    total = 0.0
    for a, b in zip(points[:-1], points[1:]):
        delta = b - a
        if not np.any(delta):
            continue
        previous = None
        panels = 1
        for _ in range(max_doublings + 1):
            estimate = _leg_integral(t, geometry, a, delta, panels)
            if previous is not None and abs(estimate - previous) < tol:
                break
            previous = estimate
            panels *= 2
        else:
            raise QuadratureError(
                f"leg quadrature did not converge within {max_doublings} doublings"
            )
        total += estimate
    return total
