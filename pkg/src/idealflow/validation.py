"""Input validation helpers shared by the library and the solver classes."""

from __future__ import annotations

import numpy as np

from .errors import DomainError

GEOMETRIES = ("euclidean", "hyperbolic")
FLOWS = ("calabi", "ricci")
METHODS = ("rk4", "euler")


def check_geometry(geometry: str) -> str:
    if not isinstance(geometry, str) or geometry.lower() not in GEOMETRIES:
        raise ValueError(f"geometry must be one of {GEOMETRIES}, got {geometry!r}")
    return geometry.lower()


def check_flow(flow: str) -> str:
    if not isinstance(flow, str) or flow.lower() not in FLOWS:
        raise ValueError(f"flow must be one of {FLOWS}, got {flow!r}")
    return flow.lower()


def check_method(method: str) -> str:
    if not isinstance(method, str) or method.lower() not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    return method.lower()


def check_radii(r, n_vertices: int) -> np.ndarray:
    """Coerce to a positive, finite float vector of length ``n_vertices``."""
    arr = np.asarray(r, dtype=float)
    if arr.ndim == 0:
        arr = np.full(n_vertices, float(arr))
    if arr.shape != (n_vertices,):
        raise DomainError(f"radii must have shape ({n_vertices},), got {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError("radii must be finite and strictly positive")
    return arr


def check_u(u, n_vertices: int, geometry: str) -> np.ndarray:
    """Coerce to a valid vector of log-scale coordinates for the geometry."""
    arr = np.asarray(u, dtype=float)
    if arr.shape != (n_vertices,):
        raise DomainError(f"coordinates must have shape ({n_vertices},), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("coordinates must be finite")
    if check_geometry(geometry) == "hyperbolic" and np.any(arr >= 0.0):
        raise DomainError("hyperbolic coordinates must be strictly negative")
    return arr


def check_positive(name: str, value: float) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return value
