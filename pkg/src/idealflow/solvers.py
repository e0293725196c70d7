"""Estimator-style solvers wrapping the flow engine.

Both classes follow the scikit-learn protocol: hyperparameters are
constructor arguments mirrored by get_params/set_params, fit() consumes a
cell complex (or a prepared triangulation) plus optional starting radii and
stores its results in trailing-underscore attributes. No scikit-learn
dependency is required; the parameter introspection is self-contained.
"""

from __future__ import annotations

import inspect
import warnings

import numpy as np

from .cellcomplex import CellComplex, Triangulation, triangulate
from .curvature import PatternState, curvature_jacobian, spectral_gap
from .errors import ConvergenceWarning, InsufficientSamplesError
from .flow import FlowConfig, fit_rate, run_flow
from .validation import check_radii


class PatternFlowSolver:
    """Shared machinery; use :class:`CalabiFlow` or :class:`RicciFlow`."""

    _flow = ""

    def __init__(self, geometry: str = "hyperbolic", dt: float = 1e-2,
                 tol: float = 1e-10, max_steps: int = 1_000_000,
                 method: str = "rk4", record_every: int = 10):
        self.geometry = geometry
        self.dt = dt
        self.tol = tol
        self.max_steps = max_steps
        self.method = method
        self.record_every = record_every

    @classmethod
    def _param_names(cls) -> list[str]:
        signature = inspect.signature(cls.__init__)
        return [name for name in signature.parameters if name != "self"]

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params) -> "PatternFlowSolver":
        valid = set(self._param_names())
        for name, value in params.items():
            if name not in valid:
                raise ValueError(
                    f"invalid parameter {name!r} for {type(self).__name__}; "
                    f"valid parameters are {sorted(valid)}"
                )
            setattr(self, name, value)
        return self

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"

    def _config(self) -> FlowConfig:
        return FlowConfig(
            flow=self._flow, geometry=self.geometry, dt=self.dt, tol=self.tol,
            max_steps=self.max_steps, method=self.method,
            record_every=self.record_every,
        ).validated()

    def fit(self, cells: CellComplex | Triangulation, r0=None) -> "PatternFlowSolver":
        """Run the flow on a complex from radii r0 (default: all ones)."""
        cfg = self._config()
        tri = cells if isinstance(cells, Triangulation) else triangulate(cells)
        n = tri.num_vertices
        radii = check_radii(np.ones(n) if r0 is None else r0, n)
        state0 = PatternState.from_radii(cfg.geometry, radii)
        trajectory = run_flow(cfg, tri, state0)
        try:
            trajectory.fitted_rate = fit_rate(trajectory)
        except InsufficientSamplesError:
            trajectory.fitted_rate = None

        self.triangulation_ = tri
        self.trajectory_ = trajectory
        self.radii_ = trajectory.radii[-1]
        self.curvature_ = trajectory.curvatures[-1]
        self.stop_reason_ = trajectory.stop_reason
        self.n_steps_ = trajectory.n_steps
        self.converged_ = trajectory.stop_reason == "converged"
        if not self.converged_:
            warnings.warn(
                f"{type(self).__name__} stopped with {trajectory.stop_reason!r} "
                f"after {trajectory.n_steps} steps "
                f"(residual {np.max(np.abs(self.curvature_)):.3e} scale)",
                ConvergenceWarning,
                stacklevel=2,
            )
        return self

    def spectral_gap_(self) -> float:
        """Spectral gap of the Jacobian at the fitted pattern."""
        state = PatternState.from_radii(self.geometry, self.radii_)
        return spectral_gap(curvature_jacobian(self.triangulation_, state))


class CalabiFlow(PatternFlowSolver):
    """Curvature-energy steepest descent, du/dt = -L (K - K_target)."""

    _flow = "calabi"


class RicciFlow(PatternFlowSolver):
    """Direct curvature relaxation, du/dt = -(K - K_target)."""

    _flow = "ricci"
