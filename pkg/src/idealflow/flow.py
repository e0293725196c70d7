"""Combinatorial Calabi and Ricci flows driving patterns to target curvature.

All four flows integrate in log-scale coordinates u, where they are gradient
or quasi-gradient systems with a symmetric Jacobian:

    calabi:  du/dt = -L (K - K_target)      (steepest descent of sum K_i^2)
    ricci:   du/dt = -(K - K_target)

The target curvature is zero in the hyperbolic case and the average
2 pi chi / |V| in the euclidean case, where the all-ones kernel of L makes
the two calabi right-hand sides coincide exactly.

Integration is fixed-step RK4 (or Euler) with step rejection: a candidate
that leaves the valid domain, produces non-finite values, or increases the
Calabi energy (which the exact flows never do) halves dt, down to a floor of
1e-12. dt never grows back within a run.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .cellcomplex import CellComplex, Triangulation
from .curvature import (
    PatternState,
    calabi_energy,
    curvature_jacobian,
    curvature_vector,
    k_average,
)
from .errors import (
    DomainError,
    InsufficientSamplesError,
    NonConvergenceError,
    StepUnderflowError,
)
from .validation import check_flow, check_geometry, check_method, check_positive

DT_FLOOR = 1e-12
_ENERGY_SLACK = 1e-13  # relative slack for the monotonicity guard


@dataclass(frozen=True)
class FlowConfig:
    flow: str = "calabi"
    geometry: str = "hyperbolic"
    dt: float = 1e-2
    tol: float = 1e-10
    max_steps: int = 1_000_000
    method: str = "rk4"
    record_every: int = 10

    def validated(self) -> "FlowConfig":
        cfg = replace(
            self,
            flow=check_flow(self.flow),
            geometry=check_geometry(self.geometry),
            method=check_method(self.method),
            dt=check_positive("dt", self.dt),
            tol=check_positive("tol", self.tol),
        )
        if int(cfg.max_steps) < 0 or int(cfg.record_every) < 1:
            raise ValueError("max_steps must be >= 0 and record_every >= 1")
        return replace(cfg, max_steps=int(cfg.max_steps), record_every=int(cfg.record_every))


@dataclass(frozen=True)
class RateFit:
    rate: float
    r_squared: float


@dataclass
class Trajectory:
    """Recorded samples of one flow run, strictly increasing in time."""

    flow: str
    geometry: str
    times: np.ndarray        # (m,)
    radii: np.ndarray        # (m, n)
    curvatures: np.ndarray   # (m, n)
    energies: np.ndarray     # (m,)
    stop_reason: str         # "converged" | "max_steps" | "step_underflow"
    n_steps: int
    final_dt: float
    fitted_rate: RateFit | None = None

    @property
    def num_samples(self) -> int:
        return len(self.times)

    def final_state(self) -> PatternState:
        return PatternState.from_radii(self.geometry, self.radii[-1])

    def max_radius(self) -> float:
        return float(self.radii.max())

    def to_csv(self, path) -> None:
        write_trajectory_csv(self, path)


def target_curvature(c: CellComplex, geometry: str) -> np.ndarray:
    """Zero curvature (hyperbolic) or the average curvature (euclidean)."""
    if check_geometry(geometry) == "hyperbolic":
        return np.zeros(c.num_vertices)
    return np.full(c.num_vertices, k_average(c))


def _evaluate(cfg: FlowConfig, t: Triangulation, u: np.ndarray, k_target: np.ndarray):
    """State, curvature and du/dt at coordinates u; DomainError when invalid."""
    with np.errstate(all="ignore"):
        state = PatternState.from_log(cfg.geometry, u)
        K = curvature_vector(t, state)
        if not np.all(np.isfinite(K)):
            raise DomainError("curvature overflow")
        deviation = K - k_target
        if cfg.flow == "calabi":
            L = curvature_jacobian(t, state).L
            du = -L @ deviation
        else:
            du = -deviation
        if not np.all(np.isfinite(du)):
            raise DomainError("flow velocity overflow")
    return state, K, du


def flow_rhs(cfg: FlowConfig, t: Triangulation, state: PatternState, coords: str = "u"):
    """Flow velocity at a state, in u-coordinates or converted to radii."""
    cfg = cfg.validated()
    if state.geometry != cfg.geometry:
        raise DomainError("state geometry does not match the flow configuration")
    k_target = target_curvature(t.complex, cfg.geometry)
    _, _, du = _evaluate(cfg, t, state.u, k_target)
    if coords == "u":
        return du
    if coords == "r":
        stretch = np.sinh(state.r) if cfg.geometry == "hyperbolic" else state.r
        return du * stretch
    raise ValueError(f"coords must be 'u' or 'r', got {coords!r}")


def _advance(cfg, t, u, dt, du0, k_target):
    """One explicit step from u; stage failures surface as DomainError."""
    if cfg.method == "euler":
        return u + dt * du0
    _, _, k2 = _evaluate(cfg, t, u + 0.5 * dt * du0, k_target)
    _, _, k3 = _evaluate(cfg, t, u + 0.5 * dt * k2, k_target)
    _, _, k4 = _evaluate(cfg, t, u + dt * k3, k_target)
    return u + (dt / 6.0) * (du0 + 2.0 * k2 + 2.0 * k3 + k4)


def _try_step(cfg, t, u, dt, du0, energy, k_target):
    """Advance with rejection-and-halving; returns the accepted evaluation."""
    rejections = 0
    while dt >= DT_FLOOR:
        try:
            u_new = _advance(cfg, t, u, dt, du0, k_target)
            state, K, du = _evaluate(cfg, t, u_new, k_target)
        except DomainError:
            dt *= 0.5
            rejections += 1
            continue
        energy_new = calabi_energy(K)
        # the exact flows are energy nonincreasing; an increase means the
        # step outran the integrator's stability region
        if not energy_new <= energy + _ENERGY_SLACK * max(1.0, energy):
            dt *= 0.5
            rejections += 1
            continue
        return u_new, state, K, du, energy_new, dt, rejections
    raise StepUnderflowError(dt, DT_FLOOR)


@dataclass(frozen=True)
class StepResult:
    state: PatternState
    K: np.ndarray
    dt: float
    rejections: int


def flow_step(cfg: FlowConfig, t: Triangulation, state: PatternState,
              dt: float | None = None) -> StepResult:
    """One accepted integrator step (with internal halving on rejection)."""
    cfg = cfg.validated()
    if state.geometry != cfg.geometry:
        raise DomainError("state geometry does not match the flow configuration")
    k_target = target_curvature(t.complex, cfg.geometry)
    _, K, du = _evaluate(cfg, t, state.u, k_target)
    _, state_new, K_new, _, _, dt_used, rejections = _try_step(
        cfg, t, state.u, cfg.dt if dt is None else float(dt),
        du, calabi_energy(K), k_target,
    )
    return StepResult(state=state_new, K=K_new, dt=dt_used, rejections=rejections)


def run_flow(cfg: FlowConfig, t: Triangulation, state0: PatternState) -> Trajectory:
    """Integrate until the curvature residual drops below tol.

    Stops with reason "converged" (max-norm residual under cfg.tol),
    "max_steps" (budget exhausted) or "step_underflow" (no acceptable step
    above the dt floor). The initial and final states are always recorded.
    """
    cfg = cfg.validated()
    if state0.geometry != cfg.geometry:
        raise DomainError("state geometry does not match the flow configuration")
    k_target = target_curvature(t.complex, cfg.geometry)
    u = np.array(state0.u, dtype=float)
    state, K, du = _evaluate(cfg, t, u, k_target)
    energy = calabi_energy(K)

    times = [0.0]
    radii = [state.r]
    curvatures = [K]
    energies = [energy]
    now = 0.0
    dt = cfg.dt
    n_steps = 0
    while True:
        residual = float(np.max(np.abs(K - k_target)))
        if residual < cfg.tol:
            stop_reason = "converged"
            break
        if n_steps >= cfg.max_steps:
            stop_reason = "max_steps"
            break
        try:
            u, state, K, du, energy, dt, _ = _try_step(
                cfg, t, u, dt, du, energy, k_target
            )
        except StepUnderflowError:
            stop_reason = "step_underflow"
            break
        now += dt
        n_steps += 1
        if n_steps % cfg.record_every == 0:
            times.append(now)
            radii.append(state.r)
            curvatures.append(K)
            energies.append(energy)

    if times[-1] != now:
        times.append(now)
        radii.append(state.r)
        curvatures.append(K)
        energies.append(energy)

    return Trajectory(
        flow=cfg.flow,
        geometry=cfg.geometry,
        times=np.array(times),
        radii=np.array(radii),
        curvatures=np.array(curvatures),
        energies=np.array(energies),
        stop_reason=stop_reason,
        n_steps=n_steps,
        final_dt=dt,
    )


# ---------------------------------------------------------------------------
# Decay-rate fitting


def fit_rate_from_samples(times, energies) -> RateFit:
    """Least-squares slope of log energy over the tail of a run.

    Uses the last half of the samples with strictly positive energy; needs
    at least ten of them. The returned rate is the negated slope, so decay
    gives a positive rate.
    """
    times = np.asarray(times, dtype=float)
    energies = np.asarray(energies, dtype=float)
    positive = energies > 0.0
    if int(positive.sum()) < 10:
        raise InsufficientSamplesError(
            f"need >= 10 positive-energy samples, have {int(positive.sum())}"
        )
    ts = times[positive]
    log_e = np.log(energies[positive])
    half = len(ts) // 2
    ts, log_e = ts[half:], log_e[half:]
    slope, intercept = np.polyfit(ts, log_e, 1)
    predicted = slope * ts + intercept
    ss_res = float(np.sum((log_e - predicted) ** 2))
    ss_tot = float(np.sum((log_e - log_e.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return RateFit(rate=float(-slope), r_squared=float(r_squared))


def fit_rate(trajectory: Trajectory) -> RateFit:
    return fit_rate_from_samples(trajectory.times, trajectory.energies)


# ---------------------------------------------------------------------------
# Calabi vs Ricci cross-validation


@dataclass(frozen=True)
class CrossValidation:
    geometry: str
    calabi: Trajectory
    ricci: Trajectory
    calabi_radii: np.ndarray
    ricci_radii: np.ndarray
    max_difference: float


def _gauge_normalized(geometry: str, radii: np.ndarray) -> np.ndarray:
    """Euclidean patterns are scale free; pin the gauge to sum u = 0."""
    if geometry == "hyperbolic":
        return radii
    u = np.log(radii)
    return np.exp(u - u.mean())


def cross_validate(t: Triangulation, state0: PatternState, geometry: str,
                   dt: float = 1e-2, tol: float = 1e-10,
                   max_steps: int = 1_000_000, method: str = "rk4") -> CrossValidation:
    """Run Calabi and Ricci from the same start; their fixed points must agree.

    Raises NonConvergenceError if either run fails to converge.
    """
    geometry = check_geometry(geometry)
    runs = {}
    for flow in ("calabi", "ricci"):
        cfg = FlowConfig(flow=flow, geometry=geometry, dt=dt, tol=tol,
                         max_steps=max_steps, method=method,
                         record_every=max(1, max_steps // 1000))
        traj = run_flow(cfg, t, state0)
        if traj.stop_reason != "converged":
            raise NonConvergenceError(
                f"{flow} flow stopped with {traj.stop_reason!r} after {traj.n_steps} steps"
            )
        runs[flow] = traj
    calabi_r = _gauge_normalized(geometry, runs["calabi"].radii[-1])
    ricci_r = _gauge_normalized(geometry, runs["ricci"].radii[-1])
    return CrossValidation(
        geometry=geometry,
        calabi=runs["calabi"],
        ricci=runs["ricci"],
        calabi_radii=calabi_r,
        ricci_radii=ricci_r,
        max_difference=float(np.max(np.abs(calabi_r - ricci_r))),
    )


# ---------------------------------------------------------------------------
# Trajectory files


def write_trajectory_csv(trajectory: Trajectory, path) -> None:
    """Fixed-format CSV: t, r_0..r_{n-1}, K_0..K_{n-1}, energy.

    Floats carry 17 significant digits, so identical runs produce
    byte-identical files.
    """
    n = trajectory.radii.shape[1]
    header = ",".join(
        ["t"] + [f"r_{i}" for i in range(n)] + [f"K_{i}" for i in range(n)] + ["energy"]
    )
    lines = [header]
    for k in range(trajectory.num_samples):
        row = [trajectory.times[k], *trajectory.radii[k], *trajectory.curvatures[k],
               trajectory.energies[k]]
        lines.append(",".join(f"{x:.17g}" for x in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_trajectory_csv(path) -> dict:
    """Parse a trajectory CSV back into arrays; ValueError when malformed."""
    with open(path) as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if not lines:
        raise ValueError("empty trajectory file")
    header = lines[0].split(",")
    if len(header) < 4 or header[0] != "t" or header[-1] != "energy":
        raise ValueError("malformed trajectory header")
    n = (len(header) - 2) // 2
    if header != ["t"] + [f"r_{i}" for i in range(n)] + [f"K_{i}" for i in range(n)] + ["energy"]:
        raise ValueError("malformed trajectory header")
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != len(header):
            raise ValueError("row width does not match header")
        try:
            rows.append([float(x) for x in parts])
        except ValueError as exc:
            raise ValueError(f"non-numeric field: {exc}") from exc
    if not rows:
        raise ValueError("trajectory file has no samples")
    data = np.array(rows)
    return {
        "t": data[:, 0],
        "r": data[:, 1:1 + n],
        "K": data[:, 1 + n:1 + 2 * n],
        "energy": data[:, -1],
    }
