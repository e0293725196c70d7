"""Existence checks for hyperbolic zero-curvature patterns.

The sharp combinatorial condition (H3): for every nonempty vertex subset A,
the total weight of edges meeting A must strictly exceed pi |A|. Each edge
counts once when either endpoint lies in A; a loop at a vertex of A also
counts once. Small vertex sets are enumerated exhaustively; larger ones are
sampled, and the verdict says so.

Independently of the combinatorics, a flow run from unit radii classifies
instances empirically: convergence exhibits a pattern, while an exhausted
budget is reported as inconclusive, never as nonexistence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cellcomplex import CellComplex, check_star, triangulate
from .curvature import PatternState, k_average
from .flow import FlowConfig, run_flow
from .validation import check_geometry

EXACT_LIMIT = 20


@dataclass(frozen=True)
class H3Verdict:
    passed: bool
    mode: str                       # "exact" | "sampled"
    witness: tuple[int, ...] | None  # violating subset, if one was found
    subsets_checked: int


def _subset_weights(c: CellComplex, masks: np.ndarray) -> np.ndarray:
    """Total weight of edges meeting each subset, subsets given as bit masks."""
    totals = np.zeros(len(masks))
    for e in range(c.num_edges):
        u, v = c.edge_ends[e]
        edge_mask = (1 << int(u)) | (1 << int(v))
        hit = (masks & edge_mask) != 0
        totals += np.where(hit.astype(bool), c.theta[e], 0.0)
    return totals


def _popcount(values: np.ndarray, n_bits: int) -> np.ndarray:
    counts = np.zeros(len(values), dtype=np.int64)
    for b in range(n_bits):
        counts += (values >> b) & 1
    return counts


def _mask_to_subset(mask: int, n: int) -> tuple[int, ...]:
    return tuple(v for v in range(n) if mask >> v & 1)


def check_h3(c: CellComplex, n_samples: int = 100_000, seed: int = 0) -> H3Verdict:
    """Weight-excess condition over vertex subsets.

    Up to 2^20 subsets the check is an exact enumeration. Beyond that it
    covers all singletons and pairs plus ``n_samples`` seeded random subsets
    and labels the verdict "sampled": a pass is then only evidence, while a
    reported witness is still a proof of failure.
    """
    n = c.num_vertices
    if n <= EXACT_LIMIT:
        masks = np.arange(1, 1 << n, dtype=np.int64)
        mode = "exact"
    else:
        singletons = [1 << v for v in range(n)]
        pairs = [(1 << a) | (1 << b) for a in range(n) for b in range(a + 1, n)]
        rng = np.random.default_rng(seed)
        random_masks = []
        for _ in range(n_samples):
            picks = np.flatnonzero(rng.random(n) < rng.uniform(0.05, 0.95))
            if len(picks) == 0:
                picks = [int(rng.integers(n))]
            mask = 0
            for v in picks:
                mask |= 1 << int(v)
            random_masks.append(mask)
        dtype = np.int64 if n <= 62 else object
        masks = np.array(singletons + pairs + random_masks, dtype=dtype)
        mode = "sampled"

    totals = _subset_weights(c, masks)
    if mode == "exact":
        sizes = _popcount(masks, n)
    else:
        sizes = np.array([bin(int(m)).count("1") for m in masks])
    slack = totals - np.pi * sizes
    failing = np.flatnonzero(slack <= 0.0)
    if len(failing) > 0:
        worst = failing[np.argmin(slack[failing])]
        witness = _mask_to_subset(int(masks[worst]), n)
        return H3Verdict(passed=False, mode=mode, witness=witness,
                         subsets_checked=len(masks))
    return H3Verdict(passed=True, mode=mode, witness=None, subsets_checked=len(masks))


@dataclass(frozen=True)
class EmpiricalVerdict:
    converged: bool
    stop_reason: str
    final_residual: float
    n_steps: int
    radii: np.ndarray | None


def classify_empirical(c: CellComplex, geometry: str, budget: int = 100_000,
                       dt: float = 1e-2, tol: float = 1e-10) -> EmpiricalVerdict:
    """Run a Calabi flow from unit radii within a step budget.

    Convergence certifies existence by exhibiting the pattern. Anything else
    is inconclusive: budgets bound computation, not the mathematics.
    """
    geometry = check_geometry(geometry)
    tri = triangulate(c)
    cfg = FlowConfig(flow="calabi", geometry=geometry, dt=dt, tol=tol,
                     max_steps=budget, record_every=max(1, budget // 100))
    state0 = PatternState.from_radii(geometry, np.ones(c.num_vertices))
    traj = run_flow(cfg, tri, state0)
    final_K = traj.curvatures[-1]
    if geometry == "hyperbolic":
        residual = float(np.max(np.abs(final_K)))
    else:
        residual = float(np.max(np.abs(final_K - k_average(c))))
    converged = traj.stop_reason == "converged"
    return EmpiricalVerdict(
        converged=converged,
        stop_reason=traj.stop_reason,
        final_residual=residual,
        n_steps=traj.n_steps,
        radii=traj.radii[-1] if converged else None,
    )


@dataclass(frozen=True)
class ExistenceVerdict:
    star_ok: bool
    h3: H3Verdict | None
    empirical: EmpiricalVerdict | None


def assess_existence(c: CellComplex, geometry: str | None = None,
                     run_h3: bool = True, run_flow_check: bool = False,
                     budget: int = 100_000) -> ExistenceVerdict:
    """Bundle the star check, the combinatorial condition and, on request,
    the empirical flow classification."""
    star = all(r.ok for r in check_star(c))
    h3 = check_h3(c) if run_h3 else None
    empirical = None
    if run_flow_check and geometry is not None and star:
        empirical = classify_empirical(c, geometry, budget=budget)
    return ExistenceVerdict(star_ok=star, h3=h3, empirical=empirical)
