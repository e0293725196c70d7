"""Weighted cellular decompositions of closed oriented surfaces.

A complex is a multigraph (loops and parallel edges allowed) together with a
set of faces, each face a closed walk of directed edges. Every edge carries a
weight in the open interval (0, pi). The induced surface must be closed,
connected and orientable: each edge borders exactly two face slots, and face
orientations can be chosen so the two traversals of an edge run in opposite
directions.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import (
    ComplexError,
    DisconnectedComplexError,
    EdgeUseCountError,
    NonOrientableError,
    StarConditionError,
    WeightRangeError,
)

_WEIGHT_RE = re.compile(r"^\s*(?:(\d+)\s*(?:/\s*(\d+))?\s*)?pi\s*$")


def parse_weight(value) -> tuple[float, Fraction | None]:
    """Return (radians, exact multiple of pi or None).

    Accepts a float in radians, a Fraction meaning a multiple of pi, or a
    string of the form "p/q pi" (also "p pi" or "pi") parsed exactly.
    """
    if isinstance(value, Fraction):
        return float(value) * np.pi, value
    if isinstance(value, str):
        m = _WEIGHT_RE.match(value)
        if not m:
            raise WeightRangeError(-1, value)
        p = int(m.group(1)) if m.group(1) else 1
        q = int(m.group(2)) if m.group(2) else 1
        if q == 0:
            raise WeightRangeError(-1, value)
        frac = Fraction(p, q)
        return float(frac) * np.pi, frac
    theta = float(value)
    return theta, None


@dataclass(frozen=True)
class CellComplex:
    """Immutable validated decomposition. Build via :func:`build_complex`."""

    num_vertices: int
    edge_ends: np.ndarray                    # (E, 2) vertex indices
    theta: np.ndarray                        # (E,) weights in radians
    theta_pi: tuple[Fraction | None, ...]    # exact weights as multiples of pi
    faces: tuple[tuple[tuple[int, int], ...], ...]  # per face: ((edge, dir), ...)

    @property
    def num_edges(self) -> int:
        return len(self.theta)

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    @property
    def face_sizes(self) -> tuple[int, ...]:
        return tuple(len(f) for f in self.faces)

    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + self.num_faces

    def genus(self) -> int:
        return (2 - self.euler_characteristic()) // 2


def euler_characteristic(c: CellComplex) -> int:
    return c.euler_characteristic()


def _face_walk_vertices(c_ends, face):
    """Tail and head vertex of every directed slot of a face."""
    tails, heads = [], []
    for edge, direction in face:
        a, b = c_ends[edge]
        if direction < 0:
            a, b = b, a
        tails.append(a)
        heads.append(b)
    return tails, heads


def build_complex(num_vertices: int, edges, faces) -> CellComplex:
    """Validate and freeze a decomposition.

    ``edges`` is a sequence of (u, v, weight); ``faces`` a sequence of closed
    walks given as (edge_index, direction) pairs with direction +1 or -1.
    Raises a :class:`ComplexError` subclass describing the first violation.
    """
    num_vertices = int(num_vertices)
    if num_vertices < 1:
        raise ComplexError("complex needs at least one vertex")

    ends = []
    thetas = []
    exacts = []
    for idx, (u, v, w) in enumerate(edges):
        u, v = int(u), int(v)
        if not (0 <= u < num_vertices and 0 <= v < num_vertices):
            raise ComplexError(f"edge {idx} endpoint out of range: ({u}, {v})")
        theta, exact = parse_weight(w)
        if not np.isfinite(theta) or not 0.0 < theta < np.pi:
            raise WeightRangeError(idx, w)
        ends.append((u, v))
        thetas.append(theta)
        exacts.append(exact)
    if not ends:
        raise ComplexError("a closed surface needs at least one edge")

    edge_ends = np.array(ends, dtype=np.int64)
    theta = np.array(thetas, dtype=float)
    num_edges = len(thetas)

    frozen_faces = []
    use_count = np.zeros(num_edges, dtype=np.int64)
    appearances: list[list[tuple[int, int]]] = [[] for _ in range(num_edges)]
    for f_idx, face in enumerate(faces):
        slots = []
        for slot in face:
            if isinstance(slot, (tuple, list)):
                edge, direction = int(slot[0]), int(slot[1])
            else:
                raise ComplexError(
                    f"face {f_idx}: slots must be (edge, direction) pairs"
                )
            if not 0 <= edge < num_edges:
                raise ComplexError(f"face {f_idx} references unknown edge {edge}")
            if direction not in (-1, 1):
                raise ComplexError(f"face {f_idx}: direction must be +1 or -1")
            slots.append((edge, direction))
            use_count[edge] += 1
            appearances[edge].append((f_idx, direction))
        if len(slots) < 1:
            raise ComplexError(f"face {f_idx} is empty")
        tails, heads = _face_walk_vertices(edge_ends, slots)
        m = len(slots)
        for k in range(m):
            if heads[k] != tails[(k + 1) % m]:
                raise ComplexError(
                    f"face {f_idx} is not a closed walk at slot {k}"
                )
        frozen_faces.append(tuple(slots))
    if not frozen_faces:
        raise ComplexError("a closed surface needs at least one face")

    for edge in range(num_edges):
        if use_count[edge] != 2:
            raise EdgeUseCountError(edge, int(use_count[edge]))

    _check_connected(num_vertices, edge_ends)
    _check_orientable(len(frozen_faces), appearances)

    edge_ends.setflags(write=False)
    theta.setflags(write=False)
    return CellComplex(
        num_vertices=num_vertices,
        edge_ends=edge_ends,
        theta=theta,
        theta_pi=tuple(exacts),
        faces=tuple(frozen_faces),
    )


def _check_connected(num_vertices, edge_ends):
    adjacency: list[list[int]] = [[] for _ in range(num_vertices)]
    for u, v in edge_ends:
        adjacency[u].append(v)
        adjacency[v].append(u)
    seen = np.zeros(num_vertices, dtype=bool)
    stack = [0]
    seen[0] = True
    while stack:
        v = stack.pop()
        for w in adjacency[v]:
            if not seen[w]:
                seen[w] = True
                stack.append(w)
    if not seen.all():
        missing = int(np.flatnonzero(~seen)[0])
        raise DisconnectedComplexError(f"vertex {missing} is not reachable")


def _check_orientable(num_faces, appearances):
    """Two-color faces so each edge is traversed once in each direction."""
    # Constraint per edge with slots (f1, d1), (f2, d2): flag_f1*flag_f2 = -d1*d2.
    constraints: list[list[tuple[int, int]]] = [[] for _ in range(num_faces)]
    for slots in appearances:
        (f1, d1), (f2, d2) = slots
        if f1 == f2:
            if d1 * d2 != -1:
                raise NonOrientableError(
                    f"face {f1} traverses an edge twice in the same direction"
                )
            continue
        rel = -d1 * d2  # required flag product
        constraints[f1].append((f2, rel))
        constraints[f2].append((f1, rel))
    flag = np.zeros(num_faces, dtype=np.int64)
    for start in range(num_faces):
        if flag[start] != 0:
            continue
        flag[start] = 1
        stack = [start]
        while stack:
            f = stack.pop()
            for g, rel in constraints[f]:
                want = flag[f] * rel
                if flag[g] == 0:
                    flag[g] = want
                    stack.append(g)
                elif flag[g] != want:
                    raise NonOrientableError(
                        f"faces {f} and {g} admit no consistent orientation"
                    )


# ---------------------------------------------------------------------------
# JSON input format


def complex_from_json(doc) -> CellComplex:
    """Build a complex from the JSON input format.

    ``doc`` is a dict (or JSON text) with keys "vertices", "edges" and
    "faces". Edges carry explicit nonzero ids; faces reference them signed,
    a positive id meaning forward traversal.
    """
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    try:
        num_vertices = int(doc["vertices"])
        raw_edges = doc["edges"]
        raw_faces = doc["faces"]
    except (KeyError, TypeError) as exc:
        raise ComplexError(f"input document missing required key: {exc}") from exc

    id_to_index: dict[int, int] = {}
    edges = []
    for k, entry in enumerate(raw_edges):
        try:
            eid = int(entry["id"])
            u, v = (int(x) for x in entry["ends"])
            w = entry["theta"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ComplexError(f"edge record {k} is malformed: {exc}") from exc
        if eid == 0:
            raise ComplexError("edge id 0 is not allowed (sign carries direction)")
        if eid in id_to_index:
            raise ComplexError(f"duplicate edge id {eid}")
        id_to_index[eid] = k
        edges.append((u, v, w))

    faces = []
    for f_idx, face in enumerate(raw_faces):
        slots = []
        for signed in face:
            signed = int(signed)
            if signed == 0 or abs(signed) not in id_to_index:
                raise ComplexError(f"face {f_idx} references unknown edge id {signed}")
            slots.append((id_to_index[abs(signed)], 1 if signed > 0 else -1))
        faces.append(slots)

    return build_complex(num_vertices, edges, faces)


def load_complex(path) -> CellComplex:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexError(f"invalid JSON: {exc}") from exc
    return complex_from_json(doc)


def complex_to_json(c: CellComplex) -> dict:
    """Inverse of :func:`complex_from_json`, preserving exact weights."""
    edges = []
    for k in range(c.num_edges):
        exact = c.theta_pi[k]
        if exact is not None:
            w = f"{exact.numerator}/{exact.denominator} pi"
        else:
            w = float(c.theta[k])
        u, v = (int(x) for x in c.edge_ends[k])
        edges.append({"id": k + 1, "ends": [u, v], "theta": w})
    faces = [
        [(e + 1) * d for e, d in face]
        for face in c.faces
    ]
    return {"vertices": c.num_vertices, "edges": edges, "faces": faces}


# ---------------------------------------------------------------------------
# Star condition


@dataclass(frozen=True)
class FaceStarCheck:
    face: int
    size: int
    weight_sum: float
    residual: float
    tol: float
    ok: bool


def check_star(c: CellComplex, tol: float | None = None) -> list[FaceStarCheck]:
    """Per-face check that boundary weights sum to (m - 2) pi.

    Weights given exactly as rational multiples of pi are summed in exact
    arithmetic, with a default tolerance of 1e-12; inexact inputs use 1e-9.
    Slot multiplicity counts: an edge traversed twice contributes twice.
    """
    results = []
    for f_idx, face in enumerate(c.faces):
        m = len(face)
        exact_parts = [c.theta_pi[e] for e, _ in face]
        if all(p is not None for p in exact_parts):
            frac_residual = abs(sum(exact_parts) - (m - 2))
            residual = float(frac_residual) * np.pi
            face_tol = 1e-12 if tol is None else tol
            weight_sum = float(sum(exact_parts)) * np.pi
        else:
            weight_sum = float(sum(c.theta[e] for e, _ in face))
            residual = abs(weight_sum - (m - 2) * np.pi)
            face_tol = 1e-9 if tol is None else tol
        results.append(
            FaceStarCheck(
                face=f_idx,
                size=m,
                weight_sum=weight_sum,
                residual=residual,
                tol=face_tol,
                ok=residual <= face_tol,
            )
        )
    return results


def star_ok(c: CellComplex, tol: float | None = None) -> bool:
    return all(r.ok for r in check_star(c, tol))


# ---------------------------------------------------------------------------
# Triangulation through the star vertices


@dataclass(frozen=True)
class Triangulation:
    """Cone triangulation: one star vertex per face, joined to the face walk.

    Each face slot (a directed edge from a to b) spans a triangle with the
    face's star vertex, contributing a corner at a and a corner at b. Corner
    arrays are flat, slot-major, [tail, head] per slot; a loop edge yields
    two corners at the same vertex.
    """

    complex: CellComplex
    corner_vertex: np.ndarray   # (2M,) primal vertex of each corner
    corner_other: np.ndarray    # (2M,) opposite endpoint of the corner's edge
    corner_edge: np.ndarray     # (2M,)
    corner_face: np.ndarray     # (2M,)
    slot_edge: np.ndarray       # (M,)
    slot_face: np.ndarray       # (M,)

    @property
    def num_vertices(self) -> int:
        return self.complex.num_vertices

    @property
    def num_slots(self) -> int:
        return len(self.slot_edge)

    @property
    def num_corners(self) -> int:
        return len(self.corner_vertex)

    @property
    def corner_theta(self) -> np.ndarray:
        return self.complex.theta[self.corner_edge]

    @property
    def slot_theta(self) -> np.ndarray:
        return self.complex.theta[self.slot_edge]

    @property
    def corners(self) -> list[tuple[int, int, int]]:
        return [
            (int(v), int(e), int(f))
            for v, e, f in zip(self.corner_vertex, self.corner_edge, self.corner_face)
        ]

    def star_vertex(self, face: int) -> int:
        """Index of a face's star vertex, numbered after the primal vertices."""
        return self.complex.num_vertices + face

    @property
    def corner_degree(self) -> np.ndarray:
        """Corners per primal vertex (= twice the edge-end degree)."""
        return np.bincount(self.corner_vertex, minlength=self.num_vertices)


def triangulate(c: CellComplex, tol: float | None = None) -> Triangulation:
    """Triangulate through the star vertices; requires the star condition.

    The cone angle around each star vertex is sum(pi - theta) over the face
    boundary, which equals 2 pi exactly when the star condition holds, so no
    curvature concentrates at star vertices.
    """
    checks = check_star(c, tol)
    bad = [r for r in checks if not r.ok]
    if bad:
        raise StarConditionError([r.face for r in bad], [r.residual for r in bad])

    cv, co, ce, cf, se, sf = [], [], [], [], [], []
    for f_idx, face in enumerate(c.faces):
        for edge, direction in face:
            a, b = c.edge_ends[edge]
            if direction < 0:
                a, b = b, a
            cv.extend((a, b))
            co.extend((b, a))
            ce.extend((edge, edge))
            cf.extend((f_idx, f_idx))
            se.append(edge)
            sf.append(f_idx)

    arrays = [np.array(x, dtype=np.int64) for x in (cv, co, ce, cf, se, sf)]
    for arr in arrays:
        arr.setflags(write=False)
    return Triangulation(c, *arrays)
