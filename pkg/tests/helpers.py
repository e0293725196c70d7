"""Test-side oracles, independent of the library's closed forms.

Everything here recomputes a quantity by a different route than the code
under test: finite differences for derivatives, explicit planar coordinates
for euclidean triangles, the law of cosines for hyperbolic ones, and a
from-scratch subset scan for the weight-excess condition.
"""

import numpy as np

from idealflow import PatternState, build_complex, curvature_vector


def fd_jacobian(t, geometry, u, h=1e-6):
    """Central finite differences of K(u), column by column."""
    n = len(u)
    J = np.empty((n, n))
    for j in range(n):
        up = u.copy()
        um = u.copy()
        up[j] += h
        um[j] -= h
        Kp = curvature_vector(t, PatternState.from_log(geometry, up))
        Km = curvature_vector(t, PatternState.from_log(geometry, um))
        J[:, j] = (Kp - Km) / (2.0 * h)
    return J


def planar_triangle(r_i, r_j, theta):
    """Euclidean oracle by explicit coordinates.

    Puts the common intersection point at the origin, the two circle centers
    at distance r_i and r_j with angle pi - theta between them, and reads the
    side length and base angles off the embedding.
    """
    ci = np.array([r_i, 0.0])
    phi = np.pi - theta
    cj = np.array([r_j * np.cos(phi), r_j * np.sin(phi)])
    l = float(np.linalg.norm(ci - cj))

    def angle_at(p, a, b):
        va, vb = a - p, b - p
        cosang = np.dot(va, vb) / (np.linalg.norm(va) * np.linalg.norm(vb))
        return float(np.arccos(np.clip(cosang, -1.0, 1.0)))

    origin = np.zeros(2)
    return l, angle_at(ci, origin, cj), angle_at(cj, origin, ci)


def hyperbolic_triangle_lc(r_i, r_j, theta):
    """Hyperbolic oracle via the law of cosines, arccos route.

    cosh l = cosh r_i cosh r_j + sinh r_i sinh r_j cos(theta) for apex angle
    pi - theta, then each base angle from cos th_i = (cosh r_i cosh l -
    cosh r_j) / (sinh r_i sinh l).
    """
    cl = np.cosh(r_i) * np.cosh(r_j) + np.sinh(r_i) * np.sinh(r_j) * np.cos(theta)
    l = float(np.arccosh(cl))
    sl = np.sinh(l)

    def base_angle(ra, rb):
        c = (np.cosh(ra) * cl - np.cosh(rb)) / (np.sinh(ra) * sl)
        return float(np.arccos(np.clip(c, -1.0, 1.0)))

    return l, base_angle(r_i, r_j), base_angle(r_j, r_i)


def brute_force_h3(c):
    """Exhaustive weight-excess scan written independently of the library."""
    n = c.num_vertices
    for mask in range(1, 1 << n):
        members = {v for v in range(n) if mask >> v & 1}
        total = sum(
            float(c.theta[e])
            for e in range(c.num_edges)
            if c.edge_ends[e][0] in members or c.edge_ends[e][1] in members
        )
        if total <= np.pi * len(members):
            return False, tuple(sorted(members))
    return True, None


def sphere_complex(n_extra, weight, seed=0):
    """Triangulated sphere: a tetrahedron plus ``n_extra`` random face splits.

    Splits keep orientations consistent, so the result always passes
    construction. Every split vertex has degree three. All edges share one
    weight, which need not satisfy the per-face angle condition.
    """
    rng = np.random.default_rng(seed)
    faces = [(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)]
    n = 4
    for _ in range(n_extra):
        a, b, c = faces.pop(int(rng.integers(len(faces))))
        faces.extend([(a, b, n), (b, c, n), (c, a, n)])
        n += 1

    edge_index = {}
    edges = []
    for tri in faces:
        for k in range(3):
            u, v = tri[k], tri[(k + 1) % 3]
            key = (min(u, v), max(u, v))
            if key not in edge_index:
                edge_index[key] = len(edges)
                edges.append((key[0], key[1], weight))
    built_faces = []
    for tri in faces:
        slots = []
        for k in range(3):
            u, v = tri[k], tri[(k + 1) % 3]
            e = edge_index[(min(u, v), max(u, v))]
            slots.append((e, 1 if u < v else -1))
        built_faces.append(slots)
    return build_complex(n, edges, built_faces)
