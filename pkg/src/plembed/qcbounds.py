"""Lower bounds on quasiconformal dilatations of piecewise-linear embeddings.

Closed-form coefficients for dihedral wedges and convex polyhedra, an edge
audit of triangle meshes (max of pi / interior dihedral angle over convex
edges), normalized link volumes of solid corners (exact spherical excess or
seeded Monte Carlo), and the uniform bound on the local index of a
quasiregular map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, MeshError
from .mesh import PolyMesh

_FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True)
class DihedralWedgeSpec:
    """A wedge in dimension ``dimension`` over a codimension-k corner.

    ``angles`` holds the dimension - wedge_type - 1 dihedral angles, each in
    (0, pi].  The classical wedge is wedge_type = dimension - 2 with a
    single angle.
    """

    dimension: int
    wedge_type: int
    angles: tuple[float, ...]

    def __post_init__(self):
        n, k = self.dimension, self.wedge_type
        if n < 2:
            raise DomainError("dimension must be at least 2")
        if not 1 <= k <= n - 2:
            raise DomainError("wedge type must satisfy 1 <= k <= dimension - 2")
        angles = tuple(float(a) for a in self.angles)
        if len(angles) != n - k - 1:
            raise DomainError(f"expected {n - k - 1} angles, got {len(angles)}")
        for a in angles:
            if not (0.0 < a <= math.pi):
                raise DomainError("wedge angles must lie in (0, pi]; bounds for reflex angles are unknown")
        object.__setattr__(self, "angles", angles)


@dataclass(frozen=True)
class DilatationBounds:
    """Inner dilatation, a lower bound for the outer one, and the maximal one."""

    inner: float
    outer_lower: float
    maximal: float

    def to_dict(self) -> dict:
        return {"inner": self.inner, "outer_lower": self.outer_lower, "maximal": self.maximal}


def dihedral_wedge_coefficients(spec: DihedralWedgeSpec) -> DilatationBounds:
    """Exact dilatation coefficients of the standard wedge map.

    Inner dilatation pi^(n-k-1) / product(angles); the outer dilatation is
    bounded below by its (n-1)-th root, and the maximal dilatation equals
    the inner one.
    """
    prod = 1.0
    for a in spec.angles:
        prod *= a
    pipow = 1.0
    for _ in range(spec.dimension - spec.wedge_type - 1):
        pipow *= math.pi
    inner = pipow / prod
    return DilatationBounds(inner, inner ** (1.0 / (spec.dimension - 1)), inner)


def convex_face_count_bound(num_faces: int, dimension: int) -> DilatationBounds:
    """Dilatation lower bounds for a convex polyhedron by face count alone.

    Inner dilatation at least (m - n + 2) / (m - n) for m faces in
    dimension n; requires m > n.
    """
    m, n = int(num_faces), int(dimension)
    if n < 2:
        raise DomainError("dimension must be at least 2")
    if m <= n:
        raise DomainError("a convex polyhedron needs more faces than the dimension")
    val = (m - n + 2) / (m - n)
    return DilatationBounds(val, val ** (1.0 / (n - 1)), val)


def uniform_index_bound(dimension: int, inner: float) -> float:
    """Strict upper bound n^(n-1) * K_I on the infimum of the local index."""
    n = int(dimension)
    if n < 3:
        raise DomainError("the index bound is stated for dimension >= 3")
    if inner < 1.0:
        raise DomainError("inner dilatation is at least 1")
    return float(n ** (n - 1)) * inner


def folding_dilatation(alpha: float, beta: float) -> float:
    """Inner dilatation of the angle-rescaling fold between two wedges.

    Symmetrized to max(alpha/beta, beta/alpha) so the value is always >= 1,
    whichever wedge is wider.
    """
    if alpha <= 0.0 or beta <= 0.0:
        raise DomainError("wedge angles must be positive")
    return max(alpha / beta, beta / alpha)


# ---------------------------------------------------------------------------
# Mesh edge audit.


@dataclass(frozen=True)
class EdgeRecord:
    edge: tuple[int, int]
    angle: float
    convex: bool
    contribution: float | None


@dataclass(frozen=True)
class EdgeAngleReport:
    """Interior dihedral angles per edge and the resulting dilatation bound.

    ``bound`` is the max of pi / angle over convex edges (1.0 if none);
    reflex edges are listed separately and contribute nothing.  Angles
    below the conditioning threshold produce warnings.
    """

    edges: tuple[EdgeRecord, ...]
    bound: float
    reflex: tuple[tuple[int, int], ...]
    warnings: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "edges": [list(r.edge) for r in self.edges],
            "angles": [r.angle for r in self.edges],
            "bound": self.bound,
            "reflex": [list(e) for e in self.reflex],
            "warnings": list(self.warnings),
        }

    def table(self) -> str:
        lines = [f"{'edge':>12}  {'angle':>20}  {'contribution':>20}"]
        for r in self.edges:
            contrib = f"{r.contribution:.12g}" if r.contribution is not None else "reflex"
            lines.append(f"{str(r.edge):>12}  {r.angle:>20.12g}  {contrib:>20}")
        lines.append(f"bound: {self.bound:.12g}")
        return "\n".join(lines)


def mesh_edge_dilatation_bound(mesh: PolyMesh, *, tiny_angle: float = 1e-6) -> EdgeAngleReport:
    """Audit all interior dihedral angles of a closed oriented triangle mesh.

    The interior angle at an edge is measured on the solid side (orientation
    is normalized to outward normals first, so a global flip of the input
    changes nothing).  Convex edges (angle <= pi) contribute pi / angle.
    """
    m = mesh.oriented_outward()
    v = m.vertices
    records = []
    reflex = []
    warnings = []
    bound = 1.0
    for edge in sorted(m.edge_faces):
        (f1, d1), (f2, d2) = m.edge_faces[edge]
        if d1[0] != edge[0]:  # let f1 carry the (a, b) direction with a < b
            (f1, d1), (f2, d2) = (f2, d2), (f1, d1)
        a, b = d1
        ehat = v[b] - v[a]
        ehat = ehat / np.linalg.norm(ehat)
        n1, n2 = m.face_normal(f1), m.face_normal(f2)
        bend = math.atan2(float(np.dot(np.cross(n1, n2), ehat)), float(np.dot(n1, n2)))
        angle = math.pi - bend
        if angle <= math.pi * (1.0 + 1e-12):
            if angle < tiny_angle:
                warnings.append(
                    f"edge {edge}: interior angle {angle:.3e} below {tiny_angle:.0e}; "
                    "contribution is ill-conditioned"
                )
            contribution = math.pi / angle
            bound = max(bound, contribution)
            records.append(EdgeRecord(edge, angle, True, contribution))
        else:
            reflex.append(edge)
            records.append(EdgeRecord(edge, angle, False, None))
    return EdgeAngleReport(tuple(records), bound, tuple(reflex), tuple(warnings))


# ---------------------------------------------------------------------------
# Link volumes of solid corners.


def _link_cycle(mesh: PolyMesh, v: int) -> list[int]:
    """Ordered cycle of link vertices around v; MeshError if not a closed fan."""
    succ: dict[int, int] = {}
    for k in mesh.vertex_faces(v):
        face = [int(x) for x in mesh.faces[k]]
        t = face.index(v)
        a, b = face[(t + 1) % 3], face[(t + 2) % 3]
        if a in succ:
            raise MeshError(f"vertex {v}: non-manifold star")
        succ[a] = b
    if not succ:
        raise MeshError(f"vertex {v} has no incident faces")
    start = min(succ)
    cycle = [start]
    cur = succ[start]
    while cur != start:
        cycle.append(cur)
        if cur not in succ or len(cycle) > len(succ):
            raise MeshError(f"vertex {v}: star does not close into a cycle")
        cur = succ[cur]
    if len(cycle) != len(succ):
        raise MeshError(f"vertex {v}: star splits into several cycles")
    return cycle


def _spherical_polygon_area(units: np.ndarray, *, det_tol: float = 1e-9) -> float:
    """Spherical excess of a convex cyclically-ordered polygon on the sphere.

    Computed as 2*pi minus the total geodesic turning of the boundary, with
    each turn taken from atan2 of tangent vectors.  Unlike summing interior
    angles through acos, this stays fully accurate at straight-through
    vertices (turn 0), which show up whenever a flat face was triangulated.
    """
    k = len(units)
    if k < 3:
        return 0.0
    dets = [float(np.dot(np.cross(units[i - 1], units[i]), units[(i + 1) % k])) for i in range(k)]
    if max(dets) > det_tol and min(dets) < -det_tol:
        raise MeshError("vertex neighbourhood is not a convex solid corner")
    if min(dets) < -det_tol:
        # traversal runs clockwise around the cone; flip so the interior
        # sits on the left and the excess comes out positive
        units = units[::-1]
    turning = 0.0
    for i in range(k):
        prev, cur, nxt = units[i - 1], units[i], units[(i + 1) % k]
        arrive = float(np.dot(cur, prev)) * cur - prev
        depart = nxt - float(np.dot(cur, nxt)) * cur
        na, nd = np.linalg.norm(arrive), np.linalg.norm(depart)
        if na < 1e-12 or nd < 1e-12:
            raise MeshError("degenerate link arc (parallel consecutive directions)")
        arrive /= na
        depart /= nd
        turning += math.atan2(float(np.dot(np.cross(arrive, depart), cur)), float(np.dot(arrive, depart)))
    return 2.0 * math.pi - turning


def _dedupe_cycle(units: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    keep = []
    k = len(units)
    for i in range(k):
        if not keep or np.linalg.norm(units[i] - keep[-1]) > tol:
            keep.append(units[i])
    while len(keep) > 1 and np.linalg.norm(keep[0] - keep[-1]) <= tol:
        keep.pop()
    return np.array(keep)


def normalized_link_volume(mesh: PolyMesh, v: int) -> float:
    """Solid angle of the corner at vertex v, as a fraction of the full sphere.

    Exact: the spherical excess of the link polygon divided by 4*pi.  The
    corner must be a convex solid cone (a vertex interior to a flat patch is
    the boundary case and gives exactly 1/2).
    """
    m = mesh.oriented_outward()
    cycle = _link_cycle(m, int(v))
    dirs = m.vertices[cycle] - m.vertices[int(v)]
    units = _dedupe_cycle(dirs / np.linalg.norm(dirs, axis=1, keepdims=True))
    return _spherical_polygon_area(units) / _FOUR_PI


@dataclass(frozen=True)
class MonteCarloEstimate:
    value: float
    stderr: float
    samples: int
    seed: int

    def to_dict(self) -> dict:
        return {"value": self.value, "stderr": self.stderr, "samples": self.samples, "seed": self.seed}


def normalized_link_volume_mc(
    mesh: PolyMesh, v: int, samples: int = 1_000_000, seed: int = 0, *, chunk: int = 1 << 16
) -> MonteCarloEstimate:
    """Monte Carlo estimate of `normalized_link_volume` with standard error.

    Uniform directions from a counter-based (Philox) generator, so runs with
    the same seed are reproducible; the variance accumulates by Welford
    updates over chunks.
    """
    if samples < 2:
        raise DomainError("need at least two samples")
    m = mesh.oriented_outward()
    vi = int(v)
    normals = np.array([m.face_normal(k) for k in m.vertex_faces(vi)])
    if len(normals) == 0:
        raise MeshError(f"vertex {v} has no incident faces")
    gen = np.random.Generator(np.random.Philox(seed))
    count = 0
    mean = 0.0
    m2 = 0.0
    done = 0
    while done < samples:
        take = min(chunk, samples - done)
        w = gen.normal(size=(take, 3))
        w /= np.linalg.norm(w, axis=1, keepdims=True)
        inside = np.all(w @ normals.T <= 0.0, axis=1)
        # Welford merge of the chunk (indicator mean/variance) into the run.
        c_count = take
        c_mean = float(np.mean(inside))
        c_m2 = float(np.sum((inside - c_mean) ** 2))
        delta = c_mean - mean
        total = count + c_count
        mean += delta * c_count / total
        m2 += c_m2 + delta * delta * count * c_count / total
        count = total
        done += take
    stderr = math.sqrt(m2 / (count - 1) / count)
    return MonteCarloEstimate(mean, stderr, samples, seed)


def normalized_exterior_angle(mesh: PolyMesh, v: int) -> float:
    """Normalized volume of the dual cone at vertex v (the exterior angle).

    The dual cone of a solid corner is spanned by the outward normals of its
    faces; its normalized volume equals the spherical excess of the normal
    polygon over 4*pi.  A vertex interior to a flat patch has a degenerate
    dual (a single ray) and returns 0.
    """
    m = mesh.oriented_outward()
    vi = int(v)
    cycle = _link_cycle(m, vi)
    # faces in fan order: face containing (v, cycle[i], cycle[i+1])
    face_of_pair = {}
    for k in m.vertex_faces(vi):
        face = [int(x) for x in m.faces[k]]
        t = face.index(vi)
        face_of_pair[face[(t + 1) % 3]] = k
    normals = np.array([m.face_normal(face_of_pair[a]) for a in cycle])
    normals = _dedupe_cycle(normals)
    if len(normals) < 3:
        return 0.0
    return _spherical_polygon_area(normals) / _FOUR_PI
