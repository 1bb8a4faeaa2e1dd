"""Trigonometry of the constant-curvature model spaces.

The sign of the curvature parameter picks the model geometry: kappa > 0 is
the sphere of radius 1/sqrt(kappa) (vectors in R^3 for the 2-dimensional
model), kappa = 0 is the Euclidean plane/space, and kappa < 0 is the
hyperboloid model of hyperbolic space scaled by 1/sqrt(-kappa) (vectors with
the time coordinate first, Minkowski form -x0*y0 + x1*y1 + ...).

Positive curvature imposes two admissibility constraints on a triple of
distances: every side must satisfy sqrt(kappa)*d <= pi, and the perimeter
must not exceed a bound.  The bound used here is 2*pi/sqrt(kappa); a
scale-free literal reading (perimeter <= 2*pi independent of kappa) exists
in the literature, so `triple_embeddable` takes an explicit ``limit``
override.  See the README for the discussion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RealizationError

# Curvature values are plain floats; the sign selects the model.
CurvatureParam = float

TWO_PI = 2.0 * math.pi

# acos/acosh arguments may drift past the boundary by rounding; absorb this much.
COS_GUARD = 1e-12

# Relative slack when validating triangle inequalities on float inputs.
TRIANGLE_SLACK = 1e-12

# Below |kappa|*scale^2 = 1e-14 the curved formulas are pure cancellation
# noise; fall back to the Euclidean law of cosines there.
_TINY_CURVATURE = 1e-14


def _clamped_acos(x: float, guard: float = COS_GUARD) -> float:
    if x > 1.0:
        if x - 1.0 > guard:
            raise DomainError(f"cosine value {x!r} outside [-1, 1]")
        return 0.0
    if x < -1.0:
        if -1.0 - x > guard:
            raise DomainError(f"cosine value {x!r} outside [-1, 1]")
        return math.pi
    return math.acos(x)


def _log_cosh(x: float) -> float:
    # x >= 0
    return x + math.log1p(math.exp(-2.0 * x)) - math.log(2.0)


@dataclass(frozen=True)
class MetricTriple:
    """Three mutual distances d12, d13, d23 of a three-point metric space.

    Distances must be positive and satisfy the triangle inequality
    non-strictly; degenerate (collinear) triples are allowed.
    """

    d12: float
    d13: float
    d23: float

    def __post_init__(self):
        sides = (self.d12, self.d13, self.d23)
        if not all(math.isfinite(s) for s in sides):
            raise DomainError("triple distances must be finite")
        if min(sides) <= 0.0:
            raise DomainError("triple distances must be positive")
        slack = TRIANGLE_SLACK * max(sides)
        for i in range(3):
            if sides[i] > sides[(i + 1) % 3] + sides[(i + 2) % 3] + slack:
                raise DomainError("triple violates the triangle inequality")

    @property
    def sides(self) -> tuple[float, float, float]:
        return (self.d12, self.d13, self.d23)

    @property
    def perimeter(self) -> float:
        return self.d12 + self.d13 + self.d23


@dataclass(frozen=True)
class ModelTriangle:
    """A triple realized by coordinates in a model space of curvature kappa.

    ``coords`` has shape (3, 2) for kappa = 0 and (3, 3) otherwise (sphere
    vectors, or hyperboloid vectors with the time coordinate first).
    """

    kappa: float
    coords: np.ndarray
    sides: MetricTriple


def perimeter_limit(kappa: float) -> float:
    """Largest admissible triple perimeter in curvature kappa (inf if kappa <= 0)."""
    if kappa <= 0.0:
        return math.inf
    return TWO_PI / math.sqrt(kappa)


def triple_embeddable(kappa: float, triple: MetricTriple, *, limit: float | None = None) -> bool:
    """True when the triple admits a model triangle in curvature kappa.

    For kappa <= 0 every valid triple embeds.  For kappa > 0 the perimeter
    must not exceed ``limit``, which defaults to 2*pi/sqrt(kappa); pass
    ``limit=2*math.pi`` for the scale-free literal convention.
    """
    if kappa <= 0.0:
        return True
    if limit is None:
        limit = TWO_PI / math.sqrt(kappa)
    return triple.perimeter <= limit * (1.0 + 1e-12)


def comparison_angle(kappa: float, opposite: float, b: float, c: float) -> float:
    """Apex angle of the curvature-kappa model triangle with given sides.

    ``opposite`` faces the apex; ``b`` and ``c`` are the sides adjacent to
    it.  The result is monotone nondecreasing in ``kappa`` and in
    ``opposite``.  Degenerate triangles return exactly 0 or pi.
    """
    if not (b > 0.0 and c > 0.0 and opposite >= 0.0):
        raise DomainError("adjacent sides must be positive and opposite nonnegative")
    scale = max(opposite, b, c)
    slack = TRIANGLE_SLACK * scale
    if opposite > b + c + slack or b > opposite + c + slack or c > opposite + b + slack:
        raise DomainError("sides violate the triangle inequality")
    if opposite >= b + c:
        return math.pi
    if b >= opposite + c or c >= opposite + b:
        return 0.0

    if kappa > 0.0 and kappa * scale * scale >= _TINY_CURVATURE:
        rt = math.sqrt(kappa)
        if rt * scale > math.pi * (1.0 + 1e-12):
            raise DomainError("side exceeds pi/sqrt(kappa) on the sphere")
        if rt * (opposite + b + c) > TWO_PI * (1.0 + 1e-12):
            raise DomainError("perimeter exceeds 2*pi/sqrt(kappa)")
        sb, sc = math.sin(rt * b), math.sin(rt * c)
        if sb == 0.0 or sc == 0.0:
            raise DomainError("apex angle undefined for an antipodal side")
        num = math.cos(rt * opposite) - math.cos(rt * b) * math.cos(rt * c)
        return _clamped_acos(num / (sb * sc))

    if kappa < 0.0 and -kappa * scale * scale >= _TINY_CURVATURE:
        rt = math.sqrt(-kappa)
        a_, b_, c_ = rt * opposite, rt * b, rt * c
        if max(b_, c_) > 350.0:
            # cosh overflows near 710; divide through by cosh(b_)*cosh(c_).
            l = _log_cosh(a_) - _log_cosh(b_) - _log_cosh(c_)
            return _clamped_acos((1.0 - math.exp(l)) / (math.tanh(b_) * math.tanh(c_)))
        num = math.cosh(b_) * math.cosh(c_) - math.cosh(a_)
        return _clamped_acos(num / (math.sinh(b_) * math.sinh(c_)))

    num = b * b + c * c - opposite * opposite
    return _clamped_acos(num / (2.0 * b * c))


# ---------------------------------------------------------------------------
# Coordinate realization.


def _psd_factor(gram: np.ndarray, max_rank: int, rank_tol: float) -> np.ndarray | None:
    """Factor a PSD Gram matrix into canonical coordinates, or None.

    Returns an (n, max_rank) array X with X @ X.T ~= gram, rotated so the
    rows form a lower-triangular pattern with nonnegative leading entries
    (point 0 on the first axis, point 1 in the first two axes, ...).
    """
    g = 0.5 * (gram + gram.T)
    w, v = np.linalg.eigh(g)
    scale = max(abs(w[0]), abs(w[-1]), 1e-300)
    if w[0] < -rank_tol * scale:
        return None
    w = np.clip(w, 0.0, None)
    if int(np.sum(w > rank_tol * scale)) > max_rank:
        return None
    order = np.argsort(w)[::-1][:max_rank]
    x = v[:, order] * np.sqrt(w[order])
    if x.shape[1] < max_rank:
        x = np.hstack([x, np.zeros((x.shape[0], max_rank - x.shape[1]))])
    return _canonicalize(x)


def _canonicalize(x: np.ndarray) -> np.ndarray:
    # Rotate so row i has zeros beyond coordinate i and the first nonzero
    # entry of every column is positive.  Deterministic placement.
    q, r = np.linalg.qr(x.T)
    y = r.T.copy()
    for k in range(y.shape[1]):
        col = y[:, k]
        nz = np.flatnonzero(np.abs(col) > 0.0)
        if nz.size and col[nz[0]] < 0.0:
            y[:, k] = -col
    return y


def _minkowski_factor(gram: np.ndarray, ambient: int, rank_tol: float) -> np.ndarray | None:
    """Factor a signature-(ambient-1, 1) Gram matrix into hyperboloid vectors.

    ``gram`` holds Minkowski products (all diagonal entries negative).
    Returns (n, ambient) coordinates with the time coordinate first, or None.
    """
    g = 0.5 * (gram + gram.T)
    w, v = np.linalg.eigh(g)
    scale = max(abs(w[0]), abs(w[-1]), 1e-300)
    if w[0] >= -rank_tol * scale:
        return None  # no timelike direction
    if g.shape[0] > 1 and w[1] < -rank_tol * scale:
        return None  # more than one negative eigenvalue
    time = math.sqrt(-w[0]) * v[:, 0]
    if time[0] < 0.0:
        time = -time
    if np.any(time <= 0.0):
        return None  # points split across hyperboloid sheets
    ws = np.clip(w[1:], 0.0, None)
    if int(np.sum(ws > rank_tol * scale)) > ambient - 1:
        return None
    order = np.argsort(ws)[::-1][: ambient - 1]
    xs = v[:, 1:][:, order] * np.sqrt(ws[order])
    if xs.shape[1] < ambient - 1:
        xs = np.hstack([xs, np.zeros((xs.shape[0], ambient - 1 - xs.shape[1]))])
    return np.column_stack([time, _canonicalize(xs)])


def realize_distances(kappa: float, dmat: np.ndarray, dim: int, *, rank_tol: float = 1e-9) -> np.ndarray | None:
    """Coordinates reproducing the distance matrix in the dim-dimensional model.

    Failure to embed is a value (None), not an error.  Coordinates are
    (n, dim) for kappa = 0, else (n, dim + 1) model vectors.  Placement is
    canonical: point 0 at the origin/pole, point 1 on the first axis, and
    each further point in the span of one additional axis.
    """
    d = np.asarray(dmat, dtype=float)
    n = d.shape[0]
    if kappa == 0.0:
        sq = d * d
        g = 0.5 * (sq[0, 1:][:, None] + sq[0, 1:][None, :] - sq[1:, 1:])
        x = _psd_factor(g, dim, rank_tol)
        if x is None:
            return None
        return np.vstack([np.zeros(dim), x])
    if kappa > 0.0:
        args = math.sqrt(kappa) * d
        if np.any(args > math.pi * (1.0 + 1e-9)):
            return None
        g = np.cos(args) / kappa
        return _psd_factor(g, dim + 1, rank_tol)
    args = math.sqrt(-kappa) * d
    if np.any(args > 700.0):
        return None  # cosh overflows double precision; cannot certify coordinates
    g = np.cosh(args) / kappa  # negative of cosh/R^2
    return _minkowski_factor(g, dim + 1, rank_tol)


def distances_from_coords(kappa: float, coords: np.ndarray) -> np.ndarray:
    """Pairwise geodesic distances of model coordinates."""
    c = np.asarray(coords, dtype=float)
    if kappa == 0.0:
        diff = c[:, None, :] - c[None, :, :]
        return np.sqrt((diff * diff).sum(axis=-1))
    if kappa > 0.0:
        cosv = kappa * (c @ c.T)
        cosv = np.clip(cosv, -1.0, 1.0)
        out = np.arccos(cosv) / math.sqrt(kappa)
        np.fill_diagonal(out, 0.0)
        return out
    t = c[:, 0]
    xs = c[:, 1:]
    coshv = -kappa * (np.outer(t, t) - xs @ xs.T)
    coshv = np.maximum(coshv, 1.0)
    out = np.arccosh(coshv) / math.sqrt(-kappa)
    np.fill_diagonal(out, 0.0)
    return out


def geodesic_distance(kappa: float, p, q) -> float:
    """Geodesic distance between two model points."""
    return float(distances_from_coords(kappa, np.vstack([p, q]))[0, 1])


def realize_triple(kappa: float, triple: MetricTriple) -> ModelTriangle:
    """Place the triple in the curvature-kappa model surface.

    Raises RealizationError when kappa > 0 and the perimeter bound fails,
    or when the recomputed distances miss the inputs by more than
    1e-10 * max side.
    """
    if kappa > 0.0 and not triple_embeddable(kappa, triple):
        raise RealizationError("triple perimeter exceeds the spherical bound")
    a, b, c = triple.d12, triple.d13, triple.d23
    dmat = np.array([[0.0, a, b], [a, 0.0, c], [b, c, 0.0]])
    coords = realize_distances(kappa, dmat, 2)
    if coords is None:
        raise RealizationError("triple does not embed at this curvature")
    back = distances_from_coords(kappa, coords)
    if np.max(np.abs(back - dmat)) > 1e-10 * max(triple.sides):
        raise RealizationError("realization failed the distance round-trip")
    return ModelTriangle(kappa, coords, triple)


def measured_angle(kappa: float, coords: np.ndarray, apex: int) -> float:
    """Angle at ``coords[apex]`` between the geodesics to the other two points.

    Oracle counterpart of `comparison_angle`: reads the angle off realized
    coordinates instead of the law of cosines.
    """
    c = np.asarray(coords, dtype=float)
    others = [i for i in range(c.shape[0]) if i != apex][:2]
    p = c[apex]
    if kappa == 0.0:
        u, v = c[others[0]] - p, c[others[1]] - p
        return _clamped_acos(float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v))))
    if kappa > 0.0:
        pp = float(np.dot(p, p))
        u = c[others[0]] - (float(np.dot(c[others[0]], p)) / pp) * p
        v = c[others[1]] - (float(np.dot(c[others[1]], p)) / pp) * p
        return _clamped_acos(float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v))))
    eta = np.ones(c.shape[1])
    eta[0] = -1.0

    def mink(x, y):
        return float(np.sum(eta * x * y))

    pp = mink(p, p)  # equals -1/|kappa|
    u = c[others[0]] - (mink(c[others[0]], p) / pp) * p
    v = c[others[1]] - (mink(c[others[1]], p) / pp) * p
    nu, nv = math.sqrt(mink(u, u)), math.sqrt(mink(v, v))
    return _clamped_acos(mink(u, v) / (nu * nv))
