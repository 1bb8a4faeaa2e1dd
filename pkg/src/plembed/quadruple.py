"""Four-point metric spaces: Cayley-Menger determinant, comparison-angle
excesses, the embedding-curvature root solver, and coordinate realization.

The curvature solver scans the determinant of the curvature matrix (cos for
positive curvature, cosh for negative) for sign changes and bisects.  That
determinant vanishes identically at kappa = 0 for every quadruple (the
matrix degenerates to all-ones), so a small neighbourhood of the origin is
excluded from the scan and flatness is decided by the Cayley-Menger
determinant instead.  Every reported root is re-validated by realizing the
quadruple in the two-dimensional model at that curvature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DegenerateQuadrupleError, DomainError
from .spaceform import (
    TWO_PI,
    comparison_angle,
    distances_from_coords,
    realize_distances,
)

_PAIR_ORDER = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


@dataclass(frozen=True)
class MetricQuadruple:
    """Symmetric 4x4 distance matrix of a four-point metric space."""

    distances: np.ndarray

    def __post_init__(self):
        d = np.array(self.distances, dtype=float)
        if d.shape != (4, 4):
            raise DomainError("expected a 4x4 distance matrix")
        if not np.all(np.isfinite(d)):
            raise DomainError("distances must be finite")
        scale = float(d.max())
        if scale <= 0.0:
            raise DomainError("off-diagonal distances must be positive")
        if np.max(np.abs(d - d.T)) > 1e-12 * scale:
            raise DomainError("distance matrix must be symmetric")
        if np.max(np.abs(np.diag(d))) > 1e-12 * scale:
            raise DomainError("diagonal must be zero")
        d = 0.5 * (d + d.T)
        np.fill_diagonal(d, 0.0)
        off = d[~np.eye(4, dtype=bool)]
        if off.min() <= 0.0:
            raise DomainError("off-diagonal distances must be positive")
        slack = 1e-12 * scale
        for j in range(4):
            for i, k in combinations([x for x in range(4) if x != j], 2):
                if d[i, k] > d[i, j] + d[j, k] + slack:
                    raise DomainError("distances violate the triangle inequality")
        d.setflags(write=False)
        object.__setattr__(self, "distances", d)

    @classmethod
    def from_pairwise(cls, d12, d13, d14, d23, d24, d34) -> "MetricQuadruple":
        m = np.zeros((4, 4))
        for (i, j), v in zip(_PAIR_ORDER, (d12, d13, d14, d23, d24, d34)):
            m[i, j] = m[j, i] = v
        return cls(m)

    @classmethod
    def from_matrix(cls, m) -> "MetricQuadruple":
        return cls(np.asarray(m, dtype=float))

    def pairwise(self) -> tuple[float, ...]:
        """The six distances in the order d12, d13, d14, d23, d24, d34."""
        return tuple(float(self.distances[i, j]) for i, j in _PAIR_ORDER)

    @property
    def max_distance(self) -> float:
        return float(self.distances.max())

    @property
    def min_distance(self) -> float:
        return float(self.distances[~np.eye(4, dtype=bool)].min())


def _loose_matrix(m) -> np.ndarray:
    d = np.asarray(m, dtype=float)
    if d.shape != (4, 4):
        raise DomainError("expected a 4x4 distance matrix")
    scale = max(float(np.abs(d).max()), 1.0)
    if np.max(np.abs(d - d.T)) > 1e-12 * scale or np.max(np.abs(np.diag(d))) > 1e-12 * scale:
        raise DomainError("matrix must be symmetric with zero diagonal")
    if d.min() < 0.0:
        raise DomainError("distances must be nonnegative")
    return d


def cayley_menger(q) -> float:
    """Bordered 5x5 Cayley-Menger determinant of the quadruple.

    Accepts a MetricQuadruple or a raw symmetric 4x4 array; the raw form
    permits zero off-diagonal entries (this operation only).
    """
    d = q.distances if isinstance(q, MetricQuadruple) else _loose_matrix(q)
    b = np.ones((5, 5))
    b[0, 0] = 0.0
    b[1:, 1:] = d * d
    return float(np.linalg.det(b))


def nondegenerate(q: MetricQuadruple, *, margin: float = 1e-12) -> bool:
    """True when no point lies metrically between two others.

    Betweenness is tested with a relative margin of ``margin * max d``.
    """
    d = q.distances
    m = margin * float(d.max())
    for j in range(4):
        for i, k in combinations([x for x in range(4) if x != j], 2):
            if d[i, k] >= d[i, j] + d[j, k] - m:
                return False
    return True


def _apex_angles(d: np.ndarray, kappa: float, i: int) -> tuple[float, float, float]:
    """The three comparison angles at vertex i, pairs of the rest in index order."""
    rest = [j for j in range(4) if j != i]
    return tuple(
        comparison_angle(kappa, d[j, l], d[i, j], d[i, l]) for j, l in combinations(rest, 2)
    )


def vertex_excess(q: MetricQuadruple, kappa: float) -> tuple[np.ndarray, float]:
    """Per-vertex comparison-angle sums V_kappa and their maximum A_kappa."""
    d = q.distances
    v = np.array([sum(_apex_angles(d, kappa, i)) for i in range(4)])
    return v, float(v.max())


@dataclass(frozen=True)
class EmbeddabilityCertificate:
    """Slack-certified verdict for embedding a quadruple in the 3-model.

    ``excess_slack`` is 2*pi - A_kappa(Q); ``angle_slacks`` holds, per
    vertex, the three triangle-inequality slacks of its comparison angles.
    The verdict is true iff every slack is >= -tolerance; ``witness`` names
    the first violated inequality otherwise.
    """

    verdict: bool
    planar: bool
    excess_slack: float
    angle_slacks: np.ndarray
    witness: tuple | None

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "planar": self.planar,
            "excess_slack": self.excess_slack,
            "angle_slacks": [[float(x) for x in row] for row in self.angle_slacks],
            "witness": list(self.witness) if self.witness is not None else None,
        }


def s3_embeddability(q: MetricQuadruple, kappa: float, *, angle_tol: float = 1e-9) -> EmbeddabilityCertificate:
    """Embeddability of the quadruple in the 3-dimensional curvature-kappa model.

    Verdict: the maximal vertex excess A_kappa(Q) is at most 2*pi and at
    every vertex the three comparison angles satisfy the triangle
    inequalities.  ``planar`` flags the boundary case where some vertex has
    one angle equal (within ``angle_tol`` radians) to the sum of the other
    two, in which case the embedding lies in the 2-dimensional model.
    """
    if not nondegenerate(q):
        raise DegenerateQuadrupleError("quadruple has a metric betweenness")
    d = q.distances
    verdict = True
    witness: tuple | None = None
    v, a = vertex_excess(q, kappa)
    excess_slack = TWO_PI - a
    if excess_slack < -angle_tol:
        verdict = False
        witness = ("excess", int(np.argmax(v)))
    slacks = np.empty((4, 3))
    planar = False
    for i in range(4):
        a1, a2, a3 = _apex_angles(d, kappa, i)
        s = (a2 + a3 - a1, a1 + a3 - a2, a1 + a2 - a3)
        slacks[i] = s
        if any(abs(x) <= angle_tol for x in s):
            planar = True
        if verdict and min(s) < -angle_tol:
            verdict = False
            witness = ("angle", i, int(np.argmin(s)))
    return EmbeddabilityCertificate(verdict, planar and verdict, excess_slack, slacks, witness)


def realize_quadruple(
    q: MetricQuadruple,
    kappa: float,
    dim: int = 3,
    *,
    tol: float = 1e-8,
    rank_tol: float = 1e-9,
) -> np.ndarray | None:
    """Coordinates for the quadruple in the dim-dimensional model, or None.

    Success requires the recomputed distances to match within
    ``tol * max d``.  Placement is deterministic (see `realize_distances`).
    """
    if dim not in (2, 3):
        raise DomainError("dim must be 2 or 3")
    d = q.distances
    if kappa > 0.0:
        limit = TWO_PI / math.sqrt(kappa) * (1.0 + 1e-12)
        for t in combinations(range(4), 3):
            if d[t[0], t[1]] + d[t[0], t[2]] + d[t[1], t[2]] > limit:
                return None
    coords = realize_distances(kappa, d, dim, rank_tol=rank_tol)
    if coords is None:
        return None
    back = distances_from_coords(kappa, coords)
    if np.max(np.abs(back - d)) > tol * q.max_distance:
        return None
    return coords


# ---------------------------------------------------------------------------
# Embedding-curvature solver.


@dataclass(frozen=True)
class WaldOptions:
    """Knobs for `wald_curvature`.

    ``kappa_cap`` bounds the hyperbolic search (default 1e4 / min d^2);
    the spherical side is always capped at (pi / max d)^2.  ``flat_tol``
    scales with (max d)^8 and decides the Cayley-Menger flatness test.
    """

    samples: int = 512
    kappa_cap: float | None = None
    bisect_rtol: float = 1e-12
    flat_tol: float = 1e-9
    residual_tol: float = 1e-6
    rank_tol: float = 1e-9
    match_tol: float = 1e-8


@dataclass(frozen=True)
class WaldRoot:
    kappa: float
    residual: float
    minors_ok: bool


@dataclass(frozen=True)
class WaldResult:
    """Validated curvature roots and their classification.

    ``classification`` is one of flat, spherical, hyperbolic, multiple, or
    none-found.  ``minors_ok`` is meaningful for spherical roots (order-3
    principal minors of the cosine matrix); it is vacuously true elsewhere.
    """

    roots: tuple[WaldRoot, ...]
    classification: str
    search_interval: tuple[float, float]

    def best_root(self) -> WaldRoot | None:
        if not self.roots:
            return None
        if self.classification == "flat":
            for r in self.roots:
                if r.kappa == 0.0:
                    return r
        return self.roots[0]

    def to_dict(self) -> dict:
        return {
            "roots": [
                {"kappa": r.kappa, "residual": r.residual, "minors_ok": r.minors_ok}
                for r in self.roots
            ],
            "classification": self.classification,
            "search_interval": list(self.search_interval),
        }


def _log_cosh_np(x: np.ndarray) -> np.ndarray:
    return x + np.log1p(np.exp(-2.0 * x)) - math.log(2.0)


def _curvature_det(d: np.ndarray, kappa: float) -> float:
    """Scaled determinant of the curvature matrix; zeros and signs preserved."""
    if kappa > 0.0:
        return float(np.linalg.det(np.cos(math.sqrt(kappa) * d)))
    lc = _log_cosh_np(math.sqrt(-kappa) * d)
    m = np.exp(lc - lc.max(axis=1, keepdims=True))
    # rows may underflow to zero deep in the hyperbolic range; callers treat
    # non-finite or vanishing values explicitly, so silence the LAPACK noise
    with np.errstate(divide="ignore", over="ignore", invalid="ignore", under="ignore"):
        return float(np.linalg.det(m))


def _curvature_det_grid(d: np.ndarray, kappas: np.ndarray) -> np.ndarray:
    if kappas[0] > 0.0:
        mats = np.cos(np.sqrt(kappas)[:, None, None] * d[None])
    else:
        lc = _log_cosh_np(np.sqrt(-kappas)[:, None, None] * d[None])
        mats = np.exp(lc - lc.max(axis=2, keepdims=True))
    with np.errstate(divide="ignore", over="ignore", invalid="ignore", under="ignore"):
        return np.linalg.det(mats)


def _bisect(f, a: float, b: float, fa: float, fb: float, rtol: float) -> float:
    for _ in range(200):
        mid = 0.5 * (a + b)
        if b - a <= rtol * (1.0 + abs(mid)):
            return mid
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fa < 0.0) != (fm < 0.0):
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    return 0.5 * (a + b)


def _principal_minors_ok(d: np.ndarray, kappa: float, tol: float = 1e-9) -> bool:
    m = np.cos(math.sqrt(kappa) * d)
    for idx in combinations(range(4), 3):
        sub = m[np.ix_(idx, idx)]
        if np.linalg.det(sub) < -tol:
            return False
    return True


def wald_curvature(q: MetricQuadruple, opts: WaldOptions | None = None) -> WaldResult:
    """Curvatures kappa whose 2-dimensional model realizes the quadruple.

    Flatness is decided by |cayley_menger(q)| <= flat_tol * (max d)^8.
    Nonzero candidates come from sign changes of the curvature-matrix
    determinant on a log-spaced grid over [-kappa_cap, (pi / max d)^2],
    excluding a tiny neighbourhood of zero where that determinant vanishes
    structurally.  Spherical roots additionally need all order-3 principal
    minors of the cosine matrix to be nonnegative.  Every candidate is kept
    only if `realize_quadruple` succeeds at it in dimension 2.
    """
    opts = opts or WaldOptions()
    if not nondegenerate(q):
        raise DegenerateQuadrupleError("quadruple has a metric betweenness")
    d = q.distances
    dmax, dmin = q.max_distance, q.min_distance
    kappa_max = (math.pi / dmax) ** 2
    cap = opts.kappa_cap if opts.kappa_cap is not None else 1e4 / (dmin * dmin)
    floor = 1e-7 / (dmax * dmax)
    scale8 = dmax**8

    roots: list[WaldRoot] = []
    flat = False
    dcm = cayley_menger(q)
    if abs(dcm) <= opts.flat_tol * scale8:
        if realize_quadruple(q, 0.0, 2, tol=opts.match_tol, rank_tol=opts.rank_tol) is not None:
            flat = True
            roots.append(WaldRoot(0.0, abs(dcm) / scale8, True))

    half = max(opts.samples // 2, 8)
    candidates: list[float] = []
    for grid in (-np.geomspace(cap, floor, half), np.geomspace(floor, kappa_max, half)):
        vals = _curvature_det_grid(d, grid)
        for i in range(len(grid) - 1):
            fa, fb = vals[i], vals[i + 1]
            if not (np.isfinite(fa) and np.isfinite(fb)):
                continue
            if fa == 0.0:
                candidates.append(float(grid[i]))
            elif (fa < 0.0) != (fb < 0.0):
                candidates.append(
                    _bisect(
                        lambda k: _curvature_det(d, k),
                        float(grid[i]),
                        float(grid[i + 1]),
                        float(fa),
                        float(fb),
                        opts.bisect_rtol,
                    )
                )
        if np.isfinite(vals[-1]) and vals[-1] == 0.0:
            candidates.append(float(grid[-1]))

    for k in candidates:
        if flat and abs(k) <= 100.0 * floor:
            # shadow of the structural kappa = 0 zero, not a distinct root
            continue
        minors_ok = True
        if k > 0.0:
            minors_ok = _principal_minors_ok(d, k)
            if not minors_ok:
                continue
        if realize_quadruple(q, k, 2, tol=opts.match_tol, rank_tol=opts.rank_tol) is None:
            continue
        residual = abs(_curvature_det(d, k))
        if residual > opts.residual_tol:
            continue
        roots.append(WaldRoot(float(k), residual, minors_ok))

    roots.sort(key=lambda r: r.kappa)
    # flatness is a case split, not one root among many: a planar quadruple
    # may also sit on some sphere, yet its curvature is defined to be zero
    if flat:
        classification = "flat"
    elif not roots:
        classification = "none-found"
    elif len(roots) > 1:
        classification = "multiple"
    elif roots[0].kappa > 0.0:
        classification = "spherical"
    else:
        classification = "hyperbolic"
    return WaldResult(tuple(roots), classification, (-cap, kappa_max))
