"""Metric graphs and curvature-compatibility systems on their skeletons.

A metric graph carries positive edge lengths; all quadruple checks use the
shortest-path metric of the whole graph, not just intra-star edges.  A star
quadruple at a vertex v consists of v and three of its neighbours.
Degenerate quadruples (a point metrically between two others, which happens
whenever a shortest path between two neighbours runs through v) are skipped
and reported, never guessed.

`polyline_curvature` offers two discrete curvature measures for three
consecutive points of a polygonal curve.  The Menger mode is the inverse
circumradius and reproduces 1/R exactly on circles.  The finsler_haantjes
mode is a *surrogate*: it applies the arc-versus-chord expansion
sqrt(24 (s - l) / l^3) with the polygonal arc s = sum of the two segment
lengths.  Because the polygonal arc is itself a chordal approximation, on
points sampled from a smooth curve this measure converges to sqrt(3)/2
times the true curvature as the spacing shrinks, not to the curvature
itself.  See the README.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Mapping

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .errors import (
    DomainError,
    DuplicateEdgeError,
    MissingKappaError,
    NonpositiveLengthError,
    ParseError,
    UnknownVertexError,
)
from .quadruple import (
    EmbeddabilityCertificate,
    MetricQuadruple,
    _apex_angles,
    nondegenerate,
    s3_embeddability,
    vertex_excess,
)
from .spaceform import TWO_PI

# Slack (radians) accepted on compatibility inequalities before declaring a
# violation; keeps exactly-flat boundary configurations feasible.
ANGLE_TOL = 1e-9


class MetricGraph:
    """Undirected graph with positive edge lengths and shortest-path metric."""

    def __init__(self, labels, edges):
        self.labels: tuple[str, ...] = tuple(str(l) for l in labels)
        if len(set(self.labels)) != len(self.labels):
            raise DomainError("vertex labels must be unique")
        self._index = {l: i for i, l in enumerate(self.labels)}
        n = len(self.labels)
        seen = set()
        cleaned = []
        for i, j, w in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise UnknownVertexError(f"edge index out of range: ({i}, {j})")
            if i == j:
                raise DomainError(f"self-loop at vertex {self.labels[i]!r}")
            if not (math.isfinite(w) and w > 0.0):
                raise NonpositiveLengthError(f"edge ({self.labels[i]}, {self.labels[j]}) has nonpositive length")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise DuplicateEdgeError(f"duplicate edge ({self.labels[i]}, {self.labels[j]})")
            seen.add(key)
            cleaned.append((key[0], key[1], float(w)))
        self.edges: tuple[tuple[int, int, float], ...] = tuple(cleaned)

    @classmethod
    def from_edge_list(cls, triples) -> "MetricGraph":
        """Build from (label, label, length) triples; vertex order of first appearance."""
        labels: list[str] = []
        index: dict[str, int] = {}
        edges = []
        for u, v, w in triples:
            for lab in (u, v):
                if lab not in index:
                    index[lab] = len(labels)
                    labels.append(lab)
            edges.append((index[u], index[v], w))
        return cls(labels, edges)

    @property
    def num_vertices(self) -> int:
        return len(self.labels)

    def index(self, v) -> int:
        if isinstance(v, (int, np.integer)):
            if not 0 <= v < len(self.labels):
                raise UnknownVertexError(f"vertex index {v} out of range")
            return int(v)
        try:
            return self._index[v]
        except KeyError:
            raise UnknownVertexError(f"unknown vertex {v!r}") from None

    def neighbors(self, v) -> tuple[int, ...]:
        i = self.index(v)
        out = set()
        for a, b, _ in self.edges:
            if a == i:
                out.add(b)
            elif b == i:
                out.add(a)
        return tuple(sorted(out))

    def degree(self, v) -> int:
        return len(self.neighbors(v))

    @cached_property
    def _dist(self) -> np.ndarray:
        n = len(self.labels)
        w = np.zeros((n, n))
        for i, j, length in self.edges:
            w[i, j] = w[j, i] = length
        return shortest_path(w, method="D", directed=False)

    def distance_matrix(self) -> np.ndarray:
        return self._dist

    def distance(self, u, v) -> float:
        return float(self._dist[self.index(u), self.index(v)])

    def scaled(self, factor: float) -> "MetricGraph":
        if factor <= 0.0:
            raise DomainError("scale factor must be positive")
        return MetricGraph(self.labels, [(i, j, w * factor) for i, j, w in self.edges])


def parse_metric_graph(text: str) -> MetricGraph:
    """Parse the plain edge-list format: ``label label length`` per line.

    ``#`` starts a comment; blank lines are ignored.  Raises ParseError
    (with the line number), DuplicateEdgeError, or NonpositiveLengthError.
    """
    triples = []
    seen: dict[tuple[str, str], int] = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError("expected 'label label length'", line=ln)
        u, v, token = parts
        if u == v:
            raise ParseError(f"self-loop at {u!r}", line=ln)
        try:
            length = float(token)
        except ValueError:
            raise ParseError(f"bad length {token!r}", line=ln) from None
        if not (math.isfinite(length) and length > 0.0):
            raise NonpositiveLengthError(f"edge length must be positive, got {token}", line=ln)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdgeError(f"edge ({u}, {v}) already given on line {seen[key]}", line=ln)
        seen[key] = ln
        triples.append((u, v, length))
    return MetricGraph.from_edge_list(triples)


def parse_graph_document(text: str) -> tuple[MetricGraph, dict[str, float] | None]:
    """Parse either the edge-list format or the structured JSON document.

    The JSON schema is ``{"vertices": [...], "edges": [[u, v, length], ...],
    "kappa": ...}`` with ``vertices`` and ``kappa`` optional; ``kappa`` is
    either a single number (uniform curvature) or a ``{vertex: value}``
    map.  Returns the graph and the per-vertex curvature map (None when
    absent).
    """
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"bad JSON: {e}") from None
        if "edges" not in doc:
            raise ParseError("document missing 'edges'")
        edges = []
        for k, e in enumerate(doc["edges"]):
            if not (isinstance(e, list) and len(e) == 3):
                raise ParseError(f"edges[{k}]: expected [u, v, length]")
            edges.append((str(e[0]), str(e[1]), float(e[2])))
        if "vertices" in doc:
            labels = [str(x) for x in doc["vertices"]]
            index = {l: i for i, l in enumerate(labels)}
            idx_edges = []
            for u, v, w in edges:
                for lab in (u, v):
                    if lab not in index:
                        raise UnknownVertexError(f"edge endpoint {lab!r} not in 'vertices'")
                idx_edges.append((index[u], index[v], w))
            graph = MetricGraph(labels, idx_edges)
        else:
            graph = MetricGraph.from_edge_list(edges)
        kappa = None
        if "kappa" in doc:
            raw = doc["kappa"]
            if isinstance(raw, dict):
                kappa = {str(k): float(v) for k, v in raw.items()}
                for lab in kappa:
                    graph.index(lab)  # raises UnknownVertexError
            else:
                kappa = {lab: float(raw) for lab in graph.labels}
        return graph, kappa
    return parse_metric_graph(text), None


@dataclass(frozen=True)
class StarQuadruple:
    """A vertex together with three of its neighbours, with graph distances.

    Position 0 of the quadruple matrix is the base vertex.
    """

    base: int
    neighbors: tuple[int, int, int]
    quadruple: MetricQuadruple


def star_quadruples(g: MetricGraph, v) -> list[StarQuadruple]:
    """All C(deg v, 3) star quadruples at v, in lexicographic neighbour order."""
    i = g.index(v)
    nbrs = g.neighbors(i)
    dm = g.distance_matrix()
    out = []
    for trio in combinations(nbrs, 3):
        idx = (i,) + trio
        out.append(StarQuadruple(i, trio, MetricQuadruple.from_matrix(dm[np.ix_(idx, idx)])))
    return out


@dataclass(frozen=True)
class RegionCheck:
    """Outcome of a vertex-excess sweep over a family of quadruples."""

    satisfied: bool
    witness: tuple[StarQuadruple, int] | None
    skipped: tuple[StarQuadruple, ...]


def region_of_curvature(g: MetricGraph, quads, kappa: float) -> RegionCheck:
    """Check V_kappa <= 2*pi at all four points of every quadruple.

    Degenerate quadruples are skipped and reported in ``skipped``.  On
    failure the witness is (quadruple, position of the violating point).
    """
    skipped = []
    for sq in quads:
        if not nondegenerate(sq.quadruple):
            skipped.append(sq)
            continue
        v, _ = vertex_excess(sq.quadruple, kappa)
        for pos in range(4):
            if v[pos] > TWO_PI + ANGLE_TOL:
                return RegionCheck(False, (sq, pos), tuple(skipped))
    return RegionCheck(True, None, tuple(skipped))


@dataclass(frozen=True)
class QuadrupleCheck:
    """Slacks of the three compatibility condition families for one quadruple.

    ``excess_slack`` is 2*pi - A_0(Q); ``angle_slacks`` are the flat
    comparison-angle triangle inequalities at the base vertex;
    ``curvature_slack`` is 2*pi - V_kappa(base).  ``certificate`` is the
    full flat embeddability certificate of the quadruple: it repeats the
    excess condition and extends the angle inequalities to all four points,
    which is exactly what makes an ok verdict realizable in coordinates.
    """

    neighbors: tuple[str, str, str]
    excess_slack: float
    angle_slacks: tuple[float, float, float]
    curvature_slack: float
    certificate: EmbeddabilityCertificate
    ok: bool

    def to_dict(self) -> dict:
        return {
            "neighbors": list(self.neighbors),
            "excess_slack": self.excess_slack,
            "angle_slacks": list(self.angle_slacks),
            "curvature_slack": self.curvature_slack,
            "certificate": self.certificate.to_dict(),
            "ok": self.ok,
        }


@dataclass(frozen=True)
class LocalReport:
    """Local compatibility verdict at one vertex."""

    vertex: str
    kappa: float
    verdict: bool
    checks: tuple[QuadrupleCheck, ...]
    skipped: tuple[tuple[str, str, str], ...]
    witness: tuple | None  # (neighbors, inequality name)

    def to_dict(self) -> dict:
        return {
            "vertex": self.vertex,
            "kappa": self.kappa,
            "verdict": self.verdict,
            "checks": [c.to_dict() for c in self.checks],
            "skipped": [list(s) for s in self.skipped],
            "witness": [list(self.witness[0]), self.witness[1]] if self.witness else None,
        }


def local_compatibility(g: MetricGraph, v, kappa: float, *, tol: float = ANGLE_TOL) -> LocalReport:
    """Check the three condition families over every star quadruple at v.

    Conditions per quadruple Q = (v, a, b, c): the flat excess A_0(Q) is at
    most 2*pi; the flat comparison-angle triangle inequalities hold (at v,
    and through the embedded certificate at the other three points as
    well, so that an ok verdict certifies a coordinate realization); and
    V_kappa(v) is at most 2*pi at the prescribed kappa.  Spherical-domain
    errors are re-raised with the offending quadruple identified.
    """
    i = g.index(v)
    label = g.labels[i]
    checks = []
    skipped = []
    verdict = True
    witness = None
    for sq in star_quadruples(g, i):
        nbr_labels = tuple(g.labels[j] for j in sq.neighbors)
        if not nondegenerate(sq.quadruple):
            skipped.append(nbr_labels)
            continue
        d = sq.quadruple.distances
        try:
            cert = s3_embeddability(sq.quadruple, 0.0, angle_tol=tol)
            vk = sum(_apex_angles(d, kappa, 0))
        except DomainError as e:
            raise DomainError(f"quadruple at {label} with neighbours {nbr_labels}: {e}") from e
        excess_slack = cert.excess_slack
        angle_slacks = tuple(float(x) for x in cert.angle_slacks[0])
        curvature_slack = TWO_PI - vk
        ok = cert.verdict and curvature_slack >= -tol
        checks.append(QuadrupleCheck(nbr_labels, excess_slack, angle_slacks, curvature_slack, cert, ok))
        if not ok and verdict:
            verdict = False
            if not cert.verdict:
                kind = cert.witness[0]
                if kind == "excess":
                    name = "excess"
                elif cert.witness[1] == 0:
                    name = f"angle{cert.witness[2]}"
                else:
                    # inequality at one of the three neighbour points
                    name = f"angle{cert.witness[2]}@{cert.witness[1]}"
            else:
                name = "curvature"
            witness = (nbr_labels, name)
    return LocalReport(label, float(kappa), verdict, tuple(checks), tuple(skipped), witness)


@dataclass(frozen=True)
class CompatibilityReport:
    """Conjunction of local reports over every vertex of the graph."""

    verdict: bool
    entries: tuple[LocalReport, ...]
    witness: tuple | None  # (vertex, neighbors, inequality name)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "entries": [e.to_dict() for e in self.entries],
            "witness": [self.witness[0], list(self.witness[1]), self.witness[2]]
            if self.witness
            else None,
        }


def global_compatibility(g: MetricGraph, kappa, *, tol: float = ANGLE_TOL) -> CompatibilityReport:
    """Run `local_compatibility` at every vertex, in vertex-index order.

    ``kappa`` is either a single float or a mapping from vertex label to
    curvature; a vertex missing from the mapping raises MissingKappaError.
    """
    if isinstance(kappa, Mapping):
        values = []
        for lab in g.labels:
            if lab not in kappa:
                raise MissingKappaError(f"no curvature prescribed for vertex {lab!r}")
            values.append(float(kappa[lab]))
    else:
        values = [float(kappa)] * g.num_vertices
    entries = []
    verdict = True
    witness = None
    for i, lab in enumerate(g.labels):
        rep = local_compatibility(g, i, values[i], tol=tol)
        entries.append(rep)
        if not rep.verdict and verdict:
            verdict = False
            witness = (lab, rep.witness[0], rep.witness[1])
    return CompatibilityReport(verdict, tuple(entries), witness)


# ---------------------------------------------------------------------------
# Discrete curvature of polygonal curves.


@dataclass(frozen=True)
class CurveTriple:
    """Three consecutive polyline points: two segment lengths and the span.

    ``leg1`` and ``leg2`` are the consecutive segment lengths; ``span`` is
    the distance between the outer points.
    """

    leg1: float
    leg2: float
    span: float

    def __post_init__(self):
        sides = (self.leg1, self.leg2, self.span)
        if min(sides) <= 0.0 or not all(math.isfinite(s) for s in sides):
            raise DomainError("curve triple lengths must be positive and finite")
        slack = 1e-12 * max(sides)
        if self.span > self.leg1 + self.leg2 + slack:
            raise DomainError("span exceeds the sum of the segments")


def polyline_curvature(t: CurveTriple, mode: str = "menger") -> float:
    """Discrete curvature of the triple; collinear points give 0.

    ``menger`` is 4*area/(product of sides), the inverse circumradius.
    ``finsler_haantjes`` is the chordal surrogate sqrt(24 (s - l) / l^3)
    with s = leg1 + leg2 and l = span; note the sqrt(3)/2 systematic factor
    on smooth curves (module docstring).
    """
    if mode == "menger":
        a, b, c = t.leg1, t.leg2, t.span
        s = 0.5 * (a + b + c)
        area2 = s * (s - a) * (s - b) * (s - c)
        if area2 <= 0.0:
            return 0.0
        return 4.0 * math.sqrt(area2) / (a * b * c)
    if mode == "finsler_haantjes":
        excess = t.leg1 + t.leg2 - t.span
        return math.sqrt(24.0 * max(excess, 0.0) / t.span**3)
    raise DomainError(f"unknown curvature mode {mode!r}")
