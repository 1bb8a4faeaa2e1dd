"""Triangle meshes and ASCII OFF ingestion.

Polygonal faces are fan-triangulated on load.  Meshes used by the dilatation
and link-volume routines must be closed and consistently oriented; the
orientation is normalized so the enclosed signed volume is positive
(outward normals), which makes every derived quantity invariant under a
global orientation flip of the input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import MeshError, ParseError


@dataclass(frozen=True)
class PolyMesh:
    """Vertices (n, 3) and triangle faces (m, 3) with validated indices."""

    vertices: np.ndarray
    faces: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        f = np.array(self.faces, dtype=int)
        if v.ndim != 2 or v.shape[1] != 3:
            raise MeshError("vertices must be an (n, 3) array")
        if f.ndim != 2 or f.shape[1] != 3:
            raise MeshError("faces must be an (m, 3) triangle array")
        if f.size and (f.min() < 0 or f.max() >= len(v)):
            raise MeshError("face index out of range")
        scale = float(np.abs(v).max()) if v.size else 1.0
        for k, (a, b, c) in enumerate(f):
            if len({int(a), int(b), int(c)}) != 3:
                raise MeshError(f"face {k} repeats a vertex")
            area = 0.5 * np.linalg.norm(np.cross(v[b] - v[a], v[c] - v[a]))
            if area <= 1e-14 * scale * scale:
                raise MeshError(f"face {k} is degenerate (zero area)")
        v.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "faces", f)

    @cached_property
    def edge_faces(self) -> dict:
        """Map sorted edge -> list of (face index, directed pair as oriented)."""
        out: dict[tuple[int, int], list[tuple[int, tuple[int, int]]]] = {}
        for k, face in enumerate(self.faces):
            for t in range(3):
                a, b = int(face[t]), int(face[(t + 1) % 3])
                out.setdefault((min(a, b), max(a, b)), []).append((k, (a, b)))
        return out

    def require_closed_manifold(self):
        for edge, incident in self.edge_faces.items():
            if len(incident) != 2:
                raise MeshError(f"edge {edge} borders {len(incident)} faces; need a closed manifold")
            (_, d1), (_, d2) = incident
            if d1 == d2:
                raise MeshError(f"edge {edge} traversed twice in the same direction; inconsistent orientation")

    def signed_volume(self) -> float:
        v = self.vertices
        total = 0.0
        for a, b, c in self.faces:
            total += float(np.dot(v[a], np.cross(v[b], v[c])))
        return total / 6.0

    def oriented_outward(self) -> "PolyMesh":
        """Copy with positive enclosed volume (outward face normals)."""
        self.require_closed_manifold()
        if self.signed_volume() >= 0.0:
            return self
        return PolyMesh(self.vertices, self.faces[:, ::-1])

    def face_normal(self, k: int) -> np.ndarray:
        a, b, c = self.faces[k]
        n = np.cross(self.vertices[b] - self.vertices[a], self.vertices[c] - self.vertices[a])
        return n / np.linalg.norm(n)

    def vertex_faces(self, v: int) -> list[int]:
        return [k for k, f in enumerate(self.faces) if v in f]


def parse_off(text: str) -> PolyMesh:
    """Parse ASCII OFF; polygonal faces are fan-triangulated.

    Comment lines (``#``) and blank lines are allowed anywhere.
    """
    rows = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((ln, line))
    if not rows:
        raise ParseError("empty OFF document")
    ln, header = rows[0]
    if header != "OFF":
        raise ParseError("expected 'OFF' header", line=ln)
    if len(rows) < 2:
        raise ParseError("missing counts line", line=ln)
    ln, counts = rows[1]
    parts = counts.split()
    if len(parts) != 3:
        raise ParseError("counts line must be 'nv nf ne'", line=ln)
    try:
        nv, nf = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError("bad counts", line=ln) from None
    body = rows[2:]
    if len(body) < nv + nf:
        raise ParseError(f"expected {nv} vertex and {nf} face lines")
    vertices = []
    for ln, line in body[:nv]:
        parts = line.split()
        if len(parts) < 3:
            raise ParseError("vertex line needs three coordinates", line=ln)
        try:
            vertices.append([float(x) for x in parts[:3]])
        except ValueError:
            raise ParseError("bad vertex coordinate", line=ln) from None
    faces = []
    for ln, line in body[nv : nv + nf]:
        parts = line.split()
        try:
            k = int(parts[0])
            idx = [int(x) for x in parts[1 : 1 + k]]
        except (ValueError, IndexError):
            raise ParseError("bad face line", line=ln) from None
        if len(idx) != k or k < 3:
            raise ParseError(f"face needs {k} indices", line=ln)
        for t in range(1, k - 1):
            faces.append([idx[0], idx[t], idx[t + 1]])
    return PolyMesh(np.array(vertices, dtype=float), np.array(faces, dtype=int))


def load_off(path) -> PolyMesh:
    return parse_off(Path(path).read_text())
