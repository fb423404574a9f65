"""Straight-chord traintrack arrangements and the Ising graphs they carry.

The 2n endpoints ``d_1, ..., d_{2n}`` sit counterclockwise on the unit circle
at angles ``pi (2m - 1) / (2n)`` plus a small seeded jitter; chord ``j`` joins
``d_j`` to ``d_tau(j)``.  Faces of the arrangement are convex, so each face is
identified by its sign vector (side of every chord).  Faces are two-coloured
by the parity of their Hamming distance to the face at the arc ``(d_1, d_2)``,
which is black.

The black graph has one vertex per black face and one edge per crossing,
joining the two black faces opposite each other at that crossing.  The white
(dual) graph is built the same way from white faces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from .elliptic import as_parameter, dual_parameter, resc_sncndn
from .region import Region, crossings, require_valid

__all__ = [
    "GeometryError",
    "ChordArrangement",
    "Cell",
    "Edge",
    "IsingGraph",
    "build_arrangement",
    "enumerate_cells",
    "build_black_graph",
    "build_white_graph",
    "coupling_from_theta",
    "commutation_class",
    "find_seeds_by_class",
    "arrangement_to_dict",
]

JITTER = 0.01
MAX_RETRIES = 32
GENERIC_MARGIN = 1e-9


class GeometryError(RuntimeError):
    """Degenerate arrangement geometry."""


def coupling_from_theta(theta, p):
    """Z-invariant coupling ``1/2 ln((1 + sn theta) / cn theta)``."""
    s, c, _ = resc_sncndn(theta, as_parameter(p))
    return 0.5 * np.log((1.0 + s) / c)


@dataclass(frozen=True)
class ChordArrangement:
    region: Region
    seed: int
    endpoint_angles: np.ndarray
    points: np.ndarray  # (2n, 2) endpoint coordinates
    chords: tuple  # ((j, tau_j), ...) with j < tau_j, 1-based
    crossing_pairs: tuple  # ((ci, cj), ...) chord indices into ``chords``
    crossing_points: np.ndarray  # (X, 2)
    sample_eps: float

    @property
    def n(self) -> int:
        return self.region.n

    def side(self, chord_index: int, x) -> int:
        """+1 when ``x`` is left of the chord oriented from its lower to its
        higher endpoint index, -1 when right."""
        a, b = self.chords[chord_index]
        pa, pb = self.points[a - 1], self.points[b - 1]
        d = pb - pa
        v = np.asarray(x) - pa
        cr = d[0] * v[1] - d[1] * v[0]
        return 1 if cr > 0 else -1

    def sign_vector(self, x) -> tuple:
        return tuple(self.side(c, x) for c in range(len(self.chords)))

    def boundary_point(self, j: int) -> np.ndarray:
        """Point on the circle halfway between ``d_j`` and ``d_{j+1}`` (cyclic)."""
        size = 2 * self.n
        a0 = self.endpoint_angles[j - 1]
        a1 = self.endpoint_angles[j % size]
        if a1 <= a0:
            a1 += 2 * math.pi
        mid = 0.5 * (a0 + a1)
        return np.array([math.cos(mid), math.sin(mid)])

    def quadrant_points(self, x_index: int) -> list:
        ci, cj = self.crossing_pairs[x_index]
        X = self.crossing_points[x_index]
        ua = self._direction(ci)
        ub = self._direction(cj)
        pts = []
        for sa in (1, -1):
            for sb in (1, -1):
                d = sa * ua + sb * ub
                pts.append(X + self.sample_eps * d / np.linalg.norm(d))
        return pts

    def _direction(self, c: int) -> np.ndarray:
        a, b = self.chords[c]
        d = self.points[b - 1] - self.points[a - 1]
        return d / np.linalg.norm(d)

    def crossing_order(self) -> tuple:
        """For every chord, its crossing partners in order from the lower endpoint."""
        out = []
        for c, (a, _) in enumerate(self.chords):
            start = self.points[a - 1]
            partners = []
            for x, (ci, cj) in enumerate(self.crossing_pairs):
                if c in (ci, cj):
                    other = cj if c == ci else ci
                    dist = float(np.linalg.norm(self.crossing_points[x] - start))
                    partners.append((dist, other))
            out.append(tuple(o for _, o in sorted(partners)))
        return tuple(out)


def _segment_intersection(p1, p2, p3, p4):
    d1 = p2 - p1
    d2 = p4 - p3
    den = d1[0] * d2[1] - d1[1] * d2[0]
    if abs(den) < 1e-15:
        return None
    w = p3 - p1
    s = (w[0] * d2[1] - w[1] * d2[0]) / den
    return p1 + s * d1


def _line_distance(p, a, b):
    d = b - a
    v = p - a
    return abs(d[0] * v[1] - d[1] * v[0]) / np.linalg.norm(d)


def _try_build(region: Region, rng: np.random.Generator, seed: int):
    n = region.n
    size = 2 * n
    m = np.arange(1, size + 1)
    angles = math.pi * (2 * m - 1) / size + rng.uniform(-JITTER, JITTER, size)
    pts = np.column_stack([np.cos(angles), np.sin(angles)])
    chords = tuple(region.inv.chords())
    index = {c: i for i, c in enumerate(chords)}
    pairs, xpts = [], []
    for (j, tj), (k, tk) in combinations(chords, 2):
        if j < k < tj < tk or k < j < tk < tj:
            X = _segment_intersection(pts[j - 1], pts[tj - 1], pts[k - 1], pts[tk - 1])
            if X is None:
                return None
            pairs.append((index[(j, tj)], index[(k, tk)]))
            xpts.append(X)
    xpts = np.array(xpts).reshape(-1, 2)
    scale = 1.0
    for x, X in enumerate(xpts):
        if np.linalg.norm(X) > 1.0 - GENERIC_MARGIN:
            return None
        for c, (a, b) in enumerate(chords):
            if c in pairs[x]:
                continue
            d = _line_distance(X, pts[a - 1], pts[b - 1])
            if d < GENERIC_MARGIN:
                return None
            scale = min(scale, d)
        scale = min(scale, 1.0 - np.linalg.norm(X))
    for X, Y in combinations(xpts, 2):
        d = float(np.linalg.norm(X - Y))
        if d < GENERIC_MARGIN:
            return None
        scale = min(scale, d)
    return ChordArrangement(
        region=region,
        seed=seed,
        endpoint_angles=angles,
        points=pts,
        chords=chords,
        crossing_pairs=tuple(pairs),
        crossing_points=xpts,
        sample_eps=1e-4 * scale,
    )


def build_arrangement(region: Region, seed: int = 0) -> ChordArrangement:
    """Realise ``tau`` by straight chords in the unit disk.

    Jitter is drawn from ``seed``; on a degenerate draw (three chords nearly
    concurrent, coincident crossings) up to 32 further draws are tried.
    """
    require_valid(region)
    for attempt in range(MAX_RETRIES + 1):
        rng = np.random.default_rng([seed, attempt])
        arr = _try_build(region, rng, seed)
        if arr is not None:
            expected = {(j, k) for j, k in crossings(region)}
            got = set()
            for ci, cj in arr.crossing_pairs:
                a, b = sorted((arr.chords[ci][0], arr.chords[cj][0]))
                got.add((a, b))
            if got != expected:
                raise GeometryError("realised crossings disagree with the region's crossings")
            return arr
    raise GeometryError(f"no generic arrangement found for seed {seed} after {MAX_RETRIES} retries")


@dataclass(frozen=True)
class Cell:
    sign_vector: tuple
    color: str  # "black" | "white"
    point: np.ndarray


def enumerate_cells(arr: ChordArrangement) -> list:
    """All faces of the arrangement, each with its sign vector and colour.

    Every face either touches the circle along an arc between consecutive
    endpoints or has a crossing on its boundary, so arc midpoints plus the
    four quadrant points of each crossing reach every face.
    """
    found = {}
    size = 2 * arr.n
    for j in range(1, size + 1):
        x = arr.boundary_point(j)
        found.setdefault(arr.sign_vector(x), x)
    for xi in range(len(arr.crossing_pairs)):
        for x in arr.quadrant_points(xi):
            found.setdefault(arr.sign_vector(x), x)
    expected = 1 + arr.n + len(arr.crossing_pairs)
    if len(found) != expected:
        raise GeometryError(f"found {len(found)} faces, expected {expected}")
    ref = arr.sign_vector(arr.boundary_point(1))
    cells = []
    for sv in sorted(found):
        dist = sum(1 for a, b in zip(sv, ref) if a != b)
        cells.append(Cell(sv, "black" if dist % 2 == 0 else "white", found[sv]))
    return cells


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    crossing: tuple  # (j, k): lower endpoints of the two crossing chords, j < k
    theta: float
    coupling: float


@dataclass(frozen=True)
class IsingGraph:
    """Ising model on the faces of one colour.

    ``boundary[i]`` is the vertex carrying boundary label ``i + 1``; several
    labels may share a vertex (contracted boundary points).
    """

    color: str
    m: float
    vertices: tuple  # sign vectors
    edges: tuple
    boundary: tuple
    diamond: tuple = field(default=(), repr=False)  # (vertex, opposite-colour sign vector)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def coupling_matrix(self) -> np.ndarray:
        J = np.zeros((self.num_vertices, self.num_vertices))
        for e in self.edges:
            J[e.u, e.v] += e.coupling
            J[e.v, e.u] += e.coupling
        return J

    def contracted_groups(self) -> list:
        groups = {}
        for i, v in enumerate(self.boundary, start=1):
            groups.setdefault(v, []).append(i)
        return [g for g in groups.values() if len(g) > 1]

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = {i: set() for i in range(self.num_vertices)}
        for e in self.edges:
            adj[e.u].add(e.v)
            adj[e.v].add(e.u)
        seen, stack = {0}, [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.num_vertices


def _crossing_quadrants(arr: ChordArrangement, xi: int):
    """Sign vectors of the quadrant facing the boundary stretch between the
    two lower endpoints (Q1) and of the other three quadrants."""
    ci, cj = arr.crossing_pairs[xi]
    if arr.chords[ci][0] > arr.chords[cj][0]:
        ci, cj = cj, ci
    j, tj = arr.chords[ci]
    k, tk = arr.chords[cj]
    want_a = arr.side(ci, arr.points[k - 1])
    want_b = arr.side(cj, arr.points[j - 1])
    q1 = None
    svs = []
    for x in arr.quadrant_points(xi):
        sv = arr.sign_vector(x)
        svs.append(sv)
        if sv[ci] == want_a and sv[cj] == want_b:
            q1 = sv
    if q1 is None or len(set(svs)) != 4:
        raise GeometryError(f"quadrant sampling failed at crossing {(j, k)}")
    return (j, tj, k, tk), q1, svs


def _build_graph(arr: ChordArrangement, p, color: str) -> IsingGraph:
    region = arr.region
    param = as_parameter(p)
    cells = enumerate_cells(arr)
    colour_of = {c.sign_vector: c.color for c in cells}
    verts = [c.sign_vector for c in cells if c.color == color]
    index = {sv: i for i, sv in enumerate(verts)}
    edges = []
    for xi in range(len(arr.crossing_pairs)):
        (j, tj, k, tk), q1, svs = _crossing_quadrants(arr, xi)
        mine = [sv for sv in svs if colour_of[sv] == color]
        if len(mine) != 2 or sum(1 for sv in svs if colour_of[sv] == "black") != 2:
            raise GeometryError(f"crossing {(j, k)} is not surrounded by 2 black + 2 white faces")
        # the edge angle depends on which diagonal the black faces occupy
        if colour_of[q1] == "black":
            theta = region.a(tj) - region.a(k)
        else:
            theta = region.a(k) - region.a(j)
        if color == "white":
            theta = 0.5 * math.pi - theta
        if not 0.0 < theta < 0.5 * math.pi:
            raise GeometryError(f"edge angle {theta} at crossing {(j, k)} is outside (0, pi/2)")
        u, v = sorted(index[sv] for sv in mine)
        edges.append(Edge(u, v, (j, k), theta, float(coupling_from_theta(theta, param))))
    size = 2 * arr.n
    boundary = []
    for i in range(1, arr.n + 1):
        # black label i sits at arc (d_{2i-1}, d_{2i}); white label i at (d_{2i}, d_{2i+1})
        arc = 2 * i - 1 if color == "black" else 2 * i
        sv = arr.sign_vector(arr.boundary_point((arc - 1) % size + 1))
        if colour_of[sv] != color:
            raise GeometryError(f"boundary face of label {i} has the wrong colour")
        boundary.append(index[sv])
    diamond = []
    other = [c.sign_vector for c in cells if c.color != color]
    for sv in verts:
        for ow in other:
            if sum(1 for a, b in zip(sv, ow) if a != b) == 1:
                diamond.append((index[sv], ow))
    return IsingGraph(color, param.m, tuple(verts), tuple(edges), tuple(boundary), tuple(diamond))


def build_black_graph(arr: ChordArrangement, p) -> IsingGraph:
    """Ising graph on black faces with Z-invariant couplings at parameter ``p``.

    At the crossing of chords ``j < k < tau(j) < tau(k)`` the edge angle is
    ``alpha_tau(j) - alpha_k`` when the face facing the boundary between
    ``d_j`` and ``d_k`` is black, and ``alpha_k - alpha_j`` otherwise.
    """
    return _build_graph(arr, p, "black")


def build_white_graph(arr: ChordArrangement, p) -> IsingGraph:
    """Kramers-Wannier dual: white faces, complementary angles, dual parameter."""
    return _build_graph(arr, dual_parameter(p), "white")


def commutation_class(arr: ChordArrangement) -> tuple:
    return arr.crossing_order()


def find_seeds_by_class(region: Region, max_seed: int = 200, want: int = 2) -> dict:
    """Map commutation class -> first seed realising it (stops at ``want`` classes)."""
    found = {}
    for seed in range(max_seed):
        try:
            arr = build_arrangement(region, seed)
        except GeometryError:
            continue
        found.setdefault(commutation_class(arr), seed)
        if len(found) >= want:
            break
    return found


def arrangement_to_dict(arr: ChordArrangement, graph: Optional[IsingGraph] = None) -> dict:
    cells = enumerate_cells(arr)
    out = {
        "seed": arr.seed,
        "endpoint_angles": [float(a) for a in arr.endpoint_angles],
        "chords": [list(c) for c in arr.chords],
        "crossings": [
            {"chords": [list(arr.chords[ci]), list(arr.chords[cj])], "point": [float(v) for v in X]}
            for (ci, cj), X in zip(arr.crossing_pairs, arr.crossing_points)
        ],
        "cells": [{"sign_vector": list(c.sign_vector), "color": c.color} for c in cells],
    }
    if graph is not None:
        out["graph"] = {
            "color": graph.color,
            "m": graph.m,
            "vertices": [list(v) for v in graph.vertices],
            "edges": [
                {"u": e.u, "v": e.v, "crossing": list(e.crossing), "theta": e.theta,
                 "coupling": e.coupling}
                for e in graph.edges
            ],
            "boundary": list(graph.boundary),
        }
    return out
