"""Honeycomb, 3-12 and martini lattices as neighbour generators.

Honeycomb vertices use brick-wall coordinates ``(x, y)``: the neighbours are
``(x - 1, y)``, ``(x + 1, y)`` and ``(x, y + 1)`` if ``x + y`` is even,
``(x, y - 1)`` otherwise.  Row ``y`` is then a zigzag chain.

The 3-12 lattice replaces every honeycomb vertex by a triangle; the martini
lattice does so only on the even sublattice.  A decorated vertex is
``(x, y, k)``: the triangle corner of ``(x, y)`` pointing along its k-th
honeycomb edge.  Undecorated vertices keep ``k = -1``.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

KINDS = ("honeycomb", "three_twelve", "martini")

_SQ3 = math.sqrt(3.0)


def honeycomb_neighbors(x: int, y: int) -> tuple[tuple[int, int], ...]:
    """Neighbours in fixed order: left, right, vertical."""
    vy = y + 1 if (x + y) % 2 == 0 else y - 1
    return ((x - 1, y), (x + 1, y), (x, vy))


# index of a vertex in its k-th neighbour's list: left<->right, vertical<->vertical
_BACK = (1, 0, 2)


def honeycomb_position(x: int, y: int) -> complex:
    """Unit-edge embedding of a brick-wall vertex."""
    lift = 0.5 if (x + y) % 2 == 0 else 0.0
    return complex(x * _SQ3 / 2.0, 1.5 * y + lift)


@dataclass(frozen=True)
class LatticeSpec:
    kind: str = "honeycomb"
    orientation: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown lattice {self.kind!r}; expected one of {KINDS}")
        if self.orientation not in (None, "a", "b"):
            raise DomainError(f"orientation must be 'a' or 'b', got {self.orientation!r}")
        if self.orientation is not None and self.kind != "honeycomb":
            raise DomainError("half-plane orientations are defined for the honeycomb only")

    @property
    def origin(self):
        if self.kind == "honeycomb":
            return (0, 0)
        if self.kind == "three_twelve":
            return (0, 0, 0)
        return (1, 0, -1)  # martini: a vertex outside the triangles

    def _decorated(self, x, y) -> bool:
        return self.kind == "three_twelve" or (self.kind == "martini" and (x + y) % 2 == 0)

    def neighbors(self, v) -> tuple:
        if self.kind == "honeycomb":
            out = honeycomb_neighbors(*v)
        else:
            x, y, k = v
            hn = honeycomb_neighbors(x, y)
            if k >= 0:
                out = [(x, y, kk) for kk in range(3) if kk != k]
                gx, gy = hn[k]
                out.append((gx, gy, _BACK[k]) if self._decorated(gx, gy) else (gx, gy, -1))
            else:
                out = [(gx, gy, _BACK[kk]) if self._decorated(gx, gy) else (gx, gy, -1)
                       for kk, (gx, gy) in enumerate(hn)]
            out = tuple(out)
        if self.orientation is not None:
            out = tuple(w for w in out if self.in_half_plane(w))
        return out

    # -- half-plane geometry (honeycomb only) --------------------------------

    def in_half_plane(self, v) -> bool:
        """Orientation a: zigzag boundary row y = 0.  Orientation b: armchair column x = 0."""
        x, y = v[0], v[1]
        if self.orientation == "a":
            return y >= 0
        if self.orientation == "b":
            return x >= 0
        return True

    def is_surface(self, v) -> bool:
        if self.orientation == "a":
            return v[1] == 0
        if self.orientation == "b":
            return v[0] == 0
        return False


def build_graph(spec: LatticeSpec, radius: int):
    """All vertices within graph distance ``radius`` of the origin.

    Returns ``(nodes, nbr, surface)``: ``nbr[i]`` lists neighbour indices
    padded with -1 (neighbours beyond the radius are dropped, which never
    matters for walks of length <= radius); ``surface`` flags boundary-row
    vertices.
    """
    origin = spec.origin
    index = {origin: 0}
    nodes = [origin]
    dist = {origin: 0}
    queue = deque([origin])
    while queue:
        v = queue.popleft()
        if dist[v] == radius:
            continue
        for w in spec.neighbors(v):
            if w not in index:
                index[w] = len(nodes)
                nodes.append(w)
                dist[w] = dist[v] + 1
                queue.append(w)
    nbr = np.full((len(nodes), 3), -1, dtype=np.int64)
    for i, v in enumerate(nodes):
        ws = [index[w] for w in spec.neighbors(v) if w in index]
        nbr[i, :len(ws)] = ws
    surface = np.array([spec.is_surface(v) for v in nodes], dtype=np.bool_)
    return nodes, nbr, surface


@dataclass(frozen=True)
class HoneycombPatch:
    """A ``cols x rows`` block of hexagons of the honeycomb lattice.

    Hexagon ``(i, j)`` is the brick with lower-left corner ``(2i + j % 2, j)``.
    Mid-edges are edges with at least one endpoint in the patch, stored as
    ``(v, w)`` with ``v`` inside; boundary mid-edges have ``w`` outside.
    """

    cols: int
    rows: int

    def __post_init__(self):
        if self.cols < 1 or self.rows < 1:
            raise DomainError("patch needs at least one hexagon in each direction")

    @property
    def n_hexagons(self) -> int:
        return self.cols * self.rows

    @property
    def vertices(self) -> frozenset:
        out = set()
        for j in range(self.rows):
            for i in range(self.cols):
                x0 = 2 * i + j % 2
                for dx in range(3):
                    out.add((x0 + dx, j))
                    out.add((x0 + dx, j + 1))
        return frozenset(out)

    def position(self, v) -> complex:
        return honeycomb_position(*v)

    def mid_edge(self, v, w):
        """Canonical key of the edge {v, w}."""
        verts = self.vertices
        if v in verts and w in verts:
            return (min(v, w), max(v, w))
        return (v, w) if v in verts else (w, v)

    def mid_edge_position(self, me) -> complex:
        return 0.5 * (self.position(me[0]) + self.position(me[1]))

    @property
    def mid_edges(self) -> list:
        verts = self.vertices
        return sorted({self.mid_edge(v, w) for v in verts for w in honeycomb_neighbors(*v)})

    @property
    def boundary_mid_edges(self) -> list:
        verts = self.vertices
        return [me for me in self.mid_edges if me[1] not in verts]

    def is_interior(self, v) -> bool:
        verts = self.vertices
        return v in verts and all(w in verts for w in honeycomb_neighbors(*v))

    @property
    def interior_vertices(self) -> list:
        return sorted(v for v in self.vertices if self.is_interior(v))

    @property
    def default_source(self):
        """Boundary mid-edge below the lowest-leftmost hexagon."""
        return self.boundary_mid_edges[0]
