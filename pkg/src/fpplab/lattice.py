"""Square-lattice primitives: vertices, growth clusters, boundary bookkeeping.

Coordinates are plain integers; a growth cluster tracks its outer edge
boundary incrementally so that uniform boundary-edge sampling and vertex
addition are both O(1).
"""
from __future__ import annotations

import math
from typing import Callable, FrozenSet, Iterable, NamedTuple, Optional

# Neighbor offsets in fixed east, north, west, south order.  Everything
# downstream (engines, kernels) relies on this ordering being stable.
NEIGHBOR_OFFSETS = ((1, 0), (0, 1), (-1, 0), (0, -1))

_COORD_LIMIT = 2**31 - 2  # keep coordinates exactly representable in int32 backends

UNIT_NORM_TOL = 1e-12


class Vertex(NamedTuple):
    x: int
    y: int


def neighbors(v: Vertex) -> list[Vertex]:
    """Return the four lattice neighbors of ``v`` in east, north, west, south order."""
    x, y = v
    if abs(x) > _COORD_LIMIT or abs(y) > _COORD_LIMIT:
        raise OverflowError(f"vertex {v!r} outside supported coordinate range")
    return [Vertex(x + dx, y + dy) for dx, dy in NEIGHBOR_OFFSETS]


def integer_part_vector(direction: tuple[float, float], n: int) -> Vertex:
    """Lattice point at (approximately) distance ``n`` along a unit direction.

    Coordinates are the floor of ``n * direction``; callers that need a
    nonzero target should check the result against the origin.
    """
    dx, dy = float(direction[0]), float(direction[1])
    norm = math.hypot(dx, dy)
    if abs(norm - 1.0) > UNIT_NORM_TOL:
        raise ValueError(f"direction {direction!r} is not a unit vector (norm {norm!r})")
    if n < 1:
        raise ValueError(f"scale n must be >= 1, got {n}")
    return Vertex(math.floor(n * dx), math.floor(n * dy))


class StripRegion:
    """Stadium-shaped region: all points within ``half_width`` of the segment
    from ``origin`` to ``target`` (Euclidean point-to-segment distance)."""

    def __init__(self, origin: Vertex, target: Vertex, half_width: float):
        if half_width <= 0.0:
            raise ValueError(f"half_width must be positive, got {half_width}")
        if origin == target:
            raise ValueError("strip region requires distinct origin and target")
        self.origin = Vertex(*origin)
        self.target = Vertex(*target)
        self.half_width = float(half_width)
        self._ax = float(origin[0])
        self._ay = float(origin[1])
        self._ux = float(target[0] - origin[0])
        self._uy = float(target[1] - origin[1])
        self._len_sq = self._ux * self._ux + self._uy * self._uy

    def segment_distance(self, v: tuple[float, float]) -> float:
        """Euclidean distance from ``v`` to the origin-target segment."""
        px = float(v[0]) - self._ax
        py = float(v[1]) - self._ay
        t = (px * self._ux + py * self._uy) / self._len_sq
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
        qx = px - t * self._ux
        qy = py - t * self._uy
        return math.hypot(qx, qy)

    def contains(self, v: tuple[float, float]) -> bool:
        return self.segment_distance(v) <= self.half_width

    __contains__ = contains

    def __repr__(self) -> str:
        return (f"StripRegion(origin={tuple(self.origin)}, target={tuple(self.target)}, "
                f"half_width={self.half_width})")


def strip_contains(region: StripRegion, v: tuple[float, float]) -> bool:
    """Membership test for a stadium region (distance to segment <= half width)."""
    return region.contains(v)


class Cluster:
    """Connected vertex set grown one site at a time, with an indexed multiset
    of outward directed boundary edges.

    The boundary is a flat list of ``(tail, head)`` edges (tail inside,
    head outside) plus a hash index from head vertex to the set of list
    positions holding its incoming edges.  That gives O(1) uniform edge
    sampling and O(1) amortized updates per added vertex via swap-remove.

    Parameters
    ----------
    origin : Vertex
        Seed vertex of the cluster.
    allowed : callable, optional
        Region predicate; vertices where it returns False are treated as
        missing from the lattice (never added, never counted in the
        boundary).  Used for strip-restricted growth.
    """

    def __init__(self, origin: Vertex = Vertex(0, 0),
                 allowed: Optional[Callable[[Vertex], bool]] = None):
        origin = Vertex(*origin)
        self.allowed = allowed
        if allowed is not None and not allowed(origin):
            raise ValueError(f"origin {origin!r} outside the allowed region")
        self.members: set[Vertex] = {origin}
        self.edges: list[tuple[Vertex, Vertex]] = []
        self._positions: dict[Vertex, set[int]] = {}
        for head in neighbors(origin):
            if allowed is None or allowed(head):
                self._append_edge(origin, head)

    # -- internal boundary maintenance ------------------------------------

    def _append_edge(self, tail: Vertex, head: Vertex) -> None:
        self.edges.append((tail, head))
        self._positions.setdefault(head, set()).add(len(self.edges) - 1)

    def _remove_position(self, pos: int) -> None:
        # Swap-remove: move the final edge into the hole, fix its index entry.
        last = len(self.edges) - 1
        if pos != last:
            moved = self.edges[last]
            self.edges[pos] = moved
            mp = self._positions[moved[1]]
            mp.discard(last)
            mp.add(pos)
        self.edges.pop()

    # -- public interface ---------------------------------------------------

    @property
    def boundary_count(self) -> int:
        """Number of directed boundary edges (the Eden exponential rate)."""
        return len(self.edges)

    def size(self) -> int:
        return len(self.members)

    def __contains__(self, v: Vertex) -> bool:
        return Vertex(*v) in self.members

    def sample_boundary_edge(self, u: float) -> tuple[Vertex, Vertex]:
        """Map a uniform variate in (0,1) to a boundary edge slot."""
        m = len(self.edges)
        if m == 0:
            raise ValueError("cluster has no boundary edges to sample")
        slot = int(u * m)
        if slot >= m:  # guard the u -> 1.0 rounding corner
            slot = m - 1
        return self.edges[slot]

    def add_vertex(self, w: Vertex) -> None:
        """Add ``w`` to the cluster and update the boundary multiset.

        Removes every boundary edge pointing at ``w`` and appends new edges
        from ``w`` to each non-member allowed neighbor (east, north, west,
        south order).
        """
        w = Vertex(*w)
        if w in self.members:
            raise ValueError(f"vertex {w!r} is already a cluster member")
        if self.allowed is not None and not self.allowed(w):
            raise ValueError(f"vertex {w!r} outside the allowed region")
        # Remove incoming edges highest position first so the swapped-in
        # tail edge can never be another edge of w itself.
        pos_set = self._positions.pop(w, None)
        if pos_set:
            for pos in sorted(pos_set, reverse=True):
                self._remove_position(pos)
        self.members.add(w)
        for head in neighbors(w):
            if head in self.members:
                continue
            if self.allowed is not None and not self.allowed(head):
                continue
            self._append_edge(w, head)

    def boundary_multiset(self) -> dict[tuple[Vertex, Vertex], int]:
        out: dict[tuple[Vertex, Vertex], int] = {}
        for e in self.edges:
            out[e] = out.get(e, 0) + 1
        return out


def boundary_edges_from_scratch(members: Iterable[Vertex],
                                allowed: Optional[Callable[[Vertex], bool]] = None,
                                ) -> dict[tuple[Vertex, Vertex], int]:
    """Recompute the directed boundary edge multiset of a vertex set directly.

    Reference implementation for consistency checks against the
    incrementally maintained boundary.
    """
    mset = {Vertex(*v) for v in members}
    out: dict[tuple[Vertex, Vertex], int] = {}
    for v in mset:
        for head in neighbors(v):
            if head in mset:
                continue
            if allowed is not None and not allowed(head):
                continue
            out[(v, head)] = out.get((v, head), 0) + 1
    return out


# -- minimal boundary over all n-cell connected sets --------------------------

MIN_BOUNDARY_CAP = 12

_min_boundary_cache: dict[int, int] = {}
_enum_state: dict = {"n": 0, "level": None}


def _enumerate_to(n: int) -> None:
    """Advance the cached polyomino enumeration frontier up to size ``n``.

    Fixed polyominoes (translation-normalized) are generated by breadth-first
    growth; each is reduced to a canonical bit signature for deduplication.
    """
    width = MIN_BOUNDARY_CAP + 2
    if _enum_state["level"] is None:
        _enum_state["level"] = {1 << 0: ((0, 0),)}
        _enum_state["n"] = 1
        _min_boundary_cache[1] = 4
    while _enum_state["n"] < n:
        nxt: dict[int, tuple] = {}
        for cells in _enum_state["level"].values():
            cset = set(cells)
            for x, y in cells:
                for dx, dy in NEIGHBOR_OFFSETS:
                    c = (x + dx, y + dy)
                    if c in cset:
                        continue
                    new = cells + (c,)
                    mx = min(px for px, _ in new)
                    my = min(py for _, py in new)
                    sig = 0
                    for px, py in new:
                        sig |= 1 << ((px - mx) + (py - my) * width)
                    if sig not in nxt:
                        nxt[sig] = new
        _enum_state["level"] = nxt
        _enum_state["n"] += 1
        k = _enum_state["n"]
        best = None
        for cells in nxt.values():
            cset = set(cells)
            b = 0
            for x, y in cells:
                for dx, dy in NEIGHBOR_OFFSETS:
                    if (x + dx, y + dy) not in cset:
                        b += 1
            if best is None or b < best:
                best = b
        _min_boundary_cache[k] = best


def min_boundary(n: int) -> int:
    """Minimum directed-boundary-edge count over all connected n-cell sets.

    Exhaustive search, so only small ``n`` is supported (cap 12); results
    are cached across calls.
    """
    if n < 1:
        raise ValueError(f"cell count must be >= 1, got {n}")
    if n > MIN_BOUNDARY_CAP:
        raise ValueError(
            f"min_boundary is exhaustive and capped at n={MIN_BOUNDARY_CAP}, got {n}")
    if n not in _min_boundary_cache:
        _enumerate_to(n)
    return _min_boundary_cache[n]
