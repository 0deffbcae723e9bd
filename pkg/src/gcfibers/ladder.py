"""Ladder diagrams and their face complexes.

The ladder diagram of a spectrum is the induced grid subgraph on the union
of rectangles [n_j, n_{j+1}] x [0, n - n_{j+1}].  Its faces are the
subgraphs that contain every top vertex (taxicab distance n from the origin)
and are unions of positive paths, i.e. monotone shortest origin-to-top
paths.  The face dimension is the first Betti number, equivalently the
number of bounded planar regions of the subgraph.

Enumeration strategy: every face is the union of the zero-dimensional faces
(trees) it contains, and trees arise from choosing one positive path per top
vertex.  So we generate the trees from path tuples and close under union,
deduplicating on edge sets.  Edge sets are held as bitmasks to keep tens of
thousands of faces cheap.  A brute-force subgraph filter lives in the test
suite as an independent oracle.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import os
from functools import lru_cache

from .errors import InvalidFaceError, SizeGuardError
from .spectrum import Cell, LambdaSpec, complex_dimension, constant_cells

Vertex = tuple[int, int]
Edge = tuple[Vertex, Vertex]  # endpoints sorted lexicographically

DEFAULT_MAX_BOXES = 12
_MAX_BOXES_ENV = "GC_FIBERS_MAX_BOXES"


def _edge(a: Vertex, b: Vertex) -> Edge:
    return (a, b) if a <= b else (b, a)


class LadderDiagram:
    """Immutable grid subgraph for one spectrum, with indexed edges.

    ``region_boxes`` are the unit boxes enclosed by the diagram, named by
    their top-right corner; they biject with the non-constant coordinates.
    """

    __slots__ = (
        "spec",
        "vertices",
        "edges",
        "edge_ids",
        "top_vertices",
        "region_boxes",
        "origin",
        "cell_values",
        "_edge_vmask",
        "_vertex_ids",
        "_separating",
        "_up_right",
        "_cache",
    )

    def __init__(self, spec: LambdaSpec):
        n = spec.n
        bounds = spec.block_bounds
        verts: set[Vertex] = set()
        for j in range(len(bounds) - 1):
            for a in range(bounds[j], bounds[j + 1] + 1):
                for b in range(0, n - bounds[j + 1] + 1):
                    verts.add((a, b))
        edges: set[Edge] = set()
        for (a, b) in verts:
            if (a + 1, b) in verts:
                edges.add(((a, b), (a + 1, b)))
            if (a, b + 1) in verts:
                edges.add(((a, b), (a, b + 1)))

        boxes: set[Cell] = set()
        for j in range(len(bounds) - 1):
            for a in range(bounds[j] + 1, bounds[j + 1] + 1):
                for b in range(1, n - bounds[j + 1] + 1):
                    boxes.add((a, b))

        self.spec = spec
        self.origin: Vertex = (0, 0)
        self.vertices = frozenset(verts)
        self.edges = tuple(sorted(edges))
        self.edge_ids = {e: i for i, e in enumerate(self.edges)}
        self.top_vertices = frozenset(v for v in verts if v[0] + v[1] == n)
        self.region_boxes = frozenset(boxes)
        self.cell_values = constant_cells(spec)

        self._vertex_ids = {v: i for i, v in enumerate(sorted(verts))}
        self._edge_vmask = tuple(
            (1 << self._vertex_ids[e[0]]) | (1 << self._vertex_ids[e[1]])
            for e in self.edges
        )
        self._separating = tuple(self._cells_across(e) for e in self.edges)
        up_right: dict[Vertex, list[tuple[Vertex, int]]] = {v: [] for v in verts}
        for e, i in self.edge_ids.items():
            up_right[e[0]].append((e[1], i))
        self._up_right = up_right
        self._cache: dict = {}  # per-diagram derived tables (stage edges etc.)

    def _cells_across(self, e: Edge):
        """The (lower, upper) cells an edge separates, or None if fewer than two.

        Horizontal edges separate the box below from the box above; vertical
        edges separate the box on the right (lower in the pattern) from the
        box on the left.  Cells outside the staircase i + j <= n + 1 do not
        exist.
        """
        n = self.spec.n
        (x0, y0), (x1, y1) = e

        def cell(i, j):
            return (i, j) if i >= 1 and j >= 1 and i + j <= n + 1 else None

        if y0 == y1:  # horizontal: below (x0+1, y0), above (x0+1, y0+1)
            lower, upper = cell(x0 + 1, y0), cell(x0 + 1, y0 + 1)
        else:  # vertical: right cell is the smaller one in the pattern
            lower, upper = cell(x0 + 1, y0 + 1), cell(x0, y0 + 1)
        if lower is None or upper is None:
            return None
        return (lower, upper)

    @property
    def n(self) -> int:
        return self.spec.n

    def separating_cells(self, e: Edge):
        return self._separating[self.edge_ids[e]]

    def box_count(self) -> int:
        return len(self.region_boxes)

    def __repr__(self):
        bp = ",".join(str(b) for b in self.spec.breakpoints)
        return f"LadderDiagram({bp};{self.n})"


@lru_cache(maxsize=128)
def _build_ladder_cached(spec: LambdaSpec) -> LadderDiagram:
    return LadderDiagram(spec)


def build_ladder(spec: LambdaSpec) -> LadderDiagram:
    return _build_ladder_cached(spec)


def positive_paths(diagram: LadderDiagram) -> list[tuple[Edge, ...]]:
    """All monotone lattice paths from the origin to a top vertex."""
    n = diagram.n
    paths: list[tuple[Edge, ...]] = []
    stack: list[tuple[Vertex, tuple[Edge, ...]]] = [(diagram.origin, ())]
    while stack:
        v, acc = stack.pop()
        if v[0] + v[1] == n:
            paths.append(acc)
            continue
        for w, _ in diagram._up_right[v]:
            stack.append((w, acc + (_edge(v, w),)))
    return sorted(paths)


class Face:
    """A face of the diagram: a union of positive paths covering all tops.

    Stored as a bitmask over the diagram's edge list.  ``dim`` is the first
    Betti number |E| - |V| + 1.
    """

    __slots__ = ("diagram", "mask", "dim", "_id", "_cycles")

    def __init__(self, diagram: LadderDiagram, mask: int):
        self.diagram = diagram
        self.mask = mask
        vmask = 0
        m = mask
        while m:
            low = m & -m
            vmask |= diagram._edge_vmask[low.bit_length() - 1]
            m ^= low
        self.dim = mask.bit_count() - vmask.bit_count() + 1
        self._id = None
        self._cycles = None

    @property
    def edges(self) -> tuple[Edge, ...]:
        d = self.diagram
        return tuple(d.edges[i] for i in _bits(self.mask))

    @property
    def vertices(self) -> frozenset[Vertex]:
        out = set()
        for e in self.edges:
            out.update(e)
        return frozenset(out)

    def __contains__(self, edge: Edge) -> bool:
        i = self.diagram.edge_ids.get(edge)
        return i is not None and bool(self.mask >> i & 1)

    def __eq__(self, other):
        return (
            isinstance(other, Face)
            and self.diagram is other.diagram
            and self.mask == other.mask
        )

    def __hash__(self):
        return hash((id(self.diagram), self.mask))

    def __le__(self, other: "Face") -> bool:
        return self.mask | other.mask == other.mask

    @property
    def id(self) -> str:
        if self._id is None:
            blob = ";".join(f"{x0},{y0}-{x1},{y1}" for (x0, y0), (x1, y1) in self.edges)
            self._id = hashlib.sha1(blob.encode()).hexdigest()[:12]
        return self._id

    def is_improper(self) -> bool:
        return self.mask.bit_count() == len(self.diagram.edges)

    def union(self, other: "Face") -> "Face":
        assert self.diagram is other.diagram
        return Face(self.diagram, self.mask | other.mask)

    def minimal_cycles(self):
        """One entry per bounded planar region: (boxes, top-right vertex)."""
        if self._cycles is None:
            self._cycles = _minimal_cycles(self)
        return self._cycles

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "dim": self.dim,
            "edges": [[x0, y0, x1, y1] for (x0, y0), (x1, y1) in self.edges],
            "v_sigma": sorted([list(v) for _, v in self.minimal_cycles()]),
        }

    def __repr__(self):
        return f"Face(id={self.id}, dim={self.dim})"


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def face_dimension(face: Face) -> int:
    return face.dim


def _covers_with_paths(diagram: LadderDiagram, mask: int) -> bool:
    """True when every edge of the subgraph lies on a monotone origin-to-top
    path inside the subgraph (the positive-path representability test)."""
    present = [bool(mask >> i & 1) for i in range(len(diagram.edges))]
    # forward reachability from the origin
    reach: set[Vertex] = set()
    stack = [diagram.origin]
    while stack:
        v = stack.pop()
        if v in reach:
            continue
        reach.add(v)
        for w, i in diagram._up_right[v]:
            if present[i]:
                stack.append(w)
    # backward reachability from the tops
    n = diagram.n
    coreach: set[Vertex] = set(t for t in diagram.top_vertices)
    down_left: dict[Vertex, list[tuple[Vertex, int]]] = {}
    for e, i in diagram.edge_ids.items():
        if present[i]:
            down_left.setdefault(e[1], []).append((e[0], i))
    stack = [t for t in diagram.top_vertices]
    while stack:
        v = stack.pop()
        for w, i in down_left.get(v, ()):
            if w not in coreach:
                coreach.add(w)
                stack.append(w)
    for e, i in diagram.edge_ids.items():
        if present[i] and not (e[0] in reach and e[1] in coreach):
            return False
    return True


def is_face_edges(diagram: LadderDiagram, edges) -> bool:
    """Face predicate on an explicit edge set (used by the oracle tests too)."""
    mask = 0
    for e in edges:
        i = diagram.edge_ids.get(_edge(*e))
        if i is None:
            return False
        mask |= 1 << i
    verts = set()
    for e in edges:
        verts.update(e)
    if not diagram.top_vertices <= verts:
        return False
    return _covers_with_paths(diagram, mask)


def face_from_edges(diagram: LadderDiagram, edges) -> Face:
    """Build and validate a face from an explicit edge list."""
    mask = 0
    for e in edges:
        e = _edge(*map(tuple, e))
        i = diagram.edge_ids.get(e)
        if i is None:
            raise InvalidFaceError(f"{e} is not an edge of {diagram!r}")
        mask |= 1 << i
    verts = set()
    for i in _bits(mask):
        verts.update(diagram.edges[i])
    if not diagram.top_vertices <= verts:
        missing = sorted(diagram.top_vertices - verts)
        raise InvalidFaceError(f"missing top vertices {missing}")
    if not _covers_with_paths(diagram, mask):
        raise InvalidFaceError("edge set is not a union of positive paths")
    return Face(diagram, mask)


def _max_boxes() -> int:
    raw = os.environ.get(_MAX_BOXES_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return DEFAULT_MAX_BOXES


@lru_cache(maxsize=32)
def _enumerate_cached(spec: LambdaSpec, max_boxes: int) -> tuple:
    diagram = build_ladder(spec)
    if diagram.box_count() > max_boxes:
        raise SizeGuardError(
            f"diagram has {diagram.box_count()} boxes; exhaustive enumeration "
            f"is limited to {max_boxes} (set {_MAX_BOXES_ENV} to override)"
        )
    paths = positive_paths(diagram)
    by_top: dict[Vertex, list[int]] = {}
    masks = []
    for p in paths:
        m = 0
        for e in p:
            m |= 1 << diagram.edge_ids[e]
        masks.append(m)
        end = p[-1][1] if p else diagram.origin
        by_top.setdefault(end, []).append(len(masks) - 1)
    tops = sorted(by_top)
    combos = math.prod(len(by_top[t]) for t in tops)
    if combos > 2_000_000:
        raise SizeGuardError(f"too many path combinations ({combos})")

    vmasks = diagram._edge_vmask

    def vcount(mask: int) -> int:
        vm = 0
        for i in _bits(mask):
            vm |= vmasks[i]
        return vm.bit_count()

    # zero-dimensional faces: one path per top whose union is a tree
    trees: set[int] = set()
    for choice in itertools.product(*(by_top[t] for t in tops)):
        m = 0
        for idx in choice:
            m |= masks[idx]
        if m.bit_count() - vcount(m) + 1 == 0:
            trees.add(m)

    # all faces are unions of the trees they contain
    seen: set[int] = set(trees)
    frontier = list(trees)
    tree_list = sorted(trees)
    while frontier:
        f = frontier.pop()
        for t in tree_list:
            g = f | t
            if g not in seen:
                seen.add(g)
                frontier.append(g)
    faces = [Face(diagram, m) for m in seen]
    faces.sort(key=lambda f: (f.dim, f.edges))
    return tuple(faces)


def enumerate_faces(diagram: LadderDiagram, max_boxes: int | None = None) -> list[Face]:
    """Complete duplicate-free list of faces, sorted by (dim, edge list).

    Refuses diagrams above the box guard (default 12, overridable via the
    ``GC_FIBERS_MAX_BOXES`` environment variable or the argument).
    """
    if max_boxes is None:
        max_boxes = _max_boxes()
    return list(_enumerate_cached(diagram.spec, max_boxes))


def improper_face(diagram: LadderDiagram) -> Face:
    return Face(diagram, (1 << len(diagram.edges)) - 1)


def _minimal_cycles(face: Face):
    """Bounded planar regions of the face, each tagged with its top-right vertex.

    Flood-fills the unit boxes of the bounding square: a box escapes to the
    outside through any side that is not an edge of the face.  The regions
    that never escape are the bounded ones; there are exactly ``dim`` of
    them, and their top-right vertices are pairwise distinct.
    """
    d = face.diagram
    n = d.n
    boxes = [(a, b) for a in range(1, n + 1) for b in range(1, n + 1)]
    index = {box: i for i, box in enumerate(boxes)}
    outside = len(boxes)
    parent = list(range(len(boxes) + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for (a, b) in boxes:
        i = index[(a, b)]
        # side edge, neighbor box (or outside)
        sides = (
            (((a - 1, b - 1), (a - 1, b)), (a - 1, b)),  # left
            (((a, b - 1), (a, b)), (a + 1, b)),          # right
            (((a - 1, b - 1), (a, b - 1)), (a, b - 1)),  # bottom
            (((a - 1, b), (a, b)), (a, b + 1)),          # top
        )
        for edge, nb in sides:
            if edge in face:
                continue
            union(i, index.get(nb, outside))

    regions: dict[int, set[Cell]] = {}
    out_root = find(outside)
    for box, i in index.items():
        r = find(i)
        if r != out_root:
            regions.setdefault(r, set()).add(box)

    result = []
    for boxes_in in regions.values():
        top = max(boxes_in, key=lambda c: (c[0] + c[1], c[0]))
        peak = top[0] + top[1]
        if sum(1 for c in boxes_in if c[0] + c[1] == peak) != 1:
            raise InvalidFaceError("region without a unique top-right corner")
        result.append((frozenset(boxes_in), top))
    result.sort(key=lambda rv: rv[1])
    if len(result) != face.dim:
        raise InvalidFaceError(
            f"found {len(result)} bounded regions for a face of dim {face.dim}"
        )
    if len({v for _, v in result}) != len(result):
        raise InvalidFaceError("duplicate top-right corners across regions")
    return tuple(result)


def minimal_cycles(face: Face):
    return face.minimal_cycles()


class FaceLattice:
    """The containment order on an enumerated face list."""

    def __init__(self, faces: list[Face]):
        self.faces = list(faces)
        self.by_id = {f.id: f for f in self.faces}
        self._by_mask = {f.mask: f for f in self.faces}

    def leq(self, a: Face, b: Face) -> bool:
        return a <= b

    def join(self, a: Face, b: Face) -> Face:
        """Smallest face containing both (the edge-set union)."""
        m = a.mask | b.mask
        try:
            return self._by_mask[m]
        except KeyError:
            raise InvalidFaceError("join escapes the enumerated lattice") from None

    def f_vector(self) -> tuple[int, ...]:
        top = max(f.dim for f in self.faces)
        counts = [0] * (top + 1)
        for f in self.faces:
            counts[f.dim] += 1
        return tuple(counts)

    def faces_of_dim(self, d: int) -> list[Face]:
        return [f for f in self.faces if f.dim == d]


def face_lattice(faces: list[Face]) -> FaceLattice:
    return FaceLattice(faces)
