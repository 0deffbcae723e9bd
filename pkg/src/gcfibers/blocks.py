"""W/M/L-block combinatorics: stage fibers and Lagrangian classification.

The k-th W-block is the fixed zigzag of boxes with 1 <= a, b and
k+1 <= a+b <= k+2.  A face's edges that run through the interior of the
block cut it into simple closed regions; a region contributes an odd sphere
S^{2l-1} exactly when it is a translate of the l-th M-block (the W-block
minus its two end boxes) and touches a bottom vertex of the W-block, and a
point otherwise.  Reading the stages k = 1..n-1 off the diagram yields the
iterated-bundle description of the fiber over any interior point of the
face, and rigid L-blocks give the same total dimension box by box, which is
what makes the Lagrangian test a tiling condition.

W-blocks are taken at the plane level and never clipped to the diagram:
regions may contain constant cells (for example the middle region over a
vertex of the three-flag diagram is an M_2 whose center box is the constant
anti-diagonal cell), and clipping would misclassify exactly those.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidFaceError
from .ladder import Edge, Face, Vertex, _edge
from .spectrum import Cell, complex_dimension


def w_boxes(k: int) -> tuple[Cell, ...]:
    """The 2k+1 boxes of the k-th W-block in zigzag order.

    Even positions are the outer diagonal a+b = k+2 (top to bottom-right),
    odd positions the inner diagonal a+b = k+1.
    """
    out = []
    for i in range(1, k + 1):
        out.append((i, k + 2 - i))
        out.append((i, k + 1 - i))
    out.append((k + 1, 1))
    return tuple(out)


def w_interior_edges(k: int) -> tuple[Edge, ...]:
    """The 2k grid edges between zigzag-consecutive boxes of W_k."""
    out = []
    for i in range(1, k + 1):
        # between (i, k+2-i) and (i, k+1-i): horizontal
        out.append(_edge((i - 1, k + 1 - i), (i, k + 1 - i)))
        # between (i, k+1-i) and (i+1, k+1-i): vertical
        out.append(_edge((i, k - i), (i, k + 1 - i)))
    return tuple(out)


def w_bottom_vertices(k: int) -> frozenset[Vertex]:
    """Lattice points of W_k closest to the origin: a + b = k - 1."""
    return frozenset((a, k - 1 - a) for a in range(k))


def m_template(ell: int) -> frozenset[Cell]:
    """The l-th M-block in normalized position (min corner at (1, .))."""
    inner = {(i, ell + 1 - i) for i in range(1, ell + 1)}
    outer = {(i, ell + 2 - i) for i in range(2, ell + 1)}
    return frozenset(inner | outer)


def _normalize(boxes: frozenset[Cell]) -> frozenset[Cell]:
    da = min(a for a, _ in boxes) - 1
    db = min(b for _, b in boxes) - 1
    return frozenset((a - da, b - db) for a, b in boxes)


def is_m_block(boxes: frozenset[Cell]) -> int | None:
    """Return l when the box set is a translate of M_l, else None."""
    if len(boxes) % 2 == 0:
        return None
    ell = (len(boxes) + 1) // 2
    return ell if _normalize(boxes) == m_template(ell) else None


@dataclass(frozen=True)
class WBlockDecomposition:
    """W_k cut by the walls of a face into simple closed regions."""

    k: int
    boxes: tuple[Cell, ...]
    walls: tuple[Edge, ...]
    regions: tuple[frozenset[Cell], ...]
    bottom_vertices: frozenset[Vertex]


def _stage_edge_ids(diagram, k: int):
    """Edge-table of W_k against a diagram: id of each zigzag cut edge, or
    None when the grid edge does not exist in the diagram (never a wall)."""
    key = ("w_edges", k)
    try:
        return diagram._cache[key]
    except KeyError:
        ids = tuple(diagram.edge_ids.get(e) for e in w_interior_edges(k))
        diagram._cache[key] = ids
        return ids


def _wall_pattern(face: Face, k: int) -> tuple[bool, ...]:
    mask = face.mask
    return tuple(
        i is not None and bool(mask >> i & 1)
        for i in _stage_edge_ids(face.diagram, k)
    )


def _region_slices(walls: tuple[bool, ...]) -> list[tuple[int, int]]:
    """Zigzag position runs separated by walls (inclusive bounds)."""
    out = []
    start = 0
    for pos, wall in enumerate(walls):
        if wall:
            out.append((start, pos))
            start = pos + 1
    out.append((start, len(walls)))
    return out


def w_decomposition(face: Face, k: int) -> WBlockDecomposition:
    """Cut W_k along the face's edges lying in the block interior.

    Two boxes stay in one region when their shared edge is not a wall; the
    zigzag adjacency makes the regions consecutive runs.
    """
    n = face.diagram.n
    if not 1 <= k <= n - 1:
        raise ValueError(f"stage k={k} out of range 1..{n - 1}")
    boxes = w_boxes(k)
    cuts = w_interior_edges(k)
    pattern = _wall_pattern(face, k)
    walls = tuple(e for e, w in zip(cuts, pattern) if w)
    regions = tuple(
        frozenset(boxes[s : e + 1]) for s, e in _region_slices(pattern)
    )
    return WBlockDecomposition(
        k=k,
        boxes=boxes,
        walls=walls,
        regions=regions,
        bottom_vertices=w_bottom_vertices(k),
    )


@dataclass(frozen=True)
class StageFiber:
    """The fiber contributed at one stage: sphere dims per region, 0 = point."""

    k: int
    factors: tuple[int, ...]

    @property
    def total_dim(self) -> int:
        return sum(self.factors)

    @property
    def circle_count(self) -> int:
        return sum(1 for f in self.factors if f == 1)

    def labels(self) -> list[str]:
        return ["pt" if f == 0 else f"S{f}" for f in self.factors]

    def is_point(self) -> bool:
        return self.total_dim == 0


def _region_sphere_dim(region: frozenset[Cell], k: int) -> int:
    """Sphere dimension of one region (0 for a point factor)."""
    ell = is_m_block(region)
    if ell is None:
        return 0
    # bottom vertices sit exactly in the inner-diagonal boxes
    if not any(a + b == k + 1 for a, b in region):
        return 0
    return 2 * ell - 1


_RUN_DIM_CACHE: dict[tuple[int, int, int], int] = {}


def _run_dim(k: int, s: int, e: int) -> int:
    """Classification of the zigzag run [s, e] of W_k; face-independent."""
    key = (k, s, e)
    try:
        return _RUN_DIM_CACHE[key]
    except KeyError:
        dim = _region_sphere_dim(frozenset(w_boxes(k)[s : e + 1]), k)
        _RUN_DIM_CACHE[key] = dim
        return dim


def stage_fiber(face: Face, k: int) -> StageFiber:
    n = face.diagram.n
    if not 1 <= k <= n - 1:
        raise ValueError(f"stage k={k} out of range 1..{n - 1}")
    pattern = _wall_pattern(face, k)
    factors = tuple(_run_dim(k, s, e) for s, e in _region_slices(pattern))
    return StageFiber(k=k, factors=factors)


@dataclass(frozen=True)
class FiberDescriptor:
    """Iterated-bundle data of the fiber over an interior point of a face."""

    face_id: str
    stages: tuple[StageFiber, ...]
    total_dim: int
    circle_count: int
    y_stages: tuple[StageFiber, ...]
    is_lagrangian: bool

    @property
    def pi1_rank(self) -> int:
        return self.circle_count

    @property
    def pi2_trivial(self) -> bool:
        return True

    @property
    def bundle(self) -> str:
        return _bundle_string(self.stages)

    @property
    def y_bundle(self) -> str:
        return _bundle_string(self.y_stages)

    def to_json(self) -> dict:
        return {
            "face_id": self.face_id,
            "stages": [{"k": s.k, "factors": s.labels()} for s in self.stages],
            "total_dim": self.total_dim,
            "r": self.circle_count,
            "lagrangian": self.is_lagrangian,
            "bundle": self.bundle,
            "torus_factor": f"T^{self.circle_count}",
            "y_bundle": self.y_bundle,
            "pi1_rank": self.pi1_rank,
            "pi2_trivial": True,
        }


def _stage_label(stage: StageFiber) -> str:
    spheres = [f"S^{f}" for f in stage.factors if f > 0]
    if not spheres:
        return "pt"
    if len(spheres) == 1:
        return spheres[0]
    return "(" + " x ".join(spheres) + ")"


def _bundle_string(stages) -> str:
    nontrivial = [s for s in stages if not s.is_point()]
    if not nontrivial:
        return "point"
    out = _stage_label(nontrivial[0])
    for s in nontrivial[1:]:
        out = f"{_stage_label(s)}-bundle over {out}"
    return out


def fiber_descriptor(face: Face) -> FiberDescriptor:
    """Classify every stage of the iterated bundle over the face's interior.

    The number of circle factors always equals the face dimension; a
    mismatch would mean the region classification is broken, so it is a hard
    failure rather than a report.
    """
    spec = face.diagram.spec
    stages = tuple(stage_fiber(face, k) for k in range(1, spec.n))
    total = sum(s.total_dim for s in stages)
    circles = sum(s.circle_count for s in stages)
    if circles != face.dim:
        raise InvalidFaceError(
            f"face {face.id}: {circles} circle factors vs graph dimension {face.dim}"
        )
    y_stages = tuple(
        StageFiber(k=s.k, factors=tuple(f for f in s.factors if f != 1))
        for s in stages
    )
    return FiberDescriptor(
        face_id=face.id,
        stages=stages,
        total_dim=total,
        circle_count=circles,
        y_stages=y_stages,
        is_lagrangian=total == complex_dimension(spec),
    )


@dataclass(frozen=True)
class LBlock:
    """The k-th L-block anchored at (p, q): a vertical and a horizontal arm
    of k boxes each sharing the corner box, 2k-1 boxes in total."""

    k: int
    p: int
    q: int

    @property
    def boxes(self) -> frozenset[Cell]:
        return frozenset(
            {(self.p, self.q + i) for i in range(self.k)}
            | {(self.p + i, self.q) for i in range(self.k)}
        )

    @property
    def area(self) -> int:
        return 2 * self.k - 1

    @property
    def top_edge(self) -> Edge:
        p, q, k = self.p, self.q, self.k
        return _edge((p - 1, q + k - 1), (p, q + k - 1))

    @property
    def rightmost_edge(self) -> Edge:
        p, q, k = self.p, self.q, self.k
        return _edge((p + k - 1, q - 1), (p + k - 1, q))

    @property
    def interior_edges(self) -> tuple[Edge, ...]:
        """Grid edges in the open interior: the rungs between arm boxes."""
        p, q, k = self.p, self.q, self.k
        out = []
        for i in range(k - 1):
            out.append(_edge((p - 1, q + i), (p, q + i)))
            out.append(_edge((p + i, q - 1), (p + i, q)))
        return tuple(out)

    def to_json(self) -> dict:
        return {"k": self.k, "p": self.p, "q": self.q}


def _rigid_candidates(diagram):
    """Per-diagram table of L-blocks whose top and rightmost edges exist,
    with precomputed edge ids and an interior-edge bitmask."""
    try:
        return diagram._cache["rigid_candidates"]
    except KeyError:
        pass
    n = diagram.n
    out = []
    for k in range(1, n + 1):
        for p in range(1, n - k + 2):
            for q in range(1, n - k + 2):
                blk = LBlock(k=k, p=p, q=q)
                top = diagram.edge_ids.get(blk.top_edge)
                right = diagram.edge_ids.get(blk.rightmost_edge)
                if top is None or right is None:
                    continue
                interior = 0
                for e in blk.interior_edges:
                    i = diagram.edge_ids.get(e)
                    if i is not None:
                        interior |= 1 << i
                out.append((blk, blk.boxes, (1 << top) | (1 << right), interior))
    diagram._cache["rigid_candidates"] = out
    return out


def rigid_l_blocks(face: Face) -> list[LBlock]:
    """All L-blocks rigid in the face.

    Rigid means: no face edge crosses the open interior of the block, while
    the block's topmost and rightmost edges both belong to the face.  Rigid
    blocks are pairwise interior-disjoint and consist of diagram boxes only;
    both facts are checked because downstream dimension counting relies on
    them.
    """
    d = face.diagram
    mask = face.mask
    found = [
        (blk, boxes)
        for blk, boxes, need, interior in _rigid_candidates(d)
        if mask & need == need and not mask & interior
    ]
    seen: set = set()
    for blk, boxes in found:
        if not boxes <= d.region_boxes:
            raise InvalidFaceError(f"rigid block {blk} escapes the diagram")
        if seen & boxes:
            raise InvalidFaceError(f"rigid block {blk} overlaps another")
        seen |= boxes
    return sorted((blk for blk, _ in found), key=lambda b: (b.p, b.q, b.k))


def lagrangian_classification(face: Face) -> dict:
    """Decide whether the face carries Lagrangian fibers.

    The rigid-block area sum must reproduce the stage-fiber dimension; a
    disagreement means one of the two computations is buggy, so it raises.
    The face is Lagrangian exactly when the rigid blocks tile the diagram.
    """
    desc = fiber_descriptor(face)
    blocks = rigid_l_blocks(face)
    l_sum = sum(b.area for b in blocks)
    if l_sum != desc.total_dim:
        raise InvalidFaceError(
            f"face {face.id}: rigid-block area {l_sum} != fiber dim {desc.total_dim}"
        )
    covered = frozenset().union(*(b.boxes for b in blocks)) if blocks else frozenset()
    tiles = covered == face.diagram.region_boxes
    if tiles != desc.is_lagrangian:
        raise InvalidFaceError(
            f"face {face.id}: tiling test and dimension test disagree"
        )
    return {
        "is_lagrangian": desc.is_lagrangian,
        "fiber_dim": desc.total_dim,
        "l_sum": l_sum,
        "l_blocks": blocks,
    }


def torus_factorization(descriptor: FiberDescriptor) -> dict:
    """Split the fiber as T^r x Y with every circle factor pulled out."""
    return {
        "r": descriptor.circle_count,
        "torus": f"T^{descriptor.circle_count}",
        "y_stages": descriptor.y_stages,
        "y_bundle": descriptor.y_bundle,
    }


def homotopy_invariants(descriptor: FiberDescriptor) -> dict:
    return {"pi1_rank": descriptor.circle_count, "pi2_trivial": True}
