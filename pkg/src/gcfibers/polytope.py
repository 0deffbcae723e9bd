"""The moment polytope as inequalities, and the face correspondence.

Coordinates live in the unit boxes of the staircase i + j <= n + 1; a cell's
value increases up a column and decreases along a row, with constant cells
(multiplicity-forced) carrying spectrum values.  A face of the diagram maps
to the polytope face obtained by equating the two cells on either side of
every grid edge *absent* from the face; when one side is a constant cell the
equality is a pin.  The affine dimension of that equality system, computed
by union-find plus an explicit strictly-ordered representative point, serves
as an oracle for the graph-theoretic face dimension and stays independent
of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InvalidFaceError
from .ladder import Face, LadderDiagram, build_ladder, face_from_edges, positive_paths
from .spectrum import Cell, LambdaSpec, staircase_cells


@dataclass(frozen=True)
class GCPoint:
    """A filling of every staircase cell, constants included."""

    values: dict

    def __getitem__(self, cell: Cell):
        return self.values[cell]

    def free_part(self, diagram: LadderDiagram) -> dict:
        return {c: v for c, v in self.values.items() if c in diagram.region_boxes}

    def to_json(self) -> dict:
        return {
            f"u[{i}][{j}]": (float(v) if isinstance(v, Fraction) else v)
            for (i, j), v in sorted(self.values.items())
        }


@dataclass(frozen=True)
class EqualitySet:
    """Adjacent-cell equalities and constant pins cut out by a face."""

    pairs: tuple[tuple[Cell, Cell], ...]
    pins: tuple[tuple[Cell, object], ...]
    face_id: str

    def to_json(self) -> dict:
        return {
            "face_id": self.face_id,
            "equalities": [
                f"u[{a[0]}][{a[1]}]=u[{b[0]}][{b[1]}]" for a, b in self.pairs
            ],
            "pins": [f"u[{c[0]}][{c[1]}]={v}" for c, v in self.pins],
        }


def psi(face: Face) -> EqualitySet:
    """Equality set of the polytope face corresponding to a diagram face."""
    d = face.diagram
    consts = d.cell_values
    pairs = set()
    pins = set()
    for idx in range(len(d.edges)):
        if face.mask >> idx & 1:
            continue
        sep = d._separating[idx]
        if sep is None:
            continue
        lower, upper = sep
        lo_c, up_c = lower in consts, upper in consts
        if lo_c and up_c:
            # the diagram never separates two unequal constants
            assert consts[lower] == consts[upper]
        elif lo_c:
            pins.add((upper, consts[lower]))
        elif up_c:
            pins.add((lower, consts[upper]))
        else:
            pairs.add((min(lower, upper), max(lower, upper)))
    return EqualitySet(
        pairs=tuple(sorted(pairs)), pins=tuple(sorted(pins)), face_id=face.id
    )


def gc_inequalities(spec: LambdaSpec) -> list[dict]:
    """H-representation over the free coordinates: two inequalities per cell.

    Each record reads ``sum(coeffs[cell] * u[cell]) >= rhs``; constant
    neighbors fold into the right-hand side.
    """
    d = build_ladder(spec)
    consts = d.cell_values
    out = []
    for (i, j) in sorted(d.region_boxes):
        up = (i, j + 1)
        if up in consts:
            out.append({"coeffs": {(i, j): -1}, "rhs": -consts[up]})
        else:
            out.append({"coeffs": {up: 1, (i, j): -1}, "rhs": 0})
        right = (i + 1, j)
        if right in consts:
            out.append({"coeffs": {(i, j): 1}, "rhs": consts[right]})
        else:
            out.append({"coeffs": {(i, j): 1, right: -1}, "rhs": 0})
    return out


def hrep_to_json(spec: LambdaSpec) -> dict:
    d = build_ladder(spec)
    variables = sorted(d.region_boxes)
    var_index = {c: i for i, c in enumerate(variables)}
    rows = []
    for ineq in gc_inequalities(spec):
        coeffs = [0] * len(variables)
        for cell, c in ineq["coeffs"].items():
            coeffs[var_index[cell]] = c
        rhs = ineq["rhs"]
        rows.append(
            {"coeffs": coeffs, "rhs": float(rhs) if isinstance(rhs, Fraction) else rhs}
        )
    return {
        "variables": [f"u[{i}][{j}]" for i, j in variables],
        "sense": ">=",
        "inequalities": rows,
    }


class _ClassOrder:
    """Cell classes under an equality relation, plus the strict order between
    them induced by the remaining adjacencies."""

    def __init__(self, diagram: LadderDiagram, equal_edge):
        """``equal_edge(idx, lower, upper)`` says whether the separating edge
        at ``idx`` is an equality (merges its two cells)."""
        self.diagram = diagram
        cells = sorted(staircase_cells(diagram.n))
        self.cells = cells
        self.index = {c: i for i, c in enumerate(cells)}
        self.parent = list(range(len(cells)))

        strict_pairs = []
        for idx in range(len(diagram.edges)):
            sep = diagram._separating[idx]
            if sep is None:
                continue
            lower, upper = sep
            if equal_edge(idx, lower, upper):
                self._union(self.index[lower], self.index[upper])
            else:
                strict_pairs.append((lower, upper))

        roots = sorted({self._find(i) for i in range(len(cells))})
        self.root_ids = {r: i for i, r in enumerate(roots)}
        self.n_classes = len(roots)

        self.pin: list = [None] * self.n_classes
        for c, v in diagram.cell_values.items():
            k = self.class_of(c)
            if self.pin[k] is None:
                self.pin[k] = v
            elif self.pin[k] != v:
                raise InvalidFaceError(
                    f"one class pinned to both {self.pin[k]} and {v}"
                )

        self.uppers: list[set[int]] = [set() for _ in range(self.n_classes)]
        self.lowers: list[set[int]] = [set() for _ in range(self.n_classes)]
        for lower, upper in strict_pairs:
            a, b = self.class_of(lower), self.class_of(upper)
            if a == b:
                raise InvalidFaceError(
                    f"adjacent cells {lower}, {upper} are equal but their edge "
                    "is present"
                )
            self.uppers[a].add(b)
            self.lowers[b].add(a)

    def _find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def _union(self, a: int, b: int):
        ra, rb = self._find(a), self._find(b)
        if ra != rb:
            self.parent[ra] = rb

    def class_of(self, cell: Cell) -> int:
        return self.root_ids[self._find(self.index[cell])]

    def unpinned_count(self) -> int:
        return sum(1 for p in self.pin if p is None)

    def _topo_descending(self) -> list[int]:
        indeg = [len(self.uppers[c]) for c in range(self.n_classes)]
        stack = [c for c in range(self.n_classes) if indeg[c] == 0]
        order = []
        while stack:
            c = stack.pop()
            order.append(c)
            for l in self.lowers[c]:
                indeg[l] -= 1
                if indeg[l] == 0:
                    stack.append(l)
        if len(order) != self.n_classes:
            raise InvalidFaceError("cyclic strict order: not a face")
        return order

    def assign(self) -> list:
        """A strictly order-respecting value per class, pins respected.

        Walks classes top-down; an unpinned class takes the midpoint between
        its largest pinned value reachable downward and the smallest value
        already assigned immediately above.  Raises when the system is
        infeasible (then the input was not a face).
        """
        order = self._topo_descending()
        lb: list = [None] * self.n_classes
        for c in reversed(order):
            best = self.pin[c]
            for l in self.lowers[c]:
                if lb[l] is not None and (best is None or lb[l] > best):
                    best = lb[l]
            lb[c] = best

        val: list = [None] * self.n_classes
        for c in order:
            if self.pin[c] is not None:
                val[c] = self.pin[c]
                for u in self.uppers[c]:
                    if not (val[u] > val[c]):
                        raise InvalidFaceError("pinned values violate strict order")
                continue
            ubs = [val[u] for u in self.uppers[c]]
            if not ubs or lb[c] is None:
                raise InvalidFaceError("unbounded coordinate class")
            ub = min(ubs)
            if not (lb[c] < ub):
                raise InvalidFaceError("equality system forces extra collapse")
            if isinstance(lb[c], Fraction) and isinstance(ub, Fraction):
                val[c] = (lb[c] + ub) / 2
            else:
                val[c] = (float(lb[c]) + float(ub)) / 2.0
        return val


def _classes_for_face(face: Face) -> _ClassOrder:
    return _ClassOrder(
        face.diagram, lambda idx, lo, up: not (face.mask >> idx & 1)
    )


def _classes_for_eqset(diagram: LadderDiagram, eqset: EqualitySet) -> _ClassOrder:
    consts = diagram.cell_values
    pair_set = set(eqset.pairs)
    pin_set = set(eqset.pins)
    claimed: set = set()

    def equal_edge(idx, lower, upper):
        lo_c, up_c = lower in consts, upper in consts
        if lo_c and up_c:
            return True
        if lo_c or up_c:
            free = upper if lo_c else lower
            pin = (free, consts[lower] if lo_c else consts[upper])
            if pin in pin_set:
                claimed.add(pin)
                return True
            return False
        key = (min(lower, upper), max(lower, upper))
        if key in pair_set:
            claimed.add(key)
            return True
        return False

    order = _ClassOrder(diagram, equal_edge)
    unmatched = (pair_set | pin_set) - claimed
    if unmatched:
        raise InvalidFaceError(f"equalities match no grid edge: {sorted(unmatched)}")
    return order


def face_affine_dimension(eqset: EqualitySet, spec: LambdaSpec) -> int:
    """Affine dimension of the polytope face cut out by an equality set.

    Merges cells with union-find, pins classes containing constants, then
    verifies feasibility by exhibiting a strictly ordered representative.
    Returns the number of unpinned classes; raises ``InvalidFaceError`` when
    the system collapses further than stated (the input was no face).
    """
    d = build_ladder(spec)
    order = _classes_for_eqset(d, eqset)
    order.assign()
    return order.unpinned_count()


def interior_point(face: Face, spec: LambdaSpec | None = None) -> GCPoint:
    """A point in the relative interior of the face's polytope image.

    Cells of one equality class share a value; classes joined by a present
    edge are strictly separated.  Rational output for rational spectra.
    """
    order = _classes_for_face(face)
    val = order.assign()
    return GCPoint(values={c: val[order.class_of(c)] for c in order.cells})


def point_from_free(spec: LambdaSpec, free_values: dict) -> GCPoint:
    """Assemble a full staircase point from the free coordinates."""
    d = build_ladder(spec)
    missing = d.region_boxes - set(free_values)
    if missing:
        raise DomainError(f"missing free coordinates {sorted(missing)}")
    values = dict(d.cell_values)
    for c, v in free_values.items():
        if c not in d.region_boxes:
            raise DomainError(f"{c} is not a free coordinate")
        values[c] = Fraction(v) if isinstance(v, int) else v
    return GCPoint(values=values)


def zero_point(spec: LambdaSpec) -> GCPoint:
    d = build_ladder(spec)
    return point_from_free(spec, {c: Fraction(0) for c in d.region_boxes})


def contains(point: GCPoint, spec: LambdaSpec, tol: float = 1e-9) -> bool:
    """Whether the point satisfies the full min-max pattern.

    Exact when every value is rational, otherwise within ``tol`` absolute.
    """
    d = build_ladder(spec)
    exact = all(isinstance(v, (int, Fraction)) for v in point.values.values())
    slack = 0 if exact else tol
    for c, v in d.cell_values.items():
        dv = point.values.get(c)
        if dv is None or abs(dv - v) > slack:
            return False
    for sep in d._separating:
        if sep is None:
            continue
        lower, upper = sep
        if point.values[upper] - point.values[lower] < -slack:
            return False
    return True


def pattern_slack(point: GCPoint, spec: LambdaSpec) -> float:
    """Smallest slack across all pattern inequalities (negative = violated)."""
    d = build_ladder(spec)
    worst = float("inf")
    for c, v in d.cell_values.items():
        worst = min(worst, -abs(float(point.values[c]) - float(v)))
    for sep in d._separating:
        if sep is None:
            continue
        lower, upper = sep
        worst = min(worst, float(point.values[upper]) - float(point.values[lower]))
    return worst


def locate_face(point: GCPoint, spec: LambdaSpec, tol: float = 1e-9) -> Face:
    """The unique face whose equality set is exactly the point's tight set."""
    d = build_ladder(spec)
    if not contains(point, spec, tol=tol):
        raise DomainError("point lies outside the polytope")
    exact = all(isinstance(v, (int, Fraction)) for v in point.values.values())
    slack = 0 if exact else tol

    tight_ids = set()
    for idx in range(len(d.edges)):
        sep = d._separating[idx]
        if sep is None:
            continue
        lower, upper = sep
        if abs(point.values[upper] - point.values[lower]) <= slack:
            tight_ids.add(idx)

    edges = []
    for path in positive_paths(d):
        if not any(d.edge_ids[e] in tight_ids for e in path):
            edges.extend(path)
    face = face_from_edges(d, set(edges))
    missing_sep = {
        i
        for i in range(len(d.edges))
        if not (face.mask >> i & 1) and d._separating[i] is not None
    }
    if missing_sep != tight_ids:
        raise DomainError("tight constraints do not match any face")
    return face


def face_by_equalities(spec: LambdaSpec, constraints: list) -> Face:
    """Resolve a face from human-entered equalities.

    ``constraints`` holds cell pairs ``(cell_a, cell_b)`` and pins
    ``(cell, value)``.  The result is the union of positive paths avoiding
    every edge the constraints force tight; its interior point must satisfy
    the constraints, otherwise they cut no face.
    """
    d = build_ladder(spec)
    cells = staircase_cells(spec.n)
    parent: dict = {c: c for c in cells}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    merged_pins: dict = {}

    def pin_class(root, value):
        if root in merged_pins and merged_pins[root] != value:
            raise InvalidFaceError("constraints pin one class to two values")
        merged_pins[root] = value

    for a, b in constraints:
        if isinstance(b, tuple):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
                if ra in merged_pins:
                    pin_class(rb, merged_pins.pop(ra))
        else:
            pin_class(find(a), Fraction(b) if isinstance(b, int) else b)
    for c, v in d.cell_values.items():
        pin_class(find(c), v)

    def forced_equal(lower, upper):
        ra, rb = find(lower), find(upper)
        if ra == rb:
            return True
        va, vb = merged_pins.get(ra), merged_pins.get(rb)
        return va is not None and va == vb

    avoid = set()
    for idx in range(len(d.edges)):
        sep = d._separating[idx]
        if sep and forced_equal(*sep):
            avoid.add(idx)
    edges = []
    for path in positive_paths(d):
        if not any(d.edge_ids[e] in avoid for e in path):
            edges.extend(path)
    if not edges:
        raise InvalidFaceError("constraints are incompatible with every face")
    face = face_from_edges(d, set(edges))
    pt = interior_point(face)
    for a, b in constraints:
        ok = pt.values[a] == pt.values[b] if isinstance(b, tuple) else pt.values[a] == b
        if not ok:
            raise InvalidFaceError(f"constraint {(a, b)} does not cut a face")
    return face
