from fractions import Fraction

import pytest

from gcfibers import (
    DomainError,
    build_ladder,
    contains,
    enumerate_faces,
    face_affine_dimension,
    face_by_equalities,
    face_from_edges,
    fiber_descriptor,
    gc_inequalities,
    improper_face,
    interior_point,
    locate_face,
    parse_lambda,
    point_from_free,
    psi,
    zero_point,
)
from gcfibers.errors import InvalidFaceError
from gcfibers.polytope import hrep_to_json

from conftest import all_unit_gap_specs


def test_gc_inequalities_f3(f3_spec):
    ineqs = gc_inequalities(f3_spec)
    assert len(ineqs) == 6
    # collect them back into readable relations
    rels = set()
    for q in ineqs:
        items = tuple(sorted(q["coeffs"].items()))
        rels.add((items, q["rhs"]))
    lam1, lam2, lam3 = f3_spec.values
    assert ((((1, 1), -1), ((1, 2), 1)), 0) in rels       # u12 >= u11
    assert ((((1, 1), 1), ((2, 1), -1)), 0) in rels       # u11 >= u21
    assert ((((1, 2), -1),), -lam1) in rels               # lam1 >= u12
    assert ((((1, 2), 1),), lam2) in rels                 # u12 >= lam2
    assert ((((2, 1), -1),), -lam2) in rels               # lam2 >= u21
    assert ((((2, 1), 1),), lam3) in rels                 # u21 >= lam3


def test_gc_inequalities_interval_and_gr24(gr24_spec):
    assert len(gc_inequalities(parse_lambda([1, 0]))) == 2
    assert len(gc_inequalities(gr24_spec)) == 8


def test_hrep_json(gr24_spec):
    js = hrep_to_json(gr24_spec)
    assert js["variables"] == ["u[1][1]", "u[1][2]", "u[2][1]", "u[2][2]"]
    assert len(js["inequalities"]) == 8
    assert all(len(r["coeffs"]) == 4 for r in js["inequalities"])


def test_psi_improper_empty(f3_spec):
    top = improper_face(build_ladder(f3_spec))
    eq = psi(top)
    assert eq.pairs == () and eq.pins == ()


def test_psi_v3(f3_spec):
    faces = enumerate_faces(build_ladder(f3_spec))
    v3 = [
        f for f in faces if f.dim == 0 and fiber_descriptor(f).total_dim == 3
    ][0]
    eq = psi(v3)
    assert set(eq.pairs) == {((1, 1), (1, 2)), ((1, 1), (2, 1))}
    assert set(eq.pins) == {((1, 2), Fraction(0)), ((2, 1), Fraction(0))}


def test_psi_pin_worked_example():
    # the (2,3,4;5) diagram face collapsing the corner square, with one pin
    # against the doubled top value; a transposed rendering of the textbook
    # picture
    spec = parse_lambda([4, 4, 3, 2, 1])
    face = face_by_equalities(
        spec,
        [
            ((1, 1), (2, 1)),
            ((1, 1), (1, 2)),
            ((2, 1), (2, 2)),
            ((1, 2), (2, 2)),
            ((2, 2), (3, 2)),
            ((1, 3), Fraction(4)),
        ],
    )
    eq = psi(face)
    assert set(eq.pairs) == {
        ((1, 1), (2, 1)),
        ((1, 1), (1, 2)),
        ((2, 1), (2, 2)),
        ((1, 2), (2, 2)),
        ((2, 2), (3, 2)),
    }
    assert set(eq.pins) == {((1, 3), Fraction(4))}
    assert face_affine_dimension(eq, spec) == face.dim


def test_psi_order_reversing_on_missing_edges(f3_spec):
    faces = enumerate_faces(build_ladder(f3_spec))
    eqs = {f.mask: psi(f) for f in faces}
    for f in faces:
        for g in faces:
            if f.mask | g.mask == g.mask:  # f <= g
                ef, eg = eqs[f.mask], eqs[g.mask]
                assert set(eg.pairs) <= set(ef.pairs)
                assert set(eg.pins) <= set(ef.pins)


def test_psi_injective(f3_spec):
    faces = enumerate_faces(build_ladder(f3_spec))
    seen = {(psi(f).pairs, psi(f).pins) for f in faces}
    assert len(seen) == len(faces)


def test_affine_dimension_examples(f3_spec):
    faces = enumerate_faces(build_ladder(f3_spec))
    top = [f for f in faces if f.is_improper()][0]
    assert face_affine_dimension(psi(top), f3_spec) == 3
    for f in faces:
        assert face_affine_dimension(psi(f), f3_spec) == f.dim


def test_affine_dimension_matches_graph_dimension_n4():
    # the n = 5 sweep lives in the acceptance suite
    for spec in all_unit_gap_specs(4):
        for f in enumerate_faces(build_ladder(spec)):
            assert face_affine_dimension(psi(f), spec) == f.dim


def test_interior_point_improper_f3(f3_spec):
    top = improper_face(build_ladder(f3_spec))
    p = interior_point(top)
    u11, u12, u21 = p[(1, 1)], p[(1, 2)], p[(2, 1)]
    assert 0 < u12 < 1 and -1 < u21 < 0
    assert u21 < u11 < u12
    assert all(isinstance(v, Fraction) for v in p.values.values())
    assert locate_face(p, f3_spec).mask == top.mask


def test_interior_point_v3_unique(f3_spec):
    faces = enumerate_faces(build_ladder(f3_spec))
    v3 = [f for f in faces if f.dim == 0 and fiber_descriptor(f).total_dim == 3][0]
    p = interior_point(v3)
    assert p[(1, 1)] == p[(1, 2)] == p[(2, 1)] == 0


def test_interior_point_interval_vertices():
    spec = parse_lambda([1, 0])
    faces = enumerate_faces(build_ladder(spec))
    vertex_values = sorted(
        interior_point(f)[(1, 1)] for f in faces if f.dim == 0
    )
    assert vertex_values == [0, 1]


def test_interior_point_tight_roundtrip():
    for spec in all_unit_gap_specs(4):
        for f in enumerate_faces(build_ladder(spec)):
            p = interior_point(f)
            assert contains(p, spec)
            assert locate_face(p, spec).mask == f.mask


def test_delta_vertex_count_f3(f3_spec):
    faces = enumerate_faces(build_ladder(f3_spec))
    assert sum(1 for f in faces if f.dim == 0) == 7


def test_contains_and_locate_diag(f3_spec):
    p = point_from_free(f3_spec, {(1, 1): 1, (1, 2): 1, (2, 1): 0})
    assert contains(p, f3_spec)
    assert locate_face(p, f3_spec).dim == 0


def test_contains_rejects_outside(f3_spec):
    p = point_from_free(f3_spec, {(1, 1): 2, (1, 2): 2, (2, 1): 0})
    assert not contains(p, f3_spec)
    with pytest.raises(DomainError):
        locate_face(p, f3_spec)


def test_zero_point_su3():
    spec = parse_lambda([3, 3, 0, -3, -3])
    p = zero_point(spec)
    assert contains(p, spec)
    assert locate_face(p, spec).dim == 0


def test_face_by_equalities(f3_spec):
    face = face_by_equalities(f3_spec, [((1, 1), (1, 2)), ((1, 1), (2, 1)),
                                        ((1, 2), Fraction(0))])
    assert face.dim == 0
    assert fiber_descriptor(face).bundle == "S^3"
    with pytest.raises(InvalidFaceError):
        face_by_equalities(f3_spec, [((1, 2), Fraction(5))])


def test_point_json(f3_spec):
    p = point_from_free(f3_spec, {(1, 1): 0, (1, 2): Fraction(1, 2), (2, 1): 0})
    js = p.to_json()
    assert js["u[1][2]"] == 0.5
    assert js["u[1][3]"] == 1.0  # constant cell carries the top value
