from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gcfibers import (
    DomainError,
    InterlacingPair,
    SpectrumError,
    assemble_matrix,
    build_ladder,
    enumerate_faces,
    fiber_descriptor,
    gc_map,
    improper_face,
    interior_point,
    parse_lambda,
    pattern_slack,
    point_from_free,
    random_orbit_matrix,
    sample_fiber,
    sample_fiber_batch,
    solve_fiber_system,
    verify_face,
    zero_point,
)
from gcfibers.polytope import locate_face
from gcfibers.spectral import arrow_matrix, eigvalsh_desc, roundtrip_error

from conftest import all_unit_gap_specs
from oracles import char_poly_roots_check, closed_form_radii


def test_interlacing_pair_validation():
    InterlacingPair(a=(3, 1), b=(2,))
    with pytest.raises(DomainError):
        InterlacingPair(a=(1, 3), b=(2,))
    with pytest.raises(DomainError):
        InterlacingPair(a=(3, 2, 1), b=(2,))


def test_gc_map_diagonal(f3_spec):
    u = gc_map(np.diag([1.0, 0.0, -1.0]), f3_spec)
    assert u[(1, 1)] == pytest.approx(1.0)
    assert u[(1, 2)] == pytest.approx(1.0)
    assert u[(2, 1)] == pytest.approx(0.0)


def test_gc_map_2x2():
    spec = parse_lambda([1, -1])
    u = gc_map(np.array([[0, 1], [1, 0]], dtype=float), spec)
    assert u[(1, 1)] == pytest.approx(0.0)


def test_gc_map_rejects_wrong_spectrum(f3_spec):
    with pytest.raises(SpectrumError):
        gc_map(np.diag([2.0, 0.0, -1.0]), f3_spec)


def test_solve_strict_two_by_two():
    sol = solve_fiber_system(InterlacingPair(a=(Fraction(1), Fraction(-1)),
                                             b=(Fraction(0),)))
    assert sol.fixed_radii == pytest.approx({1: 1.0})
    assert sol.corner == pytest.approx(0.0)
    assert not sol.zero_indices and not sol.sphere_groups


def test_solve_shifted_two_by_two():
    sol = solve_fiber_system(InterlacingPair(a=(Fraction(2), Fraction(0)),
                                             b=(Fraction(1),)))
    assert sol.fixed_radii == pytest.approx({1: 1.0})
    assert sol.corner == pytest.approx(1.0)
    m = assemble_matrix(InterlacingPair(a=(Fraction(2), Fraction(0)),
                                        b=(Fraction(1),)), sol)
    assert np.allclose(m.array, [[1, 1], [1, 1]])


def test_solve_sphere_group():
    pair = InterlacingPair(a=(Fraction(1), Fraction(0), Fraction(-1)),
                           b=(Fraction(0), Fraction(0)))
    sol = solve_fiber_system(pair)
    assert sol.sphere_groups == (((1, 2), pytest.approx(1.0)),)
    assert not sol.zero_indices and not sol.fixed_radii
    assert sol.corner == pytest.approx(0.0)
    m = assemble_matrix(pair, sol, z=np.array([1.0, 0.0]))
    assert np.allclose(sorted(np.linalg.eigvalsh(m.array)), [-1, 0, 1])


def test_solve_zero_patterns():
    # a run bounded by an a-value on one side forces zeros
    sol = solve_fiber_system(InterlacingPair(a=(Fraction(0), Fraction(0)),
                                             b=(Fraction(0),)))
    assert sol.zero_indices == frozenset({1})
    sol = solve_fiber_system(InterlacingPair(a=(Fraction(2), Fraction(1), Fraction(1)),
                                             b=(Fraction(1), Fraction(1))))
    # 2 > b1 = a2 = a3 = b2 with nothing below: 1 sphere? no: run ends at a3...
    # zigzag: 2 > 1 = 1 = 1 = 1: run starts at b1 (odd) and ends at a3 (even):
    # everything vanishes
    assert sol.zero_indices == frozenset({1, 2})
    assert not sol.sphere_groups


def test_solve_rejects_non_interlacing():
    with pytest.raises(DomainError):
        solve_fiber_system(InterlacingPair(a=(1, 0), b=(2,)))


def test_partition_of_indices():
    pair = InterlacingPair(
        a=(Fraction(5), Fraction(4), Fraction(2), Fraction(2)),
        b=(Fraction(4), Fraction(2), Fraction(2)),
    )
    sol = solve_fiber_system(pair)
    claimed = set(sol.zero_indices) | set(sol.fixed_radii)
    for g, _ in sol.sphere_groups:
        claimed |= set(g)
    assert claimed == {1, 2, 3}


def test_closed_form_radii_oracle():
    # the least-squares solve must match the partial-fraction closed form on
    # strictly interlacing data
    rng = np.random.default_rng(11)
    for _ in range(10_000):
        k = int(rng.integers(1, 6))
        vals = np.sort(rng.integers(0, 400, size=2 * k + 1))[::-1]
        if len(set(vals.tolist())) < len(vals):
            continue  # strictness only here; ties covered elsewhere
        a = tuple(Fraction(int(v)) for v in vals[0::2])
        b = tuple(Fraction(int(v)) for v in vals[1::2])
        sol = solve_fiber_system(InterlacingPair(a=a, b=b))
        want = closed_form_radii(a, b)
        assert len(sol.fixed_radii) == k
        for j in range(1, k + 1):
            assert sol.fixed_radii[j] == pytest.approx(float(want[j - 1]), rel=1e-10)


@given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=10**6))
@settings(max_examples=120, deadline=None)
def test_solve_reconstruction_property(k, seed):
    # draw any weakly interlacing integer pair; the canonical assembled
    # matrix must carry spectrum a
    rng = np.random.default_rng(seed)
    vals = np.sort(rng.integers(-6, 7, size=2 * k + 1))[::-1]
    a = tuple(Fraction(int(v)) for v in vals[0::2])
    b = tuple(Fraction(int(v)) for v in vals[1::2])
    pair = InterlacingPair(a=a, b=b)
    sol = solve_fiber_system(pair)
    m = assemble_matrix(pair, sol)
    got = eigvalsh_desc(m.array)
    assert np.allclose(got, [float(x) for x in a], atol=1e-8)
    assert char_poly_roots_check(
        [float(x) for x in b], sol.canonical_z(), sol.corner,
        [float(x) for x in a], tol=1e-6 * max(1, int(max(abs(v) for v in vals))) ** k,
    )


def test_scaling_homogeneity():
    base = InterlacingPair(a=(Fraction(3), Fraction(1), Fraction(0)),
                           b=(Fraction(2), Fraction(1)))
    sol = solve_fiber_system(base)
    scaled = InterlacingPair(a=tuple(3 * x for x in base.a),
                             b=tuple(3 * x for x in base.b))
    sol3 = solve_fiber_system(scaled)
    assert sol3.fixed_radii[1] == pytest.approx(9 * sol.fixed_radii[1])
    assert set(sol3.zero_indices) == set(sol.zero_indices)


def test_assemble_rejects_bad_choice():
    pair = InterlacingPair(a=(Fraction(1), Fraction(-1)), b=(Fraction(0),))
    sol = solve_fiber_system(pair)
    with pytest.raises(DomainError):
        assemble_matrix(pair, sol, z=np.array([5.0]))


def test_arrow_matrix_shape():
    m = arrow_matrix([1.0, 2.0], np.array([1j, 0]), 3.0)
    assert m[2, 0] == 1j and m[0, 2] == -1j and m[2, 2] == 3.0


def test_sample_fiber_interior_roundtrip(f3_spec):
    top = improper_face(build_ladder(f3_spec))
    p = interior_point(top)
    x = sample_fiber(f3_spec, p, rng_seed=5)
    u = gc_map(x, f3_spec)
    for cell, v in p.values.items():
        assert u[cell] == pytest.approx(float(v), abs=1e-9)


def test_sample_fiber_v3_sphere(f3_spec):
    faces = enumerate_faces(build_ladder(f3_spec))
    v3 = [f for f in faces if f.dim == 0 and fiber_descriptor(f).total_dim == 3][0]
    p = interior_point(v3)
    x1 = sample_fiber(f3_spec, p, rng_seed=1)
    x2 = sample_fiber(f3_spec, p, rng_seed=2)
    assert not np.allclose(x1.array, x2.array)  # two distinct fiber points
    for x in (x1, x2):
        u = gc_map(x, f3_spec)
        assert u[(1, 1)] == pytest.approx(0.0, abs=1e-9)


def test_sample_fiber_deterministic(f3_spec):
    top = improper_face(build_ladder(f3_spec))
    p = interior_point(top)
    a = sample_fiber_batch(f3_spec, p, 4, 99)
    b = sample_fiber_batch(f3_spec, p, 4, 99)
    assert a.tobytes() == b.tobytes()


def test_sample_fiber_cp1_vertex_deterministic():
    spec = parse_lambda([1, 0])
    p = point_from_free(spec, {(1, 1): 1})
    x = sample_fiber(spec, p, rng_seed=0)
    assert np.allclose(x.array, np.diag([1.0, 0.0]))


def test_sample_fiber_rejects_outside(f3_spec):
    p = point_from_free(f3_spec, {(1, 1): 5, (1, 2): 5, (2, 1): 5})
    with pytest.raises(DomainError):
        sample_fiber(f3_spec, p, rng_seed=0)


def test_verify_face_f3_v3(f3_spec):
    faces = enumerate_faces(build_ladder(f3_spec))
    v3 = [f for f in faces if f.dim == 0 and fiber_descriptor(f).total_dim == 3][0]
    rep = verify_face(f3_spec, v3, n_samples=10, rng_seed=1)
    assert rep["ok"]
    stage2 = rep["stages"][1]
    assert stage2["analytic"]["groups"] == [[1, 2]]  # one group of size 2: S^3


def test_verify_face_gr24_gamma(gr24_spec):
    faces = enumerate_faces(build_ladder(gr24_spec))
    gamma = [f for f in faces if f.dim == 1 and fiber_descriptor(f).total_dim == 4][0]
    rep = verify_face(gr24_spec, gamma, n_samples=10, rng_seed=1)
    assert rep["ok"]
    dims = [fiber_descriptor(gamma).stages[k].total_dim for k in range(3)]
    assert dims == [0, 3, 1]
    assert rep["fiber_dim"] == 4


def test_verify_face_improper_all_circles(f3_spec):
    top = improper_face(build_ladder(f3_spec))
    rep = verify_face(f3_spec, top, n_samples=10, rng_seed=1)
    assert rep["ok"]
    for stage in rep["stages"]:
        assert not stage["analytic"]["groups"]  # phases only


def test_cauchy_interlacing_fuzz(f3_spec):
    rng = np.random.default_rng(42)
    spec = parse_lambda([2, 1, 0, 0, -1])
    worst = 0.0
    for _ in range(200):
        x = random_orbit_matrix(spec, rng)
        worst = min(worst, pattern_slack(gc_map(x, spec), spec))
    assert worst >= -1e-9


def test_locate_sampled_points(f3_spec):
    # a sampled fiber matrix maps back onto its own face
    faces = enumerate_faces(build_ladder(f3_spec))
    for f in faces:
        p = interior_point(f)
        x = sample_fiber(f3_spec, p, rng_seed=3)
        u = gc_map(x, f3_spec)
        assert locate_face(u, f3_spec, tol=1e-6).mask == f.mask


def test_roundtrip_error_helper(f3_spec):
    top = improper_face(build_ladder(f3_spec))
    p = interior_point(top)
    stack = sample_fiber_batch(f3_spec, p, 8, 13)
    assert roundtrip_error(stack, f3_spec, p) < 1e-10


def test_hermitian_json_roundtrip():
    from gcfibers import HermitianMatrix

    m = HermitianMatrix(np.array([[1.0, 1j], [-1j, 2.0]]))
    again = HermitianMatrix.from_json(m.to_json())
    assert np.allclose(m.array, again.array)


def test_verify_all_faces_small_specs():
    for lam in ([1, 0], [1, 1, 0], [1, 0, -1], [1, 1, 0, 0]):
        spec = parse_lambda(lam)
        for f in enumerate_faces(build_ladder(spec)):
            rep = verify_face(spec, f, n_samples=5, rng_seed=7)
            assert rep["ok"], (lam, f.id, rep["failures"])
