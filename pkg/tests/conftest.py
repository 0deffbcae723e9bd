import itertools

import pytest

from gcfibers import build_ladder, face_from_edges, parse_lambda


def unit_gap_values(composition):
    """Descending integer spectrum with the given block sizes and gaps of 1."""
    level = len(composition) - 1
    out = []
    for size in composition:
        out.extend([level] * size)
        level -= 1
    return out


def compositions(n):
    """All ordered compositions of n (block-size tuples)."""
    out = []
    for cuts in itertools.product([0, 1], repeat=n - 1):
        sizes = []
        run = 1
        for c in cuts:
            if c:
                sizes.append(run)
                run = 1
            else:
                run += 1
        sizes.append(run)
        out.append(tuple(sizes))
    return out


def all_unit_gap_specs(max_n):
    for n in range(1, max_n + 1):
        for comp in compositions(n):
            yield parse_lambda(unit_gap_values(comp))


@pytest.fixture(scope="session")
def f3_spec():
    return parse_lambda([1, 0, -1])


@pytest.fixture(scope="session")
def gr24_spec():
    return parse_lambda([1, 1, 0, 0])


@pytest.fixture(scope="session")
def worked_257_face():
    """The face of the (2,5;7) diagram carrying rigid blocks
    L3(1,1), L1(4,1), L1(5,1), L1(5,2)."""
    spec = parse_lambda([2, 2, 1, 1, 1, 0, 0])
    d = build_ladder(spec)
    edges = []
    edges += [((i, 0), (i + 1, 0)) for i in range(7)]
    edges += [((0, 0), (0, 1)), ((0, 1), (0, 2)), ((0, 2), (0, 3))]
    edges += [((0, 3), (1, 3)), ((1, 3), (1, 4)), ((1, 4), (1, 5)), ((1, 5), (2, 5))]
    edges += [
        ((3, 0), (3, 1)), ((3, 1), (4, 1)), ((4, 0), (4, 1)), ((4, 1), (5, 1)),
        ((5, 0), (5, 1)), ((4, 1), (4, 2)), ((4, 2), (5, 2)), ((5, 1), (5, 2)),
    ]
    return spec, face_from_edges(d, edges)


@pytest.fixture(scope="session")
def gr36_gamma2():
    """Face of the Gr(3,6) diagram with three circles and two 3-sphere stages."""
    spec = parse_lambda([3, 3, 3, -3, -3, -3])
    d = build_ladder(spec)
    edges = []
    edges += [((i, 0), (i + 1, 0)) for i in range(6)]
    edges += [((0, 0), (0, 1)), ((0, 1), (0, 2)), ((0, 2), (0, 3))]
    edges += [((0, 2), (1, 2)), ((0, 3), (1, 3)), ((1, 2), (1, 3)),
              ((1, 3), (2, 3)), ((2, 3), (3, 3))]
    edges += [((2, 0), (2, 1)), ((2, 1), (3, 1)), ((3, 0), (3, 1)),
              ((3, 1), (3, 2)), ((3, 2), (3, 3))]
    return spec, face_from_edges(d, edges)


@pytest.fixture(scope="session")
def f6_gamma1():
    """Face of the full six-flag diagram with seven circles over an
    su(3)-type core."""
    spec = parse_lambda([5, 3, 1, -1, -3, -5])
    d = build_ladder(spec)
    edges = []
    edges += [((i, 0), (i + 1, 0)) for i in range(6)]
    edges += [((0, i), (0, i + 1)) for i in range(5)]
    edges += [((0, 3), (1, 3)), ((0, 4), (1, 4)), ((0, 5), (1, 5))]
    edges += [((1, 3), (1, 4)), ((1, 4), (1, 5))]
    edges += [((1, 3), (2, 3)), ((1, 4), (2, 4)), ((2, 3), (2, 4)), ((2, 3), (3, 3))]
    edges += [((3, 0), (3, 1)), ((4, 0), (4, 1)), ((5, 0), (5, 1))]
    edges += [((3, 1), (3, 2)), ((3, 2), (3, 3))]
    edges += [((3, 1), (4, 1)), ((4, 1), (5, 1)), ((4, 1), (4, 2)), ((3, 2), (4, 2))]
    return spec, face_from_edges(d, edges)
