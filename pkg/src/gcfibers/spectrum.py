"""Spectrum block structure for Hermitian-matrix orbits.

The unitary conjugation orbit of a Hermitian matrix is determined by its
ordered spectrum lambda_1 >= ... >= lambda_n.  Everything combinatorial
downstream (ladder diagram, polytope, fiber classification) depends only on
where the strict drops sit, so this module extracts and owns that block
structure.

Integer and rational eigenvalues are kept exact (as ``Fraction``); floats
stay floats.  Equality of entries is always exact: multiplicity structure is
discrete input, not a measurement, so callers wanting fuzzy grouping must
pre-round.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Scalar = int | float | Fraction


def _canonical(value: Scalar) -> Fraction | float:
    if isinstance(value, bool):
        raise TypeError("booleans are not eigenvalues")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, (Fraction, float)):
        return value
    raise TypeError(f"unsupported eigenvalue type: {type(value).__name__}")


@dataclass(frozen=True)
class LambdaSpec:
    """A non-increasing spectrum together with its multiplicity blocks.

    ``breakpoints`` are the 1-based positions n_1 < ... < n_r where the value
    strictly drops (value at n_i > value at n_i + 1); ``multiplicities`` are
    the block sizes k_i = n_i - n_{i-1} with n_0 = 0 and n_{r+1} = n.
    """

    values: tuple
    breakpoints: tuple[int, ...]
    multiplicities: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def r(self) -> int:
        return len(self.breakpoints)

    @property
    def block_bounds(self) -> tuple[int, ...]:
        """(n_0, n_1, ..., n_{r+1}) with the 0 and n endpoints included."""
        return (0,) + self.breakpoints + (self.n,)

    @property
    def block_values(self) -> tuple:
        """The distinct value carried by each multiplicity block."""
        return tuple(self.values[b - 1] for b in self.block_bounds[1:])

    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.values)

    def float_values(self) -> tuple[float, ...]:
        return tuple(float(v) for v in self.values)

    def to_json(self) -> dict:
        return {
            "values": [_json_number(v) for v in self.values],
            "n": self.n,
            "breakpoints": list(self.breakpoints),
            "multiplicities": list(self.multiplicities),
        }


def _json_number(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else str(v)
    return v


def parse_lambda(values) -> LambdaSpec:
    """Build a :class:`LambdaSpec` from a non-increasing list of numbers.

    Rejects an empty list and any adjacent increasing pair.  Round-trips
    exactly: ``parse_lambda(spec.values).values == spec.values``.
    """
    vals = tuple(_canonical(v) for v in values)
    if not vals:
        raise ValueError("spectrum must be non-empty")
    for i in range(len(vals) - 1):
        if vals[i] < vals[i + 1]:
            raise ValueError(
                f"spectrum must be non-increasing, got {vals[i]} < {vals[i + 1]} "
                f"at positions {i + 1}, {i + 2}"
            )
    breakpoints = tuple(
        i + 1 for i in range(len(vals) - 1) if vals[i] > vals[i + 1]
    )
    bounds = (0,) + breakpoints + (len(vals),)
    mult = tuple(bounds[i + 1] - bounds[i] for i in range(len(bounds) - 1))
    return LambdaSpec(values=vals, breakpoints=breakpoints, multiplicities=mult)


def parse_lambda_string(text: str) -> LambdaSpec:
    """Parse a CLI spectrum: comma-separated ints, rationals (7/2) or floats."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("empty spectrum string")
    out = []
    for p in parts:
        if "/" in p:
            out.append(Fraction(p))
        elif any(c in p for c in ".eE") and not p.lstrip("+-").isdigit():
            out.append(float(p))
        else:
            out.append(int(p))
    return parse_lambda(out)


def complex_dimension(spec: LambdaSpec) -> int:
    """Complex dimension of the orbit: (n^2 - sum k_i^2) / 2."""
    n = spec.n
    return (n * n - sum(k * k for k in spec.multiplicities)) // 2


Cell = tuple[int, int]


def staircase_cells(n: int) -> frozenset[Cell]:
    """All coordinate cells (i, j), i, j >= 1, i + j <= n + 1."""
    return frozenset(
        (i, j) for i in range(1, n + 1) for j in range(1, n + 2 - i)
    )


def constant_cells(spec: LambdaSpec) -> dict[Cell, Scalar]:
    """Cells whose coordinate is pinned to a spectrum value.

    The min-max pattern forces the coordinate at cell (j, n+1-k) to equal the
    block value whenever n_{i-1} < j <= n_i and j <= k <= n_i; in particular
    the whole anti-diagonal i + j = n + 1 carries the spectrum itself.
    """
    n = spec.n
    bounds = spec.block_bounds
    out: dict[Cell, Scalar] = {}
    for b in range(1, len(bounds)):
        lo, hi = bounds[b - 1], bounds[b]
        val = spec.values[hi - 1]
        for j in range(lo + 1, hi + 1):
            for k in range(j, hi + 1):
                out[(j, n + 1 - k)] = val
    return out


@dataclass(frozen=True)
class IndexSet:
    """The coordinate index set and its non-constant part."""

    all: frozenset[Cell]
    nonconstant: frozenset[Cell]


def nonconstant_indices(spec: LambdaSpec) -> IndexSet:
    """Indices whose coordinate actually varies on the orbit.

    |nonconstant| always equals :func:`complex_dimension`.
    """
    cells = staircase_cells(spec.n)
    const = frozenset(constant_cells(spec))
    free = cells - const
    assert len(free) == complex_dimension(spec)
    return IndexSet(all=cells, nonconstant=free)


def monotone_lambda(breakpoints, n: int, shift: Scalar = 0) -> LambdaSpec:
    """The spectrum making the orbit's symplectic form monotone.

    Block i (1 <= i <= r) carries n - n_{i-1} - n_i, the last block carries
    -n_r, and ``shift`` is added to every entry.  The result is affine in
    ``shift`` and its strict drops land exactly on ``breakpoints``.
    """
    bp = tuple(int(b) for b in breakpoints)
    if any(b <= 0 for b in bp) or list(bp) != sorted(set(bp)) or (bp and bp[-1] >= n):
        raise ValueError(f"invalid breakpoints {bp} for n={n}")
    shift = _canonical(shift)
    bounds = (0,) + bp + (n,)
    values = []
    for i in range(1, len(bounds)):
        if i < len(bounds) - 1:
            block = n - bounds[i - 1] - bounds[i]
        else:
            block = -bounds[i - 1]
        values.extend([block + shift] * (bounds[i] - bounds[i - 1]))
    return parse_lambda(values)
