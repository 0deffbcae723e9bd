"""Numerical Hermitian-matrix oracle for the combinatorial classification.

The eigenvalue map sends a Hermitian matrix to the ordered spectra of all
its leading principal submatrices.  Conversely, a fiber of that map is built
stage by stage out of arrow matrices: diagonal b_1..b_k bordered by a last
row z and column conj(z), whose characteristic polynomial is linear in the
|z_i|^2.  Weak interlacing ties force some z_i to vanish, tie runs bounded
by strict inequalities on both b-ends force sphere relations
|z_j|^2 + ... + |z_{j+l}|^2 = C, and the strictly interlacing residue pins
each remaining |z_i|^2 to a unique radius.  That solved structure is exactly
the W-block region classification, which is what `verify_face` checks.

Tie detection is exact on rational input and epsilon-based on floats; that
is the single place where float fuzziness enters the combinatorics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, NumericalError, SpectrumError
from .ladder import Face
from .polytope import GCPoint, contains, interior_point, point_from_free
from .spectrum import LambdaSpec
from .blocks import fiber_descriptor, stage_fiber

DEFAULT_TIE_TOL = 1e-9
RESIDUAL_TOL = 1e-10
SPECTRUM_TOL = 1e-8


class HermitianMatrix:
    """A Hermitian matrix; construction symmetrizes so A == A* exactly."""

    __slots__ = ("array",)

    def __init__(self, array):
        a = np.asarray(array, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DomainError(f"not square: shape {a.shape}")
        self.array = (a + a.conj().T) / 2

    @property
    def size(self) -> int:
        return self.array.shape[0]

    def to_json(self) -> list:
        return [
            [[float(z.real), float(z.imag)] for z in row] for row in self.array
        ]

    @classmethod
    def from_json(cls, rows) -> "HermitianMatrix":
        return cls(np.array([[complex(re, im) for re, im in row] for row in rows]))

    def __repr__(self):
        return f"HermitianMatrix(size={self.size})"


def eigvalsh_desc(a: np.ndarray) -> np.ndarray:
    """Descending eigenvalues of a Hermitian matrix (or a stack)."""
    return np.linalg.eigvalsh(a)[..., ::-1]


def eigh_desc(a: np.ndarray):
    """Descending eigen-decomposition; columns of v match the ordering."""
    w, v = np.linalg.eigh(a)
    return w[..., ::-1], v[..., :, ::-1]


def _coerce(x) -> HermitianMatrix:
    return x if isinstance(x, HermitianMatrix) else HermitianMatrix(x)


def gc_map(x, spec: LambdaSpec, tol: float = SPECTRUM_TOL) -> GCPoint:
    """Ordered spectra of all leading principal submatrices, as a point.

    The cell (i, j) receives the i-th largest eigenvalue of the submatrix of
    size i + j - 1.  Rejects matrices whose full spectrum is not the
    expected one (within ``tol`` relative).
    """
    h = _coerce(x)
    n = spec.n
    if h.size != n:
        raise SpectrumError(f"matrix size {h.size} != n = {n}")
    lam = np.array(spec.float_values())
    scale = max(1.0, float(np.max(np.abs(lam))))
    full = eigvalsh_desc(h.array)
    if np.max(np.abs(full - lam)) > tol * scale:
        raise SpectrumError(
            f"spectrum {full.tolist()} does not match target within {tol}"
        )
    values: dict = {}
    for k in range(1, n + 1):
        w = full if k == n else eigvalsh_desc(h.array[:k, :k])
        for i in range(1, k + 1):
            values[(i, k + 1 - i)] = float(w[i - 1])
    return GCPoint(values=values)


@dataclass(frozen=True)
class InterlacingPair:
    """Adjacent-level eigenvalue lists a (k+1 values) and b (k values)
    satisfying a_1 >= b_1 >= a_2 >= ... >= b_k >= a_{k+1}."""

    a: tuple
    b: tuple

    def __post_init__(self):
        if len(self.a) != len(self.b) + 1:
            raise DomainError("need len(a) == len(b) + 1")
        zig = self.zigzag()
        eps = 0 if _all_exact(zig) else 1e-12 * _scale(zig)
        for i in range(len(zig) - 1):
            if not (zig[i] >= zig[i + 1] - eps):
                raise DomainError(
                    f"interlacing violated: {zig[i]} < {zig[i + 1]} at {i}"
                )

    @property
    def k(self) -> int:
        return len(self.b)

    def zigzag(self) -> tuple:
        out = []
        for i in range(self.k):
            out.append(self.a[i])
            out.append(self.b[i])
        out.append(self.a[self.k])
        return tuple(out)

    @property
    def corner(self):
        return sum(self.a) - sum(self.b)


def _all_exact(values) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


def _scale(values) -> float:
    return max(1.0, max(abs(float(v)) for v in values))


@dataclass(frozen=True)
class FiberSolution:
    """Solved structure of |z_i|^2 for one arrow-matrix stage.

    Indices 1..k are partitioned into forced zeros, fixed radii (each a free
    phase circle), and sphere groups of size >= 2 with a shared squared
    radius.  The corner entry is the trace difference and is not free.
    """

    k: int
    zero_indices: frozenset[int]
    fixed_radii: dict
    sphere_groups: tuple
    corner: float
    b: tuple

    @property
    def structure_sizes(self) -> tuple[int, ...]:
        """Sorted sizes: 1 per fixed radius, group size per sphere group."""
        sizes = [1] * len(self.fixed_radii) + [len(g) for g, _ in self.sphere_groups]
        return tuple(sorted(sizes))

    @property
    def manifold_dim(self) -> int:
        return len(self.fixed_radii) + sum(
            2 * len(g) - 1 for g, _ in self.sphere_groups
        )

    def canonical_z(self) -> np.ndarray:
        """The fiber point with trivial phases: positive reals, group mass on
        the first coordinate."""
        z = np.zeros(self.k, dtype=complex)
        for i, delta in self.fixed_radii.items():
            z[i - 1] = np.sqrt(delta)
        for group, c in self.sphere_groups:
            z[group[0] - 1] = np.sqrt(c)
        return z

    def random_z_batch(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """(count, k) fiber points: uniform phases on circles, uniform points
        on sphere groups (normalized complex Gaussians)."""
        z = np.zeros((count, self.k), dtype=complex)
        if self.fixed_radii:
            idx = np.array(sorted(self.fixed_radii)) - 1
            radii = np.sqrt([self.fixed_radii[i + 1] for i in idx])
            z[:, idx] = radii * np.exp(2j * np.pi * rng.random((count, len(idx))))
        for group, c in self.sphere_groups:
            g = np.array(group) - 1
            v = rng.standard_normal((count, len(g))) + 1j * rng.standard_normal(
                (count, len(g))
            )
            nrm = np.linalg.norm(v, axis=1, keepdims=True)
            nrm[nrm == 0.0] = 1.0  # measure-zero guard
            z[:, g] = v * (np.sqrt(c) / nrm)
        return z

    def random_z(self, rng: np.random.Generator) -> np.ndarray:
        """One fiber point drawn as in :meth:`random_z_batch`."""
        return self.random_z_batch(1, rng)[0]


def _tie_runs(zig, tie_tol):
    """Maximal constant runs of the zigzag as (start, end) position pairs."""
    exact = _all_exact(zig)
    eps = 0 if exact else tie_tol * _scale(zig)
    runs = []
    start = 0
    for i in range(1, len(zig)):
        same = zig[i] == zig[start] if exact else abs(
            float(zig[i]) - float(zig[start])
        ) <= eps
        if not same:
            runs.append((start, i - 1))
            start = i
    runs.append((start, len(zig) - 1))
    return runs


def solve_fiber_system(
    pair: InterlacingPair, tie_tol: float = DEFAULT_TIE_TOL
) -> FiberSolution:
    """Solve the arrow-matrix constraints for one stage.

    Ties are read off the zigzag a_1 >= b_1 >= ... >= a_{k+1}: a run bounded
    by b-positions on both ends is one sphere group; every other b inside a
    run is forced to zero; isolated b's get a unique positive radius from
    the linear system in |z_i|^2 (solved least-squares over the reduced
    strictly-interlacing data, residual checked).
    """
    k = pair.k
    zig = pair.zigzag()
    zig_f = [float(v) for v in zig]
    runs = _tie_runs(zig, tie_tol)

    zero: set[int] = set()
    groups: list[tuple[int, ...]] = []
    reduced_a: list[float] = []
    reduced_b_vals: list[float] = []
    reduced_slots: list = []  # mirrors reduced_b_vals: ("fixed", i) | ("group", gi)

    for start, end in runs:
        b_in_run = [p // 2 + 1 for p in range(start, end + 1) if p % 2 == 1]
        start_b, end_b = start % 2 == 1, end % 2 == 1
        if start == end:
            if start_b:  # strictly interlaced b: fixed radius
                reduced_b_vals.append(zig_f[start])
                reduced_slots.append(("fixed", start // 2 + 1))
            else:
                reduced_a.append(zig_f[start])
        elif start_b and end_b:  # sphere group
            groups.append(tuple(b_in_run))
            reduced_b_vals.append(zig_f[start])
            reduced_slots.append(("group", len(groups) - 1))
        else:
            zero.update(b_in_run)
            if not start_b and not end_b:
                # run bounded by a's keeps a single a in the reduced data
                reduced_a.append(zig_f[start])

    corner = sum(zig_f[0::2]) - sum(zig_f[1::2])
    m = len(reduced_b_vals)
    magnitudes = np.zeros(m)
    if m:
        a_arr = np.array(reduced_a)
        b_arr = np.array(reduced_b_vals)
        if len(a_arr) != m + 1:
            raise NumericalError("reduction produced inconsistent sizes")
        diffs = a_arr[:, None] - b_arr[None, :]  # (m+1, m)
        full = np.prod(diffs, axis=1)  # prod_l (a_i - b_l)
        design = np.where(diffs != 0, full[:, None] / np.where(diffs == 0, 1, diffs), 0.0)
        rhs = (a_arr - float(corner)) * full
        sol, *_ = np.linalg.lstsq(design, rhs, rcond=None)
        resid = design @ sol - rhs
        scale = max(1.0, float(np.max(np.abs(rhs))))
        if float(np.max(np.abs(resid))) > RESIDUAL_TOL * scale:
            raise NumericalError(
                f"linear system residual {np.max(np.abs(resid)):.3e} too large"
            )
        rad_scale = _scale(zig) ** 2
        if np.min(sol) < -RESIDUAL_TOL * rad_scale:
            raise NumericalError(f"negative squared radius {np.min(sol):.3e}")
        magnitudes = np.maximum(sol, 0.0)

    fixed = {}
    sphere = [None] * len(groups)
    for val, slot in zip(magnitudes, reduced_slots):
        kind, which = slot
        if kind == "fixed":
            fixed[which] = float(val)
        else:
            sphere[which] = (groups[which], float(val))
    return FiberSolution(
        k=k,
        zero_indices=frozenset(zero),
        fixed_radii=fixed,
        sphere_groups=tuple(sphere),
        corner=corner,
        b=tuple(zig_f[1::2]),
    )


def arrow_matrix(b, z, corner) -> np.ndarray:
    k = len(b)
    out = np.zeros((k + 1, k + 1), dtype=complex)
    out[np.arange(k), np.arange(k)] = np.asarray(b, dtype=float)
    z = np.asarray(z, dtype=complex)
    out[:k, k] = z.conj()
    out[k, :k] = z
    out[k, k] = corner
    return out


def assemble_matrix(
    pair: InterlacingPair, solution: FiberSolution, z=None, tol: float = 1e-7
) -> HermitianMatrix:
    """Arrow matrix realizing the pair, from an explicit fiber point.

    ``z`` defaults to the canonical choice (trivial phases).  The choice is
    validated against the solved structure and the assembled spectrum is
    checked against ``a``.
    """
    if z is None:
        z = solution.canonical_z()
    z = np.asarray(z, dtype=complex)
    if z.shape != (solution.k,):
        raise DomainError(f"z must have length {solution.k}")
    scale2 = _scale(pair.zigzag()) ** 2
    for i in solution.zero_indices:
        if abs(z[i - 1]) ** 2 > tol * scale2:
            raise DomainError(f"z_{i} must vanish")
    for i, delta in solution.fixed_radii.items():
        if abs(abs(z[i - 1]) ** 2 - delta) > tol * scale2:
            raise DomainError(f"|z_{i}|^2 must equal {delta}")
    for group, c in solution.sphere_groups:
        mass = sum(abs(z[i - 1]) ** 2 for i in group)
        if abs(mass - c) > tol * scale2:
            raise DomainError(f"group {group} must have squared norm {c}")
    mat = arrow_matrix(solution.b, z, solution.corner)
    got = eigvalsh_desc(mat)
    want = np.array([float(v) for v in pair.a])
    if np.max(np.abs(got - want)) > 1e-9 * _scale(pair.a):
        raise NumericalError("assembled matrix misses the target spectrum")
    return HermitianMatrix(mat)


def _trusted_pair(a: tuple, b: tuple) -> InterlacingPair:
    """Pair constructor skipping validation (data read off a valid point)."""
    p = object.__new__(InterlacingPair)
    object.__setattr__(p, "a", a)
    object.__setattr__(p, "b", b)
    return p


def _stage_pairs(spec: LambdaSpec, point: GCPoint) -> list[InterlacingPair]:
    """The (a, b) data of every stage k = 1..n-1 read off a polytope point."""
    vals = point.values
    out = []
    for k in range(1, spec.n):
        b = tuple(vals[(i, k + 1 - i)] for i in range(1, k + 1))
        a = tuple(vals[(i, k + 2 - i)] for i in range(1, k + 2))
        out.append(_trusted_pair(a, b))
    return out


def _sample_stack(
    point: GCPoint, solutions, count: int, rng: np.random.Generator
) -> np.ndarray:
    """Stack of fiber matrices built size by size from solved stages."""
    u11 = float(point.values[(1, 1)])
    x = np.full((count, 1, 1), u11, dtype=complex)
    for sol in solutions:
        k = sol.k
        nxt = np.zeros((count, k + 1, k + 1), dtype=complex)
        nxt[:, :k, :k] = x
        if sol.fixed_radii or sol.sphere_groups:
            if k == 1:
                vecs = np.ones((count, 1, 1), dtype=complex)
            else:
                _, vecs = eigh_desc(x)
            z = sol.random_z_batch(count, rng)
            col = (vecs @ z.conj()[:, :, None])[:, :, 0]
            nxt[:, :k, k] = col
            nxt[:, k, :k] = col.conj()
        # a stage whose border is forced to vanish needs no eigenbasis
        nxt[:, k, k] = sol.corner
        x = nxt
    return x


def sample_fiber_batch(
    spec: LambdaSpec,
    point: GCPoint,
    count: int,
    rng_seed,
    tie_tol: float = DEFAULT_TIE_TOL,
) -> np.ndarray:
    """Stack of ``count`` fiber matrices over one polytope point.

    Builds each matrix size by size: diagonalize the current leading block
    with descending eigenvalues, draw an arrow-matrix fiber point, and
    conjugate it back.  Deterministic for a fixed seed.
    """
    if not contains(point, spec):
        raise DomainError("point lies outside the polytope")
    rng = (
        rng_seed
        if isinstance(rng_seed, np.random.Generator)
        else np.random.default_rng(rng_seed)
    )
    pairs = _stage_pairs(spec, point)
    solutions = [solve_fiber_system(p, tie_tol=tie_tol) for p in pairs]
    return _sample_stack(point, solutions, count, rng)


def sample_fiber(
    spec: LambdaSpec, point: GCPoint, rng_seed, tie_tol: float = DEFAULT_TIE_TOL
) -> HermitianMatrix:
    """One explicit fiber matrix over ``point`` (validated round-trip)."""
    x = sample_fiber_batch(spec, point, 1, rng_seed, tie_tol=tie_tol)[0]
    h = HermitianMatrix(x)
    err = roundtrip_error(h.array[None, :, :], spec, point)
    if err > SPECTRUM_TOL * _scale(spec.values):
        raise NumericalError(f"fiber sample misses its point by {err:.3e}")
    return h


def roundtrip_errors(stack: np.ndarray, spec: LambdaSpec, point: GCPoint):
    """Per-size max deviation between submatrix spectra and the point.

    Index k-1 holds the size-k error; the last entry doubles as the
    spectrum error because the anti-diagonal cells carry the spectrum.
    """
    n = spec.n
    out = []
    for k in range(1, n + 1):
        w = eigvalsh_desc(stack[:, :k, :k]) if k > 1 else stack[:, 0, 0].real[:, None]
        want = np.array(
            [float(point.values[(i, k + 1 - i)]) for i in range(1, k + 1)]
        )
        out.append(float(np.max(np.abs(w - want[None, :]))))
    return out


def roundtrip_error(stack: np.ndarray, spec: LambdaSpec, point: GCPoint) -> float:
    """Max deviation between submatrix spectra of a stack and the point."""
    return max(roundtrip_errors(stack, spec, point))


def spectrum_error(stack: np.ndarray, spec: LambdaSpec) -> float:
    lam = np.array(spec.float_values())
    w = eigvalsh_desc(stack)
    return float(np.max(np.abs(w - lam[None, :])))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with phase-fixed diagonal."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_orbit_matrix(spec: LambdaSpec, rng: np.random.Generator) -> HermitianMatrix:
    """A random matrix with the given spectrum (unitary conjugate of diag)."""
    u = random_unitary(spec.n, rng)
    return HermitianMatrix(u @ np.diag(spec.float_values()) @ u.conj().T)


def verify_face(
    spec: LambdaSpec,
    face: Face,
    n_samples: int = 20,
    rng_seed=0,
    tie_tol: float = DEFAULT_TIE_TOL,
) -> dict:
    """Cross-validate the block classification of one face numerically.

    Checks, at an interior point of the face: (i) sampled fiber matrices hit
    the point under the eigenvalue map; (ii) at every stage the solved
    radius structure (fixed radii and sphere-group sizes) matches the
    W-block region classification; (iii) the count of continuous parameters
    equals the predicted fiber dimension.  Any mismatch lands in
    ``failures`` with its stage named.
    """
    if n_samples < 1:
        raise DomainError("need n_samples >= 1")
    desc = fiber_descriptor(face)
    point = interior_point(face)
    pairs = _stage_pairs(spec, point)
    solutions = [solve_fiber_system(p, tie_tol=tie_tol) for p in pairs]
    failures: list[str] = []
    stages_report = []
    empirical_dim = 0
    for k in range(1, spec.n):
        sol = solutions[k - 1]
        comb = desc.stages[k - 1]
        comb_sizes = tuple(sorted((d + 1) // 2 for d in comb.factors if d > 0))
        match = comb_sizes == sol.structure_sizes
        if not match:
            failures.append(
                f"stage {k}: combinatorial sizes {comb_sizes} != "
                f"analytic sizes {sol.structure_sizes}"
            )
        empirical_dim += sol.manifold_dim
        stages_report.append(
            {
                "k": k,
                "combinatorial": comb.labels(),
                "analytic": {
                    "zeros": sorted(sol.zero_indices),
                    "fixed": sorted(sol.fixed_radii),
                    "groups": [list(g) for g, _ in sol.sphere_groups],
                },
                "match": match,
            }
        )
    if empirical_dim != desc.total_dim:
        failures.append(
            f"continuous parameter count {empirical_dim} != "
            f"predicted dim {desc.total_dim}"
        )

    rng = (
        rng_seed
        if isinstance(rng_seed, np.random.Generator)
        else np.random.default_rng(rng_seed)
    )
    stack = _sample_stack(point, solutions, n_samples, rng)
    scale = _scale(spec.values)
    errs = roundtrip_errors(stack, spec, point)
    sp_err = errs[-1]  # size n: the anti-diagonal carries the spectrum
    rt_err = max(errs)
    if sp_err > SPECTRUM_TOL * scale:
        failures.append(f"sample spectrum error {sp_err:.3e}")
    if rt_err > SPECTRUM_TOL * scale:
        failures.append(f"sample round-trip error {rt_err:.3e}")

    return {
        "face_id": face.id,
        "ok": not failures,
        "stages": stages_report,
        "samples": {
            "count": n_samples,
            "max_spectrum_err": sp_err,
            "max_roundtrip_err": rt_err,
        },
        "fiber_dim": desc.total_dim,
        "empirical_dim": empirical_dim,
        "failures": failures,
    }
