"""Fiber classification for Gelfand-Cetlin systems on partial flag manifolds.

Given a non-increasing spectrum, this package builds the associated ladder
diagram, enumerates its faces, classifies the fiber over each face of the
moment polytope as an iterated bundle of odd spheres, decides which faces
carry Lagrangian fibers via rigid L-block tilings, and cross-checks every
combinatorial statement against explicit Hermitian matrices constructed with
the arrow-matrix fiber equations.
"""

__version__ = "0.1.0"

from .blocks import (
    FiberDescriptor,
    LBlock,
    StageFiber,
    WBlockDecomposition,
    fiber_descriptor,
    homotopy_invariants,
    lagrangian_classification,
    rigid_l_blocks,
    stage_fiber,
    torus_factorization,
    w_decomposition,
)
from .errors import (
    DomainError,
    GCFibersError,
    InvalidFaceError,
    NumericalError,
    SizeGuardError,
    SpectrumError,
)
from .ladder import (
    Face,
    FaceLattice,
    LadderDiagram,
    build_ladder,
    enumerate_faces,
    face_dimension,
    face_from_edges,
    face_lattice,
    improper_face,
    minimal_cycles,
    positive_paths,
)
from .polytope import (
    EqualitySet,
    GCPoint,
    contains,
    face_affine_dimension,
    face_by_equalities,
    gc_inequalities,
    interior_point,
    locate_face,
    pattern_slack,
    point_from_free,
    psi,
    zero_point,
)
from .spectral import (
    FiberSolution,
    HermitianMatrix,
    InterlacingPair,
    assemble_matrix,
    gc_map,
    random_orbit_matrix,
    sample_fiber,
    sample_fiber_batch,
    solve_fiber_system,
    verify_face,
)
from .spectrum import (
    IndexSet,
    LambdaSpec,
    complex_dimension,
    monotone_lambda,
    nonconstant_indices,
    parse_lambda,
    parse_lambda_string,
)

__all__ = [
    "DomainError",
    "EqualitySet",
    "Face",
    "FaceLattice",
    "FiberDescriptor",
    "FiberSolution",
    "GCFibersError",
    "GCPoint",
    "HermitianMatrix",
    "IndexSet",
    "InterlacingPair",
    "InvalidFaceError",
    "LBlock",
    "LadderDiagram",
    "LambdaSpec",
    "NumericalError",
    "SizeGuardError",
    "SpectrumError",
    "StageFiber",
    "WBlockDecomposition",
    "assemble_matrix",
    "build_ladder",
    "complex_dimension",
    "contains",
    "enumerate_faces",
    "face_affine_dimension",
    "face_by_equalities",
    "face_dimension",
    "face_from_edges",
    "face_lattice",
    "fiber_descriptor",
    "gc_inequalities",
    "gc_map",
    "homotopy_invariants",
    "improper_face",
    "interior_point",
    "lagrangian_classification",
    "locate_face",
    "minimal_cycles",
    "monotone_lambda",
    "nonconstant_indices",
    "parse_lambda",
    "parse_lambda_string",
    "pattern_slack",
    "point_from_free",
    "positive_paths",
    "psi",
    "random_orbit_matrix",
    "rigid_l_blocks",
    "sample_fiber",
    "sample_fiber_batch",
    "solve_fiber_system",
    "stage_fiber",
    "torus_factorization",
    "verify_face",
    "w_decomposition",
    "zero_point",
]
