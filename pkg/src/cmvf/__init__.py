"""Conley-Morse theory for combinatorial multivector fields on Lefschetz complexes."""
from .algebra import QQ, FieldScalar, PrimeField, RationalField, SparseMatrix, field_from_id, field_inverse, rank, reduce_pair
from .conley import ConnectionMatrix, Generator, VerificationReport, conley_index, connection_matrix, verify_connection_matrix
from .discretize import GeometricComplex, cubical_mesh, delaunay_mesh, mvf_from_field, transitions
from .dynamics import (
    FlowGraph,
    MorseDecomposition,
    alpha_omega,
    connection_set,
    finest_morse_decomposition,
    is_attractor,
    is_repeller,
    morse_interval,
)
from .errors import CmvfError
from .expr import VectorFieldExpr, eval_vf, parse_vf
from .homology import betti, betti_euler, chain_complex_of, euler_characteristic, relative_betti
from .lefschetz import (
    LefschetzComplex,
    build_cubical,
    build_delaunay,
    build_simplicial,
    complex_from_json,
    complex_to_json,
)
from .mvf import MultivectorField, classify, is_v_compatible, minimal_mvf, mvf_from_json, mvf_to_json, v_hull, v_saturate, validate_mvf

__version__ = "0.1.0"
