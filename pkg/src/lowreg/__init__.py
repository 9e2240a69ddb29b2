"""Finite-difference solution of Poisson problems with known low-regularity modes.

The solution is split across an artificial interface.  Inside, a linear
combination of known singular modes with unknown coefficients ``k`` is
subtracted, which turns the problem into an interface problem.  ``k`` is
then recovered by least squares.
"""

from .assembly import BlockSystem, CaseSpec, apply_blocks, assemble, fd_weights
from .errors import LowRegError
from .geometry import Circle2D, NodeClassification, Point1D, UniformGrid, classify_nodes, stencil_arm_crossings
from .linalg import dense_lstsq, factor, solve
from .modes import (
    CrackModeIX,
    ModeBasis,
    ModeExpansion,
    Polynomial,
    PowerMode1D,
    RadialPowerMode2D,
    check_basis_independence,
)
from .solver import (
    RecoveryResult,
    exterior_solve,
    fixed_point_map,
    fixed_point_recover_k,
    iterate_k,
    reconstruct,
    schur_recover_k,
    solve_case,
)

__version__ = "0.1.0"
