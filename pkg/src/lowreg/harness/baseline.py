"""Plain second-order central differences on the original 1-D problem."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from ..assembly import CaseSpec
from ..geometry import UniformGrid
from ..linalg import factor, solve


def baseline_fd2(case: CaseSpec, n: int | None = None) -> np.ndarray:
    """Solve ``u'' = f`` with the three-point stencil and Dirichlet ends.

    No interface or mode subtraction is involved.  Returns the solution on
    all ``n + 1`` nodes, the end values being the Dirichlet data.
    """
    if case.grid.dim != 1:
        raise ValueError("the FD2 baseline is 1-D only")
    grid = case.grid if n is None else UniformGrid(case.grid.bounds, (n,))
    n = grid.divisions[0]
    (h,) = grid.spacing
    x = grid.coordinates()
    g = case.boundary(x[[0, n]])
    rhs = case.source(x[1:n]) * h**2
    rhs[0] -= g[0]
    rhs[-1] -= g[1]
    m = sp.diags([np.ones(n - 2), -2.0 * np.ones(n - 1), np.ones(n - 2)], [-1, 0, 1], format="csc")
    u = np.empty(n + 1)
    u[[0, n]] = g
    u[1:n] = solve(factor(m), rhs)
    return u
