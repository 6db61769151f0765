"""Smallest-eigenvalue solver for symmetric tridiagonal operators.

Used for the principal eigenvalue of -d w'' + c(y) w on (0, L), discretized
on the uniform grid. The Neumann (no-flux) discretization uses ghost nodes;
its boundary rows are unsymmetric but similar, via the square root of the
trapezoid weights, to a symmetric matrix with boundary off-diagonal entries
scaled by sqrt(2). Eigenvalues are unchanged by that similarity.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np
import numpy.typing as npt

FloatArray = npt.NDArray[np.floating[Any]]

_ERR_SHAPE = "off-diagonal must have one entry fewer than the diagonal"
_ERR_EMPTY = "matrix must have at least one row"


def sturm_count(diag: FloatArray, off: FloatArray, x: float) -> int:
    """Counts eigenvalues of the symmetric tridiagonal matrix below x.

    Runs the standard Sturm sequence (LDL^T pivots of A - x*I) and counts
    negative pivots. Zero pivots are nudged to preserve the count.
    """
    diag = np.asarray(diag, dtype=float)
    off = np.asarray(off, dtype=float)
    if diag.size == 0:
        raise ValueError(_ERR_EMPTY)
    if off.size != diag.size - 1:
        raise ValueError(_ERR_SHAPE)
    count = 0
    pivot = diag[0] - x
    if pivot < 0.0:
        count += 1
    for i in range(1, diag.size):
        if pivot == 0.0:
            pivot = abs(off[i - 1]) * 1e-30 + 1e-300
        pivot = (diag[i] - x) - off[i - 1] ** 2 / pivot
        if pivot < 0.0:
            count += 1
    return count


def smallest_eigenvalue(diag: FloatArray, off: FloatArray, tol: float = 1e-10) -> float:
    """Smallest eigenvalue of a symmetric tridiagonal matrix by bisection.

    Brackets with Gershgorin disks and bisects on the Sturm count until the
    bracket width falls below tol (absolute, with a relative guard for
    large-magnitude spectra).
    """
    diag = np.asarray(diag, dtype=float)
    off = np.asarray(off, dtype=float)
    if off.size != diag.size - 1:
        raise ValueError(_ERR_SHAPE)
    reach = np.zeros_like(diag)
    if off.size:
        reach[:-1] += np.abs(off)
        reach[1:] += np.abs(off)
    lo = float(np.min(diag - reach))
    hi = float(np.max(diag + reach))
    scale = max(1.0, abs(lo), abs(hi))
    while hi - lo > tol * max(1.0, scale * 1e-6) and hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if sturm_count(diag, off, mid) >= 1:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def neumann_operator(d: float, c_nodes: FloatArray, h: float) -> tuple[FloatArray, FloatArray]:
    """Symmetric tridiagonal form of -d u'' + c u with no-flux endpoints.

    The ghost-node rows couple each endpoint to its neighbour with weight
    -2d/h^2; the symmetrized matrix carries -sqrt(2)*d/h^2 there instead.

    Args:
        d: diffusion rate, positive.
        c_nodes: potential at the N+1 grid nodes.
        h: grid spacing.

    Returns:
        (diag, off) arrays of the symmetric matrix, sizes N+1 and N.
    """
    c_nodes = np.asarray(c_nodes, dtype=float)
    w = d / h**2
    diag = 2.0 * w + c_nodes
    off = np.full(c_nodes.size - 1, -w)
    off[0] = -math.sqrt(2.0) * w
    off[-1] = -math.sqrt(2.0) * w
    return diag, off


def dirichlet_operator(d: float, c_nodes: FloatArray, h: float) -> tuple[FloatArray, FloatArray]:
    """Symmetric tridiagonal form of -d u'' + c u with zero endpoints.

    Only the N-1 interior nodes carry unknowns; c_nodes still lists all
    N+1 nodal values and the endpoint entries are dropped.
    """
    c_nodes = np.asarray(c_nodes, dtype=float)
    w = d / h**2
    diag = 2.0 * w + c_nodes[1:-1]
    off = np.full(c_nodes.size - 3, -w)
    return diag, off
