"""Linear solves: fraction-free exact elimination and diagnosed float paths.

The exact routines work on Gaussian-rational entries.  Rows are first
scaled to Gaussian integers, then Bareiss elimination keeps every
intermediate value an exact subdeterminant, so no rounding ever occurs.
The float path is a rank-revealing least-squares solve that raises
:class:`ConditioningError` instead of returning garbage.
"""

from __future__ import annotations

import numpy as np

from .errors import ConditioningError
from .fields import GaussianRational

_ZERO = GaussianRational(0)
_COND_LIMIT = 1e12


def _lcm(a: int, b: int) -> int:
    from math import gcd
    return a // gcd(a, b) * b


def _clear_denominators(row):
    """Scale a row of Gaussian rationals to Gaussian integers."""
    scale = 1
    for c in row:
        scale = _lcm(scale, c.real.denominator)
        scale = _lcm(scale, c.imag.denominator)
    if scale == 1:
        return list(row)
    return [c * scale for c in row]


def bareiss_solve(rows, rhs):
    """Solve A x = b exactly; returns None if A is singular.

    ``rows`` is a list of lists of GaussianRational (square), ``rhs`` a
    list of the same length.
    """
    n = len(rows)
    aug = [_clear_denominators(list(rows[i]) + [rhs[i]]) for i in range(n)]
    prev = GaussianRational(1)
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot_row is None:
            return None
        if pivot_row != col:
            aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        pivot = aug[col][col]
        for r in range(col + 1, n):
            head = aug[r][col]
            row = aug[r]
            ref = aug[col]
            for c in range(col + 1, n + 1):
                row[c] = (pivot * row[c] - head * ref[c]) / prev
            row[col] = _ZERO
        prev = pivot
    x = [None] * n
    for i in range(n - 1, -1, -1):
        acc = aug[i][n]
        for j in range(i + 1, n):
            acc = acc - aug[i][j] * x[j]
        x[i] = acc / aug[i][i]
    return x


def exact_rref(rows, ncols):
    """Reduced row echelon form over the Gaussian rationals.

    Returns (reduced rows, pivot column indices).
    """
    mat = [list(r) for r in rows]
    pivots = []
    lead = 0
    for col in range(ncols):
        pivot_row = next((r for r in range(lead, len(mat)) if mat[r][col]), None)
        if pivot_row is None:
            continue
        mat[lead], mat[pivot_row] = mat[pivot_row], mat[lead]
        inv = GaussianRational(1) / mat[lead][col]
        mat[lead] = [v * inv for v in mat[lead]]
        for r in range(len(mat)):
            if r != lead and mat[r][col]:
                factor = mat[r][col]
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[lead])]
        pivots.append(col)
        lead += 1
        if lead == len(mat):
            break
    return mat, pivots


def exact_nullspace(rows, ncols):
    """Basis of the nullspace of A over the Gaussian rationals.

    One vector per free column: the free coordinate is 1 and pivot
    coordinates are read off the reduced form, giving a deterministic
    basis in column order.
    """
    if not rows:
        one = GaussianRational(1)
        return [[one if i == j else _ZERO for i in range(ncols)]
                for j in range(ncols)]
    mat, pivots = exact_rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [_ZERO] * ncols
        vec[free] = GaussianRational(1)
        for row_idx, pc in enumerate(pivots):
            vec[pc] = -mat[row_idx][free]
        basis.append(vec)
    return basis


def float_lstsq_solve(a: np.ndarray, b: np.ndarray, cond_limit=_COND_LIMIT):
    """SVD-backed least-squares solve with a condition estimate.

    Returns (x, condition).  Raises ConditioningError when the system is
    numerically singular.
    """
    x, _, rank, sv = np.linalg.lstsq(a, b, rcond=None)
    if len(sv) == 0 or sv[0] == 0:
        raise ConditioningError("zero system", condition=float("inf"))
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf")
    if rank < a.shape[1] or cond > cond_limit:
        raise ConditioningError(
            f"system too ill-conditioned (estimated condition {cond:.3e})",
            condition=cond)
    return x, cond
