"""Multiplication operators in the orthonormal monomial basis and their
extremal singular values.

For homogeneous pk of degree k, multiplication f |-> pk f maps the
degree-m slice injectively into degree m+k.  Its smallest singular value
never drops below ||pk|| (Bombieri) and its largest stays under the
degree-dependent coefficient bound, so the per-degree extremes quantify
how much the product norm can grow or shrink relative to ||pk|| ||f||.
The log-log slope of sigma_min against m is the growth exponent reported
by :func:`ks_exponent_fit`.
"""

from __future__ import annotations

import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .errors import InvalidInputError, NumericalError
from .exactlinalg import exact_nullspace
from .fields import EXACT, FLOAT, GaussianRational, gaussian_sqrt, is_exact_scalar, to_exact
from .polyalg import (Poly, apply_diff_op, count_monomials, enumerate_monomials,
                      midx_factorial)
from .sampling import worker_count

DEFAULT_DIM_CAP = 20000


@dataclass(frozen=True)
class MultiplicationMatrix:
    """Matrix of f |-> pk*f between orthonormal graded slices.

    Rows are indexed by the degree m+k monomials, columns by the degree m
    monomials, both in graded-lex order and normalized by sqrt(alpha!).
    Entries are assembled from exact factorial ratios before the single
    float square root.
    """

    pk: Poly
    m: int
    matrix: np.ndarray
    row_basis: tuple
    col_basis: tuple


def mult_matrix(pk: Poly, m: int, dim_cap: int = DEFAULT_DIM_CAP) -> MultiplicationMatrix:
    if pk.is_zero:
        raise InvalidInputError("pk must be nonzero")
    if not pk.is_homogeneous():
        raise InvalidInputError("pk must be homogeneous")
    if pk.degree < 1:
        raise InvalidInputError("pk must have degree >= 1")
    if m < 0:
        raise InvalidInputError("source degree must be >= 0")
    d = pk.dim
    k = pk.degree
    if count_monomials(d, m + k) > dim_cap:
        raise InvalidInputError(
            f"slice dimension exceeds cap {dim_cap}; raise dim_cap to override")
    col_basis = tuple(enumerate_monomials(d, m))
    row_basis = tuple(enumerate_monomials(d, m + k))
    row_index = {alpha: i for i, alpha in enumerate(row_basis)}
    a = np.zeros((len(row_basis), len(col_basis)), dtype=complex)
    for j, beta in enumerate(col_basis):
        fact_beta = midx_factorial(beta)
        for gamma, c in pk.terms.items():
            delta = tuple(g + b for g, b in zip(gamma, beta))
            ratio = Fraction(midx_factorial(delta), fact_beta)
            a[row_index[delta], j] = complex(c) * math.sqrt(float(ratio))
    return MultiplicationMatrix(pk, m, a, row_basis, col_basis)


def sigma_extremes(pk: Poly, m: int, dim_cap: int = DEFAULT_DIM_CAP):
    """(sigma_min, sigma_max) of the degree-m multiplication matrix."""
    mat = mult_matrix(pk, m, dim_cap=dim_cap)
    try:
        sv = np.linalg.svd(mat.matrix, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"SVD failed for degree {m} (shape {mat.matrix.shape})") from exc
    return float(sv[-1]), float(sv[0])


@dataclass
class SpectralReport:
    degrees: list
    sigma_min: list
    sigma_max: list
    fitted_tau: float
    fitted_C: float
    fit_window: tuple
    residual: float
    flags: list = dc_field(default_factory=list)


def sweep_sigma(pk: Poly, degrees, dim_cap: int = DEFAULT_DIM_CAP):
    """Per-degree singular-value extremes; independent degrees may run on
    several workers, assembly order is fixed by the degree list."""
    degrees = list(degrees)
    workers = worker_count()
    if workers > 1 and len(degrees) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pairs = list(pool.map(lambda mm: sigma_extremes(pk, mm, dim_cap), degrees))
    else:
        pairs = [sigma_extremes(pk, mm, dim_cap) for mm in degrees]
    lo = [p[0] for p in pairs]
    hi = [p[1] for p in pairs]
    return lo, hi


def ks_exponent_fit(pk: Poly, m_range=(8, 40), dim_cap: int = DEFAULT_DIM_CAP) -> SpectralReport:
    """Least-squares fit of log sigma_min(m) = log C + (tau/2) log m.

    The fitted exponent is reported as-is; values above deg pk (or above
    deg pk - 1 when d > 1, where that ceiling is provable) only raise
    flags, since they can only be numerical artifacts.
    """
    m_min, m_max = int(m_range[0]), int(m_range[1])
    if m_min < 2 or m_max <= m_min:
        raise InvalidInputError("need m_max > m_min >= 2")
    if m_max - m_min + 1 < 4:
        raise InvalidInputError("fit window must span at least 4 degrees")
    degrees = list(range(m_min, m_max + 1))
    lo, hi = sweep_sigma(pk, degrees, dim_cap=dim_cap)
    x = np.log(np.array(degrees, dtype=float))
    y = np.log(np.array(lo))
    design = np.stack([x, np.ones_like(x)], axis=1)
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    slope, intercept = float(coef[0]), float(coef[1])
    resid = float(np.sqrt(np.mean((design @ coef - y) ** 2)))
    tau = 2.0 * slope
    k = int(pk.degree)
    flags = []
    if tau > k:
        flags.append("tau-exceeds-degree")
    if pk.dim > 1 and tau > k - 1 + 0.05:
        flags.append("tau-above-provable-ceiling")
    return SpectralReport(degrees, lo, hi, tau, math.exp(intercept),
                          (m_min, m_max), resid, flags)


def kernel_basis(pk: Poly, m: int):
    """Basis of the kernel of pk(D) on the homogeneous degree-m slice.

    Exact coefficients give an exact rational basis via reduced row
    echelon form; float input falls back to an SVD nullspace.
    """
    if pk.is_zero:
        raise InvalidInputError("pk must be nonzero")
    if not pk.is_homogeneous():
        raise InvalidInputError("pk must be homogeneous")
    if m < 0:
        raise InvalidInputError("degree must be >= 0")
    d = pk.dim
    k = int(pk.degree)
    col_basis = enumerate_monomials(d, m)
    if m < k:
        return [Poly.monomial(d, alpha, 1, field=pk.field) for alpha in col_basis]
    row_basis = enumerate_monomials(d, m - k)
    row_index = {alpha: i for i, alpha in enumerate(row_basis)}
    if pk.field == EXACT:
        zero = GaussianRational(0)
        rows = [[zero] * len(col_basis) for _ in row_basis]
        for j, beta in enumerate(col_basis):
            image = apply_diff_op(pk, Poly.monomial(d, beta, 1, field=EXACT))
            for alpha, c in image.terms.items():
                rows[row_index[alpha]][j] = c
        vecs = exact_nullspace(rows, len(col_basis))
        return [Poly(d, dict(zip(col_basis, v)), field=EXACT) for v in vecs]
    a = np.zeros((len(row_basis), len(col_basis)), dtype=complex)
    for j, beta in enumerate(col_basis):
        image = apply_diff_op(pk.to_float(), Poly.monomial(d, beta, 1.0, field=FLOAT))
        for alpha, c in image.terms.items():
            a[row_index[alpha], j] = c
    _, sv, vh = np.linalg.svd(a)
    tol = max(a.shape) * np.finfo(float).eps * (sv[0] if len(sv) else 1.0)
    rank = int(np.sum(sv > tol))
    return [Poly(d, {alpha: complex(v) for alpha, v in zip(col_basis, row)}, field=FLOAT)
            for row in vh[rank:].conj()]


@dataclass(frozen=True)
class QuadraticClass:
    """Classification of a z1^2 / z1 z2 / z2^2 combination in 2 variables."""

    degenerate: bool
    amenable: bool
    square_root: tuple = None
    witness_direction: tuple = None


def classify_quadratic_2d(a, b, c, tol: float = 1e-12) -> QuadraticClass:
    """Classify P = a z1^2 + b z1 z2 + c z2^2.

    Degenerate means 4ac = b^2, equivalently P = (r z1 + s z2)^2; then
    multiplication by P preserves the norm ratio along (s z1 - r z2)^m
    exactly, so no uniform norm growth in the degree is possible.
    Amenable covers a z1^2 + c z2^2 (a, c nonzero) and b z1 z2.
    """
    exact = all(is_exact_scalar(v) for v in (a, b, c))
    if exact:
        a, b, c = to_exact(a), to_exact(b), to_exact(c)
        if not (a or b or c):
            raise InvalidInputError("coefficients must not all vanish")
        disc = 4 * a * c - b * b
        degenerate = disc == 0
        is_zero = lambda v: not v
    else:
        a, b, c = complex(a), complex(b), complex(c)
        scale = max(abs(a), abs(b), abs(c))
        if scale == 0:
            raise InvalidInputError("coefficients must not all vanish")
        degenerate = abs(4 * a * c - b * b) <= tol * scale * scale
        is_zero = lambda v: abs(v) <= tol * scale
    amenable = (not is_zero(a) and not is_zero(c) and is_zero(b)) or \
               (is_zero(a) and is_zero(c) and not is_zero(b))
    square_root = None
    witness = None
    if degenerate:
        if not is_zero(a):
            r = (gaussian_sqrt(a) if exact else None) or complex(a) ** 0.5
            s = b / (2 * r)
        else:
            # 4ac = b^2 with a = 0 forces b = 0, so P = c z2^2
            r = GaussianRational(0) if exact else 0j
            s = (gaussian_sqrt(c) if exact else None) or complex(c) ** 0.5
        square_root = (r, s)
        witness = (s, -r)
    return QuadraticClass(degenerate, amenable, square_root, witness)


# ---------------------------------------------------------------------------
# report serialization

def report_to_csv(report: SpectralReport) -> str:
    buf = io.StringIO()
    buf.write("m,sigma_min,sigma_max\n")
    for m, lo, hi in zip(report.degrees, report.sigma_min, report.sigma_max):
        buf.write(f"{m},{lo!r},{hi!r}\n")
    return buf.getvalue()


def report_header(report: SpectralReport) -> dict:
    def clean(x):
        return x if isinstance(x, float) and math.isfinite(x) else (
            x if not isinstance(x, float) else None)
    return {
        "fitted_tau": clean(report.fitted_tau),
        "fitted_C": clean(report.fitted_C),
        "window": list(report.fit_window),
        "residual": clean(report.residual),
        "flags": report.flags,
    }


def save_report(report: SpectralReport, csv_path, json_path) -> None:
    with open(csv_path, "w") as fh:
        fh.write(report_to_csv(report))
    with open(json_path, "w") as fh:
        json.dump(report_header(report), fh, indent=1)
        fh.write("\n")
