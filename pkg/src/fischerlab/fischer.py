"""Fischer decompositions f = P q + r with P_k*(D) r = 0.

Four routes are provided:

* ``project_homogeneous`` solves the normal equations of the orthogonal
  projection of a homogeneous f onto P_k times the lower slice.
* ``decompose_direct`` solves q |-> P_k*(D)(P q) on the space of
  polynomials of degree <= deg f - k, which that map sends to itself
  bijectively.
* ``decompose_series`` runs the iterated projection series; for
  polynomial input it terminates exactly and agrees with the direct
  solve by uniqueness.
* ``decompose_univariate`` and ``decompose_linear`` are the d = 1
  (interpolation at the root multiset) and k = 1 (translation trick)
  special cases, which also accept truncated Taylor streams.

Exact inputs give exact results; float solves carry condition estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import apolar
from .errors import InvalidInputError, NumericalError
from .exactlinalg import bareiss_solve, float_lstsq_solve
from .fields import EXACT, FLOAT, GaussianRational
from .polyalg import (Poly, apply_diff_op, enumerate_monomials,
                      enumerate_up_to_degree, midx_factorial)


@dataclass(frozen=True)
class FischerMatrix:
    """Matrix of q |-> pk*(D)(pk q) on one homogeneous slice.

    Rows and columns are indexed by ``basis`` (graded-lex monomials of
    degree ``source_degree``) in the raw monomial basis.  The map is
    self-adjoint and positive definite for the alpha!-weighted inner
    product, being of the form M*M with M injective.
    """

    source_degree: int
    basis: tuple
    rows: tuple
    field: str


@dataclass
class DecompositionResult:
    q: Poly
    r: Poly
    annihilator_residual: float
    method: str
    diagnostics: dict = dc_field(default_factory=dict)


def _require_nonzero_homogeneous(pk: Poly, name="pk"):
    if pk.is_zero:
        raise InvalidInputError(f"{name} must be nonzero")
    if not pk.is_homogeneous():
        raise InvalidInputError(f"{name} must be homogeneous")


def fischer_matrix(pk: Poly, m: int) -> FischerMatrix:
    """Assemble the degree-m normal-equations matrix for homogeneous pk."""
    _require_nonzero_homogeneous(pk)
    k = pk.degree
    if m < k:
        raise InvalidInputError(f"target degree {m} is below deg pk = {k}")
    basis = tuple(enumerate_monomials(pk.dim, m - k))
    index = {alpha: i for i, alpha in enumerate(basis)}
    pk_star = pk.star()
    n = len(basis)
    zero = GaussianRational(0) if pk.field == EXACT else 0j
    cols = []
    for beta in basis:
        image = apply_diff_op(pk_star, pk * Poly.monomial(pk.dim, beta, 1, field=pk.field))
        col = [zero] * n
        for alpha, c in image.terms.items():
            col[index[alpha]] = c
        cols.append(col)
    rows = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
    return FischerMatrix(m - k, basis, rows, pk.field)


def _annihilator_residual(pk: Poly, r: Poly) -> float:
    val = apolar.norm_sq(apply_diff_op(pk.star(), r))
    if val == 0:
        return 0.0
    return math.sqrt(float(val))


def _solve_slice(pk: Poly, rhs: Poly, m: int):
    """Solve pk*(D)(pk q) = rhs for q homogeneous of degree m - deg pk.

    Returns (q, condition or None).  The exact field uses fraction-free
    elimination on the raw monomial basis; the float field solves in the
    alpha!-orthonormal basis to stay well scaled.
    """
    k = pk.degree
    if rhs.is_zero:
        return Poly.zero(pk.dim, pk.field), None
    fm = fischer_matrix(pk, m)
    basis = fm.basis
    if pk.field == EXACT and rhs.field == EXACT:
        b = [rhs.coefficient(alpha) for alpha in basis]
        x = bareiss_solve([list(row) for row in fm.rows], b)
        if x is None:
            raise NumericalError("projection system unexpectedly singular")
        q = Poly(pk.dim, dict(zip(basis, x)), field=EXACT)
        return q, None
    weights = np.array([math.sqrt(midx_factorial(a)) for a in basis])
    a = np.array([[complex(v) for v in row] for row in fm.rows], dtype=complex)
    # conjugation by the weight matrix moves the raw-basis map to the
    # orthonormal basis z^alpha/sqrt(alpha!)
    a = a * (weights[:, None] / weights[None, :])
    b = np.array([complex(rhs.to_float().coefficient(alpha)) for alpha in basis])
    b = b * weights
    x, cond = float_lstsq_solve(a, b)
    q = Poly(pk.dim, {alpha: complex(x[i] / weights[i]) for i, alpha in enumerate(basis)},
             field=FLOAT)
    return q, cond


def project_homogeneous(pk: Poly, fm: Poly) -> DecompositionResult:
    """Orthogonal split fm = pk q + r with pk*(D) r = 0, all homogeneous.

    Pythagoras holds: ||fm||^2 = ||pk q||^2 + ||r||^2.
    """
    _require_nonzero_homogeneous(pk)
    if not fm.is_homogeneous():
        raise InvalidInputError("fm must be homogeneous")
    k = pk.degree
    if fm.is_zero or fm.degree < k:
        q = Poly.zero(pk.dim, fm.field)
        return DecompositionResult(q, fm, _annihilator_residual(pk, fm), "direct", {})
    rhs = apply_diff_op(pk.star(), fm)
    q, cond = _solve_slice(pk, rhs, fm.degree)
    r = fm - pk * q
    diag = {} if cond is None else {"condition": cond}
    return DecompositionResult(q, r, _annihilator_residual(pk, r), "direct", diag)


def _project_components(pk: Poly, g: Poly) -> Poly:
    """Sum of the projection coefficients of each homogeneous component."""
    out = Poly.zero(pk.dim, g.field)
    for _, gm in g.homogeneous_components().items():
        out = out + project_homogeneous(pk, gm).q
    return out


def decompose_direct(p: Poly, f: Poly) -> DecompositionResult:
    """Fischer decomposition by one linear solve.

    Solves F(q) = P_k*(D) f with F(q) = P_k*(D)(p q) over polynomials of
    degree <= deg f - k; F maps that space onto itself, so r = f - p q
    satisfies P_k*(D) r = 0 identically.
    """
    if p.is_zero:
        raise InvalidInputError("p must be nonzero")
    k = p.degree
    pk = p.homogeneous_component(k)
    if f.is_zero or f.degree < k:
        q = Poly.zero(p.dim, f.field)
        return DecompositionResult(q, f, _annihilator_residual(pk, f), "direct", {})
    n_deg = f.degree - k
    basis = enumerate_up_to_degree(p.dim, n_deg)
    index = {alpha: i for i, alpha in enumerate(basis)}
    n = len(basis)
    pk_star = pk.star()
    exact = p.field == EXACT and f.field == EXACT
    columns = []
    for beta in basis:
        image = apply_diff_op(pk_star, p * Poly.monomial(p.dim, beta, 1, field=p.field))
        columns.append(image)
    rhs_poly = apply_diff_op(pk_star, f)
    diag = {"system_size": n}
    if exact:
        zero = GaussianRational(0)
        rows = [[zero] * n for _ in range(n)]
        for j, image in enumerate(columns):
            for alpha, c in image.terms.items():
                rows[index[alpha]][j] = c
        b = [rhs_poly.coefficient(alpha) for alpha in basis]
        x = bareiss_solve(rows, b)
        if x is None:
            raise NumericalError("Fischer system unexpectedly singular")
        q = Poly(p.dim, dict(zip(basis, x)), field=EXACT)
    else:
        weights = np.array([math.sqrt(midx_factorial(a)) for a in basis])
        a = np.zeros((n, n), dtype=complex)
        for j, image in enumerate(columns):
            for alpha, c in image.to_float().terms.items():
                a[index[alpha], j] = c
        a = a * (weights[:, None] / weights[None, :])
        b = np.array([complex(rhs_poly.to_float().coefficient(alpha)) for alpha in basis])
        b = b * weights
        x, cond = float_lstsq_solve(a, b)
        q = Poly(p.dim, {alpha: complex(x[i] / weights[i]) for i, alpha in enumerate(basis)},
                 field=FLOAT)
        diag["condition"] = cond
    r = f - p * q
    return DecompositionResult(q, r, _annihilator_residual(pk, r), "direct", diag)


def validate_gap(p: Poly, beta: int) -> None:
    """Check p has no homogeneous component strictly between beta and deg p."""
    k = p.degree
    if not 0 <= beta < k:
        raise InvalidInputError(f"beta must lie in [0, {k}), got {beta}")
    for j in range(beta + 1, int(k)):
        if not p.homogeneous_component(j).is_zero:
            raise InvalidInputError(
                f"gap hypothesis violated: component of degree {j} is nonzero")


def decompose_series(p: Poly, f: Poly, beta=None) -> DecompositionResult:
    """Fischer decomposition by the iterated projection series.

    Writing p = P_k - L with L the (negated) lower part, the coefficient
    series is q = T f + T(L T f) + T(L T(L T f)) + ..., where T projects
    each homogeneous component onto the image of multiplication by P_k.
    Every level drops total degree by at least deg p - beta, so the sum
    is finite for polynomial input and equals the direct solve exactly.
    """
    if p.is_zero:
        raise InvalidInputError("p must be nonzero")
    k = p.degree
    if beta is not None:
        validate_gap(p, beta)
    pk = p.homogeneous_component(k)
    lower_neg = pk - p  # the series' lower terms: p = pk - lower_neg
    total = Poly.zero(p.dim, f.field)
    level = _project_components(pk, f)
    levels = 0
    while not level.is_zero:
        total = total + level
        level = _project_components(pk, lower_neg * level)
        levels += 1
    q = total
    r = f - p * q
    return DecompositionResult(q, r, _annihilator_residual(pk, r), "series",
                               {"levels": levels})


# ---------------------------------------------------------------------------
# d = 1: interpolation at the root multiset

def _poly_divmod_1d(f: Poly, p: Poly):
    """Univariate long division: f = p q + rem with deg rem < deg p."""
    k = int(p.degree)
    lead = p.coefficient((k,))
    q_terms = {}
    rem = {int(a[0]): c for a, c in f.terms.items()}
    for deg in range(int(f.degree), k - 1, -1):
        c = rem.get(deg)
        if c is None or c == 0:
            continue
        factor = c / lead
        q_terms[(deg - k,)] = factor
        for (j,), pc in p.terms.items():
            key = deg - k + int(j)
            val = rem.get(key, 0) - factor * pc
            if val == 0:
                rem.pop(key, None)
            else:
                rem[key] = val
    r = Poly(1, {(d,): c for d, c in rem.items() if d < k}, field=f.field if p.field == EXACT else FLOAT)
    return Poly(1, q_terms, field=r.field), r


def _univariate_roots(p: Poly):
    """Roots with multiplicities: companion eigenvalues, one Newton polish,
    then clustering."""
    k = int(p.degree)
    coeffs = np.array([complex(p.coefficient((j,))) for j in range(k, -1, -1)])
    raw = np.roots(coeffs)
    dp = p.to_float().derivative((1,))
    polished = []
    for z in raw:
        pz = complex(p.to_float().evaluate([z]))
        dz = complex(dp.evaluate([z]))
        if abs(dz) > 1e-8 * max(1.0, abs(pz)):
            z = z - pz / dz
        polished.append(z)
    scale = max(1.0, max(abs(z) for z in polished))
    tol = 1e-6 * scale
    clusters = []
    for z in sorted(polished, key=lambda w: (w.real, w.imag)):
        for c in clusters:
            if abs(z - c[0] / c[1]) <= tol:
                c[0] += z
                c[1] += 1
                break
        else:
            clusters.append([z, 1])
    return [(c[0] / c[1], c[1]) for c in clusters]


def _hermite_interpolant(nodes, values):
    """Newton-form interpolant matching derivatives at repeated nodes.

    ``nodes`` is a list of (x, multiplicity); ``values[i][j]`` holds the
    j-th derivative at node i for j < multiplicity.
    """
    xs = []
    for i, (x, mult) in enumerate(nodes):
        xs.extend([(x, i)] * mult)
    n = len(xs)
    table = [[0j] * n for _ in range(n)]
    for r in range(n):
        table[r][0] = values[xs[r][1]][0]
    for col in range(1, n):
        for r in range(n - col):
            x_lo, i_lo = xs[r]
            x_hi, i_hi = xs[r + col]
            if i_lo == i_hi:
                table[r][col] = values[i_lo][col] / math.factorial(col)
            else:
                table[r][col] = (table[r + 1][col - 1] - table[r][col - 1]) / (x_hi - x_lo)
    z = Poly.variable(1, 0, field=FLOAT)
    interp = Poly.zero(1, FLOAT)
    basis = Poly.constant(1, 1.0, field=FLOAT)
    for col in range(n):
        interp = interp + basis.scale(table[0][col])
        basis = basis * (z - complex(xs[col][0]))
    return interp


def decompose_univariate(p: Poly, f, max_degree=None) -> DecompositionResult:
    """d = 1 decomposition; r interpolates f at the root multiset of p.

    For polynomial f, long division produces exactly that remainder (deg
    r < deg p, and the leading derivative kills it).  For a Taylor stream
    the roots are located numerically, f and its derivatives are read off
    the truncated series, and q comes from synthetic division.
    """
    if p.dim != 1:
        raise InvalidInputError("decompose_univariate needs dimension 1")
    if p.is_zero:
        raise InvalidInputError("p must be nonzero")
    k = int(p.degree)
    if isinstance(f, Poly):
        if k == 0:
            q = f / p.coefficient((0,))
            return DecompositionResult(q, Poly.zero(1, q.field), 0.0, "univariate", {})
        if f.is_zero or f.degree < k:
            pk = p.homogeneous_component(k)
            return DecompositionResult(Poly.zero(1, f.field), f,
                                       _annihilator_residual(pk, f), "univariate", {})
        q, r = _poly_divmod_1d(f, p)
        pk = p.homogeneous_component(k)
        return DecompositionResult(q, r, _annihilator_residual(pk, r), "univariate", {})
    # Taylor stream input
    if f.dim != 1:
        raise InvalidInputError("stream must be univariate")
    cap = max_degree if max_degree is not None else f.max_degree
    if cap is None or math.isinf(cap):
        raise InvalidInputError("a finite truncation degree is required")
    cap = int(min(cap, f.max_degree))
    f_trunc = Poly.zero(1, FLOAT)
    for m in range(cap + 1):
        f_trunc = f_trunc + f.component(m).to_float()
    pf = p.to_float()
    if k == 0:
        q = f_trunc / pf.coefficient((0,))
        return DecompositionResult(q, Poly.zero(1, FLOAT), 0.0, "univariate",
                                   {"truncation_degree": cap})
    roots = _univariate_roots(pf)
    root_residuals = [abs(complex(pf.evaluate([z]))) for z, _ in roots]
    values = []
    for z, mult in roots:
        derivs = []
        g = f_trunc
        for _ in range(mult):
            derivs.append(complex(g.evaluate([z])))
            g = g.derivative((1,))
        values.append(derivs)
    r = _hermite_interpolant(roots, values)
    q, division_rem = _poly_divmod_1d(f_trunc - r, pf)
    pk = pf.homogeneous_component(k)
    diag = {
        "truncation_degree": cap,
        "roots": [[z.real, z.imag, mult] for z, mult in roots],
        "root_residuals": root_residuals,
        "interpolation_defect": apolar.norm(division_rem),
    }
    return DecompositionResult(q, r, _annihilator_residual(pk, r), "univariate", diag)


# ---------------------------------------------------------------------------
# k = 1: translation trick

def decompose_linear(p1: Poly, p0, f, max_degree=None) -> DecompositionResult:
    """Decompose against p1 - p0 with p1 homogeneous of degree 1.

    Shifting by any z0 with p1(z0) = p0 turns the divisor into the
    homogeneous p1; the minimal-norm z0 is used for determinism, and by
    uniqueness of the homogeneous decomposition any admissible z0 gives
    the same result.
    """
    if p1.is_zero:
        raise InvalidInputError("p1 must be nonzero")
    if not p1.is_homogeneous(1):
        raise InvalidInputError("p1 must be homogeneous of degree 1")
    d = p1.dim
    if isinstance(p0, Poly):
        if not p0.is_zero and p0.degree > 0:
            raise InvalidInputError("p0 must be a constant")
        p0 = p0.coefficient((0,) * d)
    coeffs = [p1.coefficient(tuple(1 if i == j else 0 for i in range(d)))
              for j in range(d)]
    denom = sum((c * c.conjugate() for c in coeffs),
                GaussianRational(0) if p1.field == EXACT else 0j)
    z0 = [c.conjugate() * p0 / denom for c in coeffs]
    if not isinstance(f, Poly):
        cap = max_degree if max_degree is not None else f.max_degree
        if cap is None or math.isinf(cap):
            raise InvalidInputError("a finite truncation degree is required")
        cap = int(min(cap, f.max_degree))
        g = Poly.zero(d, f.component(0).field)
        for m in range(cap + 1):
            g = g + f.component(m)
        diag_extra = {"truncation_degree": cap}
        f = g
    else:
        diag_extra = {}
    shifted = f.shift(z0)
    q_shift = _project_components(p1, shifted)
    h_shift = shifted - p1 * q_shift
    neg_z0 = [-v for v in z0]
    q = q_shift.shift(neg_z0)
    r = h_shift.shift(neg_z0)
    p = p1 - Poly.constant(d, p0)
    diag = {"shift": [str(v) if isinstance(v, GaussianRational) else complex(v) for v in z0],
            "reconstruction_residual": apolar.norm(f - (p * q + r)),
            **diag_extra}
    return DecompositionResult(q, r, _annihilator_residual(p1, r), "linear_shift", diag)
