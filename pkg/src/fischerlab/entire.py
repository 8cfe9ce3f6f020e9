"""Entire functions as degree-indexed streams of homogeneous components.

Everything here is degree-wise: growth order is estimated from the decay
of component sup-norms, weighted sup norms classify membership in the
lambda-weighted Banach spaces, and the truncated decomposition sums the
iterated-projection blocks degree by degree with explicit per-degree
stopping diagnostics.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import apolar, sampling
from .errors import FormatError, InvalidInputError
from .fields import EXACT, FLOAT, abs_sq
from .fischer import project_homogeneous, validate_gap
from .polyalg import Poly, poly_from_dict, poly_to_dict


class TaylorStream:
    """Supplier of the homogeneous components f_m of an entire function.

    ``max_degree`` is the declared supply limit (math.inf for closed-form
    generators).  Components are cached; streams backed by an actual
    polynomial are *total*: every component beyond the degree is known to
    be exactly zero, which the decomposition uses to avoid spurious
    truncation flags.
    """

    def __init__(self, dim, component_fn, max_degree=math.inf,
                 provenance="generator", total=False, poly_degree=None):
        if dim < 1:
            raise InvalidInputError(f"dimension must be >= 1, got {dim}")
        self.dim = dim
        self.max_degree = max_degree
        self.provenance = provenance
        self.total = total
        self.poly_degree = poly_degree
        self._fn = component_fn
        self._cache = {}

    def component(self, m: int) -> Poly:
        if m < 0:
            raise InvalidInputError("component degree must be >= 0")
        if m > self.max_degree:
            raise InvalidInputError(
                f"component {m} beyond declared max degree {self.max_degree}")
        if m not in self._cache:
            fm = self._fn(m)
            if not fm.is_homogeneous(m) and not fm.is_zero:
                raise InvalidInputError(f"component {m} is not homogeneous of degree {m}")
            self._cache[m] = fm
        return self._cache[m]

    def truncate(self, cap: int) -> Poly:
        """Sum of components up to min(cap, max_degree)."""
        cap = int(min(cap, self.max_degree))
        total = Poly.zero(self.dim)
        for m in range(cap + 1):
            total = total + self.component(m)
        return total

    @classmethod
    def from_poly(cls, p: Poly, provenance="polynomial") -> "TaylorStream":
        comps = p.homogeneous_components()
        zero = Poly.zero(p.dim, p.field)
        deg = -1 if p.is_zero else int(p.degree)
        return cls(p.dim, lambda m: comps.get(m, zero), max_degree=math.inf,
                   provenance=provenance, total=True, poly_degree=deg)

    @classmethod
    def from_components(cls, dim, components: dict, max_degree, field=EXACT,
                        provenance="table", total=False) -> "TaylorStream":
        zero = Poly.zero(dim, field)
        table = dict(components)
        deg = max((m for m, c in table.items() if not c.is_zero), default=-1) if total else None
        return cls(dim, lambda m: table.get(m, zero), max_degree=max_degree,
                   provenance=provenance, total=total, poly_degree=deg)

    @classmethod
    def from_exp(cls, inner: Poly, max_degree=math.inf) -> "TaylorStream":
        """Components of exp(inner), inner a polynomial with inner(0) = 0.

        Uses the Euler-operator recurrence m f_m = sum_j (j g_j) f_{m-j},
        which stays in exact arithmetic for exact input.
        """
        if not inner.homogeneous_component(0).is_zero:
            raise InvalidInputError("exp generator needs vanishing constant term")
        parts = inner.homogeneous_components()
        state = {0: Poly.constant(inner.dim, 1, field=inner.field)}

        def comp(m, _state=state, _parts=parts, _dim=inner.dim, _field=inner.field):
            for n in range(max(_state) + 1, m + 1):
                acc = Poly.zero(_dim, _field)
                for j, gj in _parts.items():
                    if j == 0 or j > n:
                        continue
                    prev = _state[n - j]
                    if not prev.is_zero:
                        acc = acc + gj * prev * j
                if _field == EXACT:
                    acc = acc * Fraction(1, n)
                else:
                    acc = acc * (1.0 / n)
                _state[n] = acc
            return _state[m]

        return cls(inner.dim, comp, max_degree=max_degree, provenance="exp_poly")


class LambdaSeq:
    """Decreasing positive weights lambda_m <= 1 tending to zero.

    Values are clamped by min(., 1), which leaves the induced space
    unchanged.  Construction probes a geometric grid of degrees and
    rejects sequences that fail to decrease toward zero there; an actual
    limit cannot be certified from finitely many samples.
    """

    _PROBE = [1, 2, 4, 8, 16, 64, 256, 1024, 4096, 16384]

    def __init__(self, fn, name="lambda"):
        self._fn = fn
        self.name = name
        vals = [self(m) for m in self._PROBE]
        if any(v <= 0 for v in vals):
            raise InvalidInputError("lambda values must be positive")
        if any(b > a + 1e-15 for a, b in zip(vals, vals[1:])):
            raise InvalidInputError("lambda values must be non-increasing")
        if not vals[-1] < vals[0]:
            raise InvalidInputError(
                "lambda sequence shows no decrease toward 0 on the probe grid")

    def __call__(self, m: int) -> float:
        return min(float(self._fn(m)), 1.0)


def lambda_from_spec(spec: str) -> LambdaSeq:
    """Named weight sequences for the CLI: 'inv-log', 'inv-linear', 'power:p'."""
    if spec == "inv-log":
        return LambdaSeq(lambda m: 1.0 / math.log(m + 2), "inv-log")
    if spec == "inv-linear":
        return LambdaSeq(lambda m: 1.0 / (m + 1), "inv-linear")
    if spec.startswith("power:"):
        try:
            p = float(spec.split(":", 1)[1])
        except ValueError as exc:
            raise FormatError(f"bad lambda spec {spec!r}") from exc
        if p <= 0:
            raise FormatError("power exponent must be positive")
        return LambdaSeq(lambda m: (m + 1.0) ** (-p), spec)
    raise FormatError(f"unknown lambda spec {spec!r}")


# ---------------------------------------------------------------------------
# growth diagnostics

@dataclass(frozen=True)
class OrderEstimate:
    rho: float
    flag: str
    samples: list


def _log_abs_sq(c) -> float:
    a2 = abs_sq(c)
    if isinstance(a2, Fraction):
        return math.log(a2.numerator) - math.log(a2.denominator)
    return math.log(a2)


def _log_sup_norm(fm: Poly, seed: int = 0) -> float:
    """log of the sphere sup norm, overflow-safe for extreme degrees.

    Exact for d = 1; otherwise the component is normalized by its largest
    coefficient (so float evaluation cannot under- or overflow), sampled,
    and the scale is added back in log space.
    """
    if fm.is_zero:
        return float("-inf")
    if fm.dim == 1:
        return 0.5 * _log_abs_sq(next(iter(fm.terms.values())))
    items = list(fm.terms.items())
    log_scales = [0.5 * _log_abs_sq(c) for _, c in items]
    top = max(log_scales)
    c_max = items[log_scales.index(top)][1]
    # dividing by the largest coefficient keeps every ratio at modulus <= 1,
    # so the float conversion is safe at any degree
    scaled = Poly(fm.dim, {a: complex(c / c_max) for a, c in items}, field=FLOAT)
    mx = sampling.sphere_max(scaled, seed=seed)
    if mx <= 0:
        return float("-inf")
    return math.log(mx) + top


def order_estimate(f: TaylorStream, degrees) -> OrderEstimate:
    """Growth order from component sup norms.

    If the sup norm decays like m^(-m/rho) C^m m^s, then -log ||f_m||_sup
    is asymptotically (1/rho) m log m - (log C) m - s log m; a three-term
    least-squares fit over the upper half of the requested degrees
    recovers 1/rho while absorbing the geometric and polynomial factors.
    All-zero tails report order 0 with a 'polynomial/zero' flag.
    """
    degrees = [m for m in degrees if 0 <= m <= f.max_degree]
    if len(degrees) < 20:
        raise InvalidInputError("order estimation needs at least 20 degrees")
    samples = []
    for m in degrees:
        ls = _log_sup_norm(f.component(m))
        if m >= 2 and not math.isinf(ls):
            samples.append((m, -ls))
    tail_start = degrees[len(degrees) // 2]
    tail = [(m, L) for m, L in samples if m >= tail_start]
    if not tail:
        return OrderEstimate(0.0, "polynomial/zero", [])
    if len(tail) < 4:
        return OrderEstimate(0.0, "insufficient-tail", tail)
    x = np.array([[m * math.log(m), m, math.log(m)] for m, _ in tail])
    y = np.array([L for _, L in tail])
    coef, *_ = np.linalg.lstsq(x, y, rcond=None)
    a = float(coef[0])
    if a <= 0:
        return OrderEstimate(float("inf"), "super-order-growth", tail)
    return OrderEstimate(1.0 / a, "", tail)


@dataclass(frozen=True)
class WeightedNormReport:
    norm: float
    argmax_m: int
    membership_trend: str


def blambda_norm(f: TaylorStream, lam: LambdaSeq, m_cap: int) -> WeightedNormReport:
    """Truncated sup of ||f_m|| / (m^(m/2) lambda_m^m) with trend flag.

    The m = 0 term is read as ||f_0||.  The trend compares the weighted
    ratios over the last quartile of degrees: steady decay is consistent
    with membership (the defining ratio must tend to 0), a flat or rising
    tail is not.
    """
    if m_cap < 1:
        raise InvalidInputError("m_cap must be >= 1")
    m_cap = int(min(m_cap, f.max_degree))
    logs = []
    for m in range(m_cap + 1):
        fm = f.component(m)
        log_nsq = apolar.log_norm_sq(fm)
        if math.isinf(log_nsq):
            logs.append(float("-inf"))
            continue
        t = 0.5 * log_nsq
        if m >= 1:
            t -= 0.5 * m * math.log(m)
            t -= m * math.log(lam(m))
        logs.append(t)
    best = max(logs)
    argmax = logs.index(best)
    norm_val = math.exp(best) if not math.isinf(best) else 0.0
    quart = [v for v in logs[-max(2, (m_cap + 1) // 4):] if not math.isinf(v)]
    if len(quart) < 2:
        trend = "consistent-with-membership"
    else:
        drops = [b - a for a, b in zip(quart, quart[1:])]
        if all(dr <= 1e-12 for dr in drops) and quart[-1] < quart[0] - 1e-9:
            trend = "consistent-with-membership"
        elif quart[-1] >= quart[0] - 1e-9:
            trend = "not-converging-to-0"
        else:
            trend = "inconclusive"
    return WeightedNormReport(norm_val, argmax, trend)


def check_main_condition(k: int, tau, beta: int, rho) -> bool:
    """Exact test of rho (k - tau) < 2 (k - beta)."""
    if not 0 <= beta < k:
        raise InvalidInputError("need 0 <= beta < k")
    tau_f = Fraction(tau)
    rho_f = Fraction(rho)
    if not 0 <= tau_f <= k:
        raise InvalidInputError("need 0 <= tau <= k")
    if rho_f < 0:
        raise InvalidInputError("need rho >= 0")
    return rho_f * (k - tau_f) < 2 * (k - beta)


def check_lambda_condition(lam: LambdaSeq, k: int, tau, beta: int, probe=None):
    """Numerically probe m^((k-tau)/2) lambda_m^(k-beta) -> 0.

    Returns (verdict, tail samples); the verdict is a monotone-tail
    heuristic over the last quartile of the probe range.
    """
    if not 0 <= beta < k:
        raise InvalidInputError("need 0 <= beta < k")
    probe = list(probe) if probe is not None else list(range(4, 4097, 8))
    if len(probe) < 20:
        raise InvalidInputError("probe range must cover at least 20 degrees")
    tau = float(tau)
    vals = [(m, m ** ((k - tau) / 2) * lam(m) ** (k - beta)) for m in probe]
    tail = vals[-max(5, len(vals) // 4):]
    ys = [v for _, v in tail]
    decreasing = all(b <= a * (1 + 1e-12) for a, b in zip(ys, ys[1:]))
    increasing = all(b >= a * (1 - 1e-12) for a, b in zip(ys, ys[1:]))
    full_ratio = vals[-1][1] / vals[0][1] if vals[0][1] > 0 else float("inf")
    if decreasing and full_ratio < 0.5:
        verdict = "tending-to-zero"
    elif increasing and full_ratio > 2.0:
        verdict = "not-tending"
    else:
        verdict = "inconclusive"
    return verdict, tail


# ---------------------------------------------------------------------------
# truncated decomposition

@dataclass
class EntireDecomposition:
    q: TaylorStream
    r: TaylorStream
    per_degree_diag: dict
    method: str = "entire_truncated"


def decompose_entire(p: Poly, f: TaylorStream, m_cap: int, tol: float = 1e-14,
                     beta=None) -> EntireDecomposition:
    """Degree-wise truncated decomposition f = p q + r.

    For each output degree M the blocks of the iterated projection series
    are summed in increasing level; a level whose inputs would exceed the
    component budget is recorded as truncation, and for convergent input
    the sum stops once a full block's norm falls below ``tol`` times the
    running partial sum.  Finite (polynomial) streams disable the
    tolerance stop and run the series to its exact finite end, so they
    reproduce the direct polynomial decomposition exactly.
    """
    if p.is_zero:
        raise InvalidInputError("p must be nonzero")
    k = int(p.degree)
    if k < 1:
        raise InvalidInputError("p must have degree >= 1")
    if f.dim != p.dim:
        raise InvalidInputError("dimension mismatch between p and the stream")
    if beta is not None:
        validate_gap(p, beta)
    pk = p.homogeneous_component(k)
    lower = {s: -(p.homogeneous_component(s)) for s in range(k)
             if not p.homogeneous_component(s).is_zero}
    m_cap = int(m_cap)
    out_max = m_cap - k
    if out_max < 0:
        raise InvalidInputError("m_cap must be at least deg p")
    total_stream = f.total
    field = f.component(0).field
    zero = Poly.zero(p.dim, field)

    # level -1: T f_{n+k} wherever the budget (or totality) allows
    if total_stream:
        poly_deg = f.poly_degree if f.poly_degree is not None else -1
        mat_max = max(out_max, poly_deg - k)
    else:
        poly_deg = None
        mat_max = out_max
    level = {}
    for n in range(mat_max + 1):
        if n + k <= m_cap or total_stream:
            level[n] = (project_homogeneous(pk, f.component(n + k)).q, True)
        else:
            level[n] = (zero, False)
    default_complete = total_stream

    g_sum = {M: zero for M in range(out_max + 1)}
    diag = {M: {"j_stop": None, "block_norms": [], "truncated": False,
                "stopped_by": None} for M in range(out_max + 1)}
    active = set(range(out_max + 1))
    j = -1
    max_levels = 2 * (m_cap + k + 2)
    while active and j - (-1) <= max_levels:
        for M in sorted(active):
            entry = level.get(M)
            block, complete = entry if entry is not None else (zero, default_complete)
            if not complete:
                diag[M]["truncated"] = True
                diag[M]["stopped_by"] = "truncation"
                active.discard(M)
                continue
            g_sum[M] = g_sum[M] + block
            diag[M]["j_stop"] = j
            bn = apolar.norm(block)
            diag[M]["block_norms"].append(bn)
            if not lower:
                # homogeneous divisor: the series is the single leading term
                diag[M]["stopped_by"] = "degree"
                active.discard(M)
            elif total_stream:
                # later blocks need components beyond deg f, hence vanish
                gap = k - max(lower)
                if M + k + (j + 2) * gap > poly_deg:
                    diag[M]["stopped_by"] = "degree"
                    active.discard(M)
            else:
                partial = apolar.norm(g_sum[M])
                # a zero block cannot end the sum: with sparse components a
                # later level may still contribute
                if 0.0 < bn <= tol * partial:
                    diag[M]["stopped_by"] = "tolerance"
                    active.discard(M)
        if not active:
            break
        nxt = {}
        for n in range(mat_max + 1):
            acc = zero
            complete = True
            for s, ps in lower.items():
                prev = level.get(n + k - s)
                prev_poly, prev_complete = prev if prev is not None else (zero, default_complete)
                complete = complete and prev_complete
                if not prev_poly.is_zero:
                    acc = acc + project_homogeneous(pk, ps * prev_poly).q
            nxt[n] = (acc, complete)
        level = nxt
        j += 1
    q_components = {M: g for M, g in g_sum.items() if not g.is_zero}
    q_stream = TaylorStream.from_components(p.dim, q_components, out_max,
                                            field=field, provenance="decomposition",
                                            total=total_stream)

    def r_component(M):
        prod_slice = Poly.zero(p.dim, field)
        for s in range(k + 1):
            ps = p.homogeneous_component(s)
            if ps.is_zero or M - s < 0 or M - s > out_max:
                continue
            prod_slice = prod_slice + ps * q_stream.component(M - s)
        return f.component(M) - prod_slice if M <= f.max_degree else -prod_slice

    r_stream = TaylorStream(p.dim, r_component, max_degree=out_max,
                            provenance="decomposition", total=False)
    return EntireDecomposition(q_stream, r_stream, diag)


# ---------------------------------------------------------------------------
# stream interchange format

def stream_from_dict(obj) -> TaylorStream:
    """Parse {"kind": "poly", ...polynomial...} or
    {"kind": "exp_poly", "inner": <polynomial>, "max_degree": M}."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise FormatError("stream object needs a 'kind'")
    kind = obj["kind"]
    if kind == "poly":
        body = {k: v for k, v in obj.items() if k not in ("kind", "max_degree")}
        return TaylorStream.from_poly(poly_from_dict(body))
    if kind == "exp_poly":
        if "inner" not in obj:
            raise FormatError("exp_poly stream needs 'inner'")
        inner = poly_from_dict(obj["inner"])
        cap = obj.get("max_degree", math.inf)
        return TaylorStream.from_exp(inner, max_degree=cap)
    raise FormatError(f"unknown stream kind {kind!r}")


def load_stream(path) -> TaylorStream:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc
    return stream_from_dict(obj)


def stream_to_dict(f: TaylorStream, cap=None) -> dict:
    """Represent a stream as its polynomial truncation (for reports)."""
    cap = f.max_degree if cap is None else min(cap, f.max_degree)
    if math.isinf(cap):
        raise InvalidInputError("cannot serialize an unbounded stream without a cap")
    body = poly_to_dict(f.truncate(int(cap)))
    return {"kind": "poly", "max_degree": int(cap), **body}
