"""Sparse multivariate polynomials and multi-index combinatorics.

A polynomial is a map from exponent tuples to nonzero coefficients, over
either the exact Gaussian-rational field or complex doubles (see
:mod:`fischerlab.fields`).  The monomial order used for every basis and
matrix in the package is graded lexicographic: degree first, then
lexicographic with the first variable most significant, so for d = 2 and
degree 3 the order is (3,0), (2,1), (1,2), (0,3).

The zero polynomial has degree ``NEG_INF`` and counts as homogeneous of
every degree.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from types import MappingProxyType

from .errors import DimensionMismatchError, FormatError, InvalidInputError
from .fields import EXACT, FLOAT, GaussianRational, is_exact_scalar, to_exact

NEG_INF = float("-inf")


# ---------------------------------------------------------------------------
# multi-index helpers (exponent tuples)

def midx_degree(alpha) -> int:
    return sum(alpha)


def midx_factorial(alpha) -> int:
    out = 1
    for a in alpha:
        out *= math.factorial(a)
    return out


def midx_add(alpha, beta):
    return tuple(a + b for a, b in zip(alpha, beta))


def midx_sub(beta, alpha):
    """beta - alpha componentwise, or None if any entry would go negative."""
    out = []
    for b, a in zip(beta, alpha):
        if b < a:
            return None
        out.append(b - a)
    return tuple(out)


def falling_product(beta, alpha) -> int:
    """beta! / (beta - alpha)! assuming beta >= alpha componentwise."""
    out = 1
    for b, a in zip(beta, alpha):
        for i in range(b - a + 1, b + 1):
            out *= i
    return out


def grlex_key(alpha):
    """Sort key realizing the package-wide graded-lex order."""
    return (sum(alpha), tuple(-a for a in alpha))


def count_monomials(d: int, m: int) -> int:
    """Number of monomials of degree m in d variables: C(m+d-1, d-1)."""
    return math.comb(m + d - 1, d - 1)


def enumerate_monomials(d: int, m: int) -> list:
    """All exponent tuples with |alpha| = m in graded-lex order."""
    if d < 1:
        raise InvalidInputError(f"dimension must be >= 1, got {d}")
    if m < 0:
        raise InvalidInputError(f"degree must be >= 0, got {m}")
    if d == 1:
        return [(m,)]
    out = []
    for first in range(m, -1, -1):
        for rest in enumerate_monomials(d - 1, m - first):
            out.append((first,) + rest)
    return out


def enumerate_up_to_degree(d: int, n: int) -> list:
    """All exponent tuples with |alpha| <= n, degrees ascending."""
    out = []
    for m in range(n + 1):
        out.extend(enumerate_monomials(d, m))
    return out


# ---------------------------------------------------------------------------
# polynomial values

def _coerce_exact(c):
    return c if isinstance(c, GaussianRational) else to_exact(c)


class Poly:
    """Immutable sparse polynomial over one of the two coefficient fields.

    ``terms`` maps exponent tuples to nonzero coefficients.  The field is
    inferred from the coefficients unless forced; mixing exact and float
    operands promotes to float.
    """

    __slots__ = ("dim", "_terms", "field")

    def __init__(self, dim: int, terms=None, field=None):
        if dim < 1:
            raise InvalidInputError(f"dimension must be >= 1, got {dim}")
        items = []
        if terms:
            for alpha, c in (terms.items() if hasattr(terms, "items") else terms):
                alpha = tuple(alpha)
                if len(alpha) != dim or any(a < 0 or not isinstance(a, int) for a in alpha):
                    raise InvalidInputError(f"bad exponent {alpha} for dimension {dim}")
                if c == 0 or (isinstance(c, GaussianRational) and not c):
                    continue
                items.append((alpha, c))
        if field is None:
            field = EXACT if all(is_exact_scalar(c) for _, c in items) else FLOAT
        store = {}
        for alpha, c in items:
            c = _coerce_exact(c) if field == EXACT else complex(c)
            if alpha in store:
                c = store[alpha] + c
            if c == 0 or (isinstance(c, GaussianRational) and not c):
                store.pop(alpha, None)
            else:
                store[alpha] = c
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "_terms", store)
        object.__setattr__(self, "field", field)

    def __setattr__(self, *args):
        raise AttributeError("Poly is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, dim: int, field=EXACT) -> "Poly":
        return cls(dim, {}, field=field)

    @classmethod
    def constant(cls, dim: int, c, field=None) -> "Poly":
        return cls(dim, {(0,) * dim: c}, field=field)

    @classmethod
    def variable(cls, dim: int, j: int, field=EXACT) -> "Poly":
        if not 0 <= j < dim:
            raise InvalidInputError(f"variable index {j} out of range for dimension {dim}")
        alpha = tuple(1 if i == j else 0 for i in range(dim))
        return cls(dim, {alpha: 1}, field=field)

    @classmethod
    def monomial(cls, dim: int, alpha, c=1, field=None) -> "Poly":
        return cls(dim, {tuple(alpha): c}, field=field)

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self):
        """Total degree; NEG_INF for the zero polynomial."""
        if not self._terms:
            return NEG_INF
        return max(sum(a) for a in self._terms)

    def coefficient(self, alpha):
        alpha = tuple(alpha)
        if alpha in self._terms:
            return self._terms[alpha]
        return GaussianRational(0) if self.field == EXACT else 0j

    def is_homogeneous(self, j=None) -> bool:
        """Whether all terms share one degree (equal to j, if given).

        The zero polynomial is homogeneous of every degree.
        """
        if not self._terms:
            return True
        degs = {sum(a) for a in self._terms}
        if len(degs) > 1:
            return False
        return j is None or degs == {j}

    def homogeneous_component(self, j: int) -> "Poly":
        return Poly(self.dim, {a: c for a, c in self._terms.items() if sum(a) == j},
                    field=self.field)

    def homogeneous_components(self) -> dict:
        """Nonzero components keyed by degree, ascending."""
        buckets = {}
        for a, c in self._terms.items():
            buckets.setdefault(sum(a), {})[a] = c
        return {m: Poly(self.dim, t, field=self.field)
                for m, t in sorted(buckets.items())}

    def leading_part(self) -> "Poly":
        if self.is_zero:
            return self
        return self.homogeneous_component(self.degree)

    def sorted_terms(self):
        """Terms in graded-lex order (degree ascending)."""
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]))

    # -- ring operations ----------------------------------------------------

    def _check_dim(self, other):
        if self.dim != other.dim:
            raise DimensionMismatchError(
                f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction, float, complex, GaussianRational)):
                other = Poly.constant(self.dim, other)
            else:
                return NotImplemented
        self._check_dim(other)
        field = EXACT if self.field == EXACT and other.field == EXACT else FLOAT
        merged = list(self._terms.items()) + list(other._terms.items())
        return Poly(self.dim, merged, field=field)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.dim, {a: -c for a, c in self._terms.items()}, field=self.field)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Poly) else -Poly.constant(self.dim, other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction, float, complex, GaussianRational)):
                return self.scale(other)
            return NotImplemented
        self._check_dim(other)
        field = EXACT if self.field == EXACT and other.field == EXACT else FLOAT
        if self.is_zero or other.is_zero:
            return Poly.zero(self.dim, field)
        acc = {}
        for a, ca in self._terms.items():
            for b, cb in other._terms.items():
                key = midx_add(a, b)
                prod = ca * cb
                if key in acc:
                    acc[key] = acc[key] + prod
                else:
                    acc[key] = prod
        return Poly(self.dim, acc, field=field)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        if c == 0:
            field = self.field if is_exact_scalar(c) else FLOAT
            return Poly.zero(self.dim, field)
        return Poly(self.dim, {a: v * c for a, v in self._terms.items()})

    def __truediv__(self, c):
        if isinstance(c, Poly):
            return NotImplemented
        if is_exact_scalar(c) and self.field == EXACT:
            inv = GaussianRational(1) / to_exact(c)
            return self.scale(inv)
        return self.scale(1.0 / complex(c))

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise InvalidInputError("polynomial powers must be non-negative ints")
        out = Poly.constant(self.dim, 1, field=self.field)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return (self.dim == other.dim and self.field == other.field
                and self._terms == other._terms)

    def __hash__(self):
        return hash((self.dim, self.field, frozenset(self._terms.items())))

    # -- calculus and conjugation -------------------------------------------

    def star(self) -> "Poly":
        """Polynomial with conjugated coefficients (an involution)."""
        return Poly(self.dim, {a: c.conjugate() for a, c in self._terms.items()},
                    field=self.field)

    def derivative(self, alpha) -> "Poly":
        """Mixed partial derivative d^alpha applied to this polynomial."""
        alpha = tuple(alpha)
        out = {}
        for beta, c in self._terms.items():
            rest = midx_sub(beta, alpha)
            if rest is None:
                continue
            out[rest] = c * falling_product(beta, alpha)
        return Poly(self.dim, out, field=self.field)

    def evaluate(self, z) -> complex:
        """Evaluate at a point, term by term.

        Returns an exact scalar when both the polynomial and the point are
        exact; complex otherwise.
        """
        z = tuple(z)
        if len(z) != self.dim:
            raise DimensionMismatchError(
                f"point has length {len(z)}, expected {self.dim}")
        total = None
        for alpha, c in self.sorted_terms():
            v = c
            for zj, aj in zip(z, alpha):
                if aj:
                    v = v * zj ** aj
            total = v if total is None else total + v
        if total is None:
            return GaussianRational(0) if self.field == EXACT else 0j
        return total

    __call__ = evaluate

    def shift(self, v) -> "Poly":
        """Compose with a translation: returns p(z + v)."""
        v = tuple(v)
        if len(v) != self.dim:
            raise DimensionMismatchError(
                f"shift vector has length {len(v)}, expected {self.dim}")
        out = Poly.zero(self.dim, self.field)
        for beta, c in self._terms.items():
            factor = Poly.constant(self.dim, c, field=self.field)
            for j, bj in enumerate(beta):
                if bj == 0:
                    continue
                var_terms = {}
                for i in range(bj + 1):
                    alpha = tuple(i if jj == j else 0 for jj in range(self.dim))
                    coeff = math.comb(bj, i) * v[j] ** (bj - i) if i < bj else 1
                    var_terms[alpha] = coeff
                factor = factor * Poly(self.dim, var_terms)
            out = out + factor
        return out

    def to_float(self) -> "Poly":
        if self.field == FLOAT:
            return self
        return Poly(self.dim, {a: complex(c) for a, c in self._terms.items()},
                    field=FLOAT)

    def __repr__(self):
        if self.is_zero:
            return f"Poly({self.dim}, 0)"
        bits = []
        for a, c in self.sorted_terms():
            mono = "*".join(f"z{j + 1}^{e}" for j, e in enumerate(a) if e)
            bits.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


def variables(d: int, field=EXACT):
    """Convenience tuple (z1, ..., zd) of coordinate polynomials."""
    return tuple(Poly.variable(d, j, field=field) for j in range(d))


def apply_diff_op(q: Poly, f: Poly) -> Poly:
    """Apply the constant-coefficient operator q(D) to f.

    Each variable of q acts as the corresponding partial derivative, so on
    monomials z^alpha(D) z^beta = beta!/(beta-alpha)! z^(beta-alpha) when
    beta >= alpha and 0 otherwise.
    """
    if q.dim != f.dim:
        raise DimensionMismatchError(f"dimension mismatch: {q.dim} vs {f.dim}")
    field = EXACT if q.field == EXACT and f.field == EXACT else FLOAT
    acc = {}
    for alpha, c in q._terms.items():
        for beta, v in f._terms.items():
            rest = midx_sub(beta, alpha)
            if rest is None:
                continue
            w = c * v * falling_product(beta, alpha)
            if rest in acc:
                acc[rest] = acc[rest] + w
            else:
                acc[rest] = w
    return Poly(f.dim, acc, field=field)


# ---------------------------------------------------------------------------
# interchange format

def _format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def poly_to_dict(p: Poly) -> dict:
    """JSON-ready form: {"dim": d, "terms": [{"exp", "re", "im"}, ...]}.

    Exact coefficients are written as "num/den" strings (bit-exact round
    trip); float coefficients as plain numbers.
    """
    terms = []
    for alpha, c in p.sorted_terms():
        if p.field == EXACT:
            re, im = _format_fraction(c.real), _format_fraction(c.imag)
        else:
            re, im = c.real, c.imag
        terms.append({"exp": list(alpha), "re": re, "im": im})
    return {"dim": p.dim, "terms": terms}


def poly_from_dict(obj) -> Poly:
    if not isinstance(obj, dict) or "dim" not in obj or "terms" not in obj:
        raise FormatError("polynomial object needs 'dim' and 'terms'")
    dim = obj["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise FormatError(f"bad dimension {dim!r}")
    kinds = set()
    terms = {}
    for t in obj["terms"]:
        try:
            exp = tuple(int(e) for e in t["exp"])
            re = t.get("re", 0)
            im = t.get("im", "0/1" if isinstance(re, str) else 0)
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad term {t!r}") from exc
        for part in (re, im):
            kinds.add("exact" if isinstance(part, str) else "float")
        if kinds == {"exact", "float"}:
            raise FormatError("terms mix rational strings and plain numbers")
        try:
            if isinstance(re, str):
                coeff = GaussianRational(Fraction(re), Fraction(im))
            else:
                coeff = complex(float(re), float(im))
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad coefficient in term {t!r}") from exc
        if exp in terms:
            raise FormatError(f"duplicate exponent {exp}")
        terms[exp] = coeff
    field = EXACT if kinds in ({"exact"}, set()) else FLOAT
    try:
        return Poly(dim, terms, field=field)
    except InvalidInputError as exc:
        raise FormatError(str(exc)) from exc


def save_poly(p: Poly, path) -> None:
    with open(path, "w") as fh:
        json.dump(poly_to_dict(p), fh, indent=1)
        fh.write("\n")


def load_poly(path) -> Poly:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc
    return poly_from_dict(obj)
