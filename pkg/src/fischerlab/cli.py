"""fischer-lab command line front end.

Verbs: inner, decompose, spectrum, ks-fit, kernel, classify2x2, order,
blambda, verify.  Reports are JSON envelopes (CSV for spectral sweeps)
written atomically; identical command plus seed gives byte-identical
output.  Exit codes: 0 ok, 1 verify violations, 2 parse errors, 3
precondition violations, 4 numerical failures.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
import tempfile
from fractions import Fraction

from . import __version__, apolar, entire, fischer, spectral
from .errors import (ConditioningError, DimensionMismatchError, FormatError,
                     InvalidInputError, NumericalError)
from .fields import EXACT, GaussianRational
from .polyalg import (Poly, apply_diff_op, load_poly, poly_from_dict,
                      poly_to_dict, save_poly)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_NUMERICAL = 4


def _jsonable(value):
    """Make module outputs JSON-ready with a deterministic field order."""
    if hasattr(value, "item") and not isinstance(value, (dict, list, tuple)):
        value = value.item()  # numpy scalars
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, GaussianRational):
        return str(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def emit_report(verb: str, payload, path=None) -> None:
    """Write (or print) the versioned JSON envelope, atomically."""
    envelope = {"tool": "fischer-lab", "version": __version__,
                "verb": verb, "payload": _jsonable(payload)}
    text = json.dumps(envelope, indent=1) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".fischer-lab-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_poly_arg(path, backend=None) -> Poly:
    p = load_poly(path)
    if backend == "float":
        return p.to_float()
    if backend == "exact" and p.field != EXACT:
        raise FormatError(f"{path}: float coefficients cannot run on the exact backend")
    return p


def _load_function_arg(path):
    """A polynomial file or a stream file, whichever parses."""
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc
    if isinstance(obj, dict) and "kind" in obj:
        return entire.stream_from_dict(obj)
    return poly_from_dict(obj)


def _parse_scalar(text: str):
    """Rational ('3/4') or complex ('1+2j') literal."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return complex(text)
    except ValueError as exc:
        raise FormatError(f"cannot parse scalar {text!r}") from exc


# ---------------------------------------------------------------------------
# verb handlers

def _cmd_inner(args) -> int:
    p = _load_poly_arg(args.p, args.backend)
    q = _load_poly_arg(args.q, args.backend)
    val = apolar.inner_product(p, q)
    payload = {
        "inner_product": _scalar_parts(val),
        "norm_sq_p": _scalar_parts(apolar.norm_sq(p)),
        "norm_sq_q": _scalar_parts(apolar.norm_sq(q)),
    }
    emit_report("inner", payload, args.out)
    return EXIT_OK


def _scalar_parts(v):
    if isinstance(v, GaussianRational):
        return {"re": f"{v.real.numerator}/{v.real.denominator}",
                "im": f"{v.imag.numerator}/{v.imag.denominator}"}
    if isinstance(v, Fraction):
        return {"re": f"{v.numerator}/{v.denominator}", "im": "0/1"}
    v = complex(v)
    return {"re": v.real, "im": v.imag}


def _select_method(p: Poly, f, requested: str) -> str:
    if requested != "auto":
        return requested
    if p.dim == 1:
        return "univariate"
    if p.degree == 1:
        return "linear"
    if not isinstance(f, Poly):
        return "entire"
    # homogeneous p needs no special casing: the direct system is then
    # block-diagonal over degrees, i.e. exactly the per-degree projection
    return "direct"


def _cmd_decompose(args) -> int:
    p = _load_poly_arg(args.p, args.backend)
    f = _load_function_arg(args.f)
    if isinstance(f, Poly) and args.backend == "float":
        f = f.to_float()
    if isinstance(f, Poly) and args.backend == "exact" and f.field != EXACT:
        raise FormatError(f"{args.f}: float coefficients cannot run on the exact backend")
    method = _select_method(p, f, args.method)
    mcap = args.mcap
    if method == "univariate":
        res = fischer.decompose_univariate(p, f, max_degree=mcap)
    elif method == "linear":
        if p.degree != 1:
            raise InvalidInputError("linear method needs deg p = 1")
        p1 = p.homogeneous_component(1)
        # stored p = p1 + c; the shift route divides by p1 - p0, so p0 = -c
        p0 = -p.homogeneous_component(0).coefficient((0,) * p.dim)
        res = fischer.decompose_linear(p1, p0, f, max_degree=mcap)
    elif method == "series":
        if not isinstance(f, Poly):
            raise InvalidInputError("series method needs polynomial input; "
                                    "use --method entire for streams")
        res = fischer.decompose_series(p, f, beta=args.beta)
    elif method == "entire":
        if isinstance(f, Poly):
            f = entire.TaylorStream.from_poly(f)
        cap = mcap
        if cap is None:
            if f.total:
                cap = max(f.poly_degree, int(p.degree))
            elif not math.isinf(f.max_degree):
                cap = int(f.max_degree)
            else:
                raise InvalidInputError("--mcap is required for unbounded streams")
        dec = entire.decompose_entire(p, f, cap, tol=args.tol, beta=args.beta)
        q_trunc = dec.q.truncate(cap)
        r_trunc = dec.r.truncate(cap)
        pk = p.homogeneous_component(int(p.degree))
        residual = apolar.norm(apply_diff_op(pk.star(), r_trunc))
        res = fischer.DecompositionResult(
            q_trunc, r_trunc, residual, dec.method,
            {"per_degree": dec.per_degree_diag})
    else:
        if not isinstance(f, Poly):
            raise InvalidInputError("direct method needs polynomial input")
        res = fischer.decompose_direct(p, f)
        if args.series_check:
            other = fischer.decompose_series(p, f, beta=args.beta)
            res.diagnostics["series_check_agrees"] = (
                other.q == res.q if p.field == EXACT and f.field == EXACT
                else apolar.norm(other.q - res.q) <= 1e-9 * max(1.0, apolar.norm(res.q)))
    prefix = args.out or "decomposition"
    save_poly(res.q, f"{prefix}.q.json")
    save_poly(res.r, f"{prefix}.r.json")
    payload = {
        "method": res.method,
        "annihilator_residual": res.annihilator_residual,
        "q_file": f"{prefix}.q.json",
        "r_file": f"{prefix}.r.json",
        "diagnostics": res.diagnostics,
    }
    emit_report("decompose", payload, f"{prefix}.diagnostics.json")
    return EXIT_OK


def _cmd_spectrum(args, fit_required: bool) -> int:
    pk = _load_poly_arg(args.p)
    m_min, m_max = args.m_min, args.m_max
    if fit_required or m_max - m_min + 1 >= 4:
        report = spectral.ks_exponent_fit(pk, (m_min, m_max), dim_cap=args.dim_cap)
    else:
        degrees = list(range(m_min, m_max + 1))
        lo, hi = spectral.sweep_sigma(pk, degrees, dim_cap=args.dim_cap)
        report = spectral.SpectralReport(degrees, lo, hi, float("nan"),
                                         float("nan"), (m_min, m_max),
                                         float("nan"), ["no-fit"])
    out = args.out or "spectrum"
    spectral.save_report(report, f"{out}.csv", f"{out}.json")
    return EXIT_OK


def _cmd_kernel(args) -> int:
    pk = _load_poly_arg(args.p, args.backend)
    basis = spectral.kernel_basis(pk, args.m)
    payload = {"dimension": len(basis),
               "basis": [poly_to_dict(b) for b in basis]}
    emit_report("kernel", payload, args.out)
    return EXIT_OK


def _cmd_classify(args) -> int:
    a, b, c = (_parse_scalar(s) for s in (args.a, args.b, args.c))
    cls = spectral.classify_quadratic_2d(a, b, c)
    payload = {
        "degenerate": cls.degenerate,
        "amenable": cls.amenable,
        "square_root": None if cls.square_root is None else
            [_scalar_parts(v) for v in cls.square_root],
        "witness_direction": None if cls.witness_direction is None else
            [_scalar_parts(v) for v in cls.witness_direction],
    }
    emit_report("classify2x2", payload, args.out)
    return EXIT_OK


def _cmd_order(args) -> int:
    f = _load_function_arg(args.f)
    if isinstance(f, Poly):
        f = entire.TaylorStream.from_poly(f)
    hi = args.max_degree
    if hi is None:
        if f.total:
            hi = 200  # components beyond the degree are known zeros
        elif math.isinf(f.max_degree):
            raise InvalidInputError("--max-degree required for unbounded streams")
        else:
            hi = int(f.max_degree)
    est = entire.order_estimate(f, range(args.min_degree, hi + 1))
    payload = {"order": est.rho, "flag": est.flag,
               "degrees": [args.min_degree, hi]}
    emit_report("order", payload, args.out)
    return EXIT_OK


def _cmd_blambda(args) -> int:
    f = _load_function_arg(args.f)
    if isinstance(f, Poly):
        f = entire.TaylorStream.from_poly(f)
    lam = entire.lambda_from_spec(args.lam)
    rep = entire.blambda_norm(f, lam, args.mcap)
    payload = {"norm": rep.norm, "argmax_m": rep.argmax_m,
               "membership_trend": rep.membership_trend, "lambda": args.lam}
    emit_report("blambda", payload, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify: the randomized identity suite

def _random_exact_poly(rng, d, max_degree, terms=4):
    out = {}
    for _ in range(rng.randint(1, terms)):
        alpha = tuple(rng.randint(0, max_degree) for _ in range(d))
        if sum(alpha) > max_degree:
            continue
        re = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        im = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        out[alpha] = GaussianRational(re, im)
    return Poly(d, out, field=EXACT)


def _random_exact_homogeneous(rng, d, m):
    from .polyalg import enumerate_monomials
    out = {}
    for alpha in enumerate_monomials(d, m):
        if rng.random() < 0.6:
            out[alpha] = GaussianRational(Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
                                          Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
    poly = Poly(d, out, field=EXACT)
    if poly.is_zero:
        poly = Poly.monomial(d, enumerate_monomials(d, m)[0], 1)
    return poly


def _cmd_verify(args) -> int:
    rng = random.Random(args.seed)
    cases = args.cases
    names = ["adjoint", "reznick", "bombieri", "pythagoras", "beauzamy",
             "shapiro-pointwise"]
    ran = {n: 0 for n in names}
    failed = {n: 0 for n in names}

    def check(name, ok):
        ran[name] += 1
        if not ok:
            failed[name] += 1

    def run_battery(pk, fm, q, fpoly, g):
        d = pk.dim
        k, m = int(pk.degree), int(fm.degree) if not fm.is_zero else 0
        check("adjoint", apolar.adjoint_residual(q, fpoly, g) == 0)
        check("reznick", apolar.reznick_residual(pk, fm) == 0)
        check("bombieri",
              apolar.norm_sq(pk * fm) >= apolar.norm_sq(pk) * apolar.norm_sq(fm))
        if m >= k:
            res = fischer.project_homogeneous(pk, fm)
            check("pythagoras",
                  apolar.norm_sq(fm) == apolar.norm_sq(pk * res.q) + apolar.norm_sq(res.r)
                  and apolar.inner_product(pk * res.q, res.r) == 0
                  and res.annihilator_residual == 0)
        fmf, pkf = fm.to_float(), pk.to_float()
        bound = apolar.beauzamy_bound(pkf, m) * apolar.norm(fmf)
        check("beauzamy", apolar.norm(pkf * fmf) <= bound * (1 + 1e-9))
        z = [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(d)]
        check("shapiro-pointwise",
              apolar.shapiro_pointwise_residual(fmf, z)
              <= 1e-9 * max(1.0, float(apolar.norm_sq(fm))))

    if args.p or args.f:
        # run the battery on the supplied polynomials instead of random data
        if not (args.p and args.f):
            raise InvalidInputError("verify needs both --p and --f, or neither")
        p = _load_poly_arg(args.p, "exact")
        fpoly = _load_poly_arg(args.f, "exact")
        pk = p.homogeneous_component(int(p.degree))
        components = list(fpoly.homogeneous_components().values()) or [fpoly]
        for fm in components:
            run_battery(pk, fm, p, fpoly, fm)
        cases = len(components)
    else:
        for _ in range(cases):
            d = rng.randint(1, 3)
            k = rng.randint(1, 3)
            m = rng.randint(0, 5)
            q = _random_exact_poly(rng, d, 3)
            fpoly = _random_exact_poly(rng, d, 5)
            g = _random_exact_poly(rng, d, 3)
            pk = _random_exact_homogeneous(rng, d, k)
            fm = _random_exact_homogeneous(rng, d, m)
            run_battery(pk, fm, q, fpoly, g)
    mc_p = _random_exact_poly(rng, 2, 2)
    mc_q = _random_exact_poly(rng, 2, 2)
    est = apolar.bargmann_mc_estimate(mc_p, mc_q, args.mc_samples, args.seed)
    exact_val = complex(apolar.inner_product(mc_p, mc_q))
    mc_ok = abs(est.estimate - exact_val) <= 4 * est.stderr + 1e-12
    table = [{"check": n, "cases": ran[n], "failures": failed[n],
              "pass": failed[n] == 0} for n in names]
    table.append({"check": "bargmann-mc", "cases": 1,
                  "failures": 0 if mc_ok else 1, "pass": mc_ok})
    violations = sum(row["failures"] for row in table)
    payload = {"seed": args.seed, "cases": cases, "violations": violations,
               "checks": table}
    emit_report("verify", payload, args.out)
    return EXIT_OK if violations == 0 else EXIT_VIOLATION


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fischer-lab",
        description="Apolar inner products, Fischer decompositions, and "
                    "multiplication-operator spectra for polynomials and "
                    "entire-function Taylor streams.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="verb", required=True)

    sp = sub.add_parser("inner", help="apolar inner product and norms")
    sp.add_argument("--p", required=True)
    sp.add_argument("--q", required=True)
    sp.add_argument("--backend", choices=["exact", "float"])
    sp.add_argument("--out")

    sp = sub.add_parser("decompose", help="Fischer decomposition f = P q + r")
    sp.add_argument("--p", required=True)
    sp.add_argument("--f", required=True)
    sp.add_argument("--method", default="auto",
                    choices=["auto", "direct", "series", "univariate", "linear", "entire"])
    sp.add_argument("--backend", choices=["exact", "float"])
    sp.add_argument("--beta", type=int)
    sp.add_argument("--tol", type=float, default=1e-14)
    sp.add_argument("--mcap", type=int)
    sp.add_argument("--series-check", action="store_true")
    sp.add_argument("--out", help="output prefix (default 'decomposition')")

    for name, help_text in (("spectrum", "singular value sweep"),
                            ("ks-fit", "growth-exponent fit of sigma_min")):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--p", required=True)
        sp.add_argument("--m-min", type=int, default=8)
        sp.add_argument("--m-max", type=int, default=40)
        sp.add_argument("--dim-cap", type=int, default=spectral.DEFAULT_DIM_CAP)
        sp.add_argument("--out", help="output prefix (default 'spectrum')")

    sp = sub.add_parser("kernel", help="kernel basis of pk(D) on one slice")
    sp.add_argument("--p", required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--backend", choices=["exact", "float"])
    sp.add_argument("--out")

    sp = sub.add_parser("classify2x2", help="classify a z1^2 + b z1 z2 + c z2^2")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("c")
    sp.add_argument("--out")

    sp = sub.add_parser("order", help="growth order from component decay")
    sp.add_argument("--f", required=True)
    sp.add_argument("--min-degree", type=int, default=10)
    sp.add_argument("--max-degree", type=int)
    sp.add_argument("--out")

    sp = sub.add_parser("blambda", help="weighted component sup norm")
    sp.add_argument("--f", required=True)
    sp.add_argument("--lam", required=True,
                    help="'inv-log', 'inv-linear', or 'power:<p>'")
    sp.add_argument("--mcap", type=int, default=100)
    sp.add_argument("--out")

    sp = sub.add_parser("verify", help="identity suite on random or given inputs")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--cases", type=int, default=200)
    sp.add_argument("--mc-samples", type=int, default=200_000)
    sp.add_argument("--p", help="optional divisor polynomial to check instead of random data")
    sp.add_argument("--f", help="optional dividend polynomial, used with --p")
    sp.add_argument("--out")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.verb == "inner":
            return _cmd_inner(args)
        if args.verb == "decompose":
            return _cmd_decompose(args)
        if args.verb == "spectrum":
            return _cmd_spectrum(args, fit_required=False)
        if args.verb == "ks-fit":
            return _cmd_spectrum(args, fit_required=True)
        if args.verb == "kernel":
            return _cmd_kernel(args)
        if args.verb == "classify2x2":
            return _cmd_classify(args)
        if args.verb == "order":
            return _cmd_order(args)
        if args.verb == "blambda":
            return _cmd_blambda(args)
        if args.verb == "verify":
            return _cmd_verify(args)
        raise InvalidInputError(f"unknown verb {args.verb}")
    except (FormatError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"fischer-lab: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InvalidInputError, DimensionMismatchError) as exc:
        print(f"fischer-lab: invalid input: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ConditioningError, NumericalError) as exc:
        print(f"fischer-lab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
