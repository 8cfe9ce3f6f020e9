import math
from fractions import Fraction

import numpy as np
import pytest

from fischerlab import apolar, spectral
from fischerlab.errors import InvalidInputError
from fischerlab.fields import GaussianRational
from fischerlab.polyalg import Poly, apply_diff_op, count_monomials, midx_factorial, variables
from conftest import rand_homogeneous


def test_mult_matrix_z1_shape_and_values():
    x, y = variables(2)
    mm = spectral.mult_matrix(x, 1)
    assert mm.matrix.shape == (3, 2)
    sv = np.linalg.svd(mm.matrix, compute_uv=False)
    assert sv == pytest.approx([math.sqrt(2), 1.0])


def test_mult_matrix_rejects_constants():
    with pytest.raises(InvalidInputError):
        spectral.mult_matrix(Poly.constant(2, 1), 3)


def test_mult_matrix_column_norm_is_apolar_norm():
    x, y = variables(2)
    mm = spectral.mult_matrix(x * x + y * y, 0)
    assert mm.matrix.shape == (3, 1)
    assert np.linalg.norm(mm.matrix[:, 0]) == pytest.approx(2.0)  # = ||pk||


def test_mult_matrix_column_norms_random(rng):
    pk = rand_homogeneous(rng, 2, 2)
    m = 3
    mm = spectral.mult_matrix(pk, m)
    for j, beta in enumerate(mm.col_basis):
        expected = apolar.norm_sq(pk * Poly(2, {beta: 1})) / midx_factorial(beta)
        assert np.linalg.norm(mm.matrix[:, j]) ** 2 == pytest.approx(float(expected))


def test_mult_matrix_respects_cap():
    x, y = variables(2)
    with pytest.raises(InvalidInputError):
        spectral.mult_matrix(x, 10, dim_cap=5)


def test_sigma_z1_closed_form():
    x, y = variables(2)
    for m in (0, 1, 4, 9):
        lo, hi = spectral.sigma_extremes(x, m)
        assert lo == pytest.approx(1.0, abs=1e-10)
        assert hi == pytest.approx(math.sqrt(m + 1), abs=1e-10)


def test_sigma_univariate_factorial_law(rng):
    for _ in range(10):
        k = rng.randint(1, 4)
        m = rng.randint(0, 30)
        a = complex(rng.gauss(0, 1), rng.gauss(0, 1))
        pk = Poly(1, {(k,): a})
        lo, hi = spectral.sigma_extremes(pk, m)
        expected = abs(a) * math.sqrt(math.factorial(k + m) / math.factorial(m))
        assert lo == pytest.approx(expected, rel=1e-10)
        assert hi == pytest.approx(expected, rel=1e-10)


def test_sigma_degenerate_square_stays_at_base(rng):
    x, y = variables(2)
    pk = (x + y) ** 2
    base = apolar.norm(pk)
    for m in (2, 9, 17):
        lo, _ = spectral.sigma_extremes(pk, m)
        assert lo <= base * (1 + 1e-9)
        assert lo >= base * (1 - 1e-9)  # Bombieri floor


def test_sigma_bombieri_floor_and_beauzamy_ceiling(rng):
    for _ in range(10):
        k = rng.randint(1, 3)
        m = rng.randint(0, 8)
        pk = rand_homogeneous(rng, 2, k)
        lo, hi = spectral.sigma_extremes(pk, m)
        assert lo >= apolar.norm(pk) * (1 - 1e-9)
        assert hi <= apolar.beauzamy_bound(pk.to_float(), m) * (1 + 1e-9)


def test_ks_fit_laplacian_slope():
    x, y = variables(2)
    rep = spectral.ks_exponent_fit(x * x + y * y, (8, 40))
    assert 0.85 <= rep.fitted_tau <= 1.15
    assert rep.flags == []


def test_ks_fit_degenerate_flat():
    x, y = variables(2)
    rep = spectral.ks_exponent_fit((x + y) ** 2, (8, 40))
    assert abs(rep.fitted_tau) <= 0.1
    assert rep.residual <= 1e-9


def test_ks_fit_linear_flat():
    x, y = variables(2)
    rep = spectral.ks_exponent_fit(x, (8, 40))
    assert abs(rep.fitted_tau) <= 0.05


def test_ks_fit_cubics_stay_under_provable_ceiling():
    x, y = variables(2)
    for pk in (x ** 3 + y ** 3, x * x * y):
        rep = spectral.ks_exponent_fit(pk, (8, 40))
        assert rep.fitted_tau <= 2.05  # ceiling k - 1 for d > 1
        assert rep.flags == []


def test_ks_fit_window_validation():
    x, y = variables(2)
    with pytest.raises(InvalidInputError):
        spectral.ks_exponent_fit(x, (1, 40))
    with pytest.raises(InvalidInputError):
        spectral.ks_exponent_fit(x, (8, 10))


def test_kernel_basis_partial_derivative():
    x, y = variables(2)
    basis = spectral.kernel_basis(x * x, 3)
    assert len(basis) == 2
    spanned = {frozenset(b.terms.keys()) for b in basis}
    assert spanned == {frozenset({(1, 2)}), frozenset({(0, 3)})}


def test_kernel_basis_harmonics():
    x, y = variables(2)
    basis = spectral.kernel_basis(x * x + y * y, 2)
    assert len(basis) == 2
    for b in basis:
        assert apply_diff_op(x * x + y * y, b).is_zero


def test_kernel_basis_univariate_empty():
    z, = variables(1)
    for m in (2, 3, 7):
        assert spectral.kernel_basis(z * z, m) == []


def test_kernel_low_degree_full():
    x, y = variables(2)
    basis = spectral.kernel_basis(x * x, 1)
    assert len(basis) == 2


def test_kernel_exactness_and_dimension(rng):
    for _ in range(10):
        d = rng.randint(2, 3)
        k = rng.randint(1, 2)
        m = rng.randint(k, 4)
        pk = rand_homogeneous(rng, d, k)
        basis = spectral.kernel_basis(pk, m)
        for b in basis:
            assert apply_diff_op(pk, b).is_zero
        assert len(basis) >= count_monomials(d, m) - count_monomials(d, m - k)
        # linear independence via distinct free coordinates
        mat = np.array([[complex(b.coefficient(a)) for a in
                         spectral.enumerate_monomials(d, m)] for b in basis])
        if len(basis):
            assert np.linalg.matrix_rank(mat) == len(basis)


def test_kernel_float_backend():
    x, y = variables(2)
    basis = spectral.kernel_basis((x * x + y * y).to_float(), 2)
    assert len(basis) == 2
    for b in basis:
        assert apolar.norm(apply_diff_op((x * x + y * y).to_float(), b)) <= 1e-12


def test_classify_degenerate_121():
    cls = spectral.classify_quadratic_2d(1, 2, 1)
    assert cls.degenerate and not cls.amenable
    r, s = cls.square_root
    assert (r, s) == (GaussianRational(1), GaussianRational(1))
    assert cls.witness_direction == (GaussianRational(1), GaussianRational(-1))


def test_classify_amenable_diagonal():
    cls = spectral.classify_quadratic_2d(1, 0, 1)
    assert not cls.degenerate and cls.amenable
    assert cls.square_root is None


def test_classify_symmetric_neither():
    cls = spectral.classify_quadratic_2d(1, 1, 1)
    assert not cls.degenerate and not cls.amenable


def test_classify_mixed_term_amenable():
    cls = spectral.classify_quadratic_2d(0, 3, 0)
    assert cls.amenable and not cls.degenerate


def test_classify_all_zero_rejected():
    with pytest.raises(InvalidInputError):
        spectral.classify_quadratic_2d(0, 0, 0)


def test_classify_float_tolerance():
    cls = spectral.classify_quadratic_2d(1.0, 2.0 + 1e-15, 1.0)
    assert cls.degenerate


def test_classify_exact_irrational_root_falls_back_to_float():
    cls = spectral.classify_quadratic_2d(Fraction(2), 4, Fraction(2))
    assert cls.degenerate
    r, s = cls.square_root
    assert complex(r) == pytest.approx(math.sqrt(2))


def test_degenerate_witness_equality_exact(rng):
    # multiplication by (z1+z2)^2 preserves the Bombieri ratio on the witness line
    x, y = variables(2)
    p = (x + y) ** 2
    w = x - y
    for m in (1, 4, 10, 20):
        wm = w ** m
        assert apolar.norm_sq(p * wm) == apolar.norm_sq(p) * apolar.norm_sq(wm)
        assert apolar.norm_sq(p * wm) == 8 * math.factorial(m) * 2 ** m


def test_univariate_monotone_factorial_law():
    a = GaussianRational(Fraction(3, 7), Fraction(1, 2))
    k = 3
    pk = Poly(1, {(k,): a})
    values = []
    for m in range(0, 12):
        lo, _ = spectral.sigma_extremes(pk, m)
        values.append(lo ** 2 * math.factorial(m) / math.factorial(k + m))
    expected = float(apolar.abs_sq(a))
    for v in values:
        assert v == pytest.approx(expected, rel=1e-10)


def test_sweep_worker_count_invariance(monkeypatch):
    x, y = variables(2)
    pk = x * x + y * y
    monkeypatch.setenv("FISCHER_LAB_THREADS", "4")
    threaded = spectral.sweep_sigma(pk, range(2, 20))
    monkeypatch.setenv("FISCHER_LAB_THREADS", "1")
    serial = spectral.sweep_sigma(pk, range(2, 20))
    assert threaded == serial


def test_report_csv_format():
    x, y = variables(2)
    rep = spectral.ks_exponent_fit(x, (8, 12))
    csv = spectral.report_to_csv(rep)
    lines = csv.strip().splitlines()
    assert lines[0] == "m,sigma_min,sigma_max"
    assert len(lines) == 1 + 5
    header = spectral.report_header(rep)
    assert set(header) == {"fitted_tau", "fitted_C", "window", "residual", "flags"}
