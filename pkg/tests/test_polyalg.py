import json
from fractions import Fraction

import pytest

from fischerlab.errors import DimensionMismatchError, FormatError, InvalidInputError
from fischerlab.fields import FLOAT, GaussianRational
from fischerlab.polyalg import (NEG_INF, Poly, apply_diff_op, count_monomials,
                                enumerate_monomials, poly_from_dict,
                                poly_to_dict, variables)
from conftest import rand_poly


def test_enumerate_single_variable():
    assert enumerate_monomials(1, 4) == [(4,)]


def test_enumerate_graded_lex_d2():
    assert enumerate_monomials(2, 3) == [(3, 0), (2, 1), (1, 2), (0, 3)]


def test_enumerate_count_d3():
    monos = enumerate_monomials(3, 2)
    assert len(monos) == 6 == count_monomials(3, 2)
    assert len(set(monos)) == 6
    assert all(sum(a) == 2 for a in monos)


def test_enumerate_rejects_dimension_zero():
    with pytest.raises(InvalidInputError):
        enumerate_monomials(0, 3)


def test_difference_of_squares():
    x, y = variables(2)
    assert (x + y) * (x - y) == x * x - y * y


def test_zero_absorbs(rng):
    z = Poly.zero(3)
    for _ in range(5):
        p = rand_poly(rng, 3, 4)
        assert (z * p).is_zero


def test_square_expansion():
    x, y = variables(2)
    assert (x + y) ** 2 == x * x + 2 * x * y + y * y


def test_degree_additivity(rng):
    for _ in range(30):
        p = rand_poly(rng, 2, 5)
        q = rand_poly(rng, 2, 5)
        if p.is_zero or q.is_zero:
            continue
        assert (p * q).degree == p.degree + q.degree


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        Poly.variable(2, 0) * Poly.variable(3, 0)


def test_star_basic():
    x, _ = variables(2)
    p = x.scale(GaussianRational(1, 1))
    assert p.star() == x.scale(GaussianRational(1, -1))


def test_star_fixes_real(rng):
    p = Poly(2, {(1, 0): Fraction(3, 2), (0, 2): -2})
    assert p.star() == p


def test_star_involution_and_multiplicativity(rng):
    for _ in range(20):
        p = rand_poly(rng, 2, 4)
        q = rand_poly(rng, 2, 4)
        assert p.star().star() == p
        assert (p * q).star() == p.star() * q.star()


def test_diff_op_monomials():
    x, y = variables(2)
    assert apply_diff_op(x * x, x ** 3 * y) == 6 * x * y
    assert apply_diff_op(x * y, x * x * y * y) == 4 * x * y
    assert apply_diff_op(x * x, y ** 7).is_zero


def test_diff_op_composition(rng):
    for _ in range(12):
        d = rng.randint(1, 3)
        q1 = rand_poly(rng, d, 2)
        q2 = rand_poly(rng, d, 2)
        f = rand_poly(rng, d, 6)
        lhs = apply_diff_op(q1, apply_diff_op(q2, f))
        rhs = apply_diff_op(q1 * q2, f)
        assert lhs == rhs


def test_homogeneous_components():
    x, _ = variables(2)
    p = x * x - 1
    assert p.homogeneous_component(2) == x * x
    assert p.homogeneous_component(0) == Poly.constant(2, -1)
    assert p.homogeneous_component(1).is_zero
    resum = sum((p.homogeneous_component(j) for j in range(3)), Poly.zero(2))
    assert resum == p


def test_zero_polynomial_conventions():
    z = Poly.zero(2)
    assert z.degree == NEG_INF
    for j in range(5):
        assert z.homogeneous_component(j).is_zero
        assert z.is_homogeneous(j)


def test_evaluate():
    x, y = variables(2)
    p = x * x + y * y
    assert complex(p.evaluate((1, 1j))) == 0
    assert Poly.zero(2).evaluate((1, 2)) == 0


def test_evaluate_exact_point():
    x, y = variables(2)
    p = 2 * x + y * y
    assert p.evaluate((Fraction(1, 2), Fraction(3))) == Fraction(10)


def test_float_matches_exact(rng):
    for _ in range(15):
        p = rand_poly(rng, 2, 4)
        q = rand_poly(rng, 2, 4)
        exact = (p * q + p).evaluate((Fraction(1, 3), Fraction(-2, 5)))
        approx = (p.to_float() * q.to_float() + p.to_float()).evaluate((1 / 3, -2 / 5))
        assert abs(complex(exact) - complex(approx)) <= 1e-12 * max(1.0, abs(complex(exact)))


def test_float_product_coefficients_match_exact(rng):
    # integer coefficients, products of total degree up to 8
    for _ in range(15):
        p = Poly(2, {(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(-9, 9)
                     for _ in range(4)})
        q = Poly(2, {(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(-9, 9)
                     for _ in range(4)})
        exact = p * q
        approx = p.to_float() * q.to_float()
        for alpha, c in exact.terms.items():
            err = abs(complex(approx.coefficient(alpha)) - complex(c))
            assert err <= 1e-12 * max(1.0, abs(complex(c)))


def test_mixed_field_promotes():
    x, _ = variables(2)
    assert (x + 0.5 * x).field == FLOAT


def test_shift_round_trip(rng):
    for _ in range(10):
        p = rand_poly(rng, 2, 4)
        v = (Fraction(1, 2), Fraction(-1, 3))
        back = p.shift(v).shift(tuple(-c for c in v))
        assert back == p


def test_power_zero_is_one():
    x, _ = variables(2)
    assert x ** 0 == Poly.constant(2, 1)


def test_json_round_trip_exact(rng):
    for _ in range(10):
        p = rand_poly(rng, 3, 5)
        obj = poly_to_dict(p)
        text = json.dumps(obj)
        assert poly_from_dict(json.loads(text)) == p


def test_json_round_trip_float():
    x, y = variables(2)
    p = (0.5 * x + 1.25j * y).to_float()
    q = poly_from_dict(poly_to_dict(p))
    assert q.field == FLOAT
    assert q == p


def test_json_rejects_mixed_kinds():
    with pytest.raises(FormatError):
        poly_from_dict({"dim": 1, "terms": [
            {"exp": [0], "re": "1/2", "im": 0.5}]})


def test_json_rejects_garbage():
    with pytest.raises(FormatError):
        poly_from_dict({"dim": 1})
    with pytest.raises(FormatError):
        poly_from_dict({"dim": 1, "terms": [{"exp": [-1], "re": "1/1", "im": "0/1"}]})
