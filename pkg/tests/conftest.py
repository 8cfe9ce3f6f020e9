import random
from fractions import Fraction

import pytest

from fischerlab.fields import EXACT, GaussianRational
from fischerlab.polyalg import Poly, enumerate_monomials


def rand_gaussian(rng, span=4, max_den=3):
    return GaussianRational(
        Fraction(rng.randint(-span, span), rng.randint(1, max_den)),
        Fraction(rng.randint(-span, span), rng.randint(1, max_den)))


def rand_poly(rng, d, max_degree, n_terms=4):
    """Random exact polynomial; may be zero."""
    terms = {}
    for _ in range(rng.randint(1, n_terms)):
        alpha = tuple(rng.randint(0, max_degree) for _ in range(d))
        if sum(alpha) <= max_degree:
            terms[alpha] = rand_gaussian(rng)
    return Poly(d, terms, field=EXACT)


def rand_homogeneous(rng, d, m, density=0.6):
    """Random exact homogeneous polynomial, guaranteed nonzero."""
    monos = enumerate_monomials(d, m)
    terms = {a: rand_gaussian(rng) for a in monos if rng.random() < density}
    if not all(terms.values()) or not terms:
        terms[monos[rng.randrange(len(monos))]] = GaussianRational(1)
    return Poly(d, terms, field=EXACT)


@pytest.fixture
def rng():
    return random.Random(20240901)
