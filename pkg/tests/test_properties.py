"""Randomized invariant checks for the algebraic core."""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from polydensity import (
    MultiPoly,
    complete_exp_sum,
    count_zeros_mod,
    is_prime_certified,
    is_squarefree,
    parse_polynomial,
)


@st.composite
def polynomials(draw, max_vars=3, max_degree=4, max_terms=5, max_coeff=20):
    n = draw(st.integers(1, max_vars))
    n_terms = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(n_terms):
        exps = tuple(
            draw(st.integers(0, max_degree)) for _ in range(n)
        )
        coeff = draw(
            st.integers(-max_coeff, max_coeff).filter(lambda c: c != 0)
        )
        terms[exps] = coeff
    return MultiPoly(n, terms)


small_primes = st.sampled_from([2, 3, 5, 7, 11])


class TestPolynomialInvariants:
    @given(polynomials())
    def test_print_parse_round_trip(self, f):
        assert parse_polynomial(f.to_string(), f.n_vars) == f

    @given(polynomials(), st.lists(st.integers(-50, 50), min_size=3, max_size=3))
    def test_evaluation_is_ring_homomorphism(self, f, point):
        x = point[: f.n_vars]
        g = f + f
        h = f * f
        v = f.evaluate_int(x)
        assert g.evaluate_int(x) == 2 * v
        assert h.evaluate_int(x) == v * v

    @given(polynomials(), st.lists(st.integers(-50, 50), min_size=3, max_size=3))
    def test_array_matches_integer_evaluation(self, f, point):
        x = point[: f.n_vars]
        exact = f.evaluate_int(x)
        grids = [np.array([float(c)]) for c in x]
        assert f.evaluate_array(grids)[0] == float(exact)

    @given(polynomials(), small_primes, st.lists(st.integers(0, 200), min_size=3, max_size=3))
    def test_modular_evaluation_consistent(self, f, p, point):
        x = point[: f.n_vars]
        assert f.evaluate_mod(x, p) == f.evaluate_int(x) % p

    @given(polynomials())
    def test_top_degree_part_idempotent_homogeneous(self, f):
        top = f.top_degree_part()
        assert top.is_homogeneous()
        assert top.degree == f.degree
        assert top.top_degree_part() == top

    @given(polynomials(), st.integers(2, 7))
    def test_homogeneous_scaling(self, f, lam):
        top = f.top_degree_part()
        d = top.degree
        point = list(range(1, top.n_vars + 1))
        scaled = [lam * c for c in point]
        assert top.evaluate_int(scaled) == lam**d * top.evaluate_int(point)

    @given(polynomials(), st.integers(1, 12))
    def test_content_scales_with_constant(self, f, c):
        assert f.scale(c).content() == c * f.content()
        assert f.scale(-c).content() == c * f.content()

    @given(polynomials(), st.lists(st.integers(-30, 30), min_size=3, max_size=3))
    def test_abs_bound_dominates(self, f, point):
        x = point[: f.n_vars]
        radii = [abs(c) for c in x]
        assert abs(f.evaluate_int(x)) <= f.abs_bound(radii)


class TestLocalCountInvariants:
    @settings(deadline=None)
    @given(polynomials(max_vars=2, max_degree=3), small_primes)
    def test_count_mod_p_in_range(self, f, p):
        n_p = count_zeros_mod(f, p)
        assert 0 <= n_p <= p**f.n_vars
        if f.content() % p != 0:
            assert n_p <= f.degree * p ** (f.n_vars - 1)

    @settings(deadline=None, max_examples=30)
    @given(polynomials(max_vars=2, max_degree=3), st.sampled_from([2, 3, 5]))
    def test_lifting_bound(self, f, p):
        n_p = count_zeros_mod(f, p)
        n_p2 = count_zeros_mod(f, p * p)
        assert n_p2 <= n_p * p**f.n_vars


class TestExpSumInvariants:
    @settings(deadline=None, max_examples=40)
    @given(polynomials(max_vars=2, max_degree=3), st.integers(1, 20))
    def test_trivial_bound(self, f, q):
        for a in range(q):
            if math.gcd(a, q) == 1:
                assert abs(complete_exp_sum(f, a, q)) <= q**f.n_vars + 1e-6


class TestArithmeticInvariants:
    @given(st.integers(1, 10**6))
    def test_squarefree_sign_symmetric(self, m):
        assert is_squarefree(m) == is_squarefree(-m)

    @given(st.integers(2, 10**6))
    def test_prime_implies_squarefree(self, m):
        verdict, certified = is_prime_certified(m)
        assert certified
        if verdict:
            assert is_squarefree(m)

    @given(st.integers(2, 10**4))
    def test_square_never_squarefree(self, m):
        assert not is_squarefree(m * m)
