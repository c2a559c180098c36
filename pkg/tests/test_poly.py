"""Exact arithmetic kernel: polynomials, derivatives, resultants."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from incidencekit.poly import (
    GaussianRational,
    I_UNIT,
    MultiPoly,
    gradient,
    jacobian_rank,
    parse_poly,
    poly_eval,
    resultant,
)


def rand_poly(rng, num_vars, degree, density=6, gaussian=False):
    terms = {}
    for _ in range(density):
        exp = [0] * num_vars
        budget = rng.randrange(degree + 1)
        for _ in range(budget):
            exp[rng.randrange(num_vars)] += 1
        coef = Fraction(rng.randrange(-9, 10), rng.randrange(1, 5))
        if gaussian:
            coef = GaussianRational(coef, Fraction(rng.randrange(-9, 10)))
        terms[tuple(exp)] = coef
    return MultiPoly(num_vars, terms)


def rand_point(rng, num_vars, gaussian=False):
    def scalar():
        f = Fraction(rng.randrange(-20, 21), rng.randrange(1, 8))
        if gaussian:
            return GaussianRational(f, Fraction(rng.randrange(-5, 6)))
        return f

    return [scalar() for _ in range(num_vars)]


class TestGaussianRational:
    def test_field_arithmetic(self):
        a = GaussianRational(Fraction(1, 2), Fraction(3))
        b = GaussianRational(Fraction(-2), Fraction(1, 3))
        assert (a + b) - b == a
        assert (a * b) / b == a
        assert a * a.conjugate() == GaussianRational(Fraction(37, 4), 0)

    def test_i_squared(self):
        assert I_UNIT * I_UNIT == GaussianRational(-1)

    def test_conjugation_involution(self):
        rng = random.Random(7)
        for _ in range(50):
            z = GaussianRational(Fraction(rng.randrange(-99, 99), 7),
                                 Fraction(rng.randrange(-99, 99), 3))
            assert z.conjugate().conjugate() == z

    def test_serialization_roundtrip(self):
        from incidencekit.poly import coef_from_obj, coef_to_obj

        z = GaussianRational(Fraction(-3, 7), Fraction(22, 5))
        obj = coef_to_obj(z)
        assert obj == {"re": "-3/7", "im": "22/5"}
        assert coef_from_obj(obj) == z
        assert coef_to_obj(Fraction(5, 2)) == "5/2"
        assert coef_from_obj("5/2") == Fraction(5, 2)


class TestEval:
    def test_zero_case(self):
        # x1^2 + y1^2 at the origin
        x1, y1 = MultiPoly.variable(0, 4), MultiPoly.variable(1, 4)
        p = x1 * x1 + y1 * y1
        assert poly_eval(p, [0, 0, 0, 0]) == 0

    def test_hand_expansion(self):
        # x1*x2 - y1*y2 at (1,2,3,4): 3 - 8 = -5
        v = [MultiPoly.variable(i, 4) for i in range(4)]
        p = v[0] * v[2] - v[1] * v[3]
        point = [Fraction(c) for c in (1, 2, 3, 4)]
        assert poly_eval(p, point) == -5
        # term-by-term oracle
        total = Fraction(0)
        for exp, coef in p.terms.items():
            term = Fraction(coef)
            for c, e in zip(point, exp):
                term *= c**e
            total += term
        assert total == -5

    def test_gaussian_point(self):
        z1, z2 = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
        p = z1 * z2
        assert poly_eval(p, [I_UNIT, I_UNIT]) == GaussianRational(-1)

    def test_dimension_mismatch(self):
        p = MultiPoly.variable(0, 2)
        with pytest.raises(ValueError):
            poly_eval(p, [1, 2, 3])


class TestDerivative:
    def test_power_rule(self):
        # d/dx1 (x1^2 y1) = 2 x1 y1
        x1, y1 = MultiPoly.variable(0, 4), MultiPoly.variable(1, 4)
        p = x1 * x1 * y1
        expected = MultiPoly(4, {(1, 1, 0, 0): Fraction(2)})
        assert p.partial(0) == expected

    def test_absent_variable(self):
        x1 = MultiPoly.variable(0, 4)
        assert x1.partial(3).is_zero

    def test_finite_difference_oracle(self):
        # central differences agree to first order: halving h shrinks the
        # error by at least a factor of 2 (exact rational computation)
        rng = random.Random(11)
        for _ in range(10):
            p = rand_poly(rng, 3, 5)
            var = rng.randrange(3)
            point = rand_point(rng, 3)
            deriv = poly_eval(p.partial(var), point)

            def central(h):
                up = list(point)
                dn = list(point)
                up[var] += h
                dn[var] -= h
                return (poly_eval(p, up) - poly_eval(p, dn)) / (2 * h)

            h = Fraction(1, 64)
            e1 = abs(central(h) - deriv)
            e2 = abs(central(h / 2) - deriv)
            assert e2 * 2 <= e1 or e1 == 0

    def test_linearity_and_leibniz(self):
        rng = random.Random(23)
        for _ in range(20):
            p = rand_poly(rng, 2, 4)
            q = rand_poly(rng, 2, 4)
            var = rng.randrange(2)
            assert (p + q).partial(var) == p.partial(var) + q.partial(var)
            assert (p * q).partial(var) == p.partial(var) * q + p * q.partial(var)


class TestGradient:
    def test_sphere(self):
        v = [MultiPoly.variable(i, 4) for i in range(4)]
        p = sum((vi * vi for vi in v), MultiPoly.constant(-1, 4))
        assert gradient(p, [1, 0, 0, 0]) == [2, 0, 0, 0]

    def test_linear(self):
        y1, y2 = MultiPoly.variable(1, 4), MultiPoly.variable(3, 4)
        p = y2 - y1
        for pt in ([0, 0, 0, 0], [3, -1, 7, 2]):
            assert gradient(p, pt) == [0, -1, 0, 1]

    def test_matches_finite_differences(self):
        rng = random.Random(31)
        p = rand_poly(rng, 4, 4)
        point = rand_point(rng, 4)
        grad = gradient(p, point)
        h = Fraction(1, 1024)
        for var in range(4):
            up, dn = list(point), list(point)
            up[var] += h
            dn[var] -= h
            approx = (poly_eval(p, up) - poly_eval(p, dn)) / (2 * h)
            assert abs(approx - grad[var]) < Fraction(1, 100)


class TestJacobianRank:
    def test_independent_linear_forms(self):
        polys = [MultiPoly.variable(0, 4), MultiPoly.variable(1, 4)]
        assert jacobian_rank(polys, [0, 0, 0, 0]) == 2

    def test_vanishing_gradients(self):
        x1, y1 = MultiPoly.variable(0, 4), MultiPoly.variable(1, 4)
        assert jacobian_rank([x1 * x1, x1 * y1], [0, 0, 0, 0]) == 0

    def test_nodal_curve_singular_origin(self):
        # z2^2 - z1^2 (z1 + 1): both partials vanish at the origin
        z1, z2 = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
        f = z2 * z2 - z1 * z1 * (z1 + MultiPoly.constant(1, 2))
        assert jacobian_rank([f], [GaussianRational(0), GaussianRational(0)]) == 0
        # regular elsewhere
        assert jacobian_rank([f], [GaussianRational(1), GaussianRational(0)]) == 1

    def test_empty_list(self):
        assert jacobian_rank([], [0, 0]) == 0


class TestResultant:
    def test_linear_pair(self):
        z1, z2 = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
        r = resultant(z2 - z1, z2 + z1, 1)
        # -2*z1 up to sign
        expected = MultiPoly(2, {(1, 0): Fraction(2)})
        assert r == expected or r == -expected

    def test_common_factor_gives_zero(self):
        z1, z2 = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
        f = z2 - z1
        assert resultant(f, f, 1).is_zero
        g = (z2 - z1) * (z2 + z1 + MultiPoly.constant(3, 2))
        assert resultant(f, g, 1).is_zero

    def test_quadratic(self):
        z1, z2 = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
        r = resultant(z2 * z2 - z1, z2, 1)
        expected = MultiPoly(2, {(1, 0): Fraction(1)})
        assert r == expected or r == -expected

    def test_both_constant_rejected(self):
        c = MultiPoly.constant(2, 2)
        with pytest.raises(ValueError):
            resultant(c, c, 1)

    def test_no_common_factor_nonzero(self):
        rng = random.Random(5)
        z1, z2 = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
        for _ in range(5):
            a = Fraction(rng.randrange(1, 9))
            b = Fraction(rng.randrange(1, 9))
            f = z2 - z1 * a
            g = z2 - z1 * b - MultiPoly.constant(1, 2)
            r = resultant(f, g, 1)
            # distinct lines: resultant is a nonzero linear polynomial in z1
            assert not r.is_zero


small_coef = st.fractions(
    min_value=-8, max_value=8, max_denominator=4
).filter(lambda f: f != 0)


@st.composite
def polys(draw, num_vars=2, max_degree=3):
    n_terms = draw(st.integers(0, 5))
    terms = {}
    for _ in range(n_terms):
        exp = tuple(
            draw(st.integers(0, max_degree)) for _ in range(num_vars)
        )
        terms[exp] = draw(small_coef)
    return MultiPoly(num_vars, terms)


@st.composite
def points(draw, num_vars=2):
    return [
        draw(st.fractions(min_value=-10, max_value=10, max_denominator=8))
        for _ in range(num_vars)
    ]


class TestRingAxioms:
    @settings(max_examples=50, deadline=None)
    @given(polys(), polys(), polys())
    def test_distributivity(self, p, q, r):
        assert p * (q + r) == p * q + p * r

    @settings(max_examples=50, deadline=None)
    @given(polys(), polys(), points())
    def test_eval_is_ring_hom(self, p, q, pt):
        assert poly_eval(p * q, pt) == poly_eval(p, pt) * poly_eval(q, pt)
        assert poly_eval(p + q, pt) == poly_eval(p, pt) + poly_eval(q, pt)

    @settings(max_examples=30, deadline=None)
    @given(polys(), polys())
    def test_commutativity(self, p, q):
        assert p * q == q * p
        assert p + q == q + p


class TestSerialization:
    def test_canonical_roundtrip(self):
        rng = random.Random(17)
        for gaussian in (False, True):
            for _ in range(10):
                p = rand_poly(rng, 3, 4, gaussian=gaussian)
                assert MultiPoly.from_json(p.to_json()) == p

    def test_equal_polys_serialize_identically(self):
        x, y = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
        a = x * y + x * x
        b = x * x + y * x
        assert a.to_json() == b.to_json()

    def test_schema_shape(self):
        x = MultiPoly.variable(0, 2)
        obj = (x * x * 3).to_obj()
        assert obj["vars"] == 2
        assert obj["terms"] == [{"exp": [2, 0], "coef": "3/1"}]
        assert obj["field"] == "Q"


class TestNormalized:
    def test_cleared_content_positive_leading(self):
        x = MultiPoly.variable(0, 1)
        p = x * Fraction(-4, 6) + MultiPoly.constant(Fraction(2, 3), 1)
        q = p.normalized()
        assert q.leading_coef() > 0
        # scalar multiples collapse to the same normal form
        assert (p * Fraction(7, 3)).normalized() == q


class TestParse:
    def test_parse_basic(self):
        p = parse_poly("z1^2 + i*z2 - 3", ["z1", "z2"])
        z1, z2 = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
        expected = z1 * z1 + z2 * I_UNIT - MultiPoly.constant(3, 2)
        assert p == expected

    def test_parse_rejects_unknown_names(self):
        with pytest.raises(ValueError):
            parse_poly("w + 1", ["z1"])
