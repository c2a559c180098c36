"""Incidence matrices, certification, double counting, bounds, fits."""

import math
import random
from fractions import Fraction

import pytest

from incidencekit.incidence import (
    Configuration,
    IncidenceMatrix,
    build_matrix,
    certify_dof,
    evaluate_bounds,
    exponent_fit,
    kst_double_count,
    project_generic,
)
from incidencekit.poly import GaussianRational, I_UNIT, MultiPoly

Z1, Z2 = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
X, Y = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)


def brute_force_count(config):
    count = 0
    for p in config.points:
        for f in config.curves:
            if not f.evaluate(list(p)):
                count += 1
    return count


class TestBuildMatrix:
    def test_origin_on_line(self):
        config = Configuration.build(
            "C2", [(GaussianRational(0), GaussianRational(0))], [Z2 - Z1]
        )
        M = build_matrix(config)
        assert (0, 0) in M.incidences

    def test_complex_point_on_parabola(self):
        config = Configuration.build(
            "C2", [(I_UNIT, GaussianRational(-1))], [Z2 - Z1 * Z1]
        )
        assert build_matrix(config).count == 1

    def test_grid_lines_recount(self):
        from incidencekit.configurations import gen_grid_lines

        config = gen_grid_lines(3)
        M = build_matrix(config)
        assert M.count == 81
        assert M.count == brute_force_count(config)

    def test_order_independence(self):
        rng = random.Random(52)
        pts = [(Fraction(k), Fraction(k * k)) for k in range(5)]
        curves = [Y - X * X, Y - X, Y - MultiPoly.constant(4, 2)]
        c1 = Configuration.build("R2", pts, curves)
        perm_pts = list(pts)
        rng.shuffle(perm_pts)
        perm_curves = list(curves)
        rng.shuffle(perm_curves)
        c2 = Configuration.build("R2", perm_pts, perm_curves)
        assert build_matrix(c1).count == build_matrix(c2).count

    def test_embedding_cross_check(self):
        config = Configuration.build(
            "C2", [(I_UNIT, GaussianRational(-1))], [Z2 - Z1 * Z1]
        )
        M = build_matrix(config, cross_check_embedding=True)
        assert M.count == 1

    def test_dedup(self):
        config = Configuration.build(
            "R2",
            [(Fraction(0), Fraction(0)), (Fraction(0), Fraction(0))],
            [Y - X, (Y - X) * 3],
        )
        assert config.m == 1 and config.n == 1


class TestCertify:
    def test_lines_certified(self):
        from incidencekit.configurations import gen_grid_lines

        M = build_matrix(gen_grid_lines(2))
        cert = certify_dof(M, 2, 1)
        assert cert.status == "certified"

    def test_two_conics_through_two_points(self):
        # x^2 + y^2 - 1 and x^2 + 2 y^2 - ... both through (1,0) and (-1,0)
        conic1 = X * X + Y * Y - MultiPoly.constant(1, 2)
        conic2 = X * X + Y * Y * 2 - MultiPoly.constant(1, 2)
        pts = [(Fraction(1), Fraction(0)), (Fraction(-1), Fraction(0))]
        config = Configuration.build("R2", pts, [conic1, conic2])
        M = build_matrix(config)
        cert = certify_dof(M, 2, 1)
        assert cert.status == "violated"
        assert cert.witness[0] in ("point-subset", "curve-pair")

    def test_duplicate_rows_violate_condition2(self):
        # two curves incident to the same large point set
        M = IncidenceMatrix(4, 2, frozenset(
            [(i, j) for i in range(4) for j in range(2)]
        ))
        cert = certify_dof(M, 2, 1)
        assert cert.status == "violated"

    def test_cap_triggers_indeterminate(self):
        M = IncidenceMatrix(40, 1, frozenset((i, 0) for i in range(40)))
        cert = certify_dof(M, 20, 1, table_cap=1000)
        assert cert.status == "indeterminate"

    def test_witness_deterministic(self):
        M = IncidenceMatrix(4, 2, frozenset(
            [(i, j) for i in range(4) for j in range(2)]
        ))
        w1 = certify_dof(M, 2, 1).witness
        w2 = certify_dof(M, 2, 1).witness
        assert w1 == w2


class TestKst:
    def test_grid_lines_n3(self):
        from incidencekit.configurations import gen_grid_lines

        M = build_matrix(gen_grid_lines(3))
        report = kst_double_count(M, 2, 1)
        assert report.lhs == 27 * math.comb(3, 2) == 81
        assert report.rhs == math.comb(54, 2)
        assert report.holds

    def test_empty_matrix(self):
        M = IncidenceMatrix(10, 5, frozenset())
        report = kst_double_count(M, 2, 1)
        assert report.lhs == 0 and report.holds

    def test_certified_implies_inequality(self):
        from incidencekit.configurations import gen_complex_lines_product

        for seed in range(5):
            config = gen_complex_lines_product(4, 4, seed=seed)
            M = build_matrix(config)
            cert = certify_dof(M, 2, 1)
            assert cert.status == "certified"
            assert kst_double_count(M, 2, 1).holds


class TestBounds:
    def test_large_symmetric(self):
        report = evaluate_bounds(10**6, 10**6, 2, 1, 0.0, 0)
        # first term m^{2/3} n^{2/3} = 10^8
        assert abs(report.ps_value - (1e8 + 2e6)) / 1e8 < 1e-12

    def test_degenerate_m1(self):
        # m = 1: the bound degenerates to n^(2/3) + 1 + n, i.e. Theta(n)
        report = evaluate_bounds(1, 100, 2, 1, 0.0, 0)
        assert report.ps_value == pytest.approx(100 ** (2 / 3) + 1 + 100)
        assert report.ps_value < 2 * 100

    def test_complex_epsilon_term(self):
        report = evaluate_bounds(4096, 4096, 2, 1, 0.01, 0)
        expected = 4096 ** (2 / 3 + 0.01) * 4096 ** (2 / 3) + 2 * 4096
        assert report.ps_complex_value == pytest.approx(expected, rel=1e-9)

    def test_monotone_in_m_and_n(self):
        prev = 0.0
        for m in (10, 100, 1000):
            v = evaluate_bounds(m, 50, 2, 1, 0.0, 0).ps_value
            assert v > prev
            prev = v
        prev = 0.0
        for n in (10, 100, 1000):
            v = evaluate_bounds(50, n, 2, 1, 0.0, 0).ps_value
            assert v > prev
            prev = v

    def test_kst_regime_flag(self):
        assert evaluate_bounds(10, 99, 2, 1, 0.0, 0).kst_regime
        assert not evaluate_bounds(2, 100, 2, 1, 0.0, 0).kst_regime

    def test_input_validation(self):
        with pytest.raises(ValueError):
            evaluate_bounds(0, 1, 2, 1, 0.0, 0)
        with pytest.raises(ValueError):
            evaluate_bounds(1, 1, 2, 1, 1.5, 0)


class TestExponentFit:
    def test_exact_model_recovery(self):
        series = []
        rng = random.Random(60)
        for _ in range(12):
            m = rng.randrange(10, 10000)
            n = rng.randrange(10, 10000)
            i = round(m ** (2 / 3) * n ** (2 / 3))
            series.append((m, n, max(i, 1)))
        fit = exponent_fit(series)
        assert not fit.combined
        assert abs(fit.a - 2 / 3) < 1e-3
        assert abs(fit.b - 2 / 3) < 1e-3

    def test_planted_exponents_high_precision(self):
        series = [
            (m, n, None) for m in (16, 64, 256) for n in (81, 729)
        ]
        series = [
            (m, n, m**2 * n) for m, n, _ in series
        ]
        fit = exponent_fit(series)
        assert abs(fit.a - 2) < 1e-6
        assert abs(fit.b - 1) < 1e-6
        assert fit.residual < 1e-9

    def test_constant_incidences(self):
        series = [(10, 10, 7), (100, 50, 7), (30, 900, 7), (500, 2, 7)]
        fit = exponent_fit(series)
        assert abs(fit.a) < 1e-9 and abs(fit.b) < 1e-9

    def test_degenerate_ray_combined(self):
        # m and n proportional: single combined exponent
        series = [(2 * t**3, t**3, t**4) for t in (2, 3, 4, 5, 6)]
        fit = exponent_fit(series)
        assert fit.combined
        assert fit.b == 0.0
        assert abs(fit.a - 4 / 3) < 0.01

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            exponent_fit([(1, 1, 1), (2, 2, 2)])


class TestProjectGeneric:
    def test_two_distinct_points(self):
        pts = [(1, 0, 0, 0), (0, 1, 0, 0)]
        matrix, projected, injective = project_generic(pts, seed=0)
        assert injective
        assert projected[0] != projected[1]

    def test_large_random_set(self):
        rng = random.Random(68)
        pts = list({
            tuple(Fraction(rng.randrange(-999, 1000), 7) for _ in range(4))
            for _ in range(300)
        })
        _, projected, injective = project_generic(pts, seed=0)
        assert injective
        assert len(set(projected)) == len(pts)

    def test_deterministic(self):
        pts = [(1, 2, 3, 4), (4, 3, 2, 1), (0, 0, 0, 1)]
        m1, p1, _ = project_generic(pts, seed=5)
        m2, p2, _ = project_generic(pts, seed=5)
        assert m1 == m2 and p1 == p2


class TestConfigurationSerialization:
    def test_roundtrip(self):
        config = Configuration.build(
            "C2",
            [(I_UNIT, GaussianRational(-1)), (GaussianRational(0), GaussianRational(0))],
            [Z2 - Z1 * Z1],
            metadata={"generator": "test", "seed": 0},
        )
        again = Configuration.from_json(config.to_json())
        assert again.points == config.points
        assert again.curves == config.curves
        assert again.ground_field == config.ground_field

    def test_line_incidence_inequalities(self):
        # two points determine a line: I <= m + n^2 and I <= n + m^2
        from incidencekit.configurations import gen_grid_lines

        for N in (1, 2, 3):
            config = gen_grid_lines(N)
            M = build_matrix(config)
            assert M.count <= M.m + M.n**2
            assert M.count <= M.n + M.m**2
