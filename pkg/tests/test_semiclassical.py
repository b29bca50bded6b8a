import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vncut.hilbert import s_factor
from vncut.linear_chain import PointerState
from vncut.numerics import Grid1D, GridDensity1D, GridError, gaussian_density
from vncut.semiclassical import (
    SingularInputError,
    WignerCoherent,
    classical_cosine,
    conjugate_momentum_pc,
    damping_curve,
    mean_shift_semiclassical_closed,
    mean_shift_semiclassical_quadrature,
    poisson_bracket,
    semiclassical_factor,
    semiclassical_q_distribution,
    wigner_density,
)


class TestWigner:
    @pytest.mark.parametrize("r,mu", [(0.0, 0.0), (1.0, 0.5), (3.0, 2.0)])
    def test_moments(self, r, mu):
        W = wigner_density(r, mu, 256)
        assert W.mass() == pytest.approx(1.0, abs=1e-12)
        fq, fp = W.marginal_position(), W.marginal_momentum()
        assert fq.mean() == pytest.approx(math.sqrt(2) * r * math.cos(mu), abs=1e-10)
        assert fp.mean() == pytest.approx(math.sqrt(2) * r * math.sin(mu), abs=1e-10)
        assert fq.variance() == pytest.approx(0.5, abs=1e-10)
        assert fp.variance() == pytest.approx(0.5, abs=1e-10)

    def test_positive(self):
        assert np.all(wigner_density(2.0, 1.0, 64).values >= 0)

    def test_peak_value(self):
        W = WignerCoherent(1.0, 0.0)
        assert W(W.center_q, W.center_p) == pytest.approx(1 / math.pi)


class TestCosine:
    def test_values(self):
        assert classical_cosine(3.0, 4.0) == pytest.approx(0.6)
        assert math.isnan(classical_cosine(0.0, 0.0))
        assert classical_cosine(0.0, 2.0) == 0.0


class TestMeanShift:
    @pytest.mark.parametrize("r", [0.25, 1.0, 2.0, 4.0])
    @pytest.mark.parametrize("mu", [0.0, math.pi / 6, math.pi / 3])
    def test_closed_form_vs_quadrature(self, r, mu):
        closed = mean_shift_semiclassical_closed(r, mu)
        quad = mean_shift_semiclassical_quadrature(r, mu)
        assert abs(closed - quad) <= 1e-6 * max(1.0, abs(closed))

    def test_vacuum_and_quadrature_phase(self):
        assert abs(mean_shift_semiclassical_quadrature(0.0, 0.3)) <= 1e-14
        for r in (0.5, 2.0, 5.0):
            assert abs(mean_shift_semiclassical_quadrature(r, math.pi / 2)) <= 1e-12
        assert mean_shift_semiclassical_closed(0.0, 0.3) == 0.0

    def test_small_r_closed_form(self):
        r = 1e-3
        assert mean_shift_semiclassical_closed(r, 0.4) / math.cos(0.4) == pytest.approx(
            r * math.sqrt(math.pi / 2), rel=1e-6)

    def test_large_r_deficit(self, oracles):
        deficit = 1 - semiclassical_factor(8.0)
        assert deficit == pytest.approx(1 - float(oracles["semiclassical_factor"]["8"]), rel=1e-9)
        assert 0 < deficit < 5e-3

    def test_phase_factorises(self):
        r = 1.5
        a = mean_shift_semiclassical_quadrature(r, 0.3)
        b = mean_shift_semiclassical_quadrature(r, 1.1)
        assert a / b == pytest.approx(math.cos(0.3) / math.cos(1.1), abs=1e-8)

    def test_fixture_values(self, oracles):
        for r, v in oracles["semiclassical_factor"].items():
            assert semiclassical_factor(float(r)) == pytest.approx(float(v), rel=1e-12, abs=1e-300)

    def test_small_r(self):
        for r in (1e-4, 1e-3):
            assert semiclassical_factor(r) / r == pytest.approx(math.sqrt(math.pi / 2), rel=1e-5)
            assert s_factor(r) / r == pytest.approx(1.0, rel=1e-5)

    def test_large_r(self):
        for r in (6.0, 8.0):
            a, b = s_factor(r), semiclassical_factor(r)
            assert 0.95 <= a <= 1 and 0.95 <= b <= 1
            assert abs(a - b) <= 0.02

    def test_ratio_near_one_at_r6(self):
        assert abs(s_factor(6.0) / semiclassical_factor(6.0) - 1) <= 0.02

    def test_disagree_at_small_r(self):
        a, b = s_factor(0.5), semiclassical_factor(0.5)
        assert abs(a - b) / a > 0.10

    def test_ordering_on_lattice(self):
        r = np.arange(1, 121) * 0.05
        sc = semiclassical_factor(r)
        q = np.array([s_factor(x) for x in r])
        assert np.all(q < sc)

    def test_bad_input(self):
        with pytest.raises(ValueError):
            semiclassical_factor(-1.0)
        with pytest.raises(ValueError):
            semiclassical_factor(float("nan"))


class TestQDistribution:
    grid = Grid1D(-6.0, 6.0, 1537)

    def F(self, sigma=0.1, center=0.0):
        return GridDensity1D(self.grid, gaussian_density(self.grid.points, center, sigma))

    @pytest.mark.parametrize("r,mu", [(0.5, 0.2), (2.0, 1.0), (4.0, 2.5)])
    def test_mass_and_mean(self, r, mu):
        F = self.F(0.2, center=0.3)
        res = semiclassical_q_distribution(r, mu, F)
        assert res.mass() == pytest.approx(F.mass(), abs=1e-7)
        assert res.mean == pytest.approx(F.mean() + mean_shift_semiclassical_quadrature(r, mu), abs=1e-9)
        assert res.method == "semiclassical"

    def test_support_with_narrow_pointer(self):
        F = self.F(0.02)
        d = semiclassical_q_distribution(1.0, 0.4, F).distribution
        outside = np.abs(d.grid.points) > 1.15
        assert d.grid.step * d.values[outside].sum() <= 1e-9

    def test_concentrates_at_large_r(self):
        F = self.F(0.05)
        mu = 0.8
        d = semiclassical_q_distribution(8.0, mu, F).distribution
        near = np.abs(d.grid.points - math.cos(mu)) < 0.25
        assert d.grid.step * d.values[near].sum() >= 0.95

    def test_grid_too_small(self):
        g = Grid1D(-1.0, 1.0, 257)
        F = GridDensity1D(g, gaussian_density(g.points, 0.0, 0.1))
        with pytest.raises(GridError):
            semiclassical_q_distribution(1.0, 0.0, F)

    def test_same_grid_as_linear_chain(self):
        F = PointerState.gaussian(0.1).density()
        res = semiclassical_q_distribution(1.0, 0.0, F)
        assert res.distribution.grid == F.grid


class TestConjugateMomentum:
    def test_value(self):
        assert conjugate_momentum_pc(0.0, 1.0) == pytest.approx(0.5)

    def test_singular(self):
        with pytest.raises(SingularInputError):
            conjugate_momentum_pc(1.0, 0.0)

    def test_bracket(self):
        pb = poisson_bracket(lambda q, p: classical_cosine(q, p), conjugate_momentum_pc, 0.3, 0.7)
        assert pb == pytest.approx(1.0, abs=1e-6)

    @settings(max_examples=50, deadline=None)
    @given(q=st.floats(-5, 5), p=st.floats(0.05, 5))
    def test_bracket_property(self, q, p):
        pb = poisson_bracket(lambda a, b: classical_cosine(a, b), conjugate_momentum_pc, q, p,
                             step=1e-5 * max(1.0, math.hypot(q, p)))
        assert pb == pytest.approx(1.0, abs=1e-4)

    @settings(max_examples=50, deadline=None)
    @given(q=st.floats(-5, 5), p=st.one_of(st.floats(-5, -0.01), st.floats(0.01, 5)))
    def test_dominates_oscillator_energy(self, q, p):
        assert abs(conjugate_momentum_pc(q, p)) >= 0.5 * (q * q + p * p) * (1 - 1e-12)


class TestDampingCurve:
    def test_both_kinds(self, oracles):
        r = np.array([0.0, 0.5, 2.0])
        q = damping_curve("quantum", r)
        sc = damping_curve("semiclassical", r)
        assert q.values[2] == pytest.approx(float(oracles["s_factor"]["2"]), abs=1e-12)
        assert sc.values[1] == pytest.approx(float(oracles["semiclassical_factor"]["0.5"]), abs=1e-12)
        assert "I0" in sc.provenance["formula"]
        assert q.provenance["library"].startswith("vncut")

    def test_frozen(self):
        c = damping_curve("quantum", [0.1, 0.2])
        with pytest.raises(ValueError):
            c.values[0] = 1.0

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            damping_curve("husimi", [1.0])
