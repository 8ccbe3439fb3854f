import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from dunklgroup import specfun as sf
from dunklgroup.dunkl import EigenCoefficients, RegionTag, kernel_K
from dunklgroup.evolution import (
    EvolutionRequest,
    boundary_value_diagnostic,
    evolution_norm,
    evolve,
    evolve_at_zero,
    evolve_direct,
    evolve_request,
    evolved_coefficients,
    expanded_intervals,
    finite_propagation_check,
)
from dunklgroup.oracles import evolve_spectral, evolve_transform
from dunklgroup.quad import l2_inner

bs = st.sampled_from([-0.3, 0.25, 0.6, 1.5])
coeff_lists = st.lists(st.floats(-1, 1), min_size=1, max_size=5)


def reflect(f: EigenCoefficients) -> EigenCoefficients:
    sign = np.where(np.arange(f.N) % 2 == 0, 1.0, -1.0)
    return EigenCoefficients(f.b, sign * f.coeffs)


def bump(center, half_width, height=1.0):
    def g(y):
        s = (y - center) / half_width
        return height * math.exp(-1 / (1 - s * s)) if abs(s) < 1 else 0.0
    return g


class TestEvolve:
    @given(coeff_lists, st.floats(-2, 2), st.floats(-3, 3))
    def test_b0_translation(self, coeffs, t, x):
        f = EigenCoefficients(0.0, coeffs)
        assume(t != 0 and x != 0 and x + t != 0)
        r = evolve(f, t, x)
        assert r.value == f(x + t) and r.pv_term == 0

    @given(bs, coeff_lists, st.floats(-3, 3).filter(lambda v: v != 0))
    def test_t0_identity(self, b, coeffs, x):
        f = EigenCoefficients(b, coeffs)
        assert evolve(f, 0.0, x).value == f(x)

    def test_degenerate(self):
        f = EigenCoefficients.basis(0.6, 0)
        for x, t in ((0.0, 1.0), (0.5, -0.5)):
            with pytest.raises(ValueError):
                evolve(f, t, x)

    def test_requires_b_for_callables(self):
        with pytest.raises(ValueError):
            evolve(math.exp, 1.0, 0.5)
        with pytest.raises(ValueError):
            evolve(EigenCoefficients.basis(0.6, 0), 1.0, 0.5, b=0.3)

    @pytest.mark.parametrize("x,t", [(1.1, 0.8), (0.4, -1.0), (-0.4, 1.0), (1.2, -0.3), (0.3, 0.3)])
    def test_split(self, x, t):
        f = EigenCoefficients.from_pairs(0.6, {0: 1.0, 2: 1.0})
        r = evolve(f, t, x)
        assert r.value == r.delta_term + r.pv_term
        c = x + t
        factor = 1.0 if x * c > 0 else math.cos(0.6 * math.pi)
        assert r.delta_term == f(c) * factor
        assert r.imag_residual == 0.0

    def test_oracle_example(self):
        f = EigenCoefficients.basis(0.6, 0)
        v = evolve(f, 0.8, 1.1).value
        spec = evolve_spectral(0.6, 0.8, f)(1.1)
        trans = evolve_transform(0.6, 0.8, f, 1.1).real
        assert abs(v - spec) <= 1e-5 and abs(v - trans) <= 1e-5 and abs(spec - trans) <= 1e-5

    def test_request(self):
        f = EigenCoefficients.basis(0.6, 1)
        req = EvolutionRequest(f, 0.8, 1.1)
        assert req.b == 0.6
        assert evolve_request(req).value == evolve(f, 0.8, 1.1).value
        with pytest.raises(ValueError):
            EvolutionRequest(f, math.inf, 1.0)

    def test_complex_callable(self):
        f = EigenCoefficients.from_pairs(0.6, {0: 1.0, 1: 0.5})
        g = EigenCoefficients.basis(0.6, 2)
        h = lambda y: f(y) + 1j * g(y)
        r = evolve(h, 0.7, -0.4, b=0.6)
        assert abs(r.value - (evolve(f, 0.7, -0.4).value + 1j * evolve(g, 0.7, -0.4).value)) <= 1e-9
        assert r.imag_residual == pytest.approx(abs(r.value.imag))

    @given(bs, coeff_lists, st.floats(0.1, 1.5), st.floats(-2, 2))
    def test_reflection(self, b, coeffs, t, x):
        # D_b anticommutes with f(y) -> f(-y)
        assume(abs(x) > 0.05 and abs(x + t) > 0.05 and abs(x - t) > 0.05)
        f = EigenCoefficients(b, coeffs)
        lhs = evolve(reflect(f), t, x).value
        rhs = evolve(f, -t, -x).value
        assert abs(lhs - rhs) <= 1e-8

    def test_log_endpoint_regression(self):
        # QAGS gave up on the Q-branch piece [0, 1] here before bisection retries existed
        f = EigenCoefficients(1.5, [0.0, -0.71875, 0.5625])
        v = evolve(f, -1.09375, 0.09375).value
        assert abs(v - evolve_spectral(1.5, -1.09375, f)(0.09375)) <= 1e-10

    @pytest.mark.parametrize("b,t,x", [(-0.4, 0.7, 0.7 * (1 - 1e-9)),
                                       (0.25, 0.7, 1e-6), (1.5, -1.3, 1e-6)])
    def test_near_degenerate_geometry(self, b, t, x):
        # nodes within one ulp of |y| = |t|-|x| used to hit log of a rounded-negative argument
        f = EigenCoefficients(b, [1.0, 0.3, -0.5])
        v = evolve(f, t, x).value
        assert abs(v - evolve_spectral(b, t, f, 160)(x)) <= 1e-7

    @given(bs, coeff_lists, coeff_lists, st.floats(-1.5, 1.5), st.floats(-2, 2))
    def test_linearity(self, b, c1, c2, t, x):
        assume(abs(t) > 0.05 and abs(x) > 0.05 and abs(x + t) > 0.05)
        f, g = EigenCoefficients(b, c1), EigenCoefficients(b, c2)
        lhs = evolve(f + 2.0 * g, t, x).value
        rhs = evolve(f, t, x).value + 2.0 * evolve(g, t, x).value
        assert abs(lhs - rhs) <= 1e-8


class TestIntervals:
    @given(st.floats(-3, 3), st.floats(-3, 3))
    def test_cover_dependence_region(self, x, t):
        assume(abs(x) > 1e-3 and abs(t) > 1e-3 and abs(x + t) > 1e-3)
        pieces = expanded_intervals(x, t)
        for p, q in zip(pieces, pieces[1:]):
            assert p.hi <= q.lo
        length = sum(p.hi - p.lo for p in pieces)
        a, tt = abs(x), abs(t)
        expected = 2 * ((tt + a) - max(a - tt, 0.0))
        assert length == pytest.approx(expected, rel=1e-12)
        pv = [p for p in pieces if p.pv]
        if x * (x + t) < 0:
            assert len(pv) == 1 and pv[0].lo < x + t < pv[0].hi and pv[0].branch == "QP"
        else:
            assert not pv
        for p in pieces:
            mid = 0.5 * (p.lo + p.hi)
            if p.branch in ("P", "Q") and abs(abs(a - abs(mid)) - tt) > 1e-9 and abs(a + abs(mid) - tt) > 1e-9:
                region = RegionTag.MIDDLE if p.branch == "P" else RegionTag.OUTER
                assert kernel_K(0.5, x, mid, t).region is region

    def test_zero_split(self):
        pieces = expanded_intervals(0.4, 1.0)
        assert any(p.hi == 0.0 for p in pieces) and any(p.lo == 0.0 for p in pieces)

    @pytest.mark.parametrize("b", [0.25, 0.6, -0.3])
    @pytest.mark.parametrize("x,t", [(1.2, 0.3), (0.4, 1.0), (0.4, -1.0), (-1.2, 1.0), (0.5, 0.5)])
    def test_direct_agrees(self, b, x, t):
        f = EigenCoefficients.from_pairs(b, {0: 1.0, 2: 1.0})
        assert abs(evolve(f, t, x).value - evolve_direct(f, t, x)) <= 1e-7


class TestAtZero:
    def test_domain(self):
        with pytest.raises(sf.DomainError):
            evolve_at_zero(EigenCoefficients.basis(0.2, 0), 1.0)
        with pytest.raises(ValueError):
            evolve_at_zero(EigenCoefficients.basis(-0.2, 0), 0.0)

    @given(st.floats(-0.45, -0.05), st.floats(0.2, 2.0))
    def test_even_symmetric_in_t(self, b, t):
        f = EigenCoefficients.from_pairs(b, {0: 1.0, 2: 0.3})
        assert evolve_at_zero(f, t) == pytest.approx(evolve_at_zero(f, -t), rel=1e-9)

    @pytest.mark.parametrize("b,t", [(-0.4, 0.7), (-0.1, -1.2)])
    def test_richardson(self, b, t):
        f = EigenCoefficients.from_pairs(b, {0: 1.0, 1: 0.5})
        g = lambda x: x ** (-b) * evolve(f, t, x).value
        xs = (1e-2, 5e-3, 2.5e-3)
        v = [g(x) for x in xs]
        r1 = [2 * v[1] - v[0], 2 * v[2] - v[1]]
        limit = (4 * r1[1] - r1[0]) / 3
        assert abs(evolve_at_zero(f, t) - limit) <= 1e-3

    def test_b_to_zero(self):
        f, t = EigenCoefficients.basis(-0.01, 0), 1.0
        v = evolve_at_zero(f, t)
        x = 1e-4
        assert abs(v - x ** 0.01 * evolve(f, t, x).value) <= 1e-3
        assert abs(v - f.smooth_part(t)) <= 1e-2
        g = EigenCoefficients.basis(-0.001, 0)
        assert abs(evolve_at_zero(g, t) - g.smooth_part(t)) < abs(v - f.smooth_part(t))


class TestJumpDiagnostic:
    def test_inner(self):
        rep = boundary_value_diagnostic(0.7, 1, 1.05, 0.01)
        assert rep.region is RegionTag.INNER and rep.reference == 0
        errs = [r.error for r in rep.rows]
        assert errs[-1] < errs[0] and errs[-1] <= 1e-4

    def test_outer(self):
        rep = boundary_value_diagnostic(0.6, 0.8, 1.1, 5.0)
        assert rep.region is RegionTag.OUTER
        assert rep.final_error <= 1e-4
        assert all(o > 0.85 for o in rep.orders)

    def test_b0(self):
        rep = boundary_value_diagnostic(0.0, 0.8, 1.1, 5.0)
        assert all(r.jump == 0 for r in rep.rows)

    def test_rejects(self):
        with pytest.raises(ValueError):
            boundary_value_diagnostic(0.6, 1.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            boundary_value_diagnostic(0.6, 0.8, 1.1, 5.0, [])
        with pytest.raises(ValueError):
            boundary_value_diagnostic(0.6, 0.8, 1.1, 5.0, [1e-3, -1e-4])


class TestFinitePropagation:
    f = EigenCoefficients.from_pairs(0.6, {0: 1.0, 1: 0.4})

    def test_identical(self):
        assert finite_propagation_check(self.f, self.f, 0.5, 1.2)

    def test_bump_outside(self):
        # x = 1.2, t = 0.5: dependence region 0.7 <= |y| <= 1.7
        b1, b2 = bump(2.6, 0.7), bump(0.25, 0.3)
        g = lambda y: self.f(y) + b1(y) + b2(-y)
        assert finite_propagation_check(self.f, g, 0.5, 1.2, b=0.6)

    def test_bump_inside(self):
        b1 = bump(1.0, 0.4)
        g = lambda y: self.f(y) + b1(-y)
        assert not finite_propagation_check(self.f, g, 0.5, 1.2, b=0.6)


class TestGlobal:
    @pytest.mark.parametrize("b", [0.3, 0.7])
    @pytest.mark.parametrize("t", [0.4, 1.5])
    def test_unitarity(self, b, t):
        f = EigenCoefficients.from_pairs(b, {0: 1.0, 1: -0.5, 2: 0.5})
        n0 = math.sqrt(l2_inner(f, f).real)
        assert abs(evolution_norm(f, t) - n0) <= 1e-4 * n0

    def test_inverse(self):
        f = EigenCoefficients.from_pairs(0.6, {0: 1.0, 3: 0.5})
        fwd = evolved_coefficients(f, 0.7)
        xs = [-1.3, -0.45, 0.6, 1.7]
        for x in xs:
            assert abs(evolve(fwd, -0.7, x).value - f(x)) <= 1e-4
