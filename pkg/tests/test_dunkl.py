import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from dunklgroup import specfun as sf
from dunklgroup.dunkl import (
    EigenCoefficients,
    RegionTag,
    _symmetric_rule,
    apply_Db_coeffs,
    apply_Db_pointwise,
    apply_x_coeffs,
    check_b,
    dunkl_kernel_B,
    dunkl_transform,
    eigenfunction_eval,
    kernel_K,
    phi_b,
    phi_weighted,
    psi_b,
    region_classify,
)
from dunklgroup.quad import l2_inner

# (b, x, y, t, K) from the Legendre formulas evaluated in mpmath at 40 digits
K_TABLE = [
    (0.6, 0.8, 1.1, 5.0, -0.07241486719416967),
    (0.6, 0.8, -1.1, 5.0, -0.06946828777963014),
    (0.25, 1.2, -0.5, 1.0, -0.24649683110095036),
    (1.5, 0.6, 0.8, 1.1, -0.6984887789011062),
    (-0.25, 0.9, 1.3, 0.7, -0.004559832709788078),
    (-0.25, 0.3, -0.4, 2.0, 0.3287725554550299),
    (0.6, 0.5, 0.7, 1.19, -0.9637712161236629),
    (0.6, 0.5, 0.7, 1.21, -0.7921731187634538),
    (2.0, 0.4, 0.3, 0.2, -0.22656249999999997),
]

bs = st.sampled_from([-0.4, -0.25, 0.25, 0.6, 0.7, 1.5, 2.3])
nonzero = st.floats(0.05, 3.0).flatmap(lambda v: st.sampled_from([v, -v]))


def test_check_b():
    assert check_b(0.3) == 0.3
    for bad in (-0.5, -1.0, float("nan")):
        with pytest.raises(ValueError):
            check_b(bad)


class TestEigenfunctions:
    @given(bs, st.floats(-4, 4).filter(lambda v: abs(v) > 1e-3))
    def test_low_order(self, b, x):
        env = abs(x) ** b * math.exp(-x * x / 2)
        assert eigenfunction_eval(b, 0, x) == pytest.approx(env, rel=1e-13)
        assert eigenfunction_eval(b, 1, x) == pytest.approx(env * x, rel=1e-13)

    def test_laguerre_zero(self):
        assert abs(eigenfunction_eval(0.5, 2, 1.0)) <= 1e-15

    def test_origin(self):
        assert eigenfunction_eval(0.6, 0, 0.0) == 0.0
        assert math.isinf(eigenfunction_eval(-0.25, 0, 0.0))
        assert eigenfunction_eval(0.0, 0, 0.0) == 1.0

    @given(bs, st.integers(0, 12), st.floats(-5, 5).filter(lambda v: abs(v) > 1e-3))
    def test_against_laguerre(self, b, ell, x):
        half, odd = divmod(ell, 2)
        lag = sf.laguerre(half, b + 0.5 if odd else b - 0.5, x * x)
        ref = abs(x) ** b * math.exp(-x * x / 2) * lag * (x if odd else 1.0)
        assert eigenfunction_eval(b, ell, x) == pytest.approx(ref, rel=1e-10, abs=1e-13)

    def test_negative_index(self):
        with pytest.raises(ValueError):
            eigenfunction_eval(0.3, -1, 1.0)


class TestEigenCoefficients:
    def test_construction(self):
        c = EigenCoefficients.from_pairs(0.6, {0: 1.0, 2: 0.5})
        assert c.N == 3 and list(c.coeffs) == [1.0, 0.0, 0.5]
        with pytest.raises(ValueError):
            c.coeffs[0] = 2.0
        with pytest.raises(ValueError):
            EigenCoefficients(0.6, [])
        with pytest.raises(ValueError):
            EigenCoefficients(0.6, [np.inf])
        with pytest.raises(ValueError):
            EigenCoefficients(-0.7, [1.0])

    def test_arithmetic(self):
        a = EigenCoefficients.basis(0.3, 0)
        b = EigenCoefficients.basis(0.3, 2)
        s = a + 2 * b
        assert list(s.coeffs) == [1.0, 0.0, 2.0]
        assert s.padded(5).N == 5 and s.padded(5).trimmed().N == 3

    @given(bs, st.lists(st.floats(-2, 2), min_size=1, max_size=8), st.floats(0.05, 4))
    def test_derivative_matches_difference(self, b, coeffs, x):
        f = EigenCoefficients(b, coeffs)
        h = 1e-5
        fd = (f(x + h) - f(x - h)) / (2 * h)
        assert abs(f.derivative(x) - fd) <= 1e-6 * max(1.0, np.abs(coeffs).sum())


class TestDb:
    def test_b0_is_derivative(self):
        f = lambda x: math.sin(2 * x) + x ** 3
        assert apply_Db_pointwise(0.0, f, 0.7) == pytest.approx(2 * math.cos(1.4) + 3 * 0.49, rel=1e-9)

    def test_even(self):
        b, x = 0.4, 0.9
        f = lambda v: math.exp(-v * v)
        assert apply_Db_pointwise(b, f, x) == pytest.approx(-2 * x * f(x) - b / x * f(x), rel=1e-9)

    def test_singular(self):
        with pytest.raises(ValueError):
            apply_Db_pointwise(0.4, math.cos, 0.0)

    def test_coefficient_examples(self):
        b = 0.6
        e0 = apply_Db_coeffs(EigenCoefficients.basis(b, 0, 3))
        assert list(e0.coeffs) == [0.0, -1.0, 0.0] and not e0.truncated
        e1 = apply_Db_coeffs(EigenCoefficients.basis(b, 1, 3))
        assert list(e1.coeffs) == pytest.approx([0.5 + b, 0.0, 1.0])
        x0 = apply_x_coeffs(EigenCoefficients.basis(b, 0, 3))
        assert list(x0.coeffs) == [0.0, 1.0, 0.0]
        x1 = apply_x_coeffs(EigenCoefficients.basis(b, 1, 3))
        assert list(x1.coeffs) == pytest.approx([0.5 + b, 0.0, -1.0])

    def test_truncation_flag(self):
        top = apply_Db_coeffs(EigenCoefficients.basis(0.3, 2))
        assert top.truncated and top.N == 3
        ext = apply_Db_coeffs(EigenCoefficients.basis(0.3, 2), extend=True)
        assert not ext.truncated and ext.N == 4 and ext.coeffs[3] == -1.0

    @given(bs, st.lists(st.floats(-2, 2), min_size=1, max_size=10))
    def test_coeffs_match_pointwise(self, b, coeffs):
        f = EigenCoefficients(b, coeffs)
        df = apply_Db_coeffs(f, extend=True)
        xf = apply_x_coeffs(f, extend=True)
        for x in np.linspace(-3, 3, 12):
            assert df(x) == pytest.approx(apply_Db_pointwise(b, f, x), abs=1e-8)
            assert xf(x) == pytest.approx(x * f(x), abs=1e-8)

    @pytest.mark.parametrize("b,ell,x", [(0.7, 3, 0.9), (0.25, 0, 1.3), (1.5, 6, -0.7), (-0.3, 5, 2.1)])
    def test_eigenvalue_relation(self, b, ell, x):
        phi = EigenCoefficients.basis(b, ell)
        d2 = apply_Db_coeffs(apply_Db_coeffs(phi, extend=True), extend=True)
        x2 = apply_x_coeffs(apply_x_coeffs(phi, extend=True), extend=True)
        lhs = d2(x) - x2(x)
        assert lhs == pytest.approx(-(2 * b + 1 + 2 * ell) * phi(x), abs=1e-6)
        # the same with pointwise D_b twice
        inner = lambda v: apply_Db_pointwise(b, phi, v)
        lhs_pt = apply_Db_pointwise(b, inner, x) - x * x * phi(x)
        assert lhs_pt == pytest.approx(-(2 * b + 1 + 2 * ell) * phi(x), abs=1e-6)


class TestKernelB:
    @given(st.floats(-4, 4), st.floats(-4, 4))
    def test_fourier_reduction(self, xi, x):
        assert abs(dunkl_kernel_B(0.0, xi, x) - cmath.exp(-1j * xi * x) / math.sqrt(2 * math.pi)) <= 1e-14

    def test_zero_frequency(self):
        assert dunkl_kernel_B(0.7, 0.0, 1.3) == 0
        assert math.isinf(abs(dunkl_kernel_B(-0.3, 0.0, 1.3)))

    @given(bs, nonzero, nonzero)
    def test_conjugate_symmetry(self, b, x, xi):
        assert abs(dunkl_kernel_B(b, x, -xi) - np.conj(dunkl_kernel_B(b, x, xi))) <= 1e-15

    @given(bs, nonzero, nonzero)
    def test_symmetric(self, b, x, xi):
        assert dunkl_kernel_B(b, x, xi) == dunkl_kernel_B(b, xi, x)


class TestTransform:
    @pytest.mark.parametrize("b", [0.25, 0.6, 1.5])
    @pytest.mark.parametrize("ell", range(7))
    def test_eigenfunctions(self, b, ell):
        phi = EigenCoefficients.basis(b, ell)
        xi = np.array([-2.1, -0.7, 0.3, 1.1, 2.6])
        got = dunkl_transform(phi, xi)
        assert np.max(np.abs(got - (1j) ** (-ell) * phi(xi))) <= 1e-6

    def test_adaptive_route(self):
        phi = EigenCoefficients.basis(0.6, 1)
        assert abs(dunkl_transform(lambda x: phi(x), 0.8, b=0.6) - (-1j) * phi(0.8)) <= 1e-6
        with pytest.raises(ValueError):
            dunkl_transform(math.cos, 0.5)

    def test_gaussian_b0(self):
        g = EigenCoefficients.basis(0.0, 0)
        xi = np.linspace(-3, 3, 7)
        assert np.allclose(dunkl_transform(g, xi), np.exp(-xi ** 2 / 2), atol=1e-12)

    def test_inverse(self):
        f = EigenCoefficients(0.6, [0.3, -1.0, 0.5, 0.2])
        xs = np.array([-1.5, -0.2, 0.9, 2.0])
        fwd = lambda x: dunkl_transform(f, x)
        back = dunkl_transform(lambda v: fwd(v), xs[0], b=0.6, inverse=True)
        assert abs(back - f(xs[0])) <= 1e-6

    def test_parseval_adaptive(self):
        f, g = EigenCoefficients(0.6, [0.4, -0.2, 1.0]), EigenCoefficients(0.6, [0.1, 0.7])
        Ff = lambda x: dunkl_transform(f, x)
        Fg = lambda x: dunkl_transform(g, x)
        assert abs(l2_inner(Ff, Fg) - l2_inner(f, g)) <= 1e-6

    @given(bs, st.lists(st.floats(-1, 1), min_size=1, max_size=6),
           st.lists(st.floats(-1, 1), min_size=1, max_size=6))
    def test_parseval(self, b, c1, c2):
        f, g = EigenCoefficients(b, c1), EigenCoefficients(b, c2)
        y, w = _symmetric_rule(b, 60, 9.0)
        ay = np.abs(y) ** b
        lhs = np.sum(w * dunkl_transform(f, y) * np.conj(dunkl_transform(g, y)) / ay ** 2)
        rhs = np.sum(w * f.smooth_part(y) * g.smooth_part(y))
        assert abs(lhs - rhs) <= 1e-6


class TestPsiPhi:
    @given(st.floats(1.001, 50))
    def test_psi_b0(self, w):
        assert psi_b(0.0, w) == 1.0

    def test_limits(self):
        assert psi_b(0.8, 1 + 1e-12) == pytest.approx(1.0, abs=1e-6)
        assert psi_b(1.0, 1e6) == pytest.approx(1.0, abs=1e-5)
        b = 0.6
        lim = math.gamma(b / 2 + 1) * math.gamma((b + 1) / 2) / math.gamma(b + 0.5)
        assert psi_b(b, 1e7) == pytest.approx(lim, rel=1e-5)

    def test_domain(self):
        with pytest.raises(sf.DomainError):
            psi_b(0.5, 0.9)
        with pytest.raises(sf.DomainError):
            psi_b(0.5, 0.3 + 0.3j)
        with pytest.raises(sf.DomainError):
            phi_b(0.5, 1.0, 1.0, 0.5)

    def test_phi_b0(self):
        assert phi_b(0.0, 0.7, 1.2, 2.4 - 0.1j) == 1

    def test_two_forms(self):
        b, x, y, z = 0.6, 0.7, 1.2, 2.4 - 0.1j
        assert abs(abs(x) ** b * abs(y) ** b * phi_b(b, x, y, z) - phi_weighted(b, x, y, z)) <= 1e-10

    @given(bs, nonzero, nonzero, st.floats(0.5, 4), st.floats(-0.5, 0.5).filter(lambda v: abs(v) > 1e-3))
    def test_two_forms_property(self, b, x, y, tr, ti):
        z = complex(abs(x) + abs(y) + tr, ti)
        lhs = abs(x) ** b * abs(y) ** b * phi_b(b, x, y, z)
        rhs = phi_weighted(b, x, y, z)
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))

    def test_holomorphic_in_inner(self):
        b, x, y, t = 0.6, 0.4, 1.5, 0.3
        for eps in (1e-4, 1e-6):
            jump = phi_b(b, x, y, t + 1j * eps) - phi_b(b, x, y, t - 1j * eps)
            assert abs(jump) <= 10 * eps


class TestRegions:
    def test_examples(self):
        assert region_classify(1, 1.05, 0.01) is RegionTag.INNER
        assert region_classify(1, 1, 1) is RegionTag.MIDDLE
        assert region_classify(0.3, 0.4, 5) is RegionTag.OUTER
        assert region_classify(0.3, 0.4, 0.7) is RegionTag.BOUNDARY
        assert region_classify(0.3, 0.4, 0.7 + 1e-12) is RegionTag.BOUNDARY

    def test_degenerate(self):
        with pytest.raises(ValueError):
            region_classify(0.0, 1.0, 1.0)

    @given(nonzero, nonzero, nonzero)
    def test_u_correspondence(self, x, y, t):
        tag = region_classify(x, y, t)
        assume(tag is not RegionTag.BOUNDARY)
        u = (x * x + y * y - t * t) / (2 * abs(x * y))
        expected = RegionTag.INNER if u > 1 else RegionTag.MIDDLE if u > -1 else RegionTag.OUTER
        assert tag is expected


class TestKernelK:
    @pytest.mark.parametrize("b,x,y,t,value", K_TABLE)
    def test_against_mpmath(self, b, x, y, t, value):
        assert kernel_K(b, x, y, t).value == pytest.approx(value, rel=1e-12, abs=1e-15)

    def test_integer_b_outer_vanishes(self):
        assert abs(kernel_K(1.0, 0.7, -0.2, 1.0).value) <= 1e-15

    def test_examples(self):
        kv = kernel_K(0.7, 1, 1.05, 0.01)
        assert kv.value == 0 and kv.region is RegionTag.INNER
        assert kernel_K(0.0, 0.5, 0.7, 1.0).value == 0

    def test_boundary_rejected(self):
        with pytest.raises(ValueError):
            kernel_K(0.6, 0.3, 0.4, 0.7)

    def test_jump_oracle_example(self):
        b, x, y, t, eps = 0.6, 0.8, 1.1, 5.0, 1e-6
        jump = phi_b(b, x, y, t + 1j * eps) - phi_b(b, x, y, t - 1j * eps)
        oracle = (-(abs(x) * abs(y)) ** b * jump / (2j * math.pi)).real
        assert abs(oracle - kernel_K(b, x, y, t).value) <= 1e-4

    @given(bs, nonzero, nonzero, nonzero)
    def test_symmetries(self, b, x, y, t):
        assume(region_classify(x, y, t) is not RegionTag.BOUNDARY)
        k = kernel_K(b, x, y, t)
        assert kernel_K(b, x, y, -t).value == -k.value
        assert kernel_K(b, y, x, t).value == pytest.approx(k.value, rel=1e-13, abs=1e-300)
        if k.region is RegionTag.INNER:
            assert k.value == 0

    @pytest.mark.parametrize("b", [0.25, 0.6, 1.5])
    @pytest.mark.parametrize("x,y", [(0.5, 0.7), (0.8, -1.1), (-0.3, 0.4)])
    @pytest.mark.parametrize("dt", [0.1, 1.0, 3.0])
    def test_jump_oracle_grid(self, b, x, y, dt):
        t = abs(x) + abs(y) + dt
        eps = 1e-6
        w = phi_weighted(b, x, y, t + 1j * eps) - phi_weighted(b, x, y, t - 1j * eps)
        assert abs((-w / (2j * math.pi)).real - kernel_K(b, x, y, t).value) <= 1e-4
