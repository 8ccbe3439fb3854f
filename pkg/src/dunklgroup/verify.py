"""Invariant suites run by ``dunklgroup --command verify``.

Each check returns (residual, tolerance) and passes when residual <= tolerance.
Random test functions are drawn from a generator seeded per check, so a fixed
seed reproduces every residual bit for bit.
"""
from __future__ import annotations

import cmath
import math
import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import specfun as sf
from .dunkl import (
    EigenCoefficients,
    apply_Db_coeffs,
    apply_Db_pointwise,
    apply_x_coeffs,
    dunkl_transform,
    kernel_K,
    phi_weighted,
    psi_b,
)
from .evolution import (
    boundary_value_diagnostic,
    evolution_norm,
    evolve,
    evolve_at_zero,
    evolve_direct,
    finite_propagation_check,
)
from .oracles import (
    build_Db_matrix,
    eigen_norms,
    evolve_spectral,
    evolve_transform,
    half_frequency_closed_form,
    half_frequency_integral,
)
from .quad import DEFAULT_QUAD, integrate, integrate_pv, l2_inner

STANDARD_B = (0.25, 0.6, 1.5)
STANDARD_T = (0.3, 1.0)
STANDARD_X = (-1.2, -0.4, 0.4, 1.2)
STANDARD_F = ({0: 1.0}, {1: 1.0}, {0: 1.0, 2: 1.0})


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    residual: float
    tolerance: float
    runtime_ms: float

    def as_dict(self) -> dict:
        return asdict(self)


def _random_coeffs(rng: np.random.Generator, b: float, n: int = 6) -> EigenCoefficients:
    return EigenCoefficients(b, rng.uniform(-1.0, 1.0, n))


def _max_rel(pairs) -> float:
    return max(abs(a - b) / max(abs(b), 1e-300) for a, b in pairs)


# ---------------------------------------------------------------- specfun


def _gamma_recurrence(rng):
    xs = np.round(np.arange(0.1, 10.0001, 0.1), 10)
    return _max_rel((sf.gamma(x + 1), x * sf.gamma(x)) for x in xs), 1e-12


def _digamma_recurrence(rng):
    xs = np.round(np.arange(0.1, 10.0001, 0.1), 10)
    return max(abs(sf.digamma(x + 1) - sf.digamma(x) - 1 / x) for x in xs), 1e-12


def _connection_formula(rng):
    res = []
    for a, b in ((0.3, 0.9), (1.2, 0.4), (0.75, 0.75)):
        for w in (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8):
            res.append((sf.hyp2f1_balanced_near_one(a, b, w), sf.hyp2f1(a, b, a + b, w)))
    return _max_rel(res), 1e-9


def _q_derivative_identities(rng):
    worst = 0.0
    for b in (0.3, 0.7, 1.4):
        for w in (1.3, 2.0, 5.0):
            h = 1e-5 * w
            d_lo = (sf.legendre_q(b - 1, w + h) - sf.legendre_q(b - 1, w - h)) / (2 * h)
            d_hi = (sf.legendre_q(b, w + h) - sf.legendre_q(b, w - h)) / (2 * h)
            q_lo, q_hi = sf.legendre_q(b - 1, w), sf.legendre_q(b, w)
            worst = max(worst,
                        abs((w * w - 1) * d_lo - b * (-w * q_lo + q_hi)),
                        abs((w * w - 1) * d_hi - b * (-q_lo + w * q_hi)))
    return worst, 1e-7


def _q_reflection(rng):
    worst = 0.0
    for nu in (0.25, 0.6, 1.3):
        for r in (1.5, 3.0):
            for ang in (0.3, 1.1, 2.0, -0.3, -1.1, -2.0):
                w = cmath.rect(r, ang)
                if w.imag < 0:
                    res = sf.legendre_q_complex(nu, -w) + cmath.exp(-1j * nu * math.pi) * sf.legendre_q_complex(nu, w)
                else:
                    res = sf.legendre_q_complex(nu, -w) + cmath.exp(1j * nu * math.pi) * sf.legendre_q_complex(nu, w)
                worst = max(worst, abs(res))
    return worst, 1e-10


def _legendre_ode(rng):
    worst = 0.0
    h = 1e-4
    for nu in (0.3, 0.6, 1.7):
        for u in (-0.8, -0.3, 0.2, 0.7):
            p0, pp, pm = sf.legendre_p(nu, u), sf.legendre_p(nu, u + h), sf.legendre_p(nu, u - h)
            d1 = (pp - pm) / (2 * h)
            d2 = (pp - 2 * p0 + pm) / (h * h)
            worst = max(worst, abs((1 - u * u) * d2 - 2 * u * d1 + nu * (nu + 1) * p0))
    return worst, 1e-6


def _psi_limits(rng):
    near_one = abs(psi_b(0.8, 1.0 + 1e-9) - 1.0)
    res = [near_one]
    for b in (0.25, 0.6, 1.0, 1.5):
        lim = math.gamma(b / 2 + 1) * math.gamma((b + 1) / 2) / math.gamma(b + 0.5)
        res.append(abs(psi_b(b, 1e6) - lim))
    return max(res), 1e-5


# ---------------------------------------------------------------- dunkl


def _transform_eigen(rng):
    worst = 0.0
    xi = np.array([-1.7, -0.6, 0.35, 1.3, 2.2])
    for b in STANDARD_B:
        for ell in range(7):
            f = EigenCoefficients.basis(b, ell)
            got = dunkl_transform(f, xi)
            worst = max(worst, float(np.max(np.abs(got - (1j) ** (-ell) * f(xi)))))
    return worst, 1e-6


def _eigenvalue_relation(rng):
    worst = 0.0
    for b in (0.25, 0.7, 1.5):
        for ell in range(6):
            f = EigenCoefficients.basis(b, ell)
            inner = lambda v, f=f, b=b: apply_Db_pointwise(b, f, v)
            for x in (-1.3, -0.5, 0.9, 1.6):
                lhs = apply_Db_pointwise(b, inner, x) - x * x * f(x)
                worst = max(worst, abs(lhs + (2 * b + 1 + 2 * ell) * f(x)))
    return worst, 1e-6


def _coefficient_consistency(rng):
    worst = 0.0
    xs = np.array([-2.1, -0.7, 0.3, 1.1, 2.5])
    for b in STANDARD_B:
        c = _random_coeffs(rng, b)
        d = apply_Db_coeffs(c, extend=True)
        m = apply_x_coeffs(c, extend=True)
        for x in xs:
            worst = max(worst, abs(d(x) - apply_Db_pointwise(b, c, x)), abs(m(x) - x * c(x)))
    return worst, 1e-8


def _kernel_symmetries(rng):
    worst = 0.0
    for b in STANDARD_B:
        for x, y, t in ((0.6, 0.8, 1.1), (0.6, -0.8, 5.0), (-1.2, 0.5, 1.0), (0.9, 1.3, 0.7)):
            k = kernel_K(b, x, y, t).value
            worst = max(worst, abs(kernel_K(b, x, y, -t).value + k), abs(kernel_K(b, y, x, t).value - k))
    return worst, 1e-13


def _jump_oracle(rng):
    worst = 0.0
    eps = 1e-6
    for b in STANDARD_B:
        for x, y in ((0.6, 0.8), (-0.5, 1.1), (1.2, -0.3)):
            for scale in (1.2, 2.0, 4.0):
                t = scale * (abs(x) + abs(y))
                up = phi_weighted(b, x, y, complex(t, eps))
                dn = phi_weighted(b, x, y, complex(t, -eps))
                jump = (-(up - dn) / (2j * math.pi)).real
                worst = max(worst, abs(jump - kernel_K(b, x, y, t).value))
    return worst, 1e-4


# ---------------------------------------------------------------- quad


def _quad_oracles(rng):
    res = [
        abs(integrate(lambda y: y ** -0.4, 0.0, 1.0).value - 1 / 0.6),
        abs(integrate(lambda y: -math.log(y), 0.0, 1.0).value - 1.0),
        abs(integrate(lambda y: y ** -0.49, 0.0, 1.0).value - 1 / 0.51),
        abs(integrate_pv(lambda y: -1.0, -1.0, 2.0, 0.0).value - math.log(2.0)),
        abs(integrate_pv(lambda y: -math.exp(y), -1.0, 1.0, 0.0).value - 2.114501750751457),
    ]
    return max(res), 1e-9


def _pv_window_invariance(rng):
    g = lambda y: math.cos(3 * y) * math.exp(-y * y)
    a = integrate_pv(g, -2.0, 3.0, 0.4).value
    half = integrate_pv(g, -2.0, 3.0, 0.4, DEFAULT_QUAD.with_(pv_window=0.125)).value
    return abs(a - half), 1e-9


def _mode_agreement(rng):
    f = lambda y: math.exp(-y) * math.sin(2 * y)
    plain = integrate(f, 0.0, 3.0, DEFAULT_QUAD.with_(endpoint_mode="plain", abs_tol=1e-13, rel_tol=1e-13)).value
    sing = integrate(f, 0.0, 3.0, DEFAULT_QUAD.with_(abs_tol=1e-13, rel_tol=1e-13)).value
    return abs(plain - sing), 1e-12


# ---------------------------------------------------------------- evolution


def _b0_exactness(rng):
    f = EigenCoefficients.from_pairs(0.0, {0: 1.0, 2: 0.5})
    worst = 0.0
    for t in (0.3, 1.0):
        for x in np.linspace(-2.0, 2.0, 21):
            if x * (x + t) == 0:
                continue
            r = evolve(f, t, x)
            worst = max(worst, abs(r.value - f(x + t)), abs(r.pv_term))
    return worst, 0.0


def _oracle_triangle(rng):
    worst = 0.0
    for b in STANDARD_B:
        for t in STANDARD_T:
            for fl in STANDARD_F:
                f = EigenCoefficients.from_pairs(b, fl)
                spec = evolve_spectral(b, t, f)
                tr = evolve_transform(b, t, f, np.array(STANDARD_X))
                for i, x in enumerate(STANDARD_X):
                    e = evolve(f, t, x).value
                    s = spec(x)
                    worst = max(worst, abs(e - s), abs(e - tr[i]), abs(s - tr[i]))
    return worst, 1e-5


def _delta_coefficient(rng):
    worst = 0.0
    for b in STANDARD_B:
        f = EigenCoefficients.from_pairs(b, {0: 1.0, 2: 1.0})
        for t, x in ((1.0, -0.4), (-1.0, 0.4), (1.5, -0.6)):
            r = evolve(f, t, x)
            worst = max(worst, abs(r.delta_term / f(x + t) - math.cos(b * math.pi)))
    return worst, 1e-15


def _direct_vs_expanded(rng):
    worst = 0.0
    for b in (0.25, 1.5):
        f = EigenCoefficients.from_pairs(b, {0: 1.0, 1: 0.5})
        for t, x in ((1.0, -0.4), (1.0, 0.4), (0.3, 1.2), (-0.8, 0.5)):
            worst = max(worst, abs(evolve_direct(f, t, x) - evolve(f, t, x).value))
    return worst, 1e-7


def _finite_propagation(rng):
    b, t, x = 0.6, 0.5, 1.2
    f = EigenCoefficients.from_pairs(b, {0: 1.0, 1: 0.3})

    def bump(y, centre=0.25, width=0.1):
        s = (y - centre) / width
        return math.exp(-1.0 / (1.0 - s * s)) if abs(s) < 1 else 0.0

    g = lambda y: f(y) + bump(y)
    ok = finite_propagation_check(f, g, t, x, b)
    return (0.0 if ok else 1.0), 0.0


def _unitarity(rng):
    worst = 0.0
    for b in (0.3, 0.7):
        f = _random_coeffs(rng, b, 4)
        n0 = math.sqrt(l2_inner(f, f).real)
        for t in (0.4, 1.5):
            worst = max(worst, abs(evolution_norm(f, t, nodes=40) / n0 - 1.0))
    return worst, 1e-4


def _x_zero_limit(rng):
    b, t = -0.25, 1.0
    f = EigenCoefficients.basis(b, 0)
    xs = (1e-2, 5e-3, 2.5e-3)
    v = [x ** (-b) * evolve(f, t, x).value for x in xs]
    r1 = (2 * v[1] - v[0], 2 * v[2] - v[1])
    extrap = (4 * r1[1] - r1[0]) / 3
    return abs(evolve_at_zero(f, t) - extrap), 1e-3


def _jump_convergence(rng):
    worst = 0.0
    for b in STANDARD_B:
        for x, y, t in ((0.6, 0.8, 5.0), (-0.6, 0.8, 3.0), (0.7, -0.4, 2.0)):
            worst = max(worst, boundary_value_diagnostic(b, x, y, t).final_error)
    return worst, 1e-4


# ---------------------------------------------------------------- oracles


def _norms_vs_quadrature(rng):
    worst = 0.0
    for b in STANDARD_B:
        h = eigen_norms(b, 11)
        for ell in range(11):
            f = EigenCoefficients.basis(b, ell)
            worst = max(worst, abs(l2_inner(f, f).real - h[ell]) / h[ell])
    return worst, 1e-8


def _matrix_antisymmetry(rng):
    return max(build_Db_matrix(b, 80).antisymmetry_residual for b in STANDARD_B), 1e-12


def _expm_orthogonality(rng):
    from scipy.linalg import expm

    worst = 0.0
    for b in STANDARD_B:
        m = build_Db_matrix(b, 80).entries
        u = expm(0.9 * m)
        worst = max(worst, float(np.max(np.abs(u.T @ u - np.eye(80)))))
        a = rng.standard_normal(80)
        worst = max(worst, abs(np.linalg.norm(u @ a) - np.linalg.norm(a)))
    return worst, 1e-10


def _spectral_convergence(rng):
    worst = 0.0
    for b in STANDARD_B:
        for t in STANDARD_T:
            for fl in STANDARD_F:
                f = EigenCoefficients.from_pairs(b, fl)
                a = evolve_spectral(b, t, f, 40)(np.array(STANDARD_X))
                c = evolve_spectral(b, t, f, 80)(np.array(STANDARD_X))
                worst = max(worst, float(np.max(np.abs(a - c))))
    return worst, 1e-8


def _half_frequency(rng):
    worst = 0.0
    for b in (0.25, 1.5):
        for x in (0.8, -0.6):
            for y in (1.1, 0.5):
                for z in (1.0 - 0.3j, -0.5 - 0.2j):
                    worst = max(worst, abs(half_frequency_integral(b, x, y, z) - half_frequency_closed_form(b, x, y, z)))
    return worst, 1e-6


def _transform_inversion(rng):
    worst = 0.0
    xs = np.array(STANDARD_X)
    for b in STANDARD_B:
        f = _random_coeffs(rng, b, 5)
        worst = max(worst, float(np.max(np.abs(evolve_transform(b, 0.0, f, xs) - f(xs)))))
    return worst, 1e-6


SUITES: dict[str, list[tuple[str, Callable]]] = {
    "specfun": [
        ("gamma_recurrence", _gamma_recurrence),
        ("digamma_recurrence", _digamma_recurrence),
        ("connection_formula", _connection_formula),
        ("q_derivative_identities", _q_derivative_identities),
        ("q_reflection", _q_reflection),
        ("legendre_p_ode", _legendre_ode),
        ("psi_limits", _psi_limits),
    ],
    "dunkl": [
        ("transform_eigenvalues", _transform_eigen),
        ("eigenvalue_relation", _eigenvalue_relation),
        ("coefficient_consistency", _coefficient_consistency),
        ("kernel_symmetries", _kernel_symmetries),
        ("jump_oracle", _jump_oracle),
    ],
    "quad": [
        ("oracle_integrals", _quad_oracles),
        ("pv_window_invariance", _pv_window_invariance),
        ("mode_agreement", _mode_agreement),
    ],
    "evolution": [
        ("b0_exactness", _b0_exactness),
        ("oracle_triangle", _oracle_triangle),
        ("delta_coefficient", _delta_coefficient),
        ("direct_vs_expanded", _direct_vs_expanded),
        ("finite_propagation", _finite_propagation),
        ("unitarity", _unitarity),
        ("x_zero_limit", _x_zero_limit),
        ("jump_convergence", _jump_convergence),
    ],
    "oracles": [
        ("norms_vs_quadrature", _norms_vs_quadrature),
        ("matrix_antisymmetry", _matrix_antisymmetry),
        ("expm_orthogonality", _expm_orthogonality),
        ("spectral_convergence", _spectral_convergence),
        ("half_frequency", _half_frequency),
        ("transform_inversion", _transform_inversion),
    ],
}


def run_suites(only: str | None = None, seed: int = 0) -> list[CheckResult]:
    if only is not None and only not in SUITES:
        raise ValueError(f"unknown suite {only!r}; choose from {sorted(SUITES)}")
    out = []
    for suite, checks in SUITES.items():
        if only is not None and suite != only:
            continue
        for i, (name, fn) in enumerate(checks):
            rng = np.random.default_rng([seed, i, len(suite)])
            t0 = time.perf_counter()
            residual, tol = fn(rng)
            ms = (time.perf_counter() - t0) * 1e3
            out.append(CheckResult(suite, name, bool(residual <= tol), float(residual), float(tol), ms))
    return out
