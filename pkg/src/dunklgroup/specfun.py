"""Special functions: Gamma, digamma, Gauss 2F1, Legendre P/Q, Bessel, Laguerre.

Scalar engines work on Python floats/complex; ``bessel_j_normalized`` and
``laguerre`` are vectorised over numpy arrays because the transform and
eigenbasis code evaluates them on whole quadrature grids.

The Legendre function of the second kind uses the normalisation

    Q_nu(w) = 1/2 Gamma((nu+1)/2) Gamma((nu+2)/2) / Gamma(nu+3/2)
              * w^(-nu-1) 2F1((nu+1)/2, (nu+2)/2; nu+3/2; 1/w^2)

(the standard Q on C minus (-inf, 1]), and P_nu(u) = 2F1(-nu, nu+1; 1; (1-u)/2).
Both hypergeometric functions are *balanced* (gamma = alpha + beta), so near
their logarithmic singular points they are evaluated with the digamma
connection formula instead of the slowly converging defining series.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

__all__ = [
    "SpecialFunctionError",
    "PoleError",
    "DomainError",
    "ConvergenceError",
    "SeriesControl",
    "DEFAULT_SERIES",
    "gamma",
    "digamma",
    "pochhammer",
    "hyp2f1",
    "hyp2f1_balanced_near_one",
    "legendre_p",
    "legendre_p_complex",
    "legendre_q",
    "legendre_q_complex",
    "bessel_j_normalized",
    "laguerre",
]


class SpecialFunctionError(ArithmeticError):
    pass


class PoleError(SpecialFunctionError, ValueError):
    """Argument sits on a pole (nonpositive integer for Gamma/digamma)."""


class DomainError(SpecialFunctionError, ValueError):
    """Argument outside the supported domain of an engine."""


class ConvergenceError(SpecialFunctionError):
    """A series did not reach its tolerance within ``max_terms``."""


@dataclass(frozen=True)
class SeriesControl:
    max_terms: int = 1000
    rel_tol: float = 1e-14

    def __post_init__(self):
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError("rel_tol must lie in (0, 1)")


DEFAULT_SERIES = SeriesControl()

# switch between the 1/w^2 series and the connection formula for real Q_nu
Q_SERIES_THRESHOLD = 1.2


def _is_nonpositive_integer(x) -> bool:
    return x <= 0 and float(x) == math.floor(x)


def gamma(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"gamma: non-finite argument {x!r}")
    if _is_nonpositive_integer(x):
        raise PoleError(f"gamma has a pole at {x!r}")
    return math.gamma(x)


# B_{2k} / (2k) for the asymptotic digamma expansion, k = 1..7
_DIGAMMA_ASYMPTOTIC = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


def digamma(x: float) -> float:
    """psi(x) = Gamma'(x)/Gamma(x) for real x off the poles.

    Reflection below 1/2, upward recurrence to x >= 10, then the Bernoulli
    asymptotic series (truncation error below 1e-16 there).
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"digamma: non-finite argument {x!r}")
    if _is_nonpositive_integer(x):
        raise PoleError(f"digamma has a pole at {x!r}")
    if x < 0.5:
        return digamma(1.0 - x) - math.pi / math.tan(math.pi * x)
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    tail = 0.0
    for coef in reversed(_DIGAMMA_ASYMPTOTIC):
        tail = (tail + coef) * inv2
    return acc + math.log(x) - 0.5 / x - tail


def pochhammer(a: float, m: int) -> float:
    if m < 0:
        raise ValueError("pochhammer: m must be nonnegative")
    out = 1.0
    for k in range(m):
        out *= a + k
    return out


def _sum_series(first, ratio, abs_w, ctl: SeriesControl, what: str):
    """Sum sum_m t_m with t_0 = first and t_{m+1} = t_m * ratio(m).

    Stops once the geometric tail bound |t| / (1 - |w|) drops below
    rel_tol * |sum|, or the series terminates exactly.
    """
    total = first
    term = first
    tail_factor = 1.0 / (1.0 - abs_w) if abs_w < 1.0 else float("inf")
    for m in range(ctl.max_terms):
        term = term * ratio(m)
        total += term
        if term == 0:
            return total
        if abs(term) * tail_factor <= ctl.rel_tol * abs(total):
            return total
    raise ConvergenceError(f"{what}: no convergence in {ctl.max_terms} terms")


def hyp2f1(alpha, beta, gamma_, w, ctl: SeriesControl = DEFAULT_SERIES):
    """Gauss hypergeometric series for |w| < 1.

    Returns a float for real ``w`` and a complex number for complex ``w``.
    """
    if _is_nonpositive_integer(gamma_):
        raise PoleError(f"hyp2f1: gamma={gamma_!r} is a nonpositive integer")
    if abs(w) >= 1.0:
        raise DomainError(f"hyp2f1: series needs |w| < 1, got {w!r}")
    if w == 0:
        return complex(1.0) if isinstance(w, complex) else 1.0

    def ratio(m):
        return (alpha + m) * (beta + m) / ((gamma_ + m) * (m + 1.0)) * w

    first = complex(1.0) if isinstance(w, complex) else 1.0
    return _sum_series(first, ratio, abs(w), ctl, "hyp2f1")


def _balanced_sum(alpha, beta, s, log_s, ctl: SeriesControl):
    """Braces of the gamma = alpha + beta connection formula, one_minus_w = s.

        sum_m (alpha)_m (beta)_m / (m!)^2
              * [2 psi(1+m) - psi(alpha+m) - psi(beta+m) - log s] s^m

    The Gamma(alpha+beta)/(Gamma(alpha)Gamma(beta)) prefactor is left to
    the caller. Digamma values are advanced by psi(a+1) = psi(a) + 1/a.
    """
    psi_a = digamma(alpha)
    psi_b = digamma(beta)
    psi_1 = digamma(1.0)
    coef = 1.0
    total = (2.0 * psi_1 - psi_a - psi_b - log_s)
    tail_factor = 1.0 / (1.0 - abs(s))
    for m in range(ctl.max_terms):
        coef = coef * (alpha + m) * (beta + m) / ((m + 1.0) ** 2) * s
        psi_a += 1.0 / (alpha + m)
        psi_b += 1.0 / (beta + m)
        psi_1 += 1.0 / (m + 1.0)
        term = coef * (2.0 * psi_1 - psi_a - psi_b - log_s)
        total += term
        if coef == 0:
            return total
        # the bracket grows like log m; bound the tail by the coefficient
        bound = abs(coef) * (abs(log_s) + 2.0 * math.log(m + 2.0) + 2.0)
        if bound * tail_factor <= ctl.rel_tol * abs(total):
            return total
    raise ConvergenceError(
        f"balanced 2F1 connection series: no convergence in {ctl.max_terms} terms"
    )


def _log(z):
    if isinstance(z, complex):
        return cmath.log(z)
    if z <= 0.0:
        raise DomainError("logarithm of a nonpositive real; pass a complex argument")
    return math.log(z)


def _check_balanced_params(alpha, beta):
    if _is_nonpositive_integer(alpha) or _is_nonpositive_integer(beta):
        raise DomainError("balanced connection formula needs alpha, beta off 0, -1, -2, ...")
    if _is_nonpositive_integer(alpha + beta):
        raise DomainError("balanced connection formula needs alpha + beta off the Gamma poles")


def hyp2f1_balanced_near_one(alpha, beta, w, ctl: SeriesControl = DEFAULT_SERIES):
    """2F1(alpha, beta; alpha+beta; w) through its logarithmic expansion at w = 1.

    Valid for |1 - w| < 1 with the principal branch of log(1 - w); real ``w``
    must satisfy w < 1 (for w >= 1 pass a complex number to pick a side).
    """
    _check_balanced_params(alpha, beta)
    s = 1.0 - w
    if abs(s) >= 1.0:
        raise DomainError(f"connection series needs |1 - w| < 1, got w={w!r}")
    if s == 0:
        raise DomainError("2F1 with gamma = alpha + beta diverges at w = 1")
    pref = math.exp(math.lgamma(alpha + beta) - math.lgamma(alpha) - math.lgamma(beta))
    pref *= _sp.gammasgn(alpha + beta) * _sp.gammasgn(alpha) * _sp.gammasgn(beta)
    return pref * _balanced_sum(alpha, beta, s, _log(s), ctl)


def _is_integer(x) -> bool:
    return float(x) == math.floor(x)


def _legendre_p_zs(nu, z, s, ctl: SeriesControl = DEFAULT_SERIES):
    """P_nu with z = (1-u)/2 and s = (1+u)/2 = 1 - z supplied separately.

    Callers pass both so that s keeps full relative precision near u = -1.
    """
    if _is_integer(nu):
        return _legendre_poly(int(nu), z)
    if abs(z) <= 0.5:
        return hyp2f1(-nu, nu + 1.0, 1.0, z, ctl)
    # Gamma(1)/(Gamma(-nu)Gamma(nu+1)) = -sin(pi nu)/pi
    pref = -math.sin(math.pi * nu) / math.pi
    return pref * _balanced_sum(-nu, nu + 1.0, s, _log(s), ctl)


def _legendre_poly(n, z):
    # P_n for integer degree via the finite 2F1 sum; any z
    if n < 0:
        n = -n - 1
    total = 1.0
    term = 1.0
    for m in range(n):
        term = term * (-n + m) * (n + 1.0 + m) / ((m + 1.0) ** 2) * z
        total += term
    return total


def legendre_p(nu: float, u: float, ctl: SeriesControl = DEFAULT_SERIES) -> float:
    """Legendre function of the first kind on -1 < u <= 1.

    The series in (1-u)/2 is used for u >= 0 and the balanced connection
    formula (series in (1+u)/2 with a log(1+u) term) below that, so the
    whole open interval down to u -> -1 is supported.
    """
    u = float(u)
    if not -1.0 < u <= 1.0:
        raise DomainError(f"legendre_p: need -1 < u <= 1, got {u!r}")
    return _legendre_p_zs(nu, 0.5 * (1.0 - u), 0.5 * (1.0 + u), ctl)


def legendre_p_complex(nu: float, u: complex, ctl: SeriesControl = DEFAULT_SERIES) -> complex:
    """P_nu(u) continued to C minus (-inf, -1] (principal branch)."""
    u = complex(u)
    if u.imag == 0.0 and u.real <= -1.0:
        raise DomainError("legendre_p_complex: u on the cut (-inf, -1]")
    z = 0.5 * (1.0 - u)
    s = 0.5 * (1.0 + u)
    if _is_integer(nu):
        return complex(_legendre_poly(int(nu), z))
    if abs(z) <= 0.5:
        return hyp2f1(-nu, nu + 1.0, 1.0, z, ctl)
    if abs(s) < 0.75:
        pref = -math.sin(math.pi * nu) / math.pi
        return pref * _balanced_sum(-nu, nu + 1.0, s, cmath.log(s), ctl)
    return hyp2f1(-nu, nu + 1.0, 1.0, z, ctl)


def _check_q_degree(nu):
    if _is_nonpositive_integer((nu + 1.0) / 2.0) or _is_nonpositive_integer(nu + 1.5):
        raise PoleError(f"Q_nu undefined for nu={nu!r} in this normalisation")
    if nu <= -1.5:
        raise DomainError(f"Q_nu supported for nu > -3/2, got {nu!r}")


def _q_prefactor(nu):
    a = 0.5 * (nu + 1.0)
    lg = math.lgamma(a) + math.lgamma(a + 0.5) - math.lgamma(nu + 1.5)
    sign = _sp.gammasgn(a) * _sp.gammasgn(a + 0.5) * _sp.gammasgn(nu + 1.5)
    return 0.5 * sign * math.exp(lg)


def _legendre_q_real(nu, w, wm1, ctl: SeriesControl = DEFAULT_SERIES):
    """Q_nu(w) for real w > 1, with wm1 = w - 1 supplied at full precision."""
    a = 0.5 * (nu + 1.0)
    if w >= Q_SERIES_THRESHOLD:
        return _q_prefactor(nu) * w ** (-nu - 1.0) * hyp2f1(a, a + 0.5, nu + 1.5, 1.0 / (w * w), ctl)
    s = wm1 * (w + 1.0) / (w * w)  # 1 - 1/w^2
    # Gamma prefactors of Q and of the connection formula cancel exactly
    return 0.5 * w ** (-nu - 1.0) * _balanced_sum(a, a + 0.5, s, math.log(s), ctl)


def legendre_q(nu: float, w: float, ctl: SeriesControl = DEFAULT_SERIES) -> float:
    """Legendre function of the second kind for real w > 1."""
    w = float(w)
    if not w > 1.0 or not math.isfinite(w):
        raise DomainError(f"legendre_q: need finite w > 1, got {w!r}")
    _check_q_degree(nu)
    return _legendre_q_real(nu, w, w - 1.0, ctl)


def legendre_q_complex(nu: float, w: complex, ctl: SeriesControl = DEFAULT_SERIES) -> complex:
    """Q_nu(w) on C minus (-inf, 1], principal branch of w^(-nu-1).

    Three routes:
      * |1/w^2| <= 0.6: defining series in 1/w^2;
      * |1 - 1/w^2| < 0.8: balanced connection formula (log(1 - 1/w^2));
      * otherwise, for non-integer nu and w off the real axis,
        Q = pi/(2 sin(nu pi)) [exp(-+i nu pi) P_nu(w) - P_nu(-w)], which covers
        the region around the segment [-1, 1].
    On the cut (-inf, -1) the sign of the imaginary zero selects the side.
    """
    w = complex(w)
    _check_q_degree(nu)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise DomainError("legendre_q_complex: non-finite argument")
    if w.imag == 0.0 and -1.0 <= w.real <= 1.0:
        raise DomainError(f"legendre_q_complex: w={w!r} on the cut [-1, 1]")
    a = 0.5 * (nu + 1.0)
    zeta = 1.0 / (w * w)
    powr = cmath.exp(-(nu + 1.0) * cmath.log(w))
    if abs(zeta) <= 0.6:
        return _q_prefactor(nu) * powr * hyp2f1(a, a + 0.5, nu + 1.5, zeta, ctl)
    s = (w - 1.0) * (w + 1.0) * zeta
    if abs(s) < 0.8:
        return 0.5 * powr * _balanced_sum(a, a + 0.5, s, cmath.log(s), ctl)
    if not _is_integer(nu) and w.imag != 0.0:
        side = 1.0 if w.imag > 0.0 else -1.0
        p_plus = legendre_p_complex(nu, w, ctl)
        p_minus = legendre_p_complex(nu, -w, ctl)
        return math.pi / (2.0 * math.sin(nu * math.pi)) * (
            cmath.exp(-side * 1j * nu * math.pi) * p_plus - p_minus
        )
    if abs(zeta) < 1.0:
        return _q_prefactor(nu) * powr * hyp2f1(a, a + 0.5, nu + 1.5, zeta, ctl)
    raise DomainError(f"legendre_q_complex: no supported route at w={w!r}, nu={nu!r}")


# below this |w| the normalised Bessel series is summed directly
_BESSEL_SERIES_MAX = 4.0


def bessel_j_normalized(nu, w):
    """J~_nu(w) = sum_m (-1)^m / (Gamma(m+nu+1) m!) (w/2)^(2m) = (w/2)^(-nu) J_nu(w).

    Even in w. Direct series for |w| <= 4; beyond that the ordinary Bessel
    function from scipy, rescaled. Accepts scalars or arrays.
    """
    if nu <= -1.0:
        raise DomainError(f"bessel_j_normalized: need nu > -1, got {nu!r}")
    w_arr = np.abs(np.asarray(w, dtype=float))
    out = np.empty_like(w_arr)
    small = w_arr <= _BESSEL_SERIES_MAX
    if np.any(small):
        q = -(0.5 * w_arr[small]) ** 2
        term = np.full_like(q, _sp.rgamma(nu + 1.0))
        total = term.copy()
        for m in range(1, 60):
            term = term * q / (m * (m + nu))
            total += term
            if np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(total), 1e-300)):
                break
        out[small] = total
    big = ~small
    if np.any(big):
        wb = w_arr[big]
        out[big] = _sp.jv(nu, wb) * (0.5 * wb) ** (-nu)
    if np.ndim(w) == 0:
        return float(out)
    return out


def laguerre(ell: int, alpha: float, x):
    """Generalised Laguerre polynomial L_ell^(alpha)(x) by the three-term recurrence."""
    if ell < 0:
        raise ValueError("laguerre: degree must be nonnegative")
    if alpha <= -1.0:
        raise DomainError(f"laguerre: need alpha > -1, got {alpha!r}")
    x_arr = np.asarray(x, dtype=float)
    prev = np.ones_like(x_arr)
    if ell == 0:
        return float(prev) if np.ndim(x) == 0 else prev
    cur = 1.0 + alpha - x_arr
    for n in range(1, ell):
        prev, cur = cur, ((2 * n + 1 + alpha - x_arr) * cur - (n + alpha) * prev) / (n + 1)
    return float(cur) if np.ndim(x) == 0 else cur
