"""The conjugated Dunkl operator D_b f(x) = f'(x) - (b/x) f(-x) and its kernels.

Everything here is parametrised by the deformation parameter b > -1/2:

* the eigenbasis phi_l of D_b^2 - x^2 (Laguerre-Gaussian functions times |x|^b),
  truncated expansions in it, and the three-term actions of D_b and x;
* the Dunkl transform kernel B_b(xi, x) and the transform itself;
* the kernel chain Psi_b -> Phi_b -> K_b, where K_b(x, y; t) is the jump of
  |x|^b |y|^b Phi_b across the real t-axis and is piecewise Legendre.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

import numpy as np

from . import specfun as sf
from .quad import DEFAULT_QUAD, ENVELOPE_RADIUS, QuadratureSpec, _complex_integrate, jacobi_rule

__all__ = [
    "check_b",
    "EigenCoefficients",
    "eigenbasis_table",
    "eigenfunction_eval",
    "apply_Db_pointwise",
    "apply_Db_coeffs",
    "apply_x_coeffs",
    "dunkl_kernel_B",
    "dunkl_transform",
    "psi_b",
    "phi_b",
    "phi_weighted",
    "RegionTag",
    "KernelValue",
    "region_classify",
    "kernel_K",
    "DEFAULT_TIE_TOL",
]

DEFAULT_TIE_TOL = 1e-9


def check_b(b: float) -> float:
    b = float(b)
    if not (math.isfinite(b) and b > -0.5):
        raise ValueError(f"deformation parameter must satisfy b > -1/2, got {b!r}")
    return b


def _abs_pow(x, p):
    """|x|^p elementwise; |0|^p is inf for p < 0 and 1 for p == 0."""
    with np.errstate(divide="ignore"):
        return np.abs(np.asarray(x, dtype=float)) ** p


# ---------------------------------------------------------------------------
# eigenbasis


def _laguerre_table(n: int, alpha: float, s: np.ndarray) -> np.ndarray:
    """Rows L_0^(alpha)(s) .. L_{n-1}^(alpha)(s)."""
    out = np.empty((max(n, 1),) + s.shape)
    out[0] = 1.0
    if n > 1:
        out[1] = 1.0 + alpha - s
    for k in range(1, n - 1):
        out[k + 1] = ((2 * k + 1 + alpha - s) * out[k] - (k + alpha) * out[k - 1]) / (k + 1)
    return out[:n]


def eigenbasis_table(b: float, n: int, x, derivative: bool = False) -> np.ndarray:
    """Smooth factors phi_l(x) / |x|^b for l < n, shape (n,) + x.shape.

    With ``derivative=True`` the rows are instead phi_l'(x) / |x|^b (x != 0).
    """
    b = check_b(b)
    x = np.asarray(x, dtype=float)
    s = x * x
    env = np.exp(-0.5 * s)
    n_even = (n + 1) // 2
    n_odd = n // 2
    lag_e = _laguerre_table(n_even, b - 0.5, s)
    lag_o = _laguerre_table(max(n_odd, 1), b + 0.5, s)
    out = np.empty((n,) + x.shape)
    if not derivative:
        out[0::2] = env * lag_e
        out[1::2] = (x * env) * lag_o[:n_odd]
        return out
    # L_l^(a)'(s) = -L_{l-1}^(a+1)(s)
    dlag_e = np.zeros_like(lag_e)
    if n_even > 1:
        dlag_e[1:] = -_laguerre_table(n_even - 1, b + 0.5, s)
    dlag_o = np.zeros_like(lag_o)
    if n_odd > 1:
        dlag_o[1:] = -_laguerre_table(n_odd - 1, b + 1.5, s)
    with np.errstate(divide="ignore", invalid="ignore"):
        out[0::2] = env * ((b / x - x) * lag_e + 2.0 * x * dlag_e)
    out[1::2] = env * ((b + 1.0 - s) * lag_o[:n_odd] + 2.0 * s * dlag_o[:n_odd])
    return out


def eigenfunction_eval(b: float, ell: int, x):
    """phi_ell(x) = |x|^b e^{-x^2/2} L^(b-+1/2)(x^2) (times x for odd ell).

    At x = 0 with b < 0 the even functions diverge; the value returned there
    is +inf, and integrators must treat the origin as an endpoint singularity.
    """
    if ell < 0:
        raise ValueError("eigenfunction index must be nonnegative")
    smooth = eigenbasis_table(b, ell + 1, x)[ell]
    with np.errstate(invalid="ignore"):
        val = _abs_pow(x, b) * smooth
    if np.ndim(x) == 0:
        return float(val)
    return val


@dataclass(frozen=True)
class EigenCoefficients:
    """f(y) = sum_l c_l phi_l(y) for a fixed b; immutable after construction.

    ``truncated`` records that an operator application dropped a term above
    the top index.
    """

    b: float
    coeffs: np.ndarray
    truncated: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "b", check_b(self.b))
        c = np.array(self.coeffs, dtype=float).reshape(-1)
        if c.size < 1:
            raise ValueError("need at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_pairs(cls, b: float, pairs: Union[Mapping[int, float], Iterable]) -> "EigenCoefficients":
        items = pairs.items() if isinstance(pairs, Mapping) else pairs
        items = [(int(k), float(v)) for k, v in items]
        if not items:
            raise ValueError("empty coefficient specification")
        n = max(k for k, _ in items) + 1
        c = np.zeros(n)
        for k, v in items:
            if k < 0:
                raise ValueError("eigenfunction index must be nonnegative")
            c[k] += v
        return cls(b, c)

    @classmethod
    def basis(cls, b: float, ell: int, n: int | None = None) -> "EigenCoefficients":
        c = np.zeros(max(ell + 1, n or 0))
        c[ell] = 1.0
        return cls(b, c)

    @property
    def N(self) -> int:
        return self.coeffs.size

    def padded(self, n: int) -> "EigenCoefficients":
        if n <= self.N:
            return self
        return EigenCoefficients(self.b, np.concatenate([self.coeffs, np.zeros(n - self.N)]))

    def trimmed(self, tol: float = 0.0) -> "EigenCoefficients":
        nz = np.nonzero(np.abs(self.coeffs) > tol)[0]
        top = (nz[-1] + 1) if nz.size else 1
        return EigenCoefficients(self.b, self.coeffs[:top])

    def smooth_part(self, x):
        """f(x) / |x|^b, finite everywhere."""
        return np.tensordot(self.coeffs, eigenbasis_table(self.b, self.N, x), axes=1)

    def __call__(self, x):
        with np.errstate(invalid="ignore"):
            val = _abs_pow(x, self.b) * self.smooth_part(x)
        return float(val) if np.ndim(x) == 0 else val

    def derivative(self, x):
        """Analytic f'(x) for x != 0."""
        d = np.tensordot(self.coeffs, eigenbasis_table(self.b, self.N, x, derivative=True), axes=1)
        val = _abs_pow(x, self.b) * d
        return float(val) if np.ndim(x) == 0 else val

    def __add__(self, other: "EigenCoefficients") -> "EigenCoefficients":
        if not isinstance(other, EigenCoefficients) or other.b != self.b:
            return NotImplemented
        n = max(self.N, other.N)
        return EigenCoefficients(self.b, self.padded(n).coeffs + other.padded(n).coeffs)

    def __mul__(self, k: float) -> "EigenCoefficients":
        return EigenCoefficients(self.b, float(k) * self.coeffs)

    __rmul__ = __mul__


def apply_Db_pointwise(b: float, f, x: float, h: float | None = None) -> float:
    """(D_b f)(x) = f'(x) - (b/x) f(-x).

    ``f'`` is analytic for EigenCoefficients and a central difference with
    step h = 1e-5 * max(1, |x|) otherwise.
    """
    b = check_b(b)
    x = float(x)
    if x == 0.0:
        raise ValueError("D_b is singular at x = 0")
    if isinstance(f, EigenCoefficients):
        return f.derivative(x) - b / x * f(-x)
    if h is None:
        h = 1e-5 * max(1.0, abs(x))
    return (f(x + h) - f(x - h)) / (2.0 * h) - b / x * f(-x)


def _three_term(c: EigenCoefficients, extend: bool, sign_low_even: float, sign_high_odd: float):
    b = c.b
    n = c.N
    out = np.zeros(n + 1)
    for k, ck in enumerate(c.coeffs):
        if ck == 0.0:
            continue
        ell, odd = divmod(k, 2)
        if not odd:
            # phi_{2l} -> phi_{2l+1} (coef +-1) and phi_{2l-1} (coef -1)
            out[k + 1] += sign_low_even * ck
            if k >= 1:
                out[k - 1] -= ck
        else:
            out[k + 1] += sign_high_odd * (ell + 1) * ck
            out[k - 1] += (ell + 0.5 + b) * ck
    if extend:
        return EigenCoefficients(b, out)
    return EigenCoefficients(b, out[:n], truncated=bool(out[n] != 0.0))


def apply_Db_coeffs(c: EigenCoefficients, extend: bool = False) -> EigenCoefficients:
    """Coefficients of D_b f from those of f.

        D_b phi_{2l}   = -phi_{2l+1} - phi_{2l-1}
        D_b phi_{2l+1} = (l+1) phi_{2l+2} + (l + 1/2 + b) phi_{2l}

    The result keeps length N (flagging a dropped top term) unless
    ``extend`` is set, in which case it has length N+1 and is exact.
    """
    return _three_term(c, extend, -1.0, 1.0)


def apply_x_coeffs(c: EigenCoefficients, extend: bool = False) -> EigenCoefficients:
    """Coefficients of x f(x):  x phi_{2l} = phi_{2l+1} - phi_{2l-1},
    x phi_{2l+1} = -(l+1) phi_{2l+2} + (l + 1/2 + b) phi_{2l}."""
    return _three_term(c, extend, 1.0, -1.0)


# ---------------------------------------------------------------------------
# Dunkl transform


def _bessel_pair(b: float, w):
    """2^{-b-1/2} (J~_{b-1/2}(w) - i (w/2) J~_{b+1/2}(w)); B_b = |xi|^b |x|^b * this."""
    w = np.asarray(w, dtype=float)
    pair = sf.bessel_j_normalized(b - 0.5, w) - 0.5j * w * sf.bessel_j_normalized(b + 0.5, w)
    return 2.0 ** (-b - 0.5) * pair


def dunkl_kernel_B(b: float, xi, x):
    """B_b(xi, x) = 2^{-b-1/2} |xi|^b |x|^b (J~_{b-1/2}(xi x) - i (xi x / 2) J~_{b+1/2}(xi x))."""
    b = check_b(b)
    xi = np.asarray(xi, dtype=float)
    x = np.asarray(x, dtype=float)
    with np.errstate(invalid="ignore"):
        val = _abs_pow(xi, b) * _abs_pow(x, b) * _bessel_pair(b, xi * x)
    return complex(val) if val.ndim == 0 else val


def _symmetric_rule(b: float, nodes: int, radius: float):
    """Nodes on [-R, R] with weights absorbing |y|^{2b}."""
    y, w = jacobi_rule(nodes, 2.0 * b, radius)
    return np.concatenate([-y[::-1], y]), np.concatenate([w[::-1], w])


def dunkl_transform(f, xi, b: float | None = None, quad: QuadratureSpec = DEFAULT_QUAD,
                    inverse: bool = False, nodes: int = 200, radius: float = ENVELOPE_RADIUS):
    """F_b f(xi) = int B_b(xi, x) f(x) dx (``inverse``: conjugate kernel).

    EigenCoefficients inputs use a Gauss-Jacobi rule on each half-line with
    the |x|^{2b} weight factored out (the rest of the integrand is smooth);
    plain callables (with ``b`` given) go through adaptive quadrature.
    Integration is truncated at |x| <= radius.
    """
    scalar = np.ndim(xi) == 0
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
    if isinstance(f, EigenCoefficients):
        b = f.b
        y, w = _symmetric_rule(b, nodes, radius)
        pair = _bessel_pair(b, np.outer(xi_arr, y))
        if inverse:
            pair = np.conj(pair)
        out = _abs_pow(xi_arr, b) * (pair @ (w * f.smooth_part(y)))
    else:
        if b is None:
            raise ValueError("dunkl_transform: b is required for callable inputs")
        b = check_b(b)
        out = np.empty(xi_arr.shape, dtype=complex)
        for i, xv in enumerate(xi_arr):
            def integrand(x, xv=xv):
                k = dunkl_kernel_B(b, xv, x)
                return (np.conj(k) if inverse else k) * f(x)
            total = 0.0j
            for lo, hi in ((-radius, 0.0), (0.0, radius)):
                total += _complex_integrate(integrand, lo, hi, quad)[0]
            out[i] = total
    return complex(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Psi_b, Phi_b


def psi_b(b: float, w):
    """Psi_b(w) = b w^b (Q_{b-1}(w) - Q_b(w)) for real w > 1 or complex |w| > 1."""
    b = check_b(b)
    if isinstance(w, complex):
        if abs(w) <= 1.0:
            raise sf.DomainError(f"psi_b: need |w| > 1, got {w!r}")
        if b == 0.0:
            return 1.0 + 0.0j
        return b * cmath.exp(b * cmath.log(w)) * (
            sf.legendre_q_complex(b - 1.0, w) - sf.legendre_q_complex(b, w)
        )
    w = float(w)
    if not w > 1.0:
        raise sf.DomainError(f"psi_b: need w > 1, got {w!r}")
    if b == 0.0:
        return 1.0
    return b * w ** b * (sf.legendre_q(b - 1.0, w) - sf.legendre_q(b, w))


def phi_b(b: float, x: float, y: float, z: complex) -> complex:
    """Phi_b(x, y; z) = ((x^2+y^2-z^2)/2)^{-b} Psi_b((x^2+y^2-z^2)/(2xy)), principal powers."""
    b = check_b(b)
    if x == 0 or y == 0:
        raise ValueError("phi_b needs xy != 0")
    half = 0.5 * (x * x + y * y - complex(z) ** 2)
    w = half / (x * y)
    if abs(w) <= 1.0:
        raise sf.DomainError(f"phi_b: |(x^2+y^2-z^2)/(2xy)| = {abs(w):.3g} <= 1")
    return cmath.exp(-b * cmath.log(half)) * psi_b(b, w)


def phi_weighted(b: float, x: float, y: float, z: complex) -> complex:
    """|x|^b |y|^b Phi_b(x, y; z) = b {Q_{b-1}(u) - sgn(xy) Q_b(u)}, u = (x^2+y^2-z^2)/(2|x||y|).

    Evaluated through the complex Q engine, so u may also lie inside the
    unit disk as long as it is off the real segment [-1, 1].
    """
    b = check_b(b)
    if x == 0 or y == 0:
        raise ValueError("phi_weighted needs xy != 0")
    if b == 0.0:
        return 1.0 + 0.0j
    u = (x * x + y * y - complex(z) ** 2) / (2.0 * abs(x) * abs(y))
    sgn = 1.0 if (x > 0) == (y > 0) else -1.0
    return b * (sf.legendre_q_complex(b - 1.0, u) - sgn * sf.legendre_q_complex(b, u))


# ---------------------------------------------------------------------------
# explicit kernel


class RegionTag(enum.Enum):
    INNER = "INNER"        # |t| < ||x| - |y||
    MIDDLE = "MIDDLE"      # ||x| - |y|| < |t| < |x| + |y|
    OUTER = "OUTER"        # |x| + |y| < |t|
    BOUNDARY = "BOUNDARY"  # within the tie tolerance of a region edge


@dataclass(frozen=True)
class KernelValue:
    value: float
    region: RegionTag
    u: float
    sgn_t: int
    sgn_xy: int


def region_classify(x: float, y: float, t: float, tie_tol: float = DEFAULT_TIE_TOL) -> RegionTag:
    """Region of (x, y, t); ties are measured in |t| relative to |x| + |y|."""
    if x == 0 or y == 0 or t == 0:
        raise ValueError("region_classify needs xyt != 0")
    ax, ay, at = abs(x), abs(y), abs(t)
    scale = tie_tol * (ax + ay)
    lo, hi = abs(ax - ay), ax + ay
    if abs(at - lo) <= scale or abs(at - hi) <= scale:
        return RegionTag.BOUNDARY
    if at < lo:
        return RegionTag.INNER
    if at < hi:
        return RegionTag.MIDDLE
    return RegionTag.OUTER


_TINY = np.finfo(float).tiny


def _middle_bracket(b, ax, ay, at, sgn_xy):
    """(1/2){-P_{b-1}(u) + sgn(xy) P_b(u)} with (1 -+ u)/2 formed without cancellation."""
    four_ab = 4.0 * ax * ay
    d = abs(ax - ay)
    # both are >= 0 inside MIDDLE; clamp rounding at the region edges
    z = max((at - d) * (at + d) / four_ab, _TINY)          # (1 - u)/2
    s = max((ax + ay - at) * (ax + ay + at) / four_ab, _TINY)  # (1 + u)/2
    return 0.5 * (-sf._legendre_p_zs(b - 1.0, z, s) + sgn_xy * sf._legendre_p_zs(b, z, s))


def _outer_bracket(b, ax, ay, at, sgn_xy):
    """-(sin(b pi)/pi){Q_{b-1}(-u) + sgn(xy) Q_b(-u)}."""
    two_ab = 2.0 * ax * ay
    w = (at * at - ax * ax - ay * ay) / two_ab        # -u
    wm1 = max((at - ax - ay) * (at + ax + ay) / two_ab, _TINY)    # -u - 1
    q = sf._legendre_q_real(b - 1.0, w, wm1) + sgn_xy * sf._legendre_q_real(b, w, wm1)
    return -math.sin(b * math.pi) / math.pi * q


def kernel_K(b: float, x: float, y: float, t: float, tie_tol: float = DEFAULT_TIE_TOL) -> KernelValue:
    """K_b(x, y; t): zero in INNER, Legendre P in MIDDLE, Legendre Q in OUTER.

    BOUNDARY triples are rejected; pass ``tie_tol=0`` to classify purely by
    strict inequalities.
    """
    b = check_b(b)
    region = region_classify(x, y, t, tie_tol)
    if region is RegionTag.BOUNDARY:
        raise ValueError(f"kernel_K evaluated on a region boundary at (x, y, t) = ({x}, {y}, {t})")
    ax, ay, at = abs(x), abs(y), abs(t)
    u = (ax * ax + ay * ay - at * at) / (2.0 * ax * ay)
    sgn_t = 1 if t > 0 else -1
    sgn_xy = 1 if (x > 0) == (y > 0) else -1
    if region is RegionTag.INNER or b == 0.0:
        value = 0.0
    elif region is RegionTag.MIDDLE:
        value = b * sgn_t * _middle_bracket(b, ax, ay, at, sgn_xy)
    else:
        value = b * sgn_t * _outer_bracket(b, ax, ay, at, sgn_xy)
    return KernelValue(value, region, u, sgn_t, sgn_xy)
