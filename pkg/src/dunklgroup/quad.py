"""Quadrature: adaptive integration with endpoint singularities and Cauchy principal values."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import integrate as _si
from scipy import special as _sp

__all__ = [
    "QuadratureSpec",
    "QuadratureError",
    "QuadResult",
    "DEFAULT_QUAD",
    "integrate",
    "integrate_pv",
    "integrate_algebraic",
    "l2_inner",
    "jacobi_rule",
    "ENVELOPE_RADIUS",
]

# |x| beyond which e^{-x^2/2} < 1e-16 for every Gaussian-envelope integrand
ENVELOPE_RADIUS = 9.0


class QuadratureError(ArithmeticError):
    pass


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_subdivisions: int = 2000
    endpoint_mode: str = "singular-endpoint"
    pv_window: float = 0.25

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if self.endpoint_mode not in ("plain", "singular-endpoint"):
            raise ValueError(f"unknown endpoint_mode {self.endpoint_mode!r}")
        if self.pv_window <= 0:
            raise ValueError("pv_window must be positive")

    def with_(self, **changes) -> "QuadratureSpec":
        return replace(self, **changes)


DEFAULT_QUAD = QuadratureSpec()


class QuadResult(NamedTuple):
    value: float
    error: float


def _inner_points(a, b, points):
    if not points:
        return []
    pts = sorted({float(p) for p in points if a < p < b})
    return pts


def integrate(f: Callable[[float], float], a: float, b: float,
              spec: QuadratureSpec = DEFAULT_QUAD,
              breakpoints: Sequence[float] = ()) -> QuadResult:
    """Integrate a real scalar function over [a, b].

    ``singular-endpoint`` mode runs QUADPACK's extrapolating QAGS/QAGP, which
    copes with integrable algebraic and logarithmic singularities at the
    ends of each piece (breakpoints included); a failed piece is retried as
    two halves, up to BISECT_DEPTH levels. ``plain`` mode runs a
    non-extrapolating adaptive Gauss-Kronrod (21 points).
    """
    if not a < b:
        raise ValueError(f"integrate: need a < b, got [{a}, {b}]")
    pts = _inner_points(a, b, breakpoints)
    if spec.endpoint_mode == "plain":
        val, err, info = _si.quad_vec(
            f, a, b, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
            limit=spec.max_subdivisions, points=pts or None, full_output=True,
        )
        if not info.success:
            raise QuadratureError(f"plain quadrature did not converge on [{a}, {b}]")
        return QuadResult(float(val), float(err))
    return _qags(f, a, b, spec, pts, BISECT_DEPTH)


# QAGS extrapolation occasionally gives up on a log endpoint paired with a long
# smooth stretch; bisecting isolates each endpoint singularity.
BISECT_DEPTH = 3


def _qags(f, a, b, spec, pts, depth):
    with warnings.catch_warnings():
        warnings.simplefilter("error", _si.IntegrationWarning)
        try:
            val, err = _si.quad(
                f, a, b, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                limit=spec.max_subdivisions, points=pts or None,
            )
            return QuadResult(val, err)
        except _si.IntegrationWarning as exc:
            if depth == 0:
                raise QuadratureError(f"quadrature on [{a}, {b}] failed: {exc}") from None
    mid = pts[len(pts) // 2] if pts else 0.5 * (a + b)
    half = spec.with_(abs_tol=0.5 * spec.abs_tol)
    lo = _qags(f, a, mid, half, [p for p in pts if p < mid], depth - 1)
    hi = _qags(f, mid, b, half, [p for p in pts if p > mid], depth - 1)
    return QuadResult(lo.value + hi.value, lo.error + hi.error)


def integrate_pv(g: Callable[[float], float], a: float, b: float, c: float,
                 spec: QuadratureSpec = DEFAULT_QUAD,
                 breakpoints: Sequence[float] = ()) -> QuadResult:
    """Principal value of  int_a^b g(y) / (c - y) dy  with a < c < b.

    On the window (c - h, c + h) the two halves are folded together,

        int_0^h [g(c - s) - g(c + s)] / s ds,

    so any singular part of g that is even about c cancels; the rest of
    [a, b] is integrated normally. h is half of min(pv_window, distance from
    c to the nearest endpoint or breakpoint).
    """
    if not a < c < b:
        raise ValueError(f"integrate_pv: need a < c < b, got a={a}, c={c}, b={b}")
    pts = [p for p in _inner_points(a, b, breakpoints) if p != c]
    nearest = min([c - a, b - c] + [abs(p - c) for p in pts])
    if nearest <= 64.0 * np.finfo(float).eps * max(1.0, abs(c)):
        raise QuadratureError("principal-value window collapsed: c too close to an endpoint")
    h = 0.5 * min(spec.pv_window, nearest)

    def folded(s):
        return (g(c - s) - g(c + s)) / s

    inner = integrate(folded, 0.0, h, spec)
    left = integrate(lambda y: g(y) / (c - y), a, c - h, spec,
                     [p for p in pts if p < c - h])
    right = integrate(lambda y: g(y) / (c - y), c + h, b, spec,
                      [p for p in pts if p > c + h])
    return QuadResult(inner.value + left.value + right.value,
                      inner.error + left.error + right.error)


def integrate_algebraic(f: Callable[[float], float], a: float, b: float,
                        alpha: float, beta: float,
                        spec: QuadratureSpec = DEFAULT_QUAD) -> QuadResult:
    """int_a^b (y-a)^alpha (b-y)^beta f(y) dy for smooth f and alpha, beta > -1 (QUADPACK QAWS)."""
    if not a < b:
        raise ValueError(f"integrate_algebraic: need a < b, got [{a}, {b}]")
    if alpha <= -1 or beta <= -1:
        raise ValueError("integrate_algebraic: exponents must exceed -1")
    with warnings.catch_warnings():
        warnings.simplefilter("error", _si.IntegrationWarning)
        try:
            val, err = _si.quad(
                f, a, b, weight="alg", wvar=(alpha, beta),
                epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.max_subdivisions,
            )
        except _si.IntegrationWarning as exc:
            raise QuadratureError(f"algebraic-weight quadrature on [{a}, {b}] failed: {exc}") from None
    return QuadResult(val, err)


def _complex_integrate(f, a, b, spec, breakpoints=()):
    re = integrate(lambda x: complex(f(x)).real, a, b, spec, breakpoints)
    im = integrate(lambda x: complex(f(x)).imag, a, b, spec, breakpoints)
    return complex(re.value, im.value), math.hypot(re.error, im.error)


def l2_inner(f: Callable, g: Callable, spec: QuadratureSpec = DEFAULT_QUAD,
             radius: float = ENVELOPE_RADIUS) -> complex:
    """<f, g> = int f(x) conj(g(x)) dx over [-radius, radius], split at 0."""
    def prod(x):
        return f(x) * np.conj(g(x))

    total = 0.0 + 0.0j
    for lo, hi in ((-radius, 0.0), (0.0, radius)):
        val, _ = _complex_integrate(prod, lo, hi, spec)
        total += val
    return total


def jacobi_rule(n: int, power: float, length: float):
    """Nodes/weights for int_0^L y^power h(y) dy, exact for polynomial h of degree 2n-1.

    Gauss-Jacobi on [-1, 1] with weight (1+s)^power, mapped by y = L(1+s)/2.
    The returned weights absorb the factor y^power.
    """
    if power <= -1.0:
        raise ValueError("jacobi_rule: power must exceed -1")
    s, w = _sp.roots_jacobi(n, 0.0, power)
    y = 0.5 * length * (1.0 + s)
    return y, w * (0.5 * length) ** (power + 1.0)
