"""e^{tD_b} f(x) by the real-variable formula.

For x(x+t) != 0,

    e^{tD_b} f(x) = c_b f(x+t) + p.v. int_{||x|-|y|| < |t|} K_b(x, y; t) f(y) / (x+t-y) dy,

with c_b = 1 when x(x+t) > 0 and cos(b pi) otherwise. The dependence region
splits, on each half-line, into an OUTER piece |y| < |t|-|x| (Legendre Q) and
a MIDDLE piece ||t|-|x|| < |y| < |t|+|x| (Legendre P). The pole y = x+t is
an endpoint of a MIDDLE piece, where K_b vanishes linearly, unless
x(x+t) < 0; then it sits at the OUTER/MIDDLE junction and the integral is a
genuine principal value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from . import specfun as sf
from .dunkl import (
    EigenCoefficients,
    RegionTag,
    _middle_bracket,
    _outer_bracket,
    check_b,
    kernel_K,
    phi_b,
    region_classify,
)
from .quad import DEFAULT_QUAD, QuadratureSpec, integrate, integrate_algebraic, integrate_pv

__all__ = [
    "EvolutionRequest",
    "EvolutionResult",
    "Piece",
    "expanded_intervals",
    "evolve",
    "evolve_request",
    "evolve_direct",
    "evolve_at_zero",
    "JumpRow",
    "JumpReport",
    "boundary_value_diagnostic",
    "finite_propagation_check",
    "DEFAULT_EPS",
    "evolution_norm",
    "evolved_coefficients",
]

Func = Union[EigenCoefficients, Callable[[float], float]]

DEFAULT_EPS = (1e-2, 1e-3, 1e-4, 1e-5)


def _resolve_b(f: Func, b: float | None) -> float:
    if isinstance(f, EigenCoefficients):
        if b is not None and float(b) != f.b:
            raise ValueError(f"b={b} disagrees with the coefficient set (b={f.b})")
        return f.b
    if b is None:
        raise ValueError("b is required when f is a plain callable")
    return check_b(b)


@dataclass(frozen=True)
class EvolutionRequest:
    f: Func
    t: float
    x: float
    b: float | None = None
    quad: QuadratureSpec = DEFAULT_QUAD

    def __post_init__(self):
        if not (math.isfinite(self.t) and math.isfinite(self.x)):
            raise ValueError("t and x must be finite")
        object.__setattr__(self, "b", _resolve_b(self.f, self.b))


@dataclass(frozen=True)
class Piece:
    """One integration interval [lo, hi] of the dependence region.

    ``branch`` is "P" (MIDDLE) or "Q" (OUTER); ``case`` is 1 (|x| > |t|),
    2 (|x| < |t|, xt > 0) or 3 (|x| < |t|, xt < 0); ``pv`` marks the piece
    whose interior contains the pole y = x+t.
    """

    lo: float
    hi: float
    branch: str
    sgn_xy: int
    case: int
    pv: bool = False

    @property
    def endpoints(self) -> tuple[float, float]:
        return (self.lo, self.hi)


@dataclass(frozen=True)
class EvolutionResult:
    value: complex | float
    delta_term: complex | float
    pv_term: complex | float
    intervals: tuple[Piece, ...] = ()
    imag_residual: float = 0.0
    error: float = 0.0


def _case(x: float, t: float) -> int:
    if abs(x) > abs(t):
        return 1
    return 2 if (x > 0) == (t > 0) else 3


def expanded_intervals(x: float, t: float) -> list[Piece]:
    """Pieces of {y : ||x|-|y|| < |t|}, split at y = 0 and at the region edges.

    Ordered by increasing y. For x(x+t) < 0 the OUTER and MIDDLE pieces on
    the pole's side are merged into a single PV piece with the pole inside.
    """
    if x == 0 or t == 0 or x + t == 0:
        raise ValueError("expanded_intervals needs x t (x+t) != 0")
    a, tt = abs(x), abs(t)
    case = _case(x, t)
    c = x + t
    pieces: list[Piece] = []
    for side in (-1, 1):
        sgn_xy = side * (1 if x > 0 else -1)
        spans = []
        if tt > a:
            spans.append((0.0, tt - a, "Q"))
        spans.append((abs(tt - a), tt + a, "P"))
        spans = [(lo, hi, br) for lo, hi, br in spans if hi > lo]
        pv_side = (x > 0) != (c > 0) and (side > 0) == (c > 0)
        if pv_side:
            lo, hi = spans[0][0], spans[-1][1]
            spans = [(lo, hi, "QP")]
        for lo, hi, br in spans:
            y0, y1 = (lo, hi) if side > 0 else (-hi, -lo)
            pieces.append(Piece(y0, y1, br, sgn_xy, case, pv_side))
    pieces.sort(key=lambda p: p.lo)
    return pieces


def _kernel_scalar(b: float, ax: float, tt: float, sgn_t: int, sgn_xy: int, split: float | None, branch: str):
    """K_b(x, y; t) as a function of y on one side, for a fixed branch."""
    pref = b * sgn_t

    def k(y: float) -> float:
        ay = abs(y)
        br = branch
        if br == "QP":
            br = "Q" if ay < split else "P"
        if br == "P":
            return pref * _middle_bracket(b, ax, ay, tt, sgn_xy)
        return pref * _outer_bracket(b, ax, ay, tt, sgn_xy)

    return k


# a special point closer than this fraction of a piece's length to one of its
# ends triggers geometric breakpoints toward that end
GRADE_RATIO = 0.05


def _graded_points(lo: float, hi: float, specials: Sequence[float]) -> list[float]:
    """Breakpoints e +- g 2^k toward each end e of [lo, hi], g = distance to the nearest other special point.

    The kernel has log singularities at +-(|t|-|x|), +-(|t|+|x|), f may carry
    |y|^b at 0, and the pole sits at x+t; when two of these nearly collide the
    integrand has structure on a scale far below the piece length.
    """
    length = hi - lo
    pts = set()
    for end, direction in ((lo, 1.0), (hi, -1.0)):
        gaps = [abs(p - end) for p in specials if p != end]
        if not gaps:
            continue
        step = min(gaps)
        if step >= GRADE_RATIO * length:
            continue
        while step < 0.5 * length:
            pts.add(end + direction * step)
            step *= 2.0
    return sorted(p for p in pts if lo < p < hi)


def _smooth_f(f: Func, b: float):
    """y -> f(y) / |y|^b as a scalar function."""
    if isinstance(f, EigenCoefficients):
        return lambda y: float(f.smooth_part(float(y)))
    return lambda y: f(y) / abs(y) ** b


def _scalar_f(f: Func):
    if isinstance(f, EigenCoefficients):
        return lambda y: f(float(y))
    return f


def evolve(f: Func, t: float, x: float, b: float | None = None,
           quad: QuadratureSpec = DEFAULT_QUAD) -> EvolutionResult:
    """e^{tD_b} f(x) via the expanded real-variable formula."""
    b = _resolve_b(f, b)
    t, x = float(t), float(x)
    fs = _scalar_f(f)
    if t == 0.0:
        v = fs(x)
        return EvolutionResult(v, v, 0.0)
    if x == 0.0 or x + t == 0.0:
        raise ValueError(f"evolve needs x(x+t) != 0, got x={x}, t={t}")
    c = x + t
    fc = fs(c)
    if b == 0.0:
        return EvolutionResult(fc, fc, 0.0)
    delta = fc if (x > 0) == (c > 0) else fc * math.cos(b * math.pi)
    complex_f = isinstance(fc, complex)
    ax, tt = abs(x), abs(t)
    sgn_t = 1 if t > 0 else -1
    pieces = expanded_intervals(x, t)
    edges = {0.0, tt - ax, ax - tt, tt + ax, -(tt + ax), c}
    total, err = 0.0, 0.0
    for p in pieces:
        k = _kernel_scalar(b, ax, tt, sgn_t, p.sgn_xy, tt - ax, p.branch)
        pts = _graded_points(p.lo, p.hi, edges)
        if p.branch == "QP":
            pts = sorted(set(pts) | {math.copysign(tt - ax, p.lo + p.hi)} - {c})
        parts = (lambda v: v.real, lambda v: v.imag) if complex_f else (lambda v: v,)
        acc = []
        for part in parts:
            def g(y, part=part):
                return k(y) * part(fs(y))
            if p.pv:
                r = integrate_pv(g, p.lo, p.hi, c, quad, pts)
            else:
                r = integrate(lambda y: g(y) / (c - y), p.lo, p.hi, quad, pts)
            acc.append(r.value)
            err += r.error
        total += complex(acc[0], acc[1]) if complex_f else acc[0]
    value = delta + total
    imag = abs(value.imag) if complex_f else 0.0
    return EvolutionResult(value, delta, total, tuple(pieces), imag, err)


def evolve_request(req: EvolutionRequest) -> EvolutionResult:
    return evolve(req.f, req.t, req.x, req.b, req.quad)


def evolve_direct(f: Func, t: float, x: float, b: float | None = None,
                  quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Same quantity from one principal-value integral over the hull of the region.

    K_b is evaluated through kernel_K (zero in INNER) and the only
    subdivision is by breakpoints at 0, +-(|t|-|x|) and +-(|t|+|x|).
    """
    b = _resolve_b(f, b)
    t, x = float(t), float(x)
    if t == 0.0 or x == 0.0 or x + t == 0.0:
        raise ValueError("evolve_direct needs t != 0 and x(x+t) != 0")
    fs = _scalar_f(f)
    c = x + t
    fc = fs(c)
    if b == 0.0:
        return fc
    delta = fc if (x > 0) == (c > 0) else fc * math.cos(b * math.pi)
    ax, tt = abs(x), abs(t)
    reach = ax + tt + 0.5
    pts = sorted({0.0, tt - ax, ax - tt, tt + ax, -(tt + ax)})

    def g(y):
        if y == 0.0:
            return 0.0
        return kernel_K(b, x, y, t, tie_tol=0.0).value * fs(y)

    return delta + integrate_pv(g, -reach, reach, c, quad, pts).value


def evolve_at_zero(f: Func, t: float, b: float | None = None,
                   quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """lim_{x -> 0+} |x|^{-b} e^{tD_b} f(x) for -1/2 < b < 0.

        -(sqrt(pi) G(b+1) / G(b+1/2)) (sin(b pi)/pi)
            * int_{-|t|}^{|t|} |t-y|^{-b-1} |t+y|^{-b} f(y) |y|^b dy

    The constant comes from Q_{b-1}(w) ~ sqrt(pi) G(b) / (G(b+1/2) (2w)^b)
    as w -> inf; it equals 2^b G(b/2+1) G((b+1)/2) / G(b+1/2).
    """
    b = _resolve_b(f, b)
    if not b < 0.0:
        raise sf.DomainError("evolve_at_zero needs -1/2 < b < 0")
    t = float(t)
    if t == 0.0:
        raise ValueError("evolve_at_zero needs t != 0")
    smooth = _smooth_f(f, b)
    tt = abs(t)
    pref = -(math.sqrt(math.pi) * math.gamma(b + 1) / math.gamma(b + 0.5)) * math.sin(b * math.pi) / math.pi
    # Fold t < 0 onto t > 0 via y -> -y: the integrand becomes |tt-y|^{-b-1} |tt+y|^{-b} f(-y) |y|^b.
    sm = smooth if t > 0 else (lambda y: smooth(-y))
    # |y|^b f(y) = |y|^{2b} * smooth(y); the algebraic factors go into the QAWS weight.
    right = integrate_algebraic(lambda y: (tt + y) ** (-b) * sm(y), 0.0, tt, 2.0 * b, -b - 1.0, quad)
    left = integrate_algebraic(lambda y: (tt - y) ** (-b - 1.0) * sm(y), -tt, 0.0, -b, 2.0 * b, quad)
    return pref * (left.value + right.value)


# ---------------------------------------------------------------------------
# boundary-value diagnostic


@dataclass(frozen=True)
class JumpRow:
    eps: float
    jump: complex
    error: float


@dataclass(frozen=True)
class JumpReport:
    b: float
    x: float
    y: float
    t: float
    region: RegionTag
    reference: float
    rows: tuple[JumpRow, ...]
    orders: tuple[float, ...]

    @property
    def final_error(self) -> float:
        return self.rows[-1].error


def _weighted_phi_literal(b, x, y, z):
    return abs(x) ** b * abs(y) ** b * phi_b(b, x, y, z)


def boundary_value_diagnostic(b: float, x: float, y: float, t: float,
                              eps_sequence: Sequence[float] = DEFAULT_EPS) -> JumpReport:
    """Tabulate -(1/2 pi i) |x|^b |y|^b [Phi_b(t + i eps) - Phi_b(t - i eps)] against K_b.

    Only OUTER and INNER triples are accepted: there the argument of Psi_b
    stays outside the unit disk for small eps. The observed order between
    consecutive eps is log(e_k / e_{k+1}) / log(eps_k / eps_{k+1}).
    """
    b = check_b(b)
    region = region_classify(x, y, t)
    if region in (RegionTag.MIDDLE, RegionTag.BOUNDARY):
        raise ValueError(f"boundary_value_diagnostic does not support {region.value} triples")
    eps_sequence = [float(e) for e in eps_sequence]
    if not eps_sequence or any(e <= 0 for e in eps_sequence):
        raise ValueError("eps_sequence must be nonempty and positive")
    ref = kernel_K(b, x, y, t).value
    rows = []
    for e in eps_sequence:
        if b == 0.0:
            jump = 0j
        else:
            up = _weighted_phi_literal(b, x, y, complex(t, e))
            dn = _weighted_phi_literal(b, x, y, complex(t, -e))
            jump = -(up - dn) / (2j * math.pi)
        rows.append(JumpRow(e, jump, abs(jump - ref)))
    orders = []
    for r0, r1 in zip(rows, rows[1:]):
        if r0.error > 0 and r1.error > 0:
            orders.append(math.log(r0.error / r1.error) / math.log(r0.eps / r1.eps))
        else:
            orders.append(math.nan)
    return JumpReport(b, x, y, t, region, ref, tuple(rows), tuple(orders))


def finite_propagation_check(f: Func, g: Func, t: float, x: float, b: float | None = None,
                             quad: QuadratureSpec = DEFAULT_QUAD) -> bool:
    """True when evolve(f) and evolve(g) agree at (t, x) within the quadrature tolerance."""
    vf = evolve(f, t, x, b, quad).value
    vg = evolve(g, t, x, b, quad).value
    return abs(vf - vg) <= quad.abs_tol + quad.rel_tol * max(abs(vf), abs(vg))


# ---------------------------------------------------------------------------
# grid-level helpers (unitarity, group law)


def _evolved_on_rule(f: EigenCoefficients, t: float, nodes: int, radius: float,
                     quad: QuadratureSpec):
    """Nodes y, weights w (absorbing |y|^{2b}) and smooth parts e^{tD_b}f(y) / |y|^b."""
    from .dunkl import _symmetric_rule

    y, w = _symmetric_rule(f.b, nodes, radius)
    vals = np.array([evolve(f, t, v, quad=quad).value for v in y])
    return y, w, vals / np.abs(y) ** f.b


def evolution_norm(f: EigenCoefficients, t: float, nodes: int = 48, radius: float = 9.0,
                   quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """L^2 norm of x -> e^{tD_b}f(x), from evolve on a Gauss-Jacobi grid."""
    _, w, g = _evolved_on_rule(f, t, nodes, radius, quad)
    return float(math.sqrt(np.sum(w * np.abs(g) ** 2)))


def evolved_coefficients(f: EigenCoefficients, t: float, N: int = 40, nodes: int = 64,
                         radius: float = 9.0, quad: QuadratureSpec = DEFAULT_QUAD) -> EigenCoefficients:
    """Project x -> e^{tD_b}f(x) (computed by evolve) onto phi_0 .. phi_{N-1}.

    c_l = <e^{tD_b}f, phi_l> / h_l by Gauss-Jacobi quadrature; the result can
    be fed back into evolve, which is how the group law is exercised.
    """
    from .dunkl import eigenbasis_table
    from .oracles import eigen_norms

    y, w, g = _evolved_on_rule(f, t, nodes, radius, quad)
    table = eigenbasis_table(f.b, N, y)
    c = table @ (w * g) / eigen_norms(f.b, N)
    return EigenCoefficients(f.b, c)
