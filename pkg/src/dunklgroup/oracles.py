"""Independent reference computations of e^{tD_b} f.

* ``evolve_spectral``: exponential of the tridiagonal generator in the
  orthonormal eigenbasis.
* ``evolve_transform``: F_b e^{-it xi} F_b^{-1}, both transforms done with
  Gauss-Jacobi rules that absorb the |.|^{2b} weight.
* ``half_frequency_integral``: direct quadrature of
  int_0^inf B_b(x, xi) conj(B_b(y, xi)) e^{-iz xi} d xi for Im z < 0.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy import linalg as _la
from scipy import special as _sp

from .dunkl import (
    EigenCoefficients,
    _abs_pow,
    _bessel_pair,
    _symmetric_rule,
    apply_Db_coeffs,
    check_b,
    phi_weighted,
)
from .quad import ENVELOPE_RADIUS, jacobi_rule

__all__ = [
    "TruncationWarning",
    "eigen_norms",
    "TruncatedOperator",
    "build_Db_matrix",
    "default_order",
    "evolve_spectral",
    "evolve_transform",
    "half_frequency_integral",
    "half_frequency_closed_form",
]

SPECTRAL_BUFFER = 16
SPECTRAL_MIN_ORDER = 80
TAIL_WARN = 1e-8


class TruncationWarning(UserWarning):
    pass


def eigen_norms(b: float, N: int) -> np.ndarray:
    """h_l = <phi_l, phi_l>: G(l+b+1/2)/l! for l = 2l', G(l'+b+3/2)/l'! for l = 2l'+1."""
    b = check_b(b)
    if N < 1:
        raise ValueError("N must be >= 1")
    ell = np.arange(N) // 2
    shift = np.where(np.arange(N) % 2 == 0, b + 0.5, b + 1.5)
    return np.exp(_sp.gammaln(ell + shift) - _sp.gammaln(ell + 1.0))


@dataclass(frozen=True)
class TruncatedOperator:
    """D_b on span{phi_0..phi_{N-1}} in the orthonormal basis phi_l / sqrt(h_l)."""

    b: float
    N: int
    entries: np.ndarray
    norms: np.ndarray

    @property
    def antisymmetry_residual(self) -> float:
        return float(np.max(np.abs(self.entries + self.entries.T)))

    def to_orthonormal(self, c: np.ndarray) -> np.ndarray:
        return np.sqrt(self.norms) * c

    def from_orthonormal(self, a: np.ndarray) -> np.ndarray:
        return a / np.sqrt(self.norms)


def build_Db_matrix(b: float, N: int) -> TruncatedOperator:
    """Column l holds D_b phi_l (from apply_Db_coeffs), rescaled to the orthonormal basis."""
    b = check_b(b)
    if N < 3:
        raise ValueError("N must be >= 3")
    raw = np.empty((N, N))
    for k in range(N):
        raw[:, k] = apply_Db_coeffs(EigenCoefficients.basis(b, k, N)).coeffs
    h = eigen_norms(b, N)
    s = np.sqrt(h)
    m = (s[:, None] * raw) / s[None, :]
    m.setflags(write=False)
    return TruncatedOperator(b, N, m, h)


def default_order(c: EigenCoefficients) -> int:
    return max(SPECTRAL_MIN_ORDER, c.N + SPECTRAL_BUFFER)


def evolve_spectral(b: float, t: float, c: EigenCoefficients, N: int | None = None) -> EigenCoefficients:
    """Coefficients of e^{tD_b} f from e^{tM} acting on the orthonormal coefficients.

    Warns with TruncationWarning when the top 8 orthonormal coefficients of the
    result carry more than 1e-8 of its norm.
    """
    b = check_b(b)
    if c.b != b:
        raise ValueError("coefficient set belongs to a different b")
    N = default_order(c) if N is None else int(N)
    if N < c.N:
        raise ValueError(f"N={N} is smaller than the input length {c.N}")
    op = build_Db_matrix(b, N)
    a = op.to_orthonormal(c.padded(N).coeffs)
    out = _la.expm(float(t) * op.entries) @ a
    norm = np.linalg.norm(out)
    tail = np.linalg.norm(out[-8:])
    if norm > 0 and tail > TAIL_WARN * norm:
        warnings.warn(f"spectral truncation at N={N}: tail fraction {tail / norm:.2e}", TruncationWarning)
    return EigenCoefficients(b, op.from_orthonormal(out))


def evolve_transform(b: float, t: float, f: Union[EigenCoefficients, Callable], x,
                     nodes: int = 240, radius: float = ENVELOPE_RADIUS):
    """int B_b(x, xi) e^{-it xi} (int conj(B_b(xi, y)) f(y) dy) d xi.

    The inner transform is tabulated once at the outer Gauss-Jacobi nodes;
    both integrals are truncated to [-radius, radius].
    """
    b = check_b(b)
    if isinstance(f, EigenCoefficients):
        if f.b != b:
            raise ValueError("coefficient set belongs to a different b")
        smooth_f = f.smooth_part
    else:
        def smooth_f(y):
            return np.array([f(v) for v in y]) / _abs_pow(y, b)
    y, wy = _symmetric_rule(b, nodes, radius)
    xi, wxi = y, wy
    inner = np.conj(_bessel_pair(b, np.outer(xi, y))) @ (wy * smooth_f(y))
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    outer = _bessel_pair(b, np.outer(xs, xi)) @ (wxi * np.exp(-1j * t * xi) * inner)
    out = _abs_pow(xs, b) * outer
    return complex(out[0]) if scalar else out


def half_frequency_integral(b: float, x: float, y: float, z: complex,
                            panel: float = 1.0, order: int = 24, decay: float = 40.0) -> complex:
    """int_0^inf B_b(x, xi) conj(B_b(y, xi)) e^{-iz xi} d xi, Im z < 0.

    Gauss-Jacobi (weight xi^{2b}) on the first panel, Gauss-Legendre panels
    after it, stopping where e^{Im(z) xi} < e^{-decay}.
    """
    b = check_b(b)
    z = complex(z)
    if not z.imag < 0:
        raise ValueError("half_frequency_integral needs Im z < 0")
    if z.imag > -1e-3:
        raise ValueError(f"Im z = {z.imag} decays too slowly for direct quadrature")
    top = decay / -z.imag
    n_panels = max(1, math.ceil(top / panel))
    g, gw = np.polynomial.legendre.leggauss(order)

    def smooth(xi):
        return _bessel_pair(b, x * xi) * np.conj(_bessel_pair(b, y * xi)) * np.exp(-1j * z * xi)

    j, jw = jacobi_rule(order, 2.0 * b, panel)
    total = np.sum(jw * smooth(j))
    starts = panel * np.arange(1, n_panels)
    if starts.size:
        xi = (starts[:, None] + 0.5 * panel * (1.0 + g[None, :])).ravel()
        w = np.tile(0.5 * panel * gw, starts.size)
        total += np.sum(w * xi ** (2.0 * b) * smooth(xi))
    return complex(abs(x) ** b * abs(y) ** b * total)


def half_frequency_closed_form(b: float, x: float, y: float, z: complex) -> complex:
    """(1/(2 pi i)) (1/(x+z-y)) b{Q_{b-1}(u) - sgn(xy) Q_b(u)}, u = (x^2+y^2-z^2)/(2|x||y|)."""
    z = complex(z)
    return phi_weighted(b, x, y, z) / (2j * math.pi * (x + z - y))
