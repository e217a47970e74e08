"""Photon Green function of an infinite absorbing medium and the scalar
contractions that enter the pair potential.

The retarded dyadic at real frequency w and separation r (x = n w |r|) is

    D = w**2 [ I (1 + i/x - 1/x**2) + rr (3/x**2 - 3i/x - 1) ] exp(i x) / |r|

and satisfies (grad grad - I laplacian - eps w**2) D = 4 pi w**2 I delta(r).
The advanced function is its complex conjugate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, ZeroSeparation
from .model import Axis, ComplexFrequency, DiluteGasMedium
from .response import refractive_index


@dataclass(frozen=True)
class KernelValue:
    """Normalised contractions of the dyadic polynomial part.

    ``squared_trace`` is sum_{ij} T_ij T_ji / 2 and ``abs_squared_trace`` is
    sum_{ij} |T_ij|**2 / 2 for T = D / (w**2 exp(i x) / r).
    """

    squared_trace: complex
    abs_squared_trace: float

    def __post_init__(self):
        if not self.abs_squared_trace >= 0:
            raise InvalidParameter("abs_squared_trace must be >= 0")


def _transverse_longitudinal(x):
    a = 1.0 + 1j / x - 1.0 / (x * x)
    b = 3.0 / (x * x) - 3j / x - 1.0
    return a, a + b


def retarded_kernel_polynomials(x):
    """Return ``(P_sq, P_abs)`` for the argument x = n w R.

    P_sq = 1 + 2i/x - 5/x**2 - 6i/x**3 + 3/x**4 is half the trace of the
    squared polynomial tensor. P_abs is half its squared Frobenius norm,
    which for real x equals 1 + 1/x**2 + 3/x**4.
    """
    x = complex(x)
    if x == 0:
        raise ZeroSeparation("kernel argument x = n w R must be nonzero")
    inv = 1.0 / x
    p_sq = 1.0 + inv * (2j + inv * (-5.0 + inv * (-6j + inv * 3.0)))
    if x.imag == 0:
        inv2 = inv.real * inv.real
        p_abs = 1.0 + inv2 + 3.0 * inv2 * inv2
    else:
        t, l = _transverse_longitudinal(x)
        p_abs = abs(t) ** 2 + 0.5 * abs(l) ** 2
    return p_sq, float(p_abs)


def kernel_value(x):
    p_sq, p_abs = retarded_kernel_polynomials(x)
    return KernelValue(p_sq, p_abs)


def dyadic_green(medium: DiluteGasMedium, f: ComplexFrequency, r_vec) -> np.ndarray:
    """Full 3x3 retarded Green tensor at real frequency ``f``."""
    if f.axis is not Axis.REAL:
        raise InvalidParameter("dyadic_green is defined on the real frequency axis")
    r_vec = np.asarray(r_vec, dtype=float)
    if r_vec.shape != (3,):
        raise InvalidParameter("r_vec must be a 3-vector")
    dist = float(np.linalg.norm(r_vec))
    if dist == 0:
        raise ZeroSeparation("Green function is singular at zero separation")
    w = f.value
    if w == 0:
        raise ZeroSeparation("Green function argument n w R vanishes at w = 0")
    n = refractive_index(medium, f).n
    x = n * w * dist
    a, diag_plus_b = _transverse_longitudinal(x)
    b = diag_plus_b - a
    rhat = r_vec / dist
    tensor = a * np.eye(3) + b * np.outer(rhat, rhat)
    return w * w * tensor * np.exp(1j * x) / dist


def dyadic_green_advanced(medium, f, r_vec):
    return np.conj(dyadic_green(medium, f, r_vec))
