"""Adaptive integration and differentiation engines.

All integrators use a 15-point Kronrod rule with the embedded 7-point Gauss
rule as error estimator (exact for polynomials of degree 22 per panel) and
bisect the panel with the largest error until the total error drops below
``max(abs_tol, rel_tol * |value|)``.

Callables passed to the public functions must accept a numpy array of
abscissae and return an array of the same shape (real or complex).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend, _gkpy
from .errors import InvalidParameter, QuadratureFailure, StepUnderflow
from .model import QuadratureSpec

_DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class IntegralResult:
    value: float | complex
    error_estimate: float
    evaluations: int
    converged: bool
    subdivisions: int = 0

    def __post_init__(self):
        if not self.error_estimate >= 0:
            raise InvalidParameter("error_estimate must be >= 0")


def _finish(raw, spec, extra_error=0.0, what="integral", check=True):
    value, error, evaluations, subdivisions, converged = raw
    error = error + extra_error
    if converged and not error <= max(spec.rel_tol * abs(value), spec.abs_tol):
        # the tail bound can push a converged panel sum over the target
        converged = False
    result = IntegralResult(value, error, int(evaluations), bool(converged), int(subdivisions))
    if check and not result.converged:
        raise QuadratureFailure(
            f"{what} did not converge: value={value!r}, error={error:.3g}, "
            f"subdivisions={subdivisions}", result)
    return result


def _exponential_breaks(lower, decay_scale, tail_decades):
    steps = [k for k in (1.0, 2.0, 4.0, 8.0, 16.0, 32.0) if k < tail_decades]
    return [lower] + [lower + k / decay_scale for k in steps] + [lower + tail_decades / decay_scale]


def integrate(f, a, b, spec=None, *, breaks=None, check=True):
    """Integrate ``f`` over the finite interval [a, b]."""
    spec = spec or _DEFAULT_SPEC
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise InvalidParameter("integrate needs finite limits; use integrate_semi_infinite")
    points = [a] + sorted(float(x) for x in (breaks or ()) if a < x < b) + [b]
    raw = _gkpy.adaptive(f, points, spec.abs_tol, spec.rel_tol, spec.max_subdivisions)
    return _finish(raw, spec, check=check)


def integrate_semi_infinite(f, decay_scale, spec=None, *, lower=0.0, check=True):
    """Integrate ``f`` over [lower, inf) for an integrand that decays at
    least like exp(-decay_scale * u).

    The range is cut at ``tail_decades / decay_scale`` past ``lower``; the
    discarded tail is bounded by 2 |f(cut)| / decay_scale, which is added to
    the error estimate.
    """
    spec = spec or _DEFAULT_SPEC
    decay_scale = float(decay_scale)
    if not decay_scale > 0:
        raise InvalidParameter(f"decay_scale must be > 0, got {decay_scale}")
    points = _exponential_breaks(float(lower), decay_scale, spec.tail_decades)
    raw = _gkpy.adaptive(f, points, spec.abs_tol, spec.rel_tol, spec.max_subdivisions)
    tail = 2.0 * abs(complex(np.asarray(f(np.array([points[-1]])))[0])) / decay_scale
    return _finish(raw, spec, tail, "semi-infinite integral", check)


def integrate_algebraic_tail(f, scale, spec=None, *, check=True):
    """Integrate ``f`` over [0, inf) for an integrand with power-law decay.

    Uses u = scale * t / (1 - t), which maps the half line onto [0, 1);
    ``scale`` should be the characteristic width of ``f``.
    """
    spec = spec or _DEFAULT_SPEC
    scale = float(scale)
    if not scale > 0:
        raise InvalidParameter(f"scale must be > 0, got {scale}")

    def mapped(t):
        one_minus = 1.0 - t
        return f(scale * t / one_minus) * (scale / (one_minus * one_minus))

    raw = _gkpy.adaptive(mapped, [0.0, 0.5, 1.0], spec.abs_tol, spec.rel_tol,
                         spec.max_subdivisions)
    return _finish(raw, spec, what="half-line integral", check=check)


# ---------------------------------------------------------------------------
# builtin integrands (compiled core when available)


def kernel_integral(kernel, params, breaks, spec, what):
    raw = _backend.core.integrate_kernel(
        kernel, params, breaks, spec.abs_tol, spec.rel_tol, spec.max_subdivisions)
    return _finish(raw, spec, what=what)


def kernel_semi_infinite(kernel, params, decay_scale, spec, what):
    points = _exponential_breaks(0.0, decay_scale, spec.tail_decades)
    raw = _backend.core.integrate_kernel(
        kernel, params, points, spec.abs_tol, spec.rel_tol, spec.max_subdivisions)
    edge = _gkpy._KERNELS_1D[kernel](tuple(float(p) for p in params))(np.array([points[-1]]))
    tail = 2.0 * abs(float(edge[0])) / decay_scale
    return _finish(raw, spec, tail, what)


def kernel_volume(kernel, params, breaks, spec, what):
    raw = _backend.core.integrate_kernel2d(
        kernel, params, breaks, spec.abs_tol, spec.rel_tol, spec.max_subdivisions)
    return _finish(raw, spec, what=what)


def geometric_breaks(lo, hi, ratio=2.0):
    """Breakpoints lo, lo*ratio, lo*ratio**2, ... capped at hi (lo > 0)."""
    points = [float(lo)]
    x = float(lo) * ratio
    while x < hi:
        points.append(x)
        x *= ratio
    points.append(float(hi))
    return points


# ---------------------------------------------------------------------------
# axisymmetric volumes


@dataclass(frozen=True)
class Slab:
    """Layer z_lo <= z <= z_hi of transverse radius rho_max (may be inf).

    The integrand is called as ``f(z, rho)`` with scalar z and array rho.
    An infinite layer needs z_lo > 0 (rho is mapped to z * tan(theta)).
    """

    z_lo: float
    z_hi: float
    rho_max: float = math.inf

    def __post_init__(self):
        if not self.z_hi > self.z_lo:
            raise InvalidParameter("Slab needs z_hi > z_lo")
        if not self.rho_max > 0:
            raise InvalidParameter("Slab needs rho_max > 0")
        if math.isinf(self.rho_max) and not self.z_lo > 0:
            raise InvalidParameter("an infinite Slab needs z_lo > 0")


@dataclass(frozen=True)
class CappedHalfSpace:
    """Half-space z >= z0 intersected with the ball |r| <= radius.

    The integrand is called as ``f(r, theta)`` (polar angle from +z).
    """

    z0: float
    radius: float

    def __post_init__(self):
        if not (self.z0 > 0 and self.radius > self.z0):
            raise InvalidParameter("CappedHalfSpace needs 0 < z0 < radius")


@dataclass(frozen=True)
class HemisphereShell:
    """Upper hemispherical shell r_inner <= r <= r_outer, theta <= pi/2.

    The integrand is called as ``f(r, theta)``.
    """

    r_inner: float
    r_outer: float

    def __post_init__(self):
        if not (0 < self.r_inner < self.r_outer):
            raise InvalidParameter("HemisphereShell needs 0 < r_inner < r_outer")


def _nested(outer_breaks, inner_limits, inner, spec):
    inner_rel = 0.1 * spec.rel_tol
    count = [0]

    def outer(xs):
        vals = np.empty(len(xs), dtype=complex)
        errs = np.empty(len(xs))
        for i, x in enumerate(xs):
            lo, hi = inner_limits(x)
            if hi <= lo:
                vals[i] = 0.0
                errs[i] = 0.0
                continue
            v, e, n, _, ok = _gkpy.adaptive(
                lambda y, x=x: inner(x, y), [lo, hi], spec.abs_tol, inner_rel,
                spec.max_subdivisions)
            if not ok:
                raise QuadratureFailure(f"inner integral failed at outer abscissa {x}")
            count[0] += n
            vals[i] = v
            errs[i] = e
        if not np.any(vals.imag):
            vals = vals.real
        return vals, errs

    value, error, n, nsub, ok = _gkpy.adaptive(
        outer, outer_breaks, spec.abs_tol, spec.rel_tol, spec.max_subdivisions)
    return value, error, n + count[0], nsub, ok


def integrate_volume_axisymmetric(f, domain, spec=None, *, check=True):
    """Integrate an axisymmetric integrand over a body of revolution.

    The measure 2 pi rho drho dz (slab) or 2 pi r**2 sin(theta) dr dtheta
    (spherical domains) is applied here; ``f`` is the bare density.
    """
    spec = spec or _DEFAULT_SPEC
    if isinstance(domain, Slab):
        if math.isinf(domain.rho_max):
            def inner(z, theta):
                cos_t = np.cos(theta)
                rho = z * np.tan(theta)
                return 2.0 * math.pi * rho * f(z, rho) * z / (cos_t * cos_t)

            limits = lambda z: (0.0, 0.5 * math.pi)  # noqa: E731
        else:
            def inner(z, rho):
                return 2.0 * math.pi * rho * f(z, rho)

            limits = lambda z: (0.0, domain.rho_max)  # noqa: E731
        breaks = [domain.z_lo, domain.z_hi]
        if domain.z_lo > 0:
            breaks = geometric_breaks(domain.z_lo, domain.z_hi)
    elif isinstance(domain, (CappedHalfSpace, HemisphereShell)):
        def inner(r, theta):
            return 2.0 * math.pi * r * r * np.sin(theta) * f(r, theta)

        if isinstance(domain, CappedHalfSpace):
            limits = lambda r: (0.0, math.acos(min(1.0, domain.z0 / r)))  # noqa: E731
            breaks = geometric_breaks(domain.z0, domain.radius)
        else:
            limits = lambda r: (0.0, 0.5 * math.pi)  # noqa: E731
            breaks = geometric_breaks(domain.r_inner, domain.r_outer)
    else:
        raise InvalidParameter(f"unsupported domain {domain!r}")
    raw = _nested(breaks, limits, inner, spec)
    return _finish(raw, spec, what="volume integral", check=check)


# ---------------------------------------------------------------------------
# differentiation


@dataclass(frozen=True)
class Derivative:
    value: float
    error_estimate: float


def central_difference(f, x, step, levels=2):
    """Richardson-extrapolated central difference of a scalar function.

    Central differences with steps step, step/2, ..., step/2**(levels-1) are
    combined in a Richardson tableau (error expansion in even powers of the
    step). The error estimate is the change between the last two
    extrapolation orders.
    """
    x = float(x)
    step = float(step)
    if levels < 2:
        raise InvalidParameter("levels must be >= 2")
    if not step >= 1e3 * np.finfo(float).eps * abs(x) or step <= 0:
        raise StepUnderflow(f"step {step:g} too small for x = {x:g}")
    rows = []
    h = step
    for _ in range(levels):
        d = (f(x + h) - f(x - h)) / (2.0 * h)
        row = [d]
        factor = 4.0
        for prev in (rows[-1] if rows else []):
            row.append(row[-1] + (row[-1] - prev) / (factor - 1.0))
            factor *= 4.0
        rows.append(row)
        h *= 0.5
    best = rows[-1][-1]
    error = abs(rows[-1][-1] - rows[-1][-2])
    return Derivative(float(best), float(error))
