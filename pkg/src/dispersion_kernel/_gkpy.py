"""Pure-Python adaptive Gauss-Kronrod engine and builtin integrands.

This is the fallback twin of the compiled ``_gkcore`` extension: same
15-point Kronrod / 7-point Gauss pair, same bisection order, same error
bookkeeping. Integrands are evaluated on whole panels at once with numpy.
"""

import heapq
import math

import numpy as np

from . import _rules

NODES = np.array(_rules.NODES)
WK = np.array(_rules.WEIGHTS_KRONROD)
WG = np.array(_rules.WEIGHTS_GAUSS)  # zero on Kronrod-only nodes
EPS = np.finfo(float).eps

NAME = "python"


def _panel(func, a, b):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    out = func(c + h * NODES)
    if isinstance(out, tuple):
        f, inner_err = out
    else:
        f, inner_err = out, None
    k = h * np.dot(WK, f)
    g = h * np.dot(WG, f)
    resabs = abs(h) * np.dot(WK, np.abs(f))
    diff = k - g
    err = max(abs(diff.real), abs(diff.imag)) if np.iscomplexobj(diff) else abs(diff)
    err = max(err, 50.0 * EPS * resabs)
    if inner_err is not None:
        err += abs(h) * float(np.dot(WK, inner_err))
    if not math.isfinite(err) or not np.isfinite(k):
        raise FloatingPointError(f"non-finite integrand on [{a}, {b}]")
    return complex(k) if np.iscomplexobj(k) else float(k), float(err)


def _neumaier(values):
    total = 0.0
    comp = 0.0
    for v in values:
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp


def adaptive(func, breaks, epsabs, epsrel, limit):
    """Integrate ``func`` over ``[breaks[0], breaks[-1]]``.

    ``func`` maps an array of abscissae to an array of values, or to a pair
    ``(values, inner_errors)`` when each value is itself an integral.

    Returns ``(value, error, evaluations, subdivisions, converged)``.
    """
    panels = []
    heap = []
    for a, b in zip(breaks[:-1], breaks[1:]):
        v, e = _panel(func, a, b)
        idx = len(panels)
        panels.append([a, b, v, e])
        heapq.heappush(heap, (-e, a, idx))
    evaluations = 15 * len(panels)
    total = sum(p[2] for p in panels)
    errsum = sum(p[3] for p in panels)
    subdivisions = 0
    converged = True
    while errsum > max(epsabs, epsrel * abs(total)):
        if subdivisions >= limit:
            converged = False
            break
        negerr, a, idx = heapq.heappop(heap)
        p = panels[idx]
        b = p[1]
        m = 0.5 * (a + b)
        if not (a < m < b) or (b - a) <= 4.0 * EPS * max(abs(a), abs(b)):
            converged = False
            break
        v1, e1 = _panel(func, a, m)
        v2, e2 = _panel(func, m, b)
        evaluations += 30
        subdivisions += 1
        total += v1 + v2 - p[2]
        errsum += e1 + e2 - p[3]
        p[1], p[2], p[3] = m, v1, e1
        heapq.heappush(heap, (-e1, a, idx))
        panels.append([m, b, v2, e2])
        heapq.heappush(heap, (-e2, m, len(panels) - 1))
    panels.sort(key=lambda p: p[0])
    values = [p[2] for p in panels]
    if any(isinstance(v, complex) for v in values):
        value = complex(_neumaier([complex(v).real for v in values]),
                        _neumaier([complex(v).imag for v in values]))
    else:
        value = _neumaier(values)
    error = _neumaier([p[3] for p in panels])
    return value, error, evaluations, subdivisions, converged


# ---------------------------------------------------------------------------
# builtin integrands


def _alpha_imag(ws, d2, gamma, u):
    return d2 / 3.0 * 2.0 * ws / (ws * ws + (u + 0.5 * gamma) ** 2)


def _index_imag(wm, d2m, gm, n0, u):
    return np.sqrt(1.0 + 4.0 * math.pi * n0 * _alpha_imag(wm, d2m, gm, u))


def _nonresonant(p):
    R, wa, d2a, ga, wb, d2b, gb, wm, d2m, gm, n0 = p

    def f(u):
        aa = _alpha_imag(wa, d2a, ga, u)
        ab = _alpha_imag(wb, d2b, gb, u)
        n = _index_imag(wm, d2m, gm, n0, u)
        y = n * R
        poly = u ** 4 + 2.0 * u ** 3 / y + 5.0 * u * u / y ** 2 + 6.0 * u / y ** 3 + 3.0 / y ** 4
        return aa * ab * poly * np.exp(-2.0 * y * u) / (R * R)

    return f


def _nonresonant_static(p):
    s, wa, d2a, ga, wb, d2b, gb, wm, d2m, gm, n0 = p

    def f(t):
        one_minus = 1.0 - t
        u = s * t / one_minus
        aa = _alpha_imag(wa, d2a, ga, u)
        ab = _alpha_imag(wb, d2b, gb, u)
        n = _index_imag(wm, d2m, gm, n0, u)
        return aa * ab / n ** 4 * (s / (one_minus * one_minus))

    return f


def _radial_force(p, r):
    # c/r^2 * [2 A(r)/r + mode * Q(r)/L] * envelope(r)
    c, w, L, r0, mode = p[:5]
    x2 = 1.0 / (w * r) ** 2
    a = 1.0 + 2.0 * x2 + 9.0 * x2 * x2
    bracket = 2.0 * a / r
    if mode:
        q = 1.0 + x2 + 3.0 * x2 * x2
        return c / (r * r) * (bracket + q / L) * np.exp(-(r - r0) / L)
    return c / (r * r) * bracket


def _slab_inner(p, z):
    c, w, L, r0, mode = p[:5]

    def f(theta):
        cos_t = np.cos(theta)
        r = z / cos_t
        x2 = 1.0 / (w * r) ** 2
        a = 1.0 + 2.0 * x2 + 9.0 * x2 * x2
        bracket = 2.0 * a / r
        if mode:
            q = 1.0 + x2 + 3.0 * x2 * x2
            bracket = (bracket + q / L) * np.exp(-(r - r0) / L)
        return 2.0 * math.pi * c * np.sin(theta) * bracket

    return f


def _hemisphere_inner(p, r):
    fr = _radial_force(p, r)

    def f(theta):
        return 2.0 * math.pi * r * r * fr * np.sin(theta) * np.cos(theta)

    return f


def _cap_inner(p, r):
    c, w, L, z0, mode = p[:5]
    if mode:
        x2 = 1.0 / (w * r) ** 2
        radial = c * (1.0 + x2 + 3.0 * x2 * x2) * math.exp(-r / L)
    else:
        radial = c

    def f(theta):
        return 2.0 * math.pi * radial * np.sin(theta)

    return f


def _inner_limits(kernel, p, x):
    if kernel == _rules.KERNEL_CAP:
        ratio = min(1.0, p[3] / x)
        return 0.0, math.acos(ratio)
    return 0.0, 0.5 * math.pi


_KERNELS_1D = {
    _rules.KERNEL_NONRESONANT: _nonresonant,
    _rules.KERNEL_NONRESONANT_STATIC: _nonresonant_static,
}
_KERNELS_2D = {
    _rules.KERNEL_SLAB: _slab_inner,
    _rules.KERNEL_HEMISPHERE: _hemisphere_inner,
    _rules.KERNEL_CAP: _cap_inner,
}


def integrate_kernel(kernel, params, breaks, epsabs, epsrel, limit):
    """1D integral of a builtin integrand; see ``_rules`` for layouts."""
    func = _KERNELS_1D[kernel](tuple(float(v) for v in params))
    return adaptive(func, [float(b) for b in breaks], epsabs, epsrel, limit)


def integrate_kernel2d(kernel, params, breaks, epsabs, epsrel, limit):
    """Nested 2D integral of a builtin axisymmetric integrand.

    The outer variable runs over ``breaks``; the inner (polar angle) limits
    are fixed by the kernel. Inner integrals use a tenfold tighter relative
    tolerance and their error estimates are folded into the outer panels.
    """
    p = tuple(float(v) for v in params)
    make_inner = _KERNELS_2D[kernel]
    inner_rel = 0.1 * epsrel
    counter = [0]

    def outer(xs):
        vals = np.empty(len(xs))
        errs = np.empty(len(xs))
        for i, x in enumerate(xs):
            lo, hi = _inner_limits(kernel, p, x)
            if hi <= lo:
                vals[i] = 0.0
                errs[i] = 0.0
                continue
            v, e, n, _, ok = adaptive(make_inner(p, x), [lo, hi], epsabs, inner_rel, limit)
            if not ok:
                raise _InnerFailure(x)
            counter[0] += n
            vals[i] = v
            errs[i] = e
        return vals, errs

    try:
        value, error, n_outer, nsub, ok = adaptive(
            outer, [float(b) for b in breaks], epsabs, epsrel, limit)
    except _InnerFailure:
        return math.nan, math.inf, counter[0], 0, False
    return value, error, n_outer + counter[0], nsub, ok


class _InnerFailure(Exception):
    pass
