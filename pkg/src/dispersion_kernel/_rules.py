"""Gauss-Kronrod (7, 15) rule and the builtin-integrand registry.

Both quadrature backends read their constants from here so that the panel
rule is identical.

Parameter layouts of the builtin integrands
-------------------------------------------
KERNEL_NONRESONANT (1D, variable u)
    (R, wa, d2a, ga, wb, d2b, gb, wm, d2m, gm, n0)
    alpha_a(iu) * alpha_b(iu) * u**4 / R**2 * P(n u R) * exp(-2 n u R)
    where each polarizability is (d2/3) * 2w / (w**2 + (u + g/2)**2) with a
    signed frequency w (negative for an excited atom) and n = n(iu) is the
    index of the medium species (wm, d2m, gm) at density n0.
KERNEL_NONRESONANT_STATIC (1D, variable t in [0, 1), u = s t/(1-t))
    (s, wa, d2a, ga, wb, d2b, gb, wm, d2m, gm, n0)
    alpha_a(iu) * alpha_b(iu) / n(iu)**4 * du/dt
KERNEL_SLAB (2D, outer z, inner polar angle in [0, pi/2])
    (c, w, L, r0, mode)
    axial projection of the radial force c/r**2 [2A/r + mode Q/L] env(r)
    over 2 pi rho drho, with rho = z tan(theta).
KERNEL_HEMISPHERE (2D, outer r, inner polar angle in [0, pi/2])
    (c, w, L, r0, mode)  same radial force, times 2 pi r**2 sin cos.
KERNEL_CAP (2D, outer r, inner polar angle in [0, acos(z0/r)])
    (c, w, L, z0, mode)
    2 pi r**2 sin(theta) U(r) with U = c/r**2 (mode 0) or
    c/r**2 Q(r) exp(-r/L) (mode 1).

A(r) = 1 + 2/(w r)**2 + 9/(w r)**4, Q(r) = 1 + 1/(w r)**2 + 3/(w r)**4, and
env(r) = exp(-(r - r0)/L) when mode is 1, else 1.
"""

KERNEL_NONRESONANT = 0
KERNEL_NONRESONANT_STATIC = 1
KERNEL_SLAB = 2
KERNEL_HEMISPHERE = 3
KERNEL_CAP = 4

_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)

NODES = tuple(-x for x in _XGK[:7]) + (0.0,) + tuple(reversed(_XGK[:7]))
WEIGHTS_KRONROD = _WGK[:7] + (_WGK[7],) + tuple(reversed(_WGK[:7]))
_wg_half = tuple(_WG[j // 2] if j % 2 == 1 else 0.0 for j in range(7))
WEIGHTS_GAUSS = _wg_half + (_WG[3],) + tuple(reversed(_wg_half))
