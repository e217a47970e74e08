"""Resonant force on an excited atom from extended bodies of gas.

The gas is pairwise additive: the body force is n0 times the volume
integral of the radial pair force projected on the symmetry axis. As in
``pair``, forces are positive when they push the atom away from the body.

Two bodies are treated:

* a half-space z >= z0 (slab model: pair force without the absorption
  factor, integrated over one photon mean free path L of depth), and
* a hemisphere of inner radius R0 centred on the atom (exponential
  envelope, infinite outer radius).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _rules
from .errors import InvalidParameter, RegimeWarning
from .model import QuadratureSpec
from .pair import PairConfig, force_coefficient
from .quadrature import geometric_breaks, integrate, kernel_volume

VARIANTS = ("derived", "printed")


@dataclass(frozen=True)
class HalfSpaceGeometry:
    """Atom at distance z0 from a planar gas interface."""

    z0: float

    def __post_init__(self):
        if not (self.z0 > 0 and math.isfinite(self.z0)):
            raise InvalidParameter(f"z0 must be finite and > 0, got {self.z0}")


@dataclass(frozen=True)
class HemisphereGeometry:
    """Atom at the centre of a gas hemisphere with inner radius r0."""

    r0: float

    def __post_init__(self):
        if not (self.r0 > 0 and math.isfinite(self.r0)):
            raise InvalidParameter(f"r0 must be finite and > 0, got {self.r0}")


@dataclass(frozen=True)
class VolumeOracleSpec:
    """Outer truncation (in photon mean free paths) and tolerances of the
    volume quadratures."""

    radial_cutoff: float = 20.0
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)

    def __post_init__(self):
        if not self.radial_cutoff >= 5:
            raise InvalidParameter(
                f"radial_cutoff must be >= 5 mean free paths, got {self.radial_cutoff}")


@dataclass(frozen=True)
class ForceEstimate:
    """Numerical body force with its quadrature bookkeeping.

    ``transverse`` is the relative size of the force component
    perpendicular to the symmetry axis, which vanishes by symmetry.
    """

    value: float
    error_estimate: float
    evaluations: int
    transverse: float = 0.0


def _variant(variant):
    if variant not in VARIANTS:
        raise InvalidParameter(f"variant must be one of {VARIANTS}, got {variant!r}")
    return variant


def _lorentz_strength(cfg):
    """d2_A d2_B omega_B detuning / (detuning**2 + (gamma_B omega_A)**2), i.e.
    Re K / omega_A**4."""
    a, b = cfg.atom_a, cfg.atom_b
    delta = cfg.detuning
    return a.d2 * b.d2 * b.omega * delta / (delta ** 2 + (b.gamma * a.omega) ** 2)


def _transverse_residual(spec):
    # azimuthal average of cos(phi): zero for any axisymmetric density, so
    # only an absolute tolerance makes sense here
    flat = QuadratureSpec(rel_tol=spec.rel_tol, abs_tol=1e-13)
    res = integrate(np.cos, 0.0, 2.0 * math.pi, flat)
    return abs(res.value) / (2.0 * math.pi)


# ---------------------------------------------------------------------------
# planar half-space


def planar_force_closed(cfg: PairConfig, g: HalfSpaceGeometry, variant="derived") -> float:
    """Slab-model force of a half-space at distance z0.

    ``derived`` is the exact integral of the slab-model pair force over
    z0 <= z <= z0 + L:

        F = -(4 pi/9) n0 Re K [2 ln(1 + L/z0) + (1/w^2)(1/z0^2 - 1/(z0+L)^2)
                               + (3/(2 w^4))(1/z0^4 - 1/(z0+L)^4)]

    ``printed`` has the bracket ln(1 + L/z0) + (2/w^2)(...) + (3/(2w^4))(...)
    and is kept for comparison only.
    """
    _variant(variant)
    L = cfg.photon_mean_free_path()
    n0 = cfg.medium.n0
    w2 = cfg.atom_a.omega ** 2
    z0 = g.z0
    z1 = z0 + L
    log_term = math.log1p(L / z0)
    inv2 = 1.0 / z0 ** 2 - 1.0 / z1 ** 2
    inv4 = 1.0 / z0 ** 4 - 1.0 / z1 ** 4
    if variant == "derived":
        bracket = 2.0 * log_term + inv2 / w2 + 1.5 * inv4 / (w2 * w2)
    else:
        bracket = log_term + 2.0 * inv2 / w2 + 1.5 * inv4 / (w2 * w2)
    return math.pi * n0 * force_coefficient(cfg) * bracket


class PlanarRegime(enum.Enum):
    NEAR = "near"          # z0 << L and z0 << lambda
    FAR = "far"            # z0 >> L
    FAR_PRINTED = "far-printed"


def planar_force_asymptote(cfg: PairConfig, g: HalfSpaceGeometry, regime) -> float:
    """Limits of the planar force.

    NEAR: -(2 pi/3) n0 Re K / (w^4 z0^4), independent of L.
    FAR: -(8 pi/9) n0 Re K L / z0, which with the dilute mean free path is
    -(1/3) d2_A w_A^2 detuning / (gamma_B z0) and does not depend on n0.
    FAR_PRINTED: -d2_A w_B w_A^2 detuning / (3 gamma_B z0), the limit of the
    ``printed`` closed form with the printed mean free path.
    """
    regime = PlanarRegime(regime)
    n0 = cfg.medium.n0
    z0 = g.z0
    a, b = cfg.atom_a, cfg.atom_b
    if regime is PlanarRegime.NEAR:
        return -2.0 * math.pi / 3.0 * n0 * _lorentz_strength(cfg) / z0 ** 4
    if regime is PlanarRegime.FAR:
        return 2.0 * math.pi * n0 * force_coefficient(cfg) * cfg.photon_mean_free_path() / z0
    return -a.d2 * b.omega * a.omega ** 2 * cfg.detuning / (3.0 * b.gamma * z0)


def planar_force_oracle(cfg: PairConfig, g: HalfSpaceGeometry, spec=None, *,
                        physical=False) -> ForceEstimate:
    """Body force of the half-space by nested adaptive quadrature.

    The default integrates the slab-model pair force over the layer
    z0 <= z <= z0 + L with infinite transverse extent (polar angle as the
    inner variable). ``physical=True`` uses the pair force with the true
    envelope exp(-R/L) over z0 <= z <= z0 + radial_cutoff * L instead; it
    has no closed form.
    """
    spec = spec or VolumeOracleSpec()
    L = cfg.photon_mean_free_path()
    z0 = g.z0
    c = force_coefficient(cfg)
    w = cfg.atom_a.omega
    if physical:
        # envelope normalised at z0 and rescaled afterwards
        params = (c, w, L, z0, 1)
        breaks = geometric_breaks(z0, z0 + spec.radial_cutoff * L)
        scale = math.exp(-z0 / L)
    else:
        params = (c, w, L, z0, 0)
        breaks = geometric_breaks(z0, z0 + L)
        scale = 1.0
    res = kernel_volume(_rules.KERNEL_SLAB, params, breaks, spec.quad, "planar force")
    n0 = cfg.medium.n0
    return ForceEstimate(n0 * scale * res.value, n0 * scale * res.error_estimate,
                         res.evaluations, _transverse_residual(spec.quad))


# ---------------------------------------------------------------------------
# divergence of the perturbative half-space energy


@dataclass(frozen=True)
class DivergenceSeries:
    """Partial half-space energies inside balls of increasing radius."""

    cutoffs: tuple
    vacuum: tuple
    absorbing: tuple
    vacuum_exact: tuple
    vacuum_errors: tuple = ()
    absorbing_errors: tuple = ()


def divergence_demo(cfg: PairConfig, g: HalfSpaceGeometry, cutoffs) -> DivergenceSeries:
    """n0 times the volume integral of the pair potential over the part of
    the half-space z >= z0 inside a ball of radius C, for each cutoff C.

    ``vacuum`` uses the long-range perturbative resonant potential
    -(4/9) d2_A d2_B w_A^4 w_B / (detuning R^2), which grows linearly in C.
    ``absorbing`` uses the resonant potential in the absorbing medium
    (n = 1 in the polynomial, absorption factor exp(-R/L)), which converges.
    ``vacuum_exact`` is 2 pi n0 c [(C - z0) - z0 ln(C/z0)] for comparison
    and the ``*_errors`` tuples hold the quadrature error estimates.
    """
    cutoffs = tuple(float(C) for C in cutoffs)
    if not cutoffs:
        raise InvalidParameter("cutoffs must not be empty")
    if any(C <= g.z0 for C in cutoffs):
        raise InvalidParameter("every cutoff radius must exceed z0")
    if any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise InvalidParameter("cutoffs must be strictly increasing")
    n0 = cfg.medium.n0
    if not n0 > 0:
        raise InvalidParameter("divergence_demo needs a medium with n0 > 0")
    a, b = cfg.atom_a, cfg.atom_b
    w = a.omega
    c_vac = -4.0 / 9.0 * a.d2 * b.d2 * w ** 4 * b.omega / cfg.detuning
    c_abs = force_coefficient(cfg)
    L = cfg.photon_mean_free_path()
    vac, absorb, exact, vac_err, abs_err = [], [], [], [], []
    for C in cutoffs:
        breaks = geometric_breaks(g.z0, C)
        v = kernel_volume(_rules.KERNEL_CAP, (c_vac, w, L, g.z0, 0), breaks, cfg.quad,
                          "vacuum half-space energy")
        r = kernel_volume(_rules.KERNEL_CAP, (c_abs, w, L, g.z0, 1), breaks, cfg.quad,
                          "absorbing half-space energy")
        vac.append(n0 * v.value)
        absorb.append(n0 * r.value)
        vac_err.append(n0 * v.error_estimate)
        abs_err.append(n0 * r.error_estimate)
        exact.append(2.0 * math.pi * n0 * c_vac * ((C - g.z0) - g.z0 * math.log(C / g.z0)))
    return DivergenceSeries(cutoffs, tuple(vac), tuple(absorb), tuple(exact),
                            tuple(vac_err), tuple(abs_err))


# ---------------------------------------------------------------------------
# hemisphere


class HemisphereRegime(enum.Enum):
    FAR = "far"    # R0 >> L and R0 >> lambda
    NEAR = "near"  # R0 << L and R0 << lambda


def _hemisphere_window(cfg, r0, regime, factor=10.0):
    lam = cfg.atom_a.wavelength
    L = cfg.photon_mean_free_path()
    if regime is HemisphereRegime.FAR and not (r0 >= factor * L and r0 >= factor * lam):
        warnings.warn(f"far hemisphere law used at R0 = {r0:g} (L = {L:g}, lambda = {lam:g})",
                      RegimeWarning, stacklevel=3)
    if regime is HemisphereRegime.NEAR and not (r0 <= L / factor and r0 <= lam / factor):
        warnings.warn(f"near hemisphere law used at R0 = {r0:g} (L = {L:g}, lambda = {lam:g})",
                      RegimeWarning, stacklevel=3)


def hemisphere_force_closed(cfg: PairConfig, g: HemisphereGeometry, regime,
                            variant="derived") -> float:
    """Limits of the hemisphere force.

    FAR: -(4 pi/9) n0 Re K [1 + 2 L/R0] (both variants).
    NEAR, derived: -2 pi n0 d2_A d2_B w_B detuning /
    ((detuning^2 + (gamma_B w_A)^2) R0^4). NEAR, printed: the same with an
    extra factor w_A^4 detuning, which is not a force in natural units.
    """
    regime = HemisphereRegime(regime)
    _variant(variant)
    _hemisphere_window(cfg, g.r0, regime)
    n0 = cfg.medium.n0
    r0 = g.r0
    if regime is HemisphereRegime.FAR:
        L = cfg.photon_mean_free_path()
        return math.pi * n0 * force_coefficient(cfg) * (1.0 + 2.0 * L / r0)
    near = -2.0 * math.pi * n0 * _lorentz_strength(cfg) / r0 ** 4
    if variant == "printed":
        near *= cfg.atom_a.omega ** 4 * cfg.detuning
    return near


def hemisphere_force_oracle(cfg: PairConfig, g: HemisphereGeometry, spec=None) -> ForceEstimate:
    """Hemisphere force by nested quadrature of the exponential-envelope
    pair force over r0 <= r <= r0 + radial_cutoff * L, 0 <= theta <= pi/2.

    The axial projection cos(theta) with measure 2 pi r^2 sin(theta)
    integrates to pi r^2, so the result equals pi n0 int r^2 F(r) dr.
    """
    spec = spec or VolumeOracleSpec()
    L = cfg.photon_mean_free_path()
    params = (force_coefficient(cfg), cfg.atom_a.omega, L, g.r0, 1)
    breaks = geometric_breaks(g.r0, g.r0 + spec.radial_cutoff * L)
    res = kernel_volume(_rules.KERNEL_HEMISPHERE, params, breaks, spec.quad, "hemisphere force")
    n0 = cfg.medium.n0
    return ForceEstimate(n0 * res.value, n0 * res.error_estimate, res.evaluations,
                         _transverse_residual(spec.quad))
