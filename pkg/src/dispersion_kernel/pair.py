"""Interaction potential of an excited atom A and a ground-state atom B
embedded in a dilute absorbing gas, its limits, and the resonant pair force.

Sign convention for forces: every force returned here is -dU/dR, the
component along the separation vector pointing from B to A. A positive
force is repulsive.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _rules
from .errors import InvalidParameter, LosslessMedium, PoleOnAxis, RegimeWarning, ZeroSeparation
from .model import (DEFAULT_DISSIMILARITY_FACTOR, ComplexFrequency, DiluteGasMedium,
                    PotentialBreakdown, QuadratureSpec, TwoLevelAtom, validate_pair)
from .quadrature import (IntegralResult, integrate, integrate_semi_infinite, kernel_integral,
                         kernel_semi_infinite)
from .response import mean_free_path, refractive_index

RESONANT_INDEX_CHOICES = ("complex", "real")


@dataclass(frozen=True)
class PairConfig:
    """R-independent parameters of a pair calculation.

    Atom A is the excited atom; its linewidth is ignored in every formula.
    ``mean_free_path`` overrides the photon absorption length used by the
    force models (the default is the dilute closed form at omega_A).
    ``resonant_index`` selects whether the resonant polynomial uses the
    complex index n(omega_A) ("complex", default) or its real part.
    """

    atom_a: TwoLevelAtom
    atom_b: TwoLevelAtom
    medium: DiluteGasMedium
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)
    resonant_index: str = "complex"
    mean_free_path: float | None = None
    dissimilarity_factor: float = DEFAULT_DISSIMILARITY_FACTOR

    def __post_init__(self):
        if not isinstance(self.medium, DiluteGasMedium):
            raise InvalidParameter("medium must be a DiluteGasMedium")
        if not isinstance(self.quad, QuadratureSpec):
            raise InvalidParameter("quad must be a QuadratureSpec")
        validate_pair(self.atom_a, self.atom_b, self.dissimilarity_factor)
        if self.resonant_index not in RESONANT_INDEX_CHOICES:
            raise InvalidParameter(
                f"resonant_index must be one of {RESONANT_INDEX_CHOICES}, "
                f"got {self.resonant_index!r}")
        if self.mean_free_path is not None:
            L = float(self.mean_free_path)
            if not (L > 0 and math.isfinite(L)):
                raise InvalidParameter(f"mean_free_path must be finite and > 0, got {L}")
            object.__setattr__(self, "mean_free_path", L)

    @property
    def detuning(self):
        """omega_B**2 - omega_A**2."""
        return self.atom_b.omega ** 2 - self.atom_a.omega ** 2

    @property
    def resonant_strength(self) -> complex:
        """d2_A d2_B omega_B omega_A**4 / (detuning - i gamma_B omega_A)."""
        a, b = self.atom_a, self.atom_b
        return (a.d2 * b.d2 * b.omega * a.omega ** 4
                / complex(self.detuning, -b.gamma * a.omega))

    @property
    def wavelengths(self):
        return self.atom_a.wavelength, self.atom_b.wavelength

    def photon_mean_free_path(self) -> float:
        if self.mean_free_path is not None:
            return self.mean_free_path
        return mean_free_path(self.medium, self.atom_a.omega).dilute

    def replace(self, **changes):
        fields = dict(atom_a=self.atom_a, atom_b=self.atom_b, medium=self.medium,
                      quad=self.quad, resonant_index=self.resonant_index,
                      mean_free_path=self.mean_free_path,
                      dissimilarity_factor=self.dissimilarity_factor)
        fields.update(changes)
        return PairConfig(**fields)

    def vacuum(self):
        """Same atoms with zero linewidths in an empty medium."""
        a = TwoLevelAtom(self.atom_a.omega, self.atom_a.d2)
        b = TwoLevelAtom(self.atom_b.omega, self.atom_b.d2)
        s = self.medium.species
        medium = DiluteGasMedium.vacuum(TwoLevelAtom(s.omega, s.d2))
        return self.replace(atom_a=a, atom_b=b, medium=medium, mean_free_path=None)


def _check_r(R):
    R = float(R)
    if R == 0:
        raise ZeroSeparation("atoms cannot sit at zero separation")
    if not (R > 0 and math.isfinite(R)):
        raise InvalidParameter(f"separation must be finite and > 0, got {R}")
    return R


def _nonresonant_params(cfg, R, omega_a_signed):
    a, b, m = cfg.atom_a, cfg.atom_b, cfg.medium
    s = m.species
    return (R, omega_a_signed, a.d2, 0.0, b.omega, b.d2, b.gamma, s.omega, s.d2, s.gamma, m.n0)


def nonresonant_term(cfg: PairConfig, R, *, ground_substitution=False):
    """Imaginary-axis part of the potential; returns an IntegralResult
    already multiplied by -1/pi."""
    R = _check_r(R)
    w_a = cfg.atom_a.omega if ground_substitution else -cfg.atom_a.omega
    res = kernel_semi_infinite(_rules.KERNEL_NONRESONANT, _nonresonant_params(cfg, R, w_a),
                               2.0 * R, cfg.quad, "nonresonant integral")
    return _scaled(res, -1.0 / math.pi)


def _scaled(res, c):
    return IntegralResult(c * res.value, abs(c) * res.error_estimate, res.evaluations,
                          res.converged, res.subdivisions)


def _resonant_index(cfg):
    n = refractive_index(cfg.medium, ComplexFrequency.real(cfg.atom_a.omega)).n
    return n


def resonant_term(cfg: PairConfig, R) -> float:
    """Resonant part of the excited-ground potential, including the
    absorption factor exp(-2 Im n(omega_A) omega_A R)."""
    R = _check_r(R)
    w = cfg.atom_a.omega
    n = _resonant_index(cfg)
    n_poly = n if cfg.resonant_index == "complex" else complex(n.real, 0.0)
    x = n_poly * w * R
    poly = 1.0 + 1.0 / (x * x) + 3.0 / (x * x) ** 2
    value = -4.0 / 9.0 * (cfg.resonant_strength * poly / (R * R)).real
    return value * math.exp(-2.0 * n.imag * w * R)


def potential_excited(cfg: PairConfig, R, *, ground_substitution=False):
    """Potential of excited atom A and ground-state atom B in the medium.

    With ``ground_substitution`` the sign of omega_A is flipped: atom A is
    treated as a ground-state atom and the resonant channel vanishes.
    Returns a PotentialBreakdown; the quadrature error of the nonresonant
    part is available through ``nonresonant_term``.
    """
    nonres = nonresonant_term(cfg, R, ground_substitution=ground_substitution).value
    res = 0.0 if ground_substitution else resonant_term(cfg, R)
    return PotentialBreakdown(float(nonres), float(res))


def potential_excited_with_error(cfg, R, *, ground_substitution=False):
    """Like ``potential_excited`` but also returns the quadrature error."""
    nr = nonresonant_term(cfg, R, ground_substitution=ground_substitution)
    res = 0.0 if ground_substitution else resonant_term(cfg, R)
    return PotentialBreakdown(float(nr.value), float(res)), nr.error_estimate


def potential_ground(cfg: PairConfig, R) -> float:
    """Ground-state pair potential (nonresonant channel only)."""
    return potential_excited(cfg, R, ground_substitution=True).total


def potential_perturbative_vacuum(cfg: PairConfig, R) -> PotentialBreakdown:
    """Fourth-order vacuum result for an excited and a ground-state atom.

    Uses lossless polarizabilities, n = 1 and the bare detuning in the
    resonant denominator. The integral runs through the generic integrator
    with a numpy integrand, independently of the builtin medium kernel.
    """
    R = _check_r(R)
    a, b = cfg.atom_a, cfg.atom_b

    def f(u):
        aa = a.d2 / 3.0 * 2.0 * (-a.omega) / (a.omega ** 2 + u * u)
        ab = b.d2 / 3.0 * 2.0 * b.omega / (b.omega ** 2 + u * u)
        ur = u * R
        # u^4 P(uR) written without negative powers of u
        poly = (ur ** 4 + 2.0 * ur ** 3 + 5.0 * ur ** 2 + 6.0 * ur + 3.0) / R ** 4
        return aa * ab * poly * np.exp(-2.0 * ur) / (R * R)

    nonres = -integrate_semi_infinite(f, 2.0 * R, cfg.quad).value / math.pi
    x = a.omega * R
    res = (-4.0 / 9.0 * a.d2 * b.d2 * b.omega * a.omega ** 4 / (cfg.detuning * R * R)
           * (1.0 + 1.0 / x ** 2 + 3.0 / x ** 4))
    return PotentialBreakdown(float(nonres), float(res))


# ---------------------------------------------------------------------------
# asymptotes


class Regime(enum.Enum):
    VDW_EXCITED = "vdw-excited"
    RETARDED_EXCITED = "retarded-excited"
    VDW_GROUND = "vdw-ground"
    RETARDED_GROUND = "retarded-ground"

    @property
    def short_range(self):
        return self in (Regime.VDW_EXCITED, Regime.VDW_GROUND)

    @property
    def excited(self):
        return self in (Regime.VDW_EXCITED, Regime.RETARDED_EXCITED)


def _static_alpha(atom):
    return 2.0 * atom.d2 / (3.0 * atom.omega)


def _check_window(cfg, R, regime, factor=10.0):
    lam_min = min(cfg.wavelengths)
    lam_max = max(cfg.wavelengths)
    if regime.short_range and R > lam_min / factor:
        warnings.warn(f"{regime.value} asymptote used at R = {R:g} > lambda_min/{factor:g}",
                      RegimeWarning, stacklevel=3)
    if not regime.short_range and R < factor * lam_max:
        warnings.warn(f"{regime.value} asymptote used at R = {R:g} < {factor:g} lambda_max",
                      RegimeWarning, stacklevel=3)


def asymptotic_limit(cfg: PairConfig, R, regime: Regime) -> float:
    """Closed-form asymptote of the potential in the given regime.

    VDW_EXCITED and RETARDED_EXCITED are the short- and long-range forms of
    the resonant channel in vacuum. VDW_GROUND is
    -(3/(pi R^6)) int alpha_A alpha_B / n^4 du and RETARDED_GROUND is
    -23 alpha_A(0) alpha_B(0) / (4 pi n(0)^5 R^7), both with the medium index.
    """
    R = _check_r(R)
    regime = Regime(regime)
    _check_window(cfg, R, regime)
    a, b = cfg.atom_a, cfg.atom_b
    if regime is Regime.VDW_EXCITED:
        return -4.0 / 3.0 * a.d2 * b.d2 * b.omega / (cfg.detuning * R ** 6)
    if regime is Regime.RETARDED_EXCITED:
        return -4.0 / 9.0 * a.d2 * b.d2 * a.omega ** 4 * b.omega / (cfg.detuning * R ** 2)
    if regime is Regime.VDW_GROUND:
        m = cfg.medium
        s = m.species
        scale = math.sqrt(a.omega * b.omega)
        params = (scale, a.omega, a.d2, 0.0, b.omega, b.d2, b.gamma, s.omega, s.d2,
                  s.gamma, m.n0)
        res = kernel_integral(_rules.KERNEL_NONRESONANT_STATIC, params, [0.0, 0.5, 1.0],
                              cfg.quad, "static-limit integral")
        return -3.0 * res.value / (math.pi * R ** 6)
    n_static = refractive_index(cfg.medium, ComplexFrequency.imaginary(0.0)).n.real
    return -23.0 * _static_alpha(a) * _static_alpha(b) / (4.0 * math.pi * n_static ** 5 * R ** 7)


@dataclass(frozen=True)
class LimitCheckRow:
    regime: Regime
    R: float
    value: float
    asymptote: float
    ratio: float
    passed: bool


def limit_check(cfg: PairConfig, *, window=100.0, tolerance=0.01):
    """Compare the potentials with their asymptotes at R = lambda_min/window
    and R = window * lambda_max.

    The excited regimes are evaluated for the resonant channel of the
    lossless vacuum pair; the ground regimes use the configured medium.
    """
    lam_min = min(cfg.wavelengths)
    lam_max = max(cfg.wavelengths)
    vac = cfg.vacuum()
    rows = []
    for regime in Regime:
        R = lam_min / window if regime.short_range else window * lam_max
        if regime.excited:
            value = potential_excited(vac, R).resonant
            asym = asymptotic_limit(vac, R, regime)
        else:
            value = potential_ground(cfg, R)
            asym = asymptotic_limit(cfg, R, regime)
        ratio = value / asym
        rows.append(LimitCheckRow(regime, R, value, asym, ratio, abs(ratio - 1.0) < tolerance))
    return rows


# ---------------------------------------------------------------------------
# resonant force models


class SlabModel:
    """Resonant potential with the absorption factor dropped and n = 1."""

    mode = 0

    def __repr__(self):
        return "SlabModel()"

    def __eq__(self, other):
        return isinstance(other, SlabModel)

    def __hash__(self):
        return hash("SlabModel")


@dataclass(frozen=True)
class Exponential:
    """Slab-model potential times exp(-(R - r0)/L), L the photon mean free
    path."""

    r0: float = 0.0
    mode = 1

    def __post_init__(self):
        if not (self.r0 >= 0 and math.isfinite(self.r0)):
            raise InvalidParameter(f"r0 must be finite and >= 0, got {self.r0}")


class MediumResonant:
    """The full resonant term: complex-index polynomial and the exact
    absorption factor exp(-2 Im n omega_A R)."""

    def __repr__(self):
        return "MediumResonant()"

    def __eq__(self, other):
        return isinstance(other, MediumResonant)

    def __hash__(self):
        return hash("MediumResonant")


def force_coefficient(cfg: PairConfig) -> float:
    """c = -(4/9) Re K of the slab-model potential U = c Q(R) / R**2."""
    return -4.0 / 9.0 * cfg.resonant_strength.real


def _a_q(w, R):
    x2 = 1.0 / (w * R) ** 2
    return 1.0 + 2.0 * x2 + 9.0 * x2 * x2, 1.0 + x2 + 3.0 * x2 * x2


def _lossy_mfp(cfg):
    try:
        return cfg.photon_mean_free_path()
    except LosslessMedium:
        raise LosslessMedium("the exponential envelope needs a finite photon mean free path "
                             "(absorbing medium or mean_free_path override)") from None


def resonant_potential_model(cfg: PairConfig, R, envelope=SlabModel()) -> float:
    """Resonant pair potential of the force model ``envelope``."""
    R = _check_r(R)
    if isinstance(envelope, MediumResonant):
        return resonant_term(cfg, R)
    c = force_coefficient(cfg)
    _, q = _a_q(cfg.atom_a.omega, R)
    u = c * q / (R * R)
    if isinstance(envelope, Exponential):
        u *= math.exp(-(R - envelope.r0) / _lossy_mfp(cfg))
    elif not isinstance(envelope, SlabModel):
        raise InvalidParameter(f"unknown envelope {envelope!r}")
    return u


def resonant_force(cfg: PairConfig, R, envelope=SlabModel()) -> float:
    """Radial resonant force -dU/dR (positive = repulsive).

    SlabModel: c (2/R^3) A(R). Exponential(r0): c/R^2 [2A/R + Q/L]
    exp(-(R - r0)/L). MediumResonant: the derivative of the full resonant
    term. Here A = 1 + 2/(wR)^2 + 9/(wR)^4, Q = 1 + 1/(wR)^2 + 3/(wR)^4 and
    c = -(4/9) Re K.
    """
    R = _check_r(R)
    w = cfg.atom_a.omega
    if isinstance(envelope, MediumResonant):
        n = _resonant_index(cfg)
        n_poly = n if cfg.resonant_index == "complex" else complex(n.real, 0.0)
        kappa = 2.0 * n.imag * w
        x2 = 1.0 / (n_poly * w * R) ** 2
        a = 1.0 + 2.0 * x2 + 9.0 * x2 * x2
        q = 1.0 + x2 + 3.0 * x2 * x2
        bracket = cfg.resonant_strength * (2.0 * a / R ** 3 + kappa * q / R ** 2)
        return -4.0 / 9.0 * bracket.real * math.exp(-kappa * R)
    c = force_coefficient(cfg)
    a, q = _a_q(w, R)
    if isinstance(envelope, SlabModel):
        return c * 2.0 * a / R ** 3
    if isinstance(envelope, Exponential):
        L = _lossy_mfp(cfg)
        return c / (R * R) * (2.0 * a / R + q / L) * math.exp(-(R - envelope.r0) / L)
    raise InvalidParameter(f"unknown envelope {envelope!r}")


# ---------------------------------------------------------------------------
# real-axis cross-check


def nonresonant_contour_check(cfg: PairConfig, R, *, gamma_a=1e-3, omega_cut=None,
                              spec=None):
    """Evaluate the nonresonant channel from its real-frequency form.

    The integrand (i/pi) alpha_eA(w) alpha_gB(w) w^4/R^2 P_sq(n w R)
    exp(2 i n w R) is integrated along [0, W] on the real axis and then up
    the vertical line W + i u, which is equivalent to the real half line
    because the integrand is analytic in the first quadrant and decays
    there. Atom A gets the small linewidth ``gamma_a`` so that the real-axis
    path avoids its pole. Returns ``(real_axis, imaginary_axis)``, both
    real parts, where the second is the imaginary-axis integral with the
    same ``gamma_a``.
    """
    R = _check_r(R)
    spec = spec or QuadratureSpec(rel_tol=1e-7)
    a, b, m = cfg.atom_a, cfg.atom_b, cfg.medium
    s = m.species
    if not (gamma_a > 0 and b.gamma > 0):
        raise PoleOnAxis("the real-axis path needs gamma_a > 0 and atom B with a linewidth")
    W = omega_cut if omega_cut is not None else 3.0 * max(a.omega, b.omega)

    def integrand(w):
        w = np.asarray(w, dtype=complex)
        shift = w + 0.5j * gamma_a
        aa = a.d2 / 3.0 * (1.0 / (-a.omega - shift) + 1.0 / (-a.omega + shift))
        shift_b = w + 0.5j * b.gamma
        ab = b.d2 / 3.0 * (1.0 / (b.omega - shift_b) + 1.0 / (b.omega + shift_b))
        if m.n0:
            shift_s = w + 0.5j * s.gamma
            am = s.d2 / 3.0 * (1.0 / (s.omega - shift_s) + 1.0 / (s.omega + shift_s))
            n = np.sqrt(1.0 + 4.0 * math.pi * m.n0 * am)
        else:
            n = np.ones_like(w)
        x = n * w * R
        inv = 1.0 / x
        p_sq = 1.0 + inv * (2j + inv * (-5.0 + inv * (-6j + inv * 3.0)))
        return 1j / math.pi * aa * ab * w ** 4 / R ** 2 * p_sq * np.exp(2j * x)

    # the w -> 0 endpoint is regular: w^4 P_sq(nwR) stays finite
    lo = 1e-12 * W
    breaks = sorted({v for v in (a.omega, b.omega, s.omega) if lo < v < W})
    line = integrate(integrand, lo, W, spec, breaks=breaks)
    vertical = integrate_semi_infinite(lambda u: 1j * integrand(W + 1j * u), 2.0 * R, spec)
    real_axis = (line.value + vertical.value).real

    params = (R, -a.omega, a.d2, gamma_a, b.omega, b.d2, b.gamma, s.omega, s.d2, s.gamma, m.n0)
    imag = kernel_semi_infinite(_rules.KERNEL_NONRESONANT, params, 2.0 * R, spec,
                                "nonresonant integral")
    return float(real_axis), float(-imag.value / math.pi)
