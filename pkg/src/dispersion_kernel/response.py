"""Atomic polarizabilities and the optical response of a dilute gas."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import InvalidParameter, LosslessMedium, PoleOnAxis
from .model import Axis, ComplexFrequency, DiluteGasMedium, TwoLevelAtom


def two_pole(omega_signed, d2, gamma, w):
    """Orientation-averaged two-level polarizability at complex frequency w.

        (d2/3) * [1/(W - w - i gamma/2) + 1/(W + w + i gamma/2)]

    with W = +omega for the ground state and W = -omega for the excited
    state.
    """
    shift = w + 0.5j * gamma
    first = omega_signed - shift
    second = omega_signed + shift
    if first == 0 or second == 0:
        raise PoleOnAxis(f"polarizability pole hit at w = {w!r} (gamma = {gamma})")
    return d2 / 3.0 * (1.0 / first + 1.0 / second)


def alpha_ground(atom: TwoLevelAtom, f: ComplexFrequency) -> complex:
    """Polarizability of a ground-state two-level atom."""
    return two_pole(atom.omega, atom.d2, atom.gamma, f.complex)


def alpha_excited(atom: TwoLevelAtom, f: ComplexFrequency) -> complex:
    """Polarizability of an excited two-level atom (omega -> -omega in the
    ground-state expression)."""
    return two_pole(-atom.omega, atom.d2, atom.gamma, f.complex)


def permittivity(medium: DiluteGasMedium, f: ComplexFrequency) -> complex:
    """Dilute-gas permittivity 1 + 4 pi n0 alpha(f), no local-field term."""
    if medium.n0 == 0:
        return complex(1.0, 0.0)
    return 1.0 + 4.0 * math.pi * medium.n0 * alpha_ground(medium.species, f)


@dataclass(frozen=True)
class OpticalResponse:
    epsilon: complex
    n: complex
    axis: Axis = Axis.REAL

    def __post_init__(self):
        eps = complex(self.epsilon)
        n = complex(self.n)
        if abs(n * n - eps) > 1e-12 * max(1.0, abs(eps)):
            raise InvalidParameter(f"n**2 = {n * n!r} does not match epsilon = {eps!r}")
        if n.real < 0:
            raise InvalidParameter(f"branch violation: Re(n) = {n.real} < 0")
        if self.axis is Axis.REAL and n.imag < 0:
            raise InvalidParameter(f"branch violation: Im(n) = {n.imag} < 0 on the real axis")
        if self.axis is Axis.IMAGINARY and abs(n.imag) > 1e-12 * abs(n):
            raise InvalidParameter(f"n(iu) = {n!r} is not real")
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "n", n)


def refractive_index(medium: DiluteGasMedium, f: ComplexFrequency) -> OpticalResponse:
    """Complex refractive index on the absorbing branch.

    The principal square root already has Re(n) >= 0; on the real axis a
    vanishing Im(epsilon) of negative sign is flipped so that Im(n) >= 0.
    """
    eps = permittivity(medium, f)
    n = cmath.sqrt(eps)
    if f.axis is Axis.REAL and n.imag < 0 and eps.imag == 0:
        n = n.conjugate()
    return OpticalResponse(eps, n, f.axis)


def index_imag_axis(medium: DiluteGasMedium, u: float) -> float:
    """n(iu) as a real number."""
    return refractive_index(medium, ComplexFrequency.imaginary(u)).n.real


@dataclass(frozen=True)
class MeanFreePath:
    """Photon absorption length at the probe frequency.

    exact
        1 / (2 Im n(w) w) from the full dilute-gas index.
    dilute
        First-order closed form 3((wB^2 - w^2)^2 + (gB w)^2) /
        (8 pi n0 d2 wB gB w^2).
    printed
        The same closed form without the 2 wB factor of the polarizability
        numerator. Kept for reporting only: it is not a length in natural
        units unless 2 wB = 1.
    """

    exact: float
    dilute: float
    printed: float


def mean_free_path(medium: DiluteGasMedium, omega_probe: float) -> MeanFreePath:
    if medium.n0 == 0 or medium.species.gamma == 0:
        raise LosslessMedium("photon mean free path is infinite without absorption")
    w = float(omega_probe)
    if not w > 0:
        raise InvalidParameter(f"probe frequency must be > 0, got {w}")
    s = medium.species
    n = refractive_index(medium, ComplexFrequency.real(w)).n
    if not n.imag > 0:
        raise LosslessMedium(f"Im n({w}) = {n.imag} gives no absorption")
    exact = 1.0 / (2.0 * n.imag * w)
    lorentz = (s.omega ** 2 - w ** 2) ** 2 + (s.gamma * w) ** 2
    printed = 3.0 * lorentz / (4.0 * math.pi * medium.n0 * s.d2 * s.gamma * w ** 2)
    dilute = printed / (2.0 * s.omega)
    return MeanFreePath(exact, dilute, printed)
