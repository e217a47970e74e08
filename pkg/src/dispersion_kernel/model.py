"""Domain value types.

Natural units are used throughout: hbar = c = 1, so frequencies and inverse
lengths share one unit and a dipole moment squared has units of
energy * length**3.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import DegenerateAtoms, InvalidParameter

DEFAULT_DILUTENESS_THRESHOLD = 1e-2
DEFAULT_DISSIMILARITY_FACTOR = 10.0


def _finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise InvalidParameter(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class TwoLevelAtom:
    """A two-level atom described by its transition frequency, squared
    transition dipole moment and radiative linewidth."""

    omega: float
    d2: float
    gamma: float = 0.0

    def __post_init__(self):
        omega = _finite("omega", self.omega)
        d2 = _finite("d2", self.d2)
        gamma = _finite("gamma", self.gamma)
        if omega <= 0:
            raise InvalidParameter(f"omega must be > 0, got {omega}")
        if d2 <= 0:
            raise InvalidParameter(f"d2 must be > 0, got {d2}")
        if gamma < 0:
            raise InvalidParameter(f"gamma must be >= 0, got {gamma}")
        if gamma >= omega:
            raise InvalidParameter(
                f"gamma ({gamma}) must be smaller than omega ({omega}); "
                "only narrow resonances are supported")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "d2", d2)
        object.__setattr__(self, "gamma", gamma)

    @property
    def wavelength(self):
        """Transition wavelength 2*pi/omega."""
        return 2.0 * math.pi / self.omega


@dataclass(frozen=True)
class DiluteGasMedium:
    """A homogeneous gas of ground-state atoms of one species.

    ``diluteness`` is 4*pi*n0*d2 / (3*omega**2), the small parameter of the
    pairwise-additive description. Construction fails when it reaches
    ``diluteness_threshold``.
    """

    species: TwoLevelAtom
    n0: float
    diluteness_threshold: float = DEFAULT_DILUTENESS_THRESHOLD

    def __post_init__(self):
        if not isinstance(self.species, TwoLevelAtom):
            raise InvalidParameter("species must be a TwoLevelAtom")
        n0 = _finite("n0", self.n0)
        if n0 < 0:
            raise InvalidParameter(f"n0 must be >= 0, got {n0}")
        if n0 > 0 and self.species.gamma <= 0:
            raise InvalidParameter(
                "a medium with n0 > 0 needs species.gamma > 0; "
                "without a linewidth there is no absorption")
        threshold = _finite("diluteness_threshold", self.diluteness_threshold)
        if threshold <= 0:
            raise InvalidParameter("diluteness_threshold must be > 0")
        object.__setattr__(self, "n0", n0)
        object.__setattr__(self, "diluteness_threshold", threshold)
        if self.diluteness >= threshold:
            raise InvalidParameter(
                f"medium is not dilute: 4*pi*n0*d2/(3*omega^2) = "
                f"{self.diluteness:.3g} >= {threshold:.3g}")

    @property
    def diluteness(self):
        s = self.species
        return 4.0 * math.pi * self.n0 * s.d2 / (3.0 * s.omega ** 2)

    @classmethod
    def vacuum(cls, species):
        return cls(species=species, n0=0.0)


class Axis(enum.Enum):
    REAL = "real"
    IMAGINARY = "imaginary"


@dataclass(frozen=True)
class ComplexFrequency:
    """A frequency on the positive real axis (omega) or on the positive
    imaginary axis (i*u)."""

    axis: Axis
    value: float

    def __post_init__(self):
        if not isinstance(self.axis, Axis):
            raise InvalidParameter(f"axis must be an Axis, got {self.axis!r}")
        value = _finite("value", self.value)
        if value < 0:
            raise InvalidParameter(f"frequency magnitude must be >= 0, got {value}")
        object.__setattr__(self, "value", value)

    @classmethod
    def real(cls, omega):
        return cls(Axis.REAL, omega)

    @classmethod
    def imaginary(cls, u):
        return cls(Axis.IMAGINARY, u)

    @property
    def complex(self):
        if self.axis is Axis.REAL:
            return complex(self.value, 0.0)
        return complex(0.0, self.value)


@dataclass(frozen=True)
class PotentialBreakdown:
    """Interaction energy split into its nonresonant and resonant channels."""

    nonresonant: float
    resonant: float
    total: float = field(default=None)

    def __post_init__(self):
        total = self.nonresonant + self.resonant
        if self.total is None:
            object.__setattr__(self, "total", total)
        elif self.total != total:
            raise InvalidParameter(
                f"total {self.total!r} != nonresonant + resonant {total!r}")


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and limits for the adaptive integrators.

    ``tail_decades`` is the number of e-folds of a known exponential decay
    after which a semi-infinite integral is truncated.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-30
    max_subdivisions: int = 10 ** 6
    tail_decades: float = 40.0

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise InvalidParameter(f"rel_tol must be > 0, got {self.rel_tol}")
        if not self.abs_tol > 0:
            raise InvalidParameter(f"abs_tol must be > 0, got {self.abs_tol}")
        if int(self.max_subdivisions) != self.max_subdivisions or self.max_subdivisions < 1:
            raise InvalidParameter(
                f"max_subdivisions must be an integer >= 1, got {self.max_subdivisions}")
        if not self.tail_decades > 0:
            raise InvalidParameter(f"tail_decades must be > 0, got {self.tail_decades}")
        object.__setattr__(self, "max_subdivisions", int(self.max_subdivisions))


def validate_pair(atom_a, atom_b, dissimilarity_factor=DEFAULT_DISSIMILARITY_FACTOR):
    """Return ``(atom_a, atom_b)`` if the atoms are far enough from resonance.

    The pair is accepted when |omega_a - omega_b| exceeds
    ``dissimilarity_factor`` times the larger linewidth. Otherwise the atoms
    share a delocalised excitation and the independent-atom potentials do
    not apply.
    """
    for atom in (atom_a, atom_b):
        if not isinstance(atom, TwoLevelAtom):
            raise InvalidParameter("validate_pair expects TwoLevelAtom instances")
    splitting = abs(atom_a.omega - atom_b.omega)
    width = max(atom_a.gamma, atom_b.gamma)
    if not splitting > dissimilarity_factor * width:
        raise DegenerateAtoms(
            f"transition frequencies {atom_a.omega} and {atom_b.omega} are "
            f"degenerate: splitting {splitting:.3g} <= {dissimilarity_factor:g} * "
            f"linewidth {width:.3g}; identical or near-resonant atoms need a "
            "symmetric/antisymmetric two-atom state")
    return atom_a, atom_b
