"""Dispersion interaction of an excited atom with ground-state atoms in an
absorbing dilute gas.

Natural units (hbar = c = 1) throughout. The quadrature hot loops run in a
compiled extension when it is available and in numpy otherwise; see
``dispersion_kernel.BACKEND``.
"""

__version__ = "0.1.0"

from ._backend import NAME as BACKEND  # noqa: E402
from .errors import (DegenerateAtoms, DispersionError, InvalidParameter,  # noqa: E402
                     LosslessMedium, PoleOnAxis, QuadratureFailure, RegimeWarning,
                     StepUnderflow, ZeroSeparation)
from .geometry import (ForceEstimate, HalfSpaceGeometry, HemisphereGeometry,  # noqa: E402
                       VolumeOracleSpec, divergence_demo, hemisphere_force_closed,
                       hemisphere_force_oracle, planar_force_asymptote, planar_force_closed,
                       planar_force_oracle)
from .green import (KernelValue, dyadic_green, dyadic_green_advanced,  # noqa: E402
                    retarded_kernel_polynomials)
from .model import (Axis, ComplexFrequency, DiluteGasMedium, PotentialBreakdown,  # noqa: E402
                    QuadratureSpec, TwoLevelAtom, validate_pair)
from .pair import (Exponential, MediumResonant, PairConfig, Regime, SlabModel,  # noqa: E402
                   asymptotic_limit, limit_check, potential_excited, potential_ground,
                   potential_perturbative_vacuum, resonant_force, resonant_potential_model)
from .quadrature import (IntegralResult, central_difference, integrate,  # noqa: E402
                         integrate_semi_infinite, integrate_volume_axisymmetric)
from .response import (MeanFreePath, OpticalResponse, alpha_excited, alpha_ground,  # noqa: E402
                       mean_free_path, permittivity, refractive_index)
