import math

import pytest

from dispersion_kernel import DiluteGasMedium, PairConfig, QuadratureSpec, TwoLevelAtom

LAMBDA_A = 2.0 * math.pi


@pytest.fixture
def atom_a():
    return TwoLevelAtom(1.0, 1.0)


@pytest.fixture
def atom_b():
    return TwoLevelAtom(1.5, 1.0, 0.01)


@pytest.fixture
def medium(atom_b):
    return DiluteGasMedium(atom_b, 1e-4)


@pytest.fixture
def cfg(atom_a, atom_b, medium):
    return PairConfig(atom_a, atom_b, medium)


@pytest.fixture
def vacuum_cfg(atom_a):
    b = TwoLevelAtom(1.5, 1.0)
    return PairConfig(atom_a, b, DiluteGasMedium.vacuum(b))


@pytest.fixture
def rescaled_cfg(atom_a, atom_b, medium):
    """Dilute medium with the mean free path pinned to ten wavelengths."""
    return PairConfig(atom_a, atom_b, medium, QuadratureSpec(), mean_free_path=10 * LAMBDA_A)
