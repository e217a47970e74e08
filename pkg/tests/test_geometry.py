import math
import warnings

import numpy as np
import pytest

from dispersion_kernel import (HalfSpaceGeometry, HemisphereGeometry, InvalidParameter,
                               LosslessMedium, RegimeWarning, VolumeOracleSpec, divergence_demo,
                               hemisphere_force_closed, hemisphere_force_oracle, mean_free_path,
                               planar_force_asymptote, planar_force_closed, planar_force_oracle,
                               resonant_force)
from dispersion_kernel.geometry import HemisphereRegime, PlanarRegime
from dispersion_kernel.pair import Exponential
from dispersion_kernel.quadrature import integrate

LAMBDA = 2 * math.pi


def test_geometry_validation():
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(InvalidParameter):
            HalfSpaceGeometry(bad)
        with pytest.raises(InvalidParameter):
            HemisphereGeometry(bad)
    with pytest.raises(InvalidParameter):
        VolumeOracleSpec(radial_cutoff=2)


def test_variant_validation(rescaled_cfg):
    with pytest.raises(InvalidParameter):
        planar_force_closed(rescaled_cfg, HalfSpaceGeometry(1.0), variant="exact")


@pytest.mark.parametrize("frac", [0.01, 0.1, 1.0, 3.0, 10.0])
def test_planar_oracle_matches_closed_form(rescaled_cfg, frac):
    L = rescaled_cfg.photon_mean_free_path()
    g = HalfSpaceGeometry(frac * L)
    est = planar_force_oracle(rescaled_cfg, g)
    closed = planar_force_closed(rescaled_cfg, g)
    assert est.value == pytest.approx(closed, rel=1e-8)
    assert est.error_estimate <= 1e-8 * abs(closed)
    assert est.transverse < 1e-10


def test_planar_printed_bracket_differs(rescaled_cfg):
    g = HalfSpaceGeometry(1.0)
    assert planar_force_closed(rescaled_cfg, g, "printed") != pytest.approx(
        planar_force_closed(rescaled_cfg, g), rel=1e-3)


def test_planar_linear_in_density(rescaled_cfg):
    g = HalfSpaceGeometry(2.0)
    base = planar_force_closed(rescaled_cfg, g)
    for k in (2.0, 10.0):
        m = rescaled_cfg.medium
        c = rescaled_cfg.replace(medium=type(m)(m.species, k * m.n0))
        assert planar_force_closed(c, g) == pytest.approx(k * base, rel=1e-14)
        assert planar_force_oracle(c, g).value == pytest.approx(k * base, rel=1e-8)


def test_planar_force_monotone_and_attractive(rescaled_cfg):
    z = np.geomspace(0.01, 1e4, 30)
    f = np.array([planar_force_closed(rescaled_cfg, HalfSpaceGeometry(v)) for v in z])
    assert np.all(f < 0)
    assert np.all(np.diff(np.abs(f)) < 0)


def test_planar_near_limit(rescaled_cfg):
    g = HalfSpaceGeometry(LAMBDA / 1000)
    near = planar_force_asymptote(rescaled_cfg, g, PlanarRegime.NEAR)
    assert near == pytest.approx(planar_force_closed(rescaled_cfg, g), rel=1e-3)


def test_planar_far_limit(cfg):
    g = HalfSpaceGeometry(1e3 * cfg.photon_mean_free_path())
    far = planar_force_asymptote(cfg, g, PlanarRegime.FAR)
    assert far == pytest.approx(planar_force_closed(cfg, g), rel=1e-2)
    # with the dilute mean free path the far law loses its density dependence
    a, b = cfg.atom_a, cfg.atom_b
    assert far == pytest.approx(-a.d2 * a.omega ** 2 * cfg.detuning / (3 * b.gamma * g.z0),
                                rel=1e-12)


def test_planar_far_printed_pairs_with_printed_length(cfg):
    printed_L = mean_free_path(cfg.medium, cfg.atom_a.omega).printed
    c = cfg.replace(mean_free_path=printed_L)
    g = HalfSpaceGeometry(1e4 * printed_L)
    far = planar_force_asymptote(c, g, PlanarRegime.FAR_PRINTED)
    assert far == pytest.approx(planar_force_closed(c, g, "printed"), rel=1e-3)


def test_planar_physical_envelope(rescaled_cfg):
    g = HalfSpaceGeometry(1.0)
    phys = planar_force_oracle(rescaled_cfg, g, physical=True)
    slab = planar_force_oracle(rescaled_cfg, g)
    assert phys.value < 0
    assert abs(phys.value) < abs(slab.value) * 1.5


def test_divergence_demo(rescaled_cfg):
    g = HalfSpaceGeometry(LAMBDA / 100)
    cutoffs = [100 * LAMBDA * 2 ** k for k in range(5)]
    d = divergence_demo(rescaled_cfg, g, cutoffs)
    for v, e in zip(d.vacuum, d.vacuum_exact):
        assert v == pytest.approx(e, rel=1e-8)
    ratios = [b / a for a, b in zip(d.vacuum, d.vacuum[1:])]
    assert ratios[-1] == pytest.approx(2.0, rel=0.01)
    assert d.absorbing[-1] == pytest.approx(d.absorbing[-2], rel=1e-6)
    assert all(e >= 0 for e in d.vacuum_errors + d.absorbing_errors)


def test_divergence_validation(rescaled_cfg, vacuum_cfg):
    g = HalfSpaceGeometry(1.0)
    for bad in ([], [0.5], [10.0, 5.0], [3.0, 3.0]):
        with pytest.raises(InvalidParameter):
            divergence_demo(rescaled_cfg, g, bad)
    with pytest.raises(InvalidParameter):
        divergence_demo(vacuum_cfg, g, [10.0])


def test_hemisphere_oracle_is_shell_integral(rescaled_cfg):
    # pi n0 int r^2 F(r) dr over the same radial window
    g = HemisphereGeometry(5.0)
    L = rescaled_cfg.photon_mean_free_path()
    env = Exponential(g.r0)
    radial = integrate(lambda r: np.array([x * x * resonant_force(rescaled_cfg, x, env)
                                           for x in np.atleast_1d(r)]),
                       g.r0, g.r0 + 20 * L, rescaled_cfg.quad)
    est = hemisphere_force_oracle(rescaled_cfg, g)
    assert est.value == pytest.approx(math.pi * rescaled_cfg.medium.n0 * radial.value, rel=1e-8)
    assert est.transverse < 1e-10


@pytest.mark.parametrize("k", [10.0, 30.0, 100.0])
def test_hemisphere_far(rescaled_cfg, k):
    g = HemisphereGeometry(k * rescaled_cfg.photon_mean_free_path())
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        far = hemisphere_force_closed(rescaled_cfg, g, HemisphereRegime.FAR)
    assert far == pytest.approx(hemisphere_force_oracle(rescaled_cfg, g).value, rel=0.02)


@pytest.mark.parametrize("r0", [LAMBDA / 1000, LAMBDA / 300, LAMBDA / 100])
def test_hemisphere_near(rescaled_cfg, r0):
    g = HemisphereGeometry(r0)
    near = hemisphere_force_closed(rescaled_cfg, g, HemisphereRegime.NEAR)
    assert near == pytest.approx(hemisphere_force_oracle(rescaled_cfg, g).value, rel=0.02)


def test_hemisphere_printed_near_scaling(rescaled_cfg):
    g = HemisphereGeometry(0.01)
    d = hemisphere_force_closed(rescaled_cfg, g, "near")
    p = hemisphere_force_closed(rescaled_cfg, g, "near", variant="printed")
    assert p == pytest.approx(d * rescaled_cfg.detuning * rescaled_cfg.atom_a.omega ** 4,
                              rel=1e-15)


def test_hemisphere_window_warning(rescaled_cfg):
    with pytest.warns(RegimeWarning):
        hemisphere_force_closed(rescaled_cfg, HemisphereGeometry(1.0), "far")
    with pytest.warns(RegimeWarning):
        hemisphere_force_closed(rescaled_cfg, HemisphereGeometry(1.0), "near")


def test_integrated_force_direction(rescaled_cfg):
    # swapping the detuning sign turns attraction into repulsion
    a, b = rescaled_cfg.atom_a, rescaled_cfg.atom_b
    swapped = rescaled_cfg.replace(atom_a=type(a)(2.0, a.d2))
    for c, sign in ((rescaled_cfg, -1), (swapped, 1)):
        assert math.copysign(1, planar_force_closed(c, HalfSpaceGeometry(1.0))) == sign
        assert math.copysign(1, hemisphere_force_oracle(c, HemisphereGeometry(1.0)).value) == sign


def test_lossless_geometry_needs_length(vacuum_cfg):
    with pytest.raises(LosslessMedium):
        planar_force_closed(vacuum_cfg, HalfSpaceGeometry(1.0))
