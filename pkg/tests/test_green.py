import math

import mpmath as mp
import numpy as np
import pytest

from dispersion_kernel import (ComplexFrequency, DiluteGasMedium, InvalidParameter, TwoLevelAtom,
                               ZeroSeparation, dyadic_green, dyadic_green_advanced,
                               refractive_index, retarded_kernel_polynomials)
from dispersion_kernel.green import kernel_value

RE = ComplexFrequency.real


def tensor_from_definition(x, rhat):
    """Polynomial tensor of the retarded dyadic, assembled term by term."""
    delta = np.eye(3) * (1 + 1j / x - 1 / x ** 2)
    rr = np.outer(rhat, rhat) * (3 / x ** 2 - 3j / x - 1)
    return delta + rr


def test_polynomial_examples():
    p_sq, p_abs = retarded_kernel_polynomials(1.0)
    assert p_sq == -1 - 4j
    assert p_abs == 5.0
    p_sq, p_abs = retarded_kernel_polynomials(1e8)
    assert abs(p_sq - 1) < 1e-7 and abs(p_abs - 1) < 1e-15
    with pytest.raises(ZeroSeparation):
        retarded_kernel_polynomials(0)


def test_contractions_against_explicit_dyadic():
    rng = np.random.default_rng(20240501)
    worst_sq = worst_abs = 0.0
    for _ in range(10_000):
        x = complex(rng.lognormal(0.0, 1.5), rng.uniform(0.0, 1.0))
        v = rng.normal(size=3)
        t = tensor_from_definition(x, v / np.linalg.norm(v))
        sq = np.einsum("ij,ji->", t, t) / 2
        ab = np.sum(np.abs(t) ** 2) / 2
        p_sq, p_abs = retarded_kernel_polynomials(x)
        worst_sq = max(worst_sq, abs(p_sq - sq) / abs(sq))
        worst_abs = max(worst_abs, abs(p_abs - ab) / ab)
    assert worst_sq < 1e-12
    assert worst_abs < 1e-12


def test_abs_contraction_real_form():
    for x in np.geomspace(1e-2, 1e3, 50):
        assert retarded_kernel_polynomials(x)[1] == pytest.approx(1 + 1 / x ** 2 + 3 / x ** 4,
                                                                  rel=1e-14)


def test_kernel_value_invariant():
    assert kernel_value(2.0 + 0.1j).abs_squared_trace > 0


@pytest.fixture
def gas():
    return DiluteGasMedium(TwoLevelAtom(1.5, 1.0, 0.01), 1e-4)


def test_dyadic_trace_matches_polynomials(gas):
    w, r = 1.2, np.array([0.3, -2.0, 1.1])
    R = np.linalg.norm(r)
    d = dyadic_green(gas, RE(w), r)
    n = refractive_index(gas, RE(w)).n
    x = n * w * R
    p_sq, p_abs = retarded_kernel_polynomials(x)
    scale = w ** 4 * np.exp(2j * x) / R ** 2
    assert np.einsum("ij,ji->", d, d) / scale == pytest.approx(2 * p_sq, rel=1e-13)
    absd = np.sum(np.abs(d) ** 2) / (w ** 4 * abs(np.exp(2j * x)) / R ** 2)
    assert absd == pytest.approx(2 * p_abs, rel=1e-13)


def test_far_field_transverse():
    vac = DiluteGasMedium.vacuum(TwoLevelAtom(1.5, 1.0))
    w, R = 1.0, 1e4
    d = dyadic_green(vac, RE(w), [0, 0, R])
    ref = w ** 2 * np.exp(1j * w * R) / R
    assert d[0, 0] / ref == pytest.approx(1, abs=2e-4)
    assert d[1, 1] / ref == pytest.approx(1, abs=2e-4)
    assert abs(d[2, 2] / ref) < 3 / (w * R)
    assert abs(d[0, 1]) == 0


def test_rotation_equivariance_and_reciprocity(gas):
    rng = np.random.default_rng(7)
    for _ in range(20):
        q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        r = rng.normal(size=3) * 3
        d = dyadic_green(gas, RE(0.8), r)
        dq = dyadic_green(gas, RE(0.8), q @ r)
        assert np.allclose(dq, q @ d @ q.T, rtol=1e-12, atol=1e-14)
        assert np.allclose(d, dyadic_green(gas, RE(0.8), -r).T, rtol=1e-15, atol=0)


def test_advanced_is_conjugate(gas):
    r = [1.0, 2.0, 0.5]
    assert np.array_equal(dyadic_green_advanced(gas, RE(1.1), r),
                          np.conj(dyadic_green(gas, RE(1.1), r)))


def test_absorption_decay(gas):
    w = 1.5
    n = refractive_index(gas, RE(w)).n
    d1 = dyadic_green(gas, RE(w), [0, 0, 100.0])
    d2 = dyadic_green(gas, RE(w), [0, 0, 200.0])
    # transverse element: ratio of magnitudes is exp(-Im n w dR) R1/R2 times the polynomials
    x1, x2 = n * w * 100, n * w * 200
    poly = lambda x: abs(1 + 1j / x - 1 / x ** 2)  # noqa: E731
    ratio = abs(d2[0, 0]) / abs(d1[0, 0])
    assert ratio == pytest.approx(math.exp(-n.imag * w * 100) * 0.5 * poly(x2) / poly(x1),
                                  rel=1e-12)


def test_errors(gas):
    with pytest.raises(ZeroSeparation):
        dyadic_green(gas, RE(1.0), [0, 0, 0])
    with pytest.raises(InvalidParameter):
        dyadic_green(gas, ComplexFrequency.imaginary(1.0), [1, 0, 0])
    with pytest.raises(InvalidParameter):
        dyadic_green(gas, RE(1.0), [1, 0])


@pytest.mark.parametrize("n", [1.0, 1.0003 + 0.002j])
def test_wave_equation_away_from_source(n):
    """(d_i d_k - delta_ik laplacian - eps w^2) D_kj = 0 for r != 0,
    checked by mpmath differentiation of the tensor at a random point."""
    mp.mp.dps = 30
    w = mp.mpf("0.9")
    nn = mp.mpc(n)
    k = nn * w

    def comp(i, j):
        def f(x, y, z):
            r = mp.sqrt(x * x + y * y + z * z)
            xi = k * r
            rv = (x, y, z)
            a = 1 + 1j / xi - 1 / xi ** 2
            b = 3 / xi ** 2 - 3j / xi - 1
            return w ** 2 * ((a if i == j else 0) + rv[i] * rv[j] / r ** 2 * b) * mp.exp(1j * xi) / r
        return f

    p = (mp.mpf("0.7"), mp.mpf("-1.3"), mp.mpf("0.4"))
    eps = nn * nn
    worst = 0
    for j in range(3):
        for i in range(3):
            total = 0
            for kk in range(3):
                order = [0, 0, 0]
                order[i] += 1
                order[kk] += 1
                total += mp.diff(comp(kk, j), p, tuple(order))
            lap = sum(mp.diff(comp(i, j), p, tuple(2 if m == q else 0 for m in range(3)))
                      for q in range(3))
            resid = total - lap - eps * w ** 2 * comp(i, j)(*p)
            worst = max(worst, abs(resid) / (w ** 2 * abs(comp(0, 0)(*p)) + 1))
    assert worst < 1e-15

    # the package tensor equals the hand-assembled one at this point
    if isinstance(n, complex):
        return
    vac = DiluteGasMedium.vacuum(TwoLevelAtom(1.5, 1.0))
    d = dyadic_green(vac, RE(float(w)), [float(c) for c in p])
    for i in range(3):
        for j in range(3):
            assert complex(d[i, j]) == pytest.approx(complex(comp(i, j)(*p)), rel=1e-13)
