import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from metaconf import corrkernels as ck
from metaconf import dualpipe as dp
from metaconf.errors import SectorUndefined, SelectionRuleViolation
from metaconf.hardy import SQRT_2PI, HalfLineSpectrum, QuadrantSpectrum
from metaconf.suites import equivalence_points_1d, equivalence_points_2d

EXP = HalfLineSpectrum(lambda s: np.exp(-s), decay_rate=1.0)
ZERO = HalfLineSpectrum(lambda s: 0 * s)
FLAT = dp.SectorSpectra1D.flat()


def test_dual_variables():
    dv = dp.DualVars1D.from_coordinates(0.4, 0.2, 2.0, 0.0, 1.0, -1.0)
    assert dv.zeta_plus == pytest.approx(0.3) and dv.lam == pytest.approx(math.log(2))
    with pytest.raises(SectorUndefined):
        dp.DualVars1D.from_coordinates(0, 0, 1.0, 0.0, -2.0, 0.0)


def test_sector_map():
    assert dp.sector_map(1.0, 0.0) == (0.0, "0")
    assert dp.sector_map(1.0, -3.0) == (None, "undefined-")
    (lp, lq), sec = dp.sector_map(1.0, (0.5, 0.0))
    assert lp > 0 and lq == 0 and sec == "+0"
    for t, a, b in ((1.0, 0.3, 0.4), (-1.0, 0.3, 0.4), (1.0, -3.0, 0.4), (2.0, 1.0, -0.5)):
        (_, lq), _ = dp.sector_map(t, (a, b))
        ratio = (b / t) / (1 + a / t)
        assert (lq > 0) == (ratio > 0)


def test_dual_correlator_closed_form():
    dv = dp.DualVars1D(0.3, 0.7)
    spec = dp.SectorSpectra1D(EXP, EXP)
    expected = 2.0 ** -0.4 / (SQRT_2PI * (1 - 1j * complex(0.3, 0.7)))
    assert dp.dual_correlator_1d(dv, 0.2, 2.0, spec) == pytest.approx(expected, rel=1e-12)
    assert dp.dual_correlator_1d(dv, 0.2, 2.0, dp.SectorSpectra1D(ZERO, ZERO)) == 0


def test_dual_correlator_across_zero():
    # equal real spectra: the two boundary values are complex conjugates,
    # so they join continuously only at zeta_plus = 0
    spec = dp.SectorSpectra1D(EXP, EXP)
    vals = [dp.dual_correlator_1d(dp.DualVars1D(0.0, lam), 0.2, 1.0, spec) for lam in (1e-9, 0.0, -1e-9)]
    assert abs(vals[0] - vals[2]) < 1e-6 * abs(vals[1])
    up, mid, down = (dp.dual_correlator_1d(dp.DualVars1D(0.5, lam), 0.2, 1.0, spec) for lam in (1e-12, 0.0, -1e-12))
    assert up == pytest.approx(down.conjugate(), rel=1e-9)
    assert mid == pytest.approx(up.real, rel=1e-9)


def test_dualize_gaussian_self_transform():
    g = np.linspace(-20, 20, 2001)
    z = np.linspace(-3, 3, 13)
    out = dp.dualize_field(np.exp(-g * g / 2), g, z)
    assert np.allclose(out, np.exp(-z * z / 2), atol=1e-12)
    assert np.allclose(dp.dualize_field(0 * g, g, z), 0)


def test_dualize_shift_and_roundtrip():
    g = np.linspace(-20, 20, 2001)
    z = np.linspace(-3, 3, 13)
    shifted = dp.dualize_field(np.exp(-(g - 0.7) ** 2 / 2), g, z)
    assert np.allclose(shifted, np.exp(0.7j * z) * np.exp(-z * z / 2), atol=1e-8)
    zf = np.linspace(-20, 20, 2001)
    fwd = dp.dualize_field(np.exp(-g * g / 2) * (1 + g), g, zf)
    back = dp.dualize_field(fwd, zf, g[::50], inverse=True)
    assert np.allclose(back, (np.exp(-g * g / 2) * (1 + g))[::50], atol=1e-8)


def test_dualize_2d_product():
    g = np.linspace(-15, 15, 601)
    z = np.array([-1.0, 0.0, 2.0])
    vals = np.exp(-np.add.outer(g * g, g * g) / 2)
    out = dp.dualize_field(vals, (g, g), (z, z))
    assert np.allclose(out, np.exp(-np.add.outer(z * z, z * z) / 2), atol=1e-10)


def test_inversion_examples():
    assert dp.invert_to_physical_1d(0.5, 1.0, 0.5, 1.0, math.log(2), FLAT) == pytest.approx(0.5, rel=1e-15)
    assert dp.invert_to_physical_1d(0.5, 1.0, 0.5, 1.0, -0.3, FLAT) == 0
    spec = dp.SectorSpectra1D(EXP, EXP)
    assert dp.invert_to_physical_1d(0.0, 1.0, 0.0, 1.0, 0.8, spec) == pytest.approx(1.0)
    with pytest.raises(SelectionRuleViolation):
        dp.invert_to_physical_1d(0.3, 1.0, 0.4, 1.0, 0.1, FLAT)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.05, 2))
def test_lambda_factorization(l1, l2, g):
    spec = dp.SectorSpectra1D(HalfLineSpectrum(lambda s: np.exp(-s) * (2 + np.sin(s)), decay_rate=1.0),
                              HalfLineSpectrum(lambda s: np.exp(-3 * s), decay_rate=3.0))
    if l1 * l2 <= 0:
        return
    sg = 1 if l1 > 0 else -1
    a = dp.invert_to_physical_1d(sg * g, 1.0, sg * g, 1.0, l1, spec)
    b = dp.invert_to_physical_1d(sg * g, 1.0, sg * g, 1.0, l2, spec)
    assert b == pytest.approx(a * math.exp(-2 * g * (abs(l2) - abs(l1))), rel=1e-12)


def test_quadrant_exclusion():
    q = ck.QuantumNumbers2D(0.2, -0.25, 0.5, 1.0)
    assert dp.invert_to_physical_2d(q, q, 0.3, 0.2, dp.SectorSpectra2D.flat()) == 0


def test_2d_reduces_to_1d():
    pts1 = [(t, r) for t in (-1.5, 0.8, 2.0) for r in (-2.0, -0.3, 0.0, 0.6, 4.0)]
    for t, r in pts1:
        for gp in (0.25, -0.25):
            q2 = ck.QuantumNumbers2D(0.2, gp, 0.0, 1.0)
            q1 = ck.QuantumNumbers1D(0.2, gp, 1.0)
            a = dp.physical_correlator_2d(ck.Point2D(t, r, 0.0), ck.Point2D(0, 0, 0), q2, q2,
                                          dp.SectorSpectra2D.flat())
            b = dp.physical_correlator_1d(ck.Point1D(t, r), ck.Point1D(0, 0), q1, q1, FLAT)
            assert a == pytest.approx(b, rel=1e-14)


def test_no_arctan_factor_without_transverse_rapidity():
    q = ck.QuantumNumbers2D(0.0, 0.25, 0.0, 1.0)
    v = dp.physical_correlator_2d(ck.Point2D(1.0, 2.0, 3.0), ck.Point2D(0, 0, 0), q, q, dp.SectorSpectra2D.flat())
    assert v == pytest.approx(((1 + 2) ** 2 + 9) ** -0.25, rel=1e-14)


def test_flat_equivalence_1d():
    rep = dp.flat_equivalence_1d(equivalence_points_1d(1000), 0.22, 0.33)
    assert rep.n_points == 1000 and rep.passed
    assert set(rep.sectors) == {"+", "-", "0"}


def test_flat_equivalence_2d():
    rep = dp.flat_equivalence_2d(equivalence_points_2d(1000), 0.3, 0.25, 1.5)
    assert rep.n_points == 1000 and rep.passed
    assert {"++", "+-", "-+", "--"} <= set(rep.sectors)


def test_physical_selection_returns_zero():
    a, b = ck.QuantumNumbers1D(0.2, 0.3, 1.0), ck.QuantumNumbers1D(0.2, 0.4, 1.0)
    assert dp.physical_correlator_1d(ck.Point1D(1.0, 1.0), ck.Point1D(0, 0), a, b, FLAT) == 0
