import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from metaconf import analysis as an
from metaconf import corrkernels as ck
from metaconf.errors import GridTooCoarse

FIG2 = ck.QuantumNumbers2D(0.25, 0.25, 0.0, 1.0)
FIG3 = ck.QuantumNumbers2D(0.25, 0.25, 1.5, 1.0)


# -- Wiener-Khintchine --------------------------------------------------------

def test_meta1d_spectrum_nonnegative():
    rep = an.wiener_khintchine_check(an.meta1d_reg_profile(ck.QuantumNumbers1D(0.22, 0.33, 1.0)), 200.0, 2 ** 14)
    assert rep.passed and rep.max_imag_ratio < 1e-12
    assert rep.min_spectral >= -1e-8 * rep.max_spectral


def test_gaussian_control():
    rep = an.wiener_khintchine_check(an.gaussian_profile(), 20.0, 2 ** 12)
    assert rep.passed
    assert rep.max_spectral == pytest.approx(math.sqrt(2 * math.pi), rel=1e-12)


def test_rectangular_control_matches_sinc():
    rep = an.wiener_khintchine_check(an.rectangular_profile(), 20.0, 2 ** 12, refine=False)
    assert not rep.passed
    # 2 sin(k)/k has its deepest minimum at tan k = k: -0.2172 relative to the peak
    assert rep.min_ratio == pytest.approx(-0.2172336, abs=5e-3)


def test_grid_too_coarse():
    with pytest.raises(GridTooCoarse):
        an.wiener_khintchine_check(an.gaussian_profile(0.01), 20.0, 256)


def test_symmetric_grid():
    g = an.symmetric_grid(2.0, 8)
    assert g[4] == 0 and g[0] == -2.0 and g[1] - g[0] == pytest.approx(0.5)
    with pytest.raises(ValueError):
        an.symmetric_grid(1.0, 7)


def test_plane_spectrum_of_fig2_kernel():
    plane = an.meta2d_reg_plane(FIG2)
    small = an.wiener_khintchine_check(plane, 200.0, 1024, dims=2, refine=False)
    large = an.wiener_khintchine_check(plane, 400.0, 2048, dims=2, refine=False)
    # even kernel: real spectrum; negative leakage shrinks as the box grows
    assert large.max_imag_ratio < 1e-12
    assert abs(large.min_ratio) < abs(small.min_ratio) < 1e-6


@pytest.mark.parametrize("qn", [FIG2, FIG3], ids=["fig2", "fig3"])
@pytest.mark.parametrize("phi", [0.0, 30.0, 60.0, 90.0])
def test_ray_sections_nonnegative(qn, phi):
    rep = an.wiener_khintchine_check(an.ray_profile(qn, phi), 1000.0, 2 ** 15)
    assert rep.passed


# -- contraction limit ----------------------------------------------------------

def test_mu_limit_example():
    tab = an.mu_limit_check(ck.QuantumNumbers1D(0.0, 1.0, 1.0), [1e-3], [(1.0, 1.0)])
    assert tab.max_rel_err[0] < 1e-2
    assert tab.max_rel_err[0] == pytest.approx(1e-3, rel=1e-2)


def test_mu_limit_halving():
    tab = an.mu_limit_check(ck.QuantumNumbers1D(0.2, 1.0, 1.0), [2e-3, 1e-3], [(1.0, 1.0), (-1.0, 0.5)])
    ratio = tab.max_rel_err[1] / tab.max_rel_err[0]
    assert 0.4 <= ratio <= 0.6


def test_mu_limit_exact_at_zero_separation():
    tab = an.mu_limit_check(ck.QuantumNumbers1D(0.3, 0.7, 1.0), [1e-1, 1e-3], [(1.5, 0.0)])
    assert tab.max_rel_err == [0.0, 0.0]


@pytest.mark.parametrize("qn,pts", [
    (ck.QuantumNumbers1D(0.2, 1.0, 1.0), [(1.0, 1.0), (2.0, -0.7)]),
    (ck.QuantumNumbers2D(0.2, 1.0, 0.5, 1.0), [(1.0, 1.0, 0.3), (-2.0, 1.0, -1.0)]),
], ids=["1d", "2d"])
def test_mu_limit_linear_and_monotone(qn, pts):
    tab = an.mu_limit_check(qn, [1e-1, 1e-2, 1e-3, 1e-4], pts)
    assert tab.monotone and tab.linear and len(tab.decade_ratios) == 3


# -- exponents ----------------------------------------------------------------

@pytest.mark.parametrize("phi", [0.0, 30.0, 60.0, 90.0])
def test_fig2_slope(phi):
    fit = an.asymptotic_exponent(FIG2, phi)
    assert fit.n_points >= 20 and fit.window[1] / fit.window[0] >= 10
    assert fit.within(0.02) and fit.expected == -0.5


@pytest.mark.parametrize("phi", [30.0, 60.0])
def test_fig3_slope_after_crossover(phi):
    fit = an.asymptotic_exponent(FIG3, phi)
    assert fit.window[0] == pytest.approx(3 * 9 / math.cos(math.radians(phi)))
    assert fit.within(0.05)


def test_slope_universality_across_angles():
    # the spread between angles is a finite-r bias that shrinks as the window moves out
    near = [an.asymptotic_exponent(FIG2, p).slope for p in (0, 30, 60, 90)]
    far = [an.asymptotic_exponent(FIG2, p, (1e4, 1e6)).slope for p in (0, 30, 60, 90)]
    assert max(near) - min(near) < 1e-3
    assert max(far) - min(far) < 0.05 * (max(near) - min(near))


def test_transverse_only_tends_to_constant():
    q = ck.QuantumNumbers2D(0.25, 0.0, 1.0, 1.0)
    fit = an.asymptotic_exponent(q, 60.0, (1e3, 1e5))
    assert abs(fit.slope) < 1e-3
    sec = an.line_section(q, 60.0)
    expected = math.exp(-2 * abs(math.atan(math.tan(math.radians(60)))))
    assert float(sec(np.array([1e9]))[0]) == pytest.approx(expected, rel=1e-6)


def test_slope_fit_requires_a_decade():
    with pytest.raises(ValueError):
        an.asymptotic_exponent(FIG2, 0.0, (10, 50))


def test_crossover_radius():
    assert an.crossover_radius(60.0) == pytest.approx(18.0)
    assert an.crossover_radius(0.0) is None and an.crossover_radius(90.0) is None


# -- cusps ----------------------------------------------------------------------

def test_cusp_1d():
    c = an.cusp_detect(an.meta1d_reg_profile(ck.QuantumNumbers1D(0.0, 0.25, 1.0)))
    assert c.right == pytest.approx(-0.5, abs=1e-6) and c.left == pytest.approx(0.5, abs=1e-6)
    assert c.gap == pytest.approx(1.0, abs=1e-6)


def test_cusp_smooth_direction():
    assert an.cusp_detect(an.line_section(FIG2, 90.0)).gap < 1e-6


def test_cusp_constant():
    assert an.cusp_detect(lambda r: np.ones_like(np.asarray(r, dtype=float))).gap == 0


@given(st.floats(-89, 89), st.floats(0.05, 2), st.floats(0, 2))
def test_cusp_parity(phi, gp, gq):
    q = ck.QuantumNumbers2D(0.2, gp, gq, 1.0)
    a = an.cusp_detect(an.line_section(q, phi)).gap
    b = an.cusp_detect(an.line_section(q, -phi)).gap
    assert a == pytest.approx(b, rel=1e-9, abs=1e-9)


# -- vectorized profiles agree with the scalar kernels -------------------------------

@given(st.floats(-30, 30), st.floats(-30, 30), st.floats(-3, 3).filter(lambda x: abs(x) > 1e-2))
def test_plane_matches_kernel(a, b, t):
    v = float(an.meta2d_reg_plane(FIG3, t)(np.array([a]), np.array([b]))[0])
    ref = ck.eval_meta2d_reg(ck.Point2D(t, a, b), ck.Point2D(0, 0, 0), FIG3, FIG3).value.real
    assert v == pytest.approx(ref, rel=1e-12)


# -- boundedness ----------------------------------------------------------------

def test_boundedness_regularized():
    q = ck.QuantumNumbers1D(0.22, 0.33, 1.0)
    for t in (-0.6, 0.3, 2.0):
        rep = an.boundedness_scan("meta1d-reg", q, t, np.linspace(-2, 2, 81))
        assert rep.passed and rep.argmax == (0.0,)
        assert rep.sup == pytest.approx(abs(t) ** -0.44, rel=1e-15)
    rep = an.boundedness_scan("meta2d-reg", FIG3, 1.0, np.linspace(-3, 3, 31), np.linspace(-3, 3, 31))
    assert rep.passed and rep.argmax == (0.0, 0.0)


def test_holomorphic_singularity_located():
    grid = np.linspace(-1, 1, 201)
    rep = an.boundedness_scan("meta1d-holo", ck.QuantumNumbers1D(0.22, 0.33, 1.0), -0.6, grid)
    assert not rep.passed
    assert min(abs(p[0] - 0.6) for p in rep.singular_points) <= grid[1] - grid[0]
