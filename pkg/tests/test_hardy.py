import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from metaconf import hardy as hd
from metaconf.errors import (
    BoundaryDecayInsufficient, NonPositiveImaginaryPart, NuOutOfRange, TailNotNegligible,
)

EXP = hd.HalfLineSpectrum(lambda s: np.exp(-s), decay_rate=1.0)
ZERO = hd.HalfLineSpectrum(lambda s: 0 * s)


def closed(z):
    return 1 / (hd.SQRT_2PI * (1 - 1j * z))


# -- Gamma --------------------------------------------------------------------

def test_gamma_special_values():
    assert hd.gamma_fn(1) == pytest.approx(1, rel=1e-15)
    assert hd.gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert hd.gamma_fn(3.7) == pytest.approx(2.7 * hd.gamma_fn(2.7), rel=1e-12)
    with pytest.raises(ValueError):
        hd.gamma_fn(-2)


@given(st.floats(0.1, 30))
def test_gamma_against_mpmath(x):
    assert hd.gamma_fn(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-12)


def test_gamma_reflection_branch():
    assert hd.gamma_fn(-0.5) == pytest.approx(-2 * math.sqrt(math.pi), rel=1e-13)


# -- proposition norm ---------------------------------------------------------

@pytest.mark.parametrize("nu,c,expected", [
    (0.5, 1.0, math.pi),
    (1.0, 1.0, math.pi / 2),
    (1.0, 2.0, math.pi / 16),
])
def test_proposition_norm_examples(nu, c, expected):
    closed_form, quad = hd.proposition_norm(nu, c)
    assert closed_form == pytest.approx(expected, rel=1e-13)
    assert quad == pytest.approx(expected, rel=1e-12)


@given(st.floats(0.3, 3), st.floats(0.1, 5), st.floats(0, 2))
def test_proposition_norm_agrees(nu, lam, v):
    closed_form, quad = hd.proposition_norm(nu, lam, v)
    assert quad == pytest.approx(closed_form, rel=1e-8)


def test_proposition_norm_direct_integral():
    ref = float(mpmath.quad(lambda u: (u * u + 1.5 ** 2) ** -1.5, [-mpmath.inf, 0, mpmath.inf]))
    assert hd.proposition_norm(0.75, 1.0, 0.5)[1] == pytest.approx(ref, rel=1e-12)


def test_proposition_norm_domain():
    with pytest.raises(NuOutOfRange):
        hd.proposition_norm(0.25, 1.0)
    with pytest.raises(ValueError):
        hd.proposition_norm(1.0, -1.0)


# -- half-plane reconstruction ------------------------------------------------

def test_reconstruct_at_i():
    val, err = hd.hardy_reconstruct_1d(EXP, 1j)
    assert val == pytest.approx(0.5 / hd.SQRT_2PI, rel=1e-14)
    assert err < 1e-12


@given(st.floats(-20, 20), st.floats(0.01, 10))
def test_reconstruct_matches_closed_form(x, y):
    val, _ = hd.hardy_reconstruct_1d(EXP, hd.TubePoint(x, y))
    assert abs(val - closed(complex(x, y))) <= 1e-10 * abs(closed(complex(x, y)))


def test_reconstruct_zero_and_domain():
    assert hd.hardy_reconstruct_1d(ZERO, 2j)[0] == 0
    with pytest.raises(NonPositiveImaginaryPart):
        hd.hardy_reconstruct_1d(EXP, 1.0)
    with pytest.raises(NonPositiveImaginaryPart):
        hd.TubePoint(0.0, 0.0)


def test_tail_must_be_declared_or_negligible():
    slow = hd.HalfLineSpectrum(lambda s: 1 / (1 + s * s), zeta_max=5.0)
    with pytest.raises(TailNotNegligible):
        hd.hardy_reconstruct_1d(slow, 0.1j)


def test_sampled_spectrum_and_csv(tmp_path):
    grid = np.linspace(0, 40, 4001)
    spec = hd.HalfLineSpectrum.from_samples(grid, np.exp(-grid), decay_rate=1.0)
    assert hd.hardy_reconstruct_1d(spec, 0.5 + 1j)[0] == pytest.approx(closed(0.5 + 1j), rel=1e-8)
    path = tmp_path / "spec.csv"
    with open(path, "w") as fh:
        fh.write("# zeta, re, im\n")
        for z in grid:
            fh.write(f"{float(z)!r},{math.exp(-z)!r},0.0\n")
    loaded = hd.HalfLineSpectrum.from_csv(path, decay_rate=1.0)
    assert loaded.l2_norm_sq() == pytest.approx(0.5, rel=1e-8)
    assert loaded.tail_fraction() < 1e-12


# -- boundary representation --------------------------------------------------

def test_cauchy_matches_reconstruction():
    def boundary(x):
        return closed(np.asarray(x, dtype=complex)) ** 2

    spec = hd.HalfLineSpectrum(lambda s: s * np.exp(-s) / hd.SQRT_2PI, decay_rate=1.0)
    for z in (2j, 0.5 + 0.3j, -3 + 1j):
        val, conj = hd.cauchy_boundary_rep(boundary, z)
        assert val == pytest.approx(hd.hardy_reconstruct_1d(spec, z)[0], rel=1e-8)
        assert abs(conj) < 1e-8 * abs(val)


def test_cauchy_gaussian_negative_control():
    val, conj = hd.cauchy_boundary_rep(lambda x: np.exp(-np.asarray(x) ** 2 / 2) + 0j, 1j)
    assert abs(conj) > 0.1 * abs(val)


def test_cauchy_zero_and_slow_decay():
    assert hd.cauchy_boundary_rep(lambda x: 0 * np.asarray(x, dtype=complex), 1j) == (0, 0)
    with pytest.raises(BoundaryDecayInsufficient):
        hd.cauchy_boundary_rep(lambda x: 1 / (1 + np.abs(np.asarray(x)) ** 0.25) + 0j, 1j)


# -- norms --------------------------------------------------------------------

def test_plancherel_and_line_norm():
    f = lambda z: closed(z)
    for y in (0.1, 0.5, 1.0, 2.0):
        expected = 1 / (2 * (1 + y))
        assert hd.plancherel_line_norm_sq(EXP, y) == pytest.approx(expected, rel=1e-12)
        assert hd.line_norm_sq(f, y) == pytest.approx(expected, rel=1e-9)
    assert hd.plancherel_line_norm_sq(EXP, 0.0) == pytest.approx(0.5, rel=1e-12)


def test_norm_sup_monotone():
    rep = hd.hardy_norm_sup(closed, [0.1, 0.5, 1, 2])
    assert rep.non_increasing and rep.argsup == 0.1
    assert rep.sup == pytest.approx(1 / 2.2, rel=1e-9)
    assert hd.hardy_norm_sup(lambda z: 0 * z, [0.5, 1]).sup == 0


# -- decay criterion and limits -----------------------------------------------

def test_lemma_on_exponential():
    f = lambda z: np.exp(1j * z) / (z + 2j)
    rep = hd.lemma_check(f, 0.5, 1.0, [10, 100, 1000])
    assert rep.hypotheses_hold and rep.bound_holds
    assert rep.scaled_arc[-1] < rep.scaled_arc[0] * 2


def test_lemma_arc_scaling_for_pure_exponential():
    rep = hd.lemma_check(lambda z: np.exp(1j * z), 1.0, 1.0, [10, 100, 1000])
    assert rep.decay_hypothesis and rep.bound_holds
    for a, b in zip(rep.scaled_arc, rep.scaled_arc[1:]):
        assert 0.5 <= b / a <= 2
    # |e^{ix}|^2 = 1 on the axis: not square integrable
    assert not rep.l2_hypothesis


def test_lemma_algebraic_decay_fails_hypothesis():
    rep = hd.lemma_check(lambda z: 1 / (z + 2j), 0.5, 1.0, [10, 100])
    assert not rep.decay_hypothesis and not rep.hypotheses_hold


def test_lemma_zero():
    rep = hd.lemma_check(lambda z: 0 * z, 1.0, 1.0, [10])
    assert rep.hypotheses_hold and rep.bound_holds


def test_limit_behaviour():
    rep = hd.limit_behavior_check(EXP, [-3, 0, 0.5, 3], [1, 10, 100, 1000])
    assert rep.bounded and rep.tends_to_zero
    # sup over x sits at x = 0: (2 pi)^(-1/2) / (1 + y)
    assert rep.sup_abs[-1] == pytest.approx(1 / (hd.SQRT_2PI * 1001), rel=1e-10)
    assert rep.sup_abs[-1] / rep.sup_abs[0] == pytest.approx(2 / 1001, rel=1e-10)
    zero = hd.limit_behavior_check(ZERO, [0.0], [1, 10])
    assert zero.sup_abs == [0, 0]


# -- quadrant -----------------------------------------------------------------

def test_quadrant_product():
    spec = hd.QuadrantSpectrum(lambda a, b: np.exp(-a - b), decay_rates=(1.0, 1.0))
    assert hd.hardy_reconstruct_2d(spec, (1j, 1j)) == pytest.approx(0.25 / (2 * math.pi), rel=1e-13)
    for z1, z2 in ((0.3 + 0.2j, -1 + 0.5j), (4 + 1j, 0.1j)):
        assert hd.hardy_reconstruct_2d(spec, hd.TubePoint((z1.real, z2.real), (z1.imag, z2.imag))) == \
            pytest.approx(closed(z1) * closed(z2), rel=1e-10)
    zero = hd.QuadrantSpectrum(lambda a, b: 0 * a * b)
    assert hd.hardy_reconstruct_2d(zero, (1j, 1j)) == 0
    with pytest.raises(NonPositiveImaginaryPart):
        hd.hardy_reconstruct_2d(spec, (1j, 1.0))


def test_quadrant_self_dual():
    out = hd.dual_cone_check()
    assert out["self_dual"] and out["dual_size"] == out["closure_size"]
