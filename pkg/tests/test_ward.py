import math

import numpy as np
import pytest

from metaconf import corrkernels as ck
from metaconf.errors import SingularSamplePoint
from metaconf.liealg import (
    DiffOp, Kind, KernelSpec, dual_pde, dual_ward_residual, lifted_ward_generators, ward_residual,
)
from metaconf.poly import MultiPoly
from metaconf.suites import ward_points_1d, ward_points_2d

Q1 = ck.QuantumNumbers1D(0.22, 0.33, 1.0)
HOLO1 = KernelSpec("meta1d-holo", Q1, Q1)
GENS1 = lifted_ward_generators(Kind.META1D)


@pytest.fixture(scope="module")
def pts1():
    return ward_points_1d(HOLO1, 20, np.random.default_rng(1))


@pytest.mark.parametrize("gid", sorted(GENS1))
def test_holomorphic_1d_ward(gid, pts1):
    rep = ward_residual(HOLO1, GENS1[gid], pts1)
    assert rep.passed and rep.max_residual < 1e-6


def test_second_order_convergence(pts1):
    rep = ward_residual(HOLO1, GENS1["X_1"], pts1)
    ratios = [r for r, (a, _) in zip(rep.step_ratios, rep.residuals) if a > 1e-9]
    assert ratios and all(abs(r - 4) < 0.8 for r in ratios)


def test_holomorphic_2d_ward():
    q = ck.QuantumNumbers2D(0.3, 0.25, 0.1, 1.0)
    K = KernelSpec("meta2d-holo", q, q)
    pts = ward_points_2d(20, np.random.default_rng(2))
    for gid, G in lifted_ward_generators(Kind.META2D).items():
        assert ward_residual(K, G, pts).max_residual < 1e-6, gid


def test_regularized_inside_holomorphic_sector():
    K = KernelSpec("meta1d-reg", Q1, Q1)
    pts = ward_points_1d(K, 20, np.random.default_rng(3),
                         lambda c: (c["r1"] - c["r2"]) / (c["t1"] - c["t2"]) > 0)
    for gid, G in GENS1.items():
        assert ward_residual(K, G, pts).max_residual < 1e-6, gid


def test_translations_at_rounding_level(pts1):
    G = DiffOp({"t1": -1, "t2": -1})
    assert ward_residual(HOLO1, G, pts1).max_residual < 1e-10


def test_scaling_mismatch_residual_is_linear(pts1):
    # X_1 acting on the closed form leaves 2 (delta1 - delta2) t2 C
    c = pts1[0]
    out = []
    for off in (1e-2, 2e-2):
        rep = ward_residual(HOLO1, GENS1["X_1"], [c], values={"delta2": Q1.delta + off})
        out.append(rep.extrapolated[0])
        assert rep.extrapolated[0] == pytest.approx(2 * off * abs(c["t2"]), rel=1e-5)
    assert out[1] / out[0] == pytest.approx(2, rel=1e-6)


def test_singular_points_rejected():
    c = {"t1": 1.0, "t2": 0.4, "r1": -0.6, "r2": 0.0}
    with pytest.raises(SingularSamplePoint):
        ward_residual(HOLO1, GENS1["X_0"], [c])


def test_dual_pde_on_solution_form():
    def F(eta, etabar, t, xi, xibar, d=0.2):
        w = eta / 2 + 1j * np.log(1 + xi / t)
        return t ** (-2 * d) * np.exp(1j * w - w * w)

    rng = np.random.default_rng(4)
    pts = [{"eta": rng.uniform(-1, 1), "t": rng.uniform(0.5, 2), "xi": rng.uniform(-0.3, 2)} for _ in range(20)]
    for pde in ("1d-eta", "1d-scale"):
        assert dual_ward_residual(F, pde, pts, 0.2).max_residual < 1e-6


def test_dual_pde_2d_solution_form():
    def g(a):
        return np.exp(1j * a - a * a)

    def F(eta, etabar, t, xi, xibar, d=0.3):
        return t ** (-2 * d) * g(eta / 2 + 1j * np.log(1 + xi / t)) * g(etabar / 2 + 1j * np.log(1 + xibar / t))

    pts = [{"eta": 0.3, "etabar": -0.5, "t": 1.2, "xi": 0.4, "xibar": 0.9},
           {"eta": -1.0, "etabar": 0.2, "t": 2.0, "xi": 1.5, "xibar": -0.4}]
    for pde in ("2d-eta", "2d-etabar", "2d-scale"):
        assert dual_ward_residual(F, pde, pts, 0.3).max_residual < 1e-6


def test_dual_scale_negative_control():
    def F(eta, etabar, t, xi, xibar):
        return t ** (-2 * 0.3) * (1 + xi)

    pts = [{"eta": 0.1, "t": 1.5, "xi": 0.7}]
    assert dual_ward_residual(F, "1d-scale", pts, 0.3).max_residual > 1e-3


def test_unknown_dual_pde():
    with pytest.raises(ValueError):
        dual_pde("3d")
