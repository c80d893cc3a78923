"""From dual-space solutions back to bounded physical correlators.

The dual correlator is ``|t|^(-2 delta) F(zeta_+ + i lambda)`` with
``F`` taken from H2+ or H2- according to the sign of ``lambda``.  After
the rapidity integrals collapse on their delta functions only one value
of each sector spectrum survives, at twice the reduced rapidity, times
``exp(-2 |gamma/mu| |lambda|)``.  That reduced form is what
:func:`invert_to_physical_1d` and :func:`invert_to_physical_2d` compute.

The sector variables come in two flavours.  ``lam`` is the raw logarithm
``ln(1 + x)``, defined only for ``1 + x > 0``.  ``lam_reg = sign(x) ln(1 + |x|)``
is its sector-wise continuation; feeding it to the inversion with flat
spectra reproduces the regularized closed forms exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import corrkernels as ck
from .corrkernels import EQ_TOL
from .errors import SectorUndefined, SelectionRuleViolation, SingularTime
from .hardy import HalfLineSpectrum, QuadrantSpectrum, half_line_transform

# ---------------------------------------------------------------------------
# dual variables and sectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DualVars1D:
    zeta_plus: float
    lam: float

    @classmethod
    def from_coordinates(cls, zeta1, zeta2, t1, t2, r1, r2, mu1=1.0, mu2=1.0) -> "DualVars1D":
        t = t1 - t2
        if t == 0:
            raise SingularTime("t1 = t2")
        arg = 1 + (mu1 * r1 - mu2 * r2) / t
        if not arg > 0:
            raise SectorUndefined(f"1 + dxi/t = {arg} <= 0: logarithmic dual variable undefined")
        return cls(0.5 * (mu1 * zeta1 + mu2 * zeta2), math.log(arg))


@dataclass(frozen=True)
class DualVars2D:
    u: float
    u_bar: float
    lam_par: float
    lam_perp: float

    @classmethod
    def from_coordinates(cls, zeta_par, zeta_perp, t, xi_par, xi_perp, mu=1.0) -> "DualVars2D":
        """``zeta_par``/``zeta_perp`` are pairs (particle 1, particle 2); ``xi`` are ``mu``-scaled separations."""
        lam_par, lam_perp = raw_lambda_2d(t, xi_par, xi_perp)
        return cls(0.5 * mu * (zeta_par[0] + zeta_par[1]), 0.5 * mu * (zeta_perp[0] + zeta_perp[1]),
                   lam_par, lam_perp)


def raw_lambda_2d(t: float, xi_par: float, xi_perp: float) -> tuple[float, float]:
    """``(1/2 ln[(1 + a)^2 + b^2], arctan(b / (1 + a)))`` with ``a, b = xi/t``."""
    if t == 0:
        raise SingularTime("t = 0")
    a, b = xi_par / t, xi_perp / t
    mod2 = (1 + a) ** 2 + b * b
    if mod2 == 0:
        raise SectorUndefined("complex factor vanishes")
    return 0.5 * math.log(mod2), ck._atan_ratio(b, 1 + a)


def regularized_lambda_1d(t: float, xi: float) -> float:
    """``sign(x) ln(1 + |x|)`` with ``x = xi/t``."""
    if t == 0:
        raise SingularTime("t = 0")
    x = xi / t
    return math.copysign(math.log1p(abs(x)), x) if x != 0 else 0.0


def regularized_lambda_2d(t: float, xi_par: float, xi_perp: float) -> tuple[float, float]:
    """``(sign(a) 1/2 ln[(1+|a|)^2 + b^2], arctan(b/(1+a)))``; the perpendicular part stays raw."""
    if t == 0:
        raise SingularTime("t = 0")
    a, b = xi_par / t, xi_perp / t
    aa = abs(a)
    mag = math.log1p(aa) + 0.5 * math.log1p((b / (1 + aa)) ** 2)
    lam_par = -mag if a < 0 else mag
    return lam_par, ck._atan_ratio(b, 1 + a)


def _sign_label(x: float) -> str:
    return "+" if x > 0 else ("-" if x < 0 else "0")


def sector_map(t: float, r, mu: float = 1.0):
    """Sector variables and sign pattern.

    1D (``r`` scalar): ``(lam, sector)`` with ``lam`` the raw logarithm or
    None where ``1 + mu r/t <= 0`` (sector ``"undefined"``; the sign of the
    regularized variable is appended, e.g. ``"undefined-"``).
    2D (``r = (r_par, r_perp)``): ``((lam_par, lam_perp), sector)`` using
    raw values, sector like ``"+-"``.
    """
    if t == 0:
        raise SingularTime("t = 0")
    if np.ndim(r) == 0:
        x = mu * float(r) / t
        if 1 + x > 0:
            lam = math.log1p(x)
            return lam, _sign_label(lam)
        return None, "undefined" + _sign_label(x)
    lp, lq = raw_lambda_2d(t, mu * r[0], mu * r[1])
    return (lp, lq), _sign_label(lp) + _sign_label(lq)


# ---------------------------------------------------------------------------
# sector spectra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SectorSpectra1D:
    F_plus: HalfLineSpectrum
    F_minus: HalfLineSpectrum

    @classmethod
    def flat(cls) -> "SectorSpectra1D":
        one = HalfLineSpectrum(func=lambda s: np.ones_like(np.asarray(s, dtype=float)))
        return cls(one, one)


@dataclass(frozen=True)
class SectorSpectra2D:
    F_pp: QuadrantSpectrum
    F_pm: QuadrantSpectrum
    F_mp: QuadrantSpectrum
    F_mm: QuadrantSpectrum

    @classmethod
    def flat(cls) -> "SectorSpectra2D":
        one = QuadrantSpectrum(func=lambda a, b: np.ones(np.broadcast(a, b).shape))
        return cls(one, one, one, one)

    def pick(self, s_par: int, s_perp: int) -> QuadrantSpectrum:
        return {(1, 1): self.F_pp, (1, -1): self.F_pm, (-1, 1): self.F_mp, (-1, -1): self.F_mm}[s_par, s_perp]


# ---------------------------------------------------------------------------
# dualization
# ---------------------------------------------------------------------------


def _trapezoid_weights(grid: np.ndarray) -> np.ndarray:
    g = np.asarray(grid, dtype=float)
    w = np.zeros_like(g)
    d = np.diff(g)
    w[:-1] += d / 2
    w[1:] += d / 2
    return w


def dualize_field(values, gamma_grid, zeta_grid, inverse: bool = False):
    """Fourier transform in the rapidity: ``(2 pi)^(-1/2) int e^{i gamma zeta} phi_gamma``.

    For 2D pass ``values`` as a matrix over ``(gamma, gamma_bar)`` and the
    grids as pairs; the prefactor becomes ``(2 pi)^(-1)``.  ``inverse``
    flips the sign of the phase (grids swap roles).
    """
    sign = -1.0 if inverse else 1.0
    if isinstance(gamma_grid, tuple):
        (g1, g2), (z1, z2) = gamma_grid, zeta_grid
        K1 = np.exp(sign * 1j * np.outer(z1, g1)) * _trapezoid_weights(g1)
        K2 = np.exp(sign * 1j * np.outer(z2, g2)) * _trapezoid_weights(g2)
        return K1 @ np.asarray(values, dtype=complex) @ K2.T / (2 * math.pi)
    g, z = np.asarray(gamma_grid, dtype=float), np.asarray(zeta_grid, dtype=float)
    K = np.exp(sign * 1j * np.outer(z, g)) * _trapezoid_weights(g)
    return K @ np.asarray(values, dtype=complex) / math.sqrt(2 * math.pi)


# ---------------------------------------------------------------------------
# dual correlator
# ---------------------------------------------------------------------------


def _lower_transform(spec: HalfLineSpectrum, z: complex) -> complex:
    """H2- element from a half-line spectrum: ``(2 pi)^(-1/2) int e^{-i z s} F(s) ds``."""
    return half_line_transform(spec, -z)[0]


def dual_correlator_1d(dv: DualVars1D, delta1: float, t: float, spec: SectorSpectra1D) -> complex:
    """``|t|^(-2 d1) F(zeta_+ + i lam)`` with F from the H2+ or H2- sector.

    On ``lam = 0`` the two boundary values are averaged (this needs
    spectra with a declared decay).
    """
    if t == 0:
        raise SingularTime("t = 0")
    z = complex(dv.zeta_plus, dv.lam)
    pref = abs(t) ** (-2 * delta1)
    if dv.lam > 0:
        val = half_line_transform(spec.F_plus, z)[0]
    elif dv.lam < 0:
        val = _lower_transform(spec.F_minus, z)
    else:
        val = 0.5 * (half_line_transform(spec.F_plus, z)[0] + _lower_transform(spec.F_minus, z))
    return pref * val


# ---------------------------------------------------------------------------
# inversion to physical space
# ---------------------------------------------------------------------------


def _spec_value(spec: HalfLineSpectrum, s: float) -> complex:
    return complex(np.asarray(spec(np.array([s])))[0])


def _as_number(v: complex):
    return v.real if v.imag == 0 else v


def _sector_sign(lam: float, g: float) -> int:
    """Sign of the sector; on ``lam = 0`` the rapidity decides (Theta(0) = 1)."""
    if lam > 0:
        return 1
    if lam < 0:
        return -1
    return 1 if g >= 0 else -1


def invert_to_physical_1d(gamma1: float, mu1: float, gamma2: float, mu2: float, lam: float,
                          spec: SectorSpectra1D):
    """Delta-reduced physical correlator (without the ``|t|`` prefactor).

    ``Theta(+-g) F_+-(2|g|) exp(-2 |g| |lam|)`` with ``g = gamma1/mu1``;
    zero when the rapidity sign excludes the sector of ``lam``.
    """
    g1, g2 = gamma1 / mu1, gamma2 / mu2
    if abs(g1 - g2) > EQ_TOL:
        raise SelectionRuleViolation(f"gamma1/mu1 = {g1} != gamma2/mu2 = {g2}")
    s = _sector_sign(lam, g1)
    if s * g1 < 0:
        return 0.0
    F = spec.F_plus if s > 0 else spec.F_minus
    return _as_number(_spec_value(F, 2 * abs(g1)) * math.exp(-2 * abs(g1) * abs(lam)))


def invert_to_physical_2d(qn1, qn2, lam_par: float, lam_perp: float, spec: SectorSpectra2D):
    """Quadrant-selected delta-reduced correlator (without the ``|t|`` prefactor)."""
    gp1, gq1 = qn1.gamma_par / qn1.mu, qn1.gamma_perp / qn1.mu
    gp2, gq2 = qn2.gamma_par / qn2.mu, qn2.gamma_perp / qn2.mu
    if abs(gp1 - gp2) > EQ_TOL or abs(gq1 - gq2) > EQ_TOL:
        raise SelectionRuleViolation("reduced rapidities differ")
    sp, sq = _sector_sign(lam_par, gp1), _sector_sign(lam_perp, gq1)
    if sp * gp1 < 0 or sq * gq1 < 0:
        return 0.0
    F = spec.pick(sp, sq)
    val = complex(np.asarray(F.func(np.array(2 * abs(gp1)), np.array(2 * abs(gq1)))))
    return _as_number(val * math.exp(-2 * abs(gp1) * abs(lam_par) - 2 * abs(gq1) * abs(lam_perp)))


def aligned_rapidity(magnitude: float, lam: float, g_sign_on_zero: int = 1) -> float:
    """Rapidity of the given magnitude whose sign matches the sector of ``lam``."""
    s = 1 if lam > 0 else (-1 if lam < 0 else g_sign_on_zero)
    return s * abs(magnitude)


def physical_correlator_1d(p1: ck.Point1D, p2: ck.Point1D, qn1: ck.QuantumNumbers1D, qn2: ck.QuantumNumbers1D,
                           spec: SectorSpectra1D, norm: float = 1.0):
    """``norm |t|^(-2 d1)`` times the inversion at the regularized ``lambda``.

    Returns 0 on a selection-rule violation, like the closed-form kernels.
    """
    t = p1.t - p2.t
    if t == 0:
        raise SingularTime("t1 = t2")
    if abs(qn1.delta - qn2.delta) > EQ_TOL:
        return 0.0
    lam = regularized_lambda_1d(t, qn1.mu * p1.r - qn2.mu * p2.r)
    try:
        val = invert_to_physical_1d(qn1.gamma, qn1.mu, qn2.gamma, qn2.mu, lam, spec)
    except SelectionRuleViolation:
        return 0.0
    return norm * abs(t) ** (-2 * qn1.delta) * val


def physical_correlator_2d(p1: ck.Point2D, p2: ck.Point2D, qn1: ck.QuantumNumbers2D, qn2: ck.QuantumNumbers2D,
                           spec: SectorSpectra2D, norm: float = 1.0):
    t = p1.t - p2.t
    if t == 0:
        raise SingularTime("t1 = t2")
    if abs(qn1.delta - qn2.delta) > EQ_TOL:
        return 0.0
    lp, lq = regularized_lambda_2d(t, qn1.mu * p1.r_par - qn2.mu * p2.r_par,
                                   qn1.mu * p1.r_perp - qn2.mu * p2.r_perp)
    try:
        val = invert_to_physical_2d(qn1, qn2, lp, lq, spec)
    except SelectionRuleViolation:
        return 0.0
    return norm * abs(t) ** (-2 * qn1.delta) * val


@dataclass
class EquivalenceReport:
    n_points: int
    norm: float
    max_rel_dev: float
    sectors: dict

    @property
    def passed(self) -> bool:
        return self.max_rel_dev < 1e-10


def flat_equivalence_1d(points: Sequence[tuple], delta: float, g_abs: float, mu: float = 1.0) -> EquivalenceReport:
    """Flat-spectrum inversion against the regularized 1D kernel.

    ``points`` are ``(t, dr)`` pairs; the rapidity sign is aligned with each
    point's sector.  One global constant is fitted at the first point.
    """
    spec = SectorSpectra1D.flat()
    norm, dev, sectors = None, 0.0, {}
    for t, dr in points:
        lam = regularized_lambda_1d(t, mu * dr)
        g = aligned_rapidity(g_abs, lam) * mu
        q = ck.QuantumNumbers1D(delta, g, mu)
        p1, p2 = ck.Point1D(t, dr), ck.Point1D(0.0, 0.0)
        ref = ck.eval_meta1d_reg(p1, p2, q, q).value.real
        got = physical_correlator_1d(p1, p2, q, q, spec)
        if norm is None:
            norm = ref / got
        dev = max(dev, abs(norm * got - ref) / abs(ref))
        key = _sign_label(lam)
        sectors[key] = sectors.get(key, 0) + 1
    return EquivalenceReport(len(points), float(norm), float(dev), sectors)


def flat_equivalence_2d(points: Sequence[tuple], delta: float, gpar_abs: float, gperp_abs: float,
                        mu: float = 1.0) -> EquivalenceReport:
    """2D analogue over ``(t, dr_par, dr_perp)`` triples, all four quadrants."""
    spec = SectorSpectra2D.flat()
    norm, dev, sectors = None, 0.0, {}
    for t, dp, dq in points:
        lp, lq = regularized_lambda_2d(t, mu * dp, mu * dq)
        q = ck.QuantumNumbers2D(delta, aligned_rapidity(gpar_abs, lp) * mu, aligned_rapidity(gperp_abs, lq) * mu, mu)
        p1, p2 = ck.Point2D(t, dp, dq), ck.Point2D(0.0, 0.0, 0.0)
        ref = ck.eval_meta2d_reg(p1, p2, q, q).value.real
        got = physical_correlator_2d(p1, p2, q, q, spec)
        if norm is None:
            norm = ref / got
        dev = max(dev, abs(norm * got - ref) / abs(ref))
        key = _sign_label(lp) + _sign_label(lq)
        sectors[key] = sectors.get(key, 0) + 1
    return EquivalenceReport(len(points), float(norm), float(dev), sectors)
