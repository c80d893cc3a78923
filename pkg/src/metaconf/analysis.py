"""Checks on the physical correlators: spectral positivity, contraction
limits, large-distance exponents, cusps at the origin and boundedness."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from . import corrkernels as ck
from .errors import GridTooCoarse

POS_TOL = 1e-8

# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------


def meta1d_reg_profile(qn: ck.QuantumNumbers1D, t: float = 1.0) -> Callable:
    """Vectorized ``r -> C(t, r)`` of the regularized 1D kernel (selection rules assumed)."""
    g = abs(qn.gamma / qn.mu)

    def f(r):
        r = np.asarray(r, dtype=float)
        return abs(t) ** (-2 * qn.delta) * np.exp(-2 * g * np.log1p(np.abs(qn.mu * r / t)))

    return f


def meta2d_reg_plane(qn: ck.QuantumNumbers2D, t: float = 1.0) -> Callable:
    """Vectorized ``(r_par, r_perp) -> C`` of the regularized 2D kernel."""
    gp, gq = abs(qn.gamma_par / qn.mu), abs(qn.gamma_perp / qn.mu)

    def f(rp, rq):
        a = qn.mu * np.asarray(rp, dtype=float) / t
        b = qn.mu * np.asarray(rq, dtype=float) / t
        aa = np.abs(a)
        log_alg = 2 * np.log1p(aa) + np.log1p((b / (1 + aa)) ** 2)
        den = 1 + a
        with np.errstate(divide="ignore", invalid="ignore"):
            angle = np.where(b == 0, 0.0,
                             np.where(den == 0, np.copysign(np.pi / 2, b), np.arctan(b / np.where(den == 0, 1, den))))
        return abs(t) ** (-2 * qn.delta) * np.exp(-gp * log_alg - np.abs(2 * gq * angle))

    return f


def line_section(qn: ck.QuantumNumbers2D, phi_deg: float, t: float = 1.0) -> Callable:
    """``r -> C(r cos phi, r sin phi)`` for signed ``r`` (negative r points the other way)."""
    plane = meta2d_reg_plane(qn, t)
    c, s = math.cos(math.radians(phi_deg)), math.sin(math.radians(phi_deg))
    return lambda r: plane(np.asarray(r, dtype=float) * c, np.asarray(r, dtype=float) * s)


def ray_profile(qn: ck.QuantumNumbers2D, phi_deg: float, t: float = 1.0) -> Callable:
    """Even continuation ``r -> C(|r| cos phi, |r| sin phi)`` of the ray at angle phi."""
    sec = line_section(qn, phi_deg, t)
    return lambda r: sec(np.abs(np.asarray(r, dtype=float)))


def gaussian_profile(width: float = 1.0) -> Callable:
    return lambda r: np.exp(-0.5 * (np.asarray(r, dtype=float) / width) ** 2)


def rectangular_profile(half_width: float = 1.0) -> Callable:
    return lambda r: (np.abs(np.asarray(r, dtype=float)) < half_width).astype(float)


# ---------------------------------------------------------------------------
# Wiener-Khintchine
# ---------------------------------------------------------------------------


@dataclass
class PositivityReport:
    kernel: str
    t: float
    half_width: float
    n: int
    dims: int
    min_spectral: float
    max_spectral: float
    max_imag_ratio: float
    refined_min_ratio: float | None = None
    pos_tol: float = POS_TOL

    @property
    def min_ratio(self) -> float:
        return self.min_spectral / self.max_spectral if self.max_spectral > 0 else -math.inf

    @property
    def passed(self) -> bool:
        ok = self.min_spectral >= -self.pos_tol * self.max_spectral
        if self.refined_min_ratio is not None:
            ok = ok and self.refined_min_ratio >= -self.pos_tol
        return bool(ok)

    def as_dict(self) -> dict:
        return {"kernel": self.kernel, "t": self.t, "half_width": self.half_width, "n": self.n,
                "dims": self.dims, "min": self.min_spectral, "max": self.max_spectral,
                "min_ratio": self.min_ratio, "refined_min_ratio": self.refined_min_ratio,
                "max_imag_ratio": self.max_imag_ratio, "pass": self.passed}


def symmetric_grid(half_width: float, n: int) -> np.ndarray:
    """``n`` points ``(k - n/2) dr``, ``dr = 2 L / n``: periodic and symmetric about 0."""
    if n % 2:
        raise ValueError("grid size must be even")
    dr = 2 * half_width / n
    return (np.arange(n) - n // 2) * dr


def _spectrum_1d(profile: Callable, half_width: float, n: int):
    r = symmetric_grid(half_width, n)
    c = np.asarray(profile(r), dtype=float)
    dr = r[1] - r[0]
    width_check = abs(c[n // 2 + 1] - c[n // 2]) > 0.25 * max(abs(c[n // 2]), 1e-300)
    if width_check:
        raise GridTooCoarse(f"spacing {dr:.3g} does not resolve the kernel near the origin")
    spec = np.fft.fft(np.fft.ifftshift(c)) * dr
    return spec


def _spectrum_2d(plane: Callable, half_width: float, n: int):
    r = symmetric_grid(half_width, n)
    dr = r[1] - r[0]
    X, Y = np.meshgrid(r, r, indexing="ij")
    c = np.asarray(plane(X, Y), dtype=float)
    if abs(c[n // 2 + 1, n // 2] - c[n // 2, n // 2]) > 0.25 * max(abs(c[n // 2, n // 2]), 1e-300):
        raise GridTooCoarse(f"spacing {dr:.3g} does not resolve the kernel near the origin")
    return np.fft.fft2(np.fft.ifftshift(c)) * dr * dr


def wiener_khintchine_check(profile: Callable, half_width: float, n: int, dims: int = 1, kernel: str = "",
                            t: float = 1.0, pos_tol: float = POS_TOL, refine: bool = True) -> PositivityReport:
    """Discrete spatial spectrum of a translation-invariant correlator.

    ``profile`` is ``r -> C`` for ``dims=1`` (an even section) or
    ``(r_par, r_perp) -> C`` for ``dims=2`` (the full plane).  With
    ``refine`` the grid is doubled at fixed extent and the refined
    min/max ratio must pass as well.
    """
    spectral = _spectrum_1d if dims == 1 else _spectrum_2d
    s = spectral(profile, half_width, n)
    re = s.real
    smax = float(re.max())
    rep = PositivityReport(kernel, t, half_width, n, dims, float(re.min()), smax,
                           float(np.abs(s.imag).max() / smax) if smax > 0 else math.inf, pos_tol=pos_tol)
    if refine:
        s2 = spectral(profile, half_width, 2 * n).real
        rep.refined_min_ratio = float(s2.min() / s2.max())
    return rep


# ---------------------------------------------------------------------------
# contraction limit
# ---------------------------------------------------------------------------


@dataclass
class LimitTable:
    mu: list
    max_rel_err: list
    per_point: list              # per point, errors over mu
    decade_ratios: list = field(default_factory=list)
    monotone: bool = True

    @property
    def linear(self) -> bool:
        return all(8 <= r <= 12 for r in self.decade_ratios)


def mu_limit_check(qn, mu_list: Sequence[float], points: Sequence[tuple]) -> LimitTable:
    """Relative distance between the regularized meta kernel at ``mu`` and the CGA kernel.

    ``qn`` carries the physical rapidities (its ``mu`` is replaced).  Points
    are ``(t, dr)`` in 1D or ``(t, dr_par, dr_perp)`` in 2D.
    """
    mus = list(mu_list)
    per_point = []
    for pt in points:
        errs = []
        for mu in mus:
            if isinstance(qn, ck.QuantumNumbers1D):
                q = ck.QuantumNumbers1D(qn.delta, qn.gamma, mu)
                p1, p2 = ck.Point1D(*pt), ck.Point1D(0.0, 0.0)
                meta = ck.eval_meta1d_reg(p1, p2, q, q).value.real
                cga = ck.eval_cga_reg(p1, p2, q, q).value.real
            else:
                q = ck.QuantumNumbers2D(qn.delta, qn.gamma_par, qn.gamma_perp, mu)
                p1, p2 = ck.Point2D(*pt), ck.Point2D(0.0, 0.0, 0.0)
                meta = ck.eval_meta2d_reg(p1, p2, q, q).value.real
                cga = ck.eval_cga_reg(p1, p2, q, q).value.real
            errs.append(abs(meta - cga) / abs(cga))
        per_point.append(errs)
    arr = np.array(per_point)
    worst = arr.max(axis=0).tolist()
    order = np.argsort(mus)[::-1]
    monotone = all(
        all(row[order[k + 1]] <= row[order[k]] for k in range(len(mus) - 1)) for row in per_point
    )
    ratios = []
    for k in range(len(mus) - 1):
        a, b = order[k], order[k + 1]
        if abs(math.log10(mus[a] / mus[b]) - 1) < 1e-9 and worst[b] > 0:
            ratios.append(worst[a] / worst[b])
    return LimitTable(mus, worst, per_point, ratios, monotone)


# ---------------------------------------------------------------------------
# exponents and cusps
# ---------------------------------------------------------------------------


@dataclass
class SlopeFit:
    window: tuple
    slope: float
    stderr: float
    expected: float
    n_points: int
    crossover: float | None = None

    def within(self, tol: float) -> bool:
        return abs(self.slope - self.expected) <= tol


def crossover_radius(phi_deg: float, t: float = 1.0, mu: float = 1.0) -> float | None:
    """Distance where ``(r sin phi)/(1 + r cos phi)`` reaches ``0.9 tan phi`` (``9 t/(mu cos phi)``)."""
    c = math.cos(math.radians(phi_deg))
    s = math.sin(math.radians(phi_deg))
    if abs(s) < 1e-15 or abs(c) < 1e-15:
        return None
    return 9.0 * abs(t) / (mu * abs(c))


def asymptotic_exponent(qn: ck.QuantumNumbers2D, phi_deg: float, r_window: tuple | None = None,
                        t: float = 1.0, n_points: int = 60) -> SlopeFit:
    """OLS slope of ``log C`` against ``log r`` along the ray at angle phi.

    Default window: two decades from three crossover radii when the
    transverse rapidity is active, otherwise ``[1e2, 1e4]``.
    """
    rc = crossover_radius(phi_deg, t, qn.mu) if qn.gamma_perp != 0 else None
    if r_window is None:
        r_window = (3 * rc, 300 * rc) if rc is not None else (1e2, 1e4)
    lo, hi = r_window
    if n_points < 20 or hi / lo < 10:
        raise ValueError("fit needs at least 20 points over at least one decade")
    r = np.geomspace(lo, hi, n_points)
    c = line_section(qn, phi_deg, t)(r)
    fit = stats.linregress(np.log(r), np.log(c))
    return SlopeFit((float(lo), float(hi)), float(fit.slope), float(fit.stderr),
                    -2 * abs(qn.gamma_par / qn.mu), n_points, rc)


@dataclass
class CuspReport:
    left: float
    right: float
    gap: float


def cusp_detect(profile: Callable, h: float = 1e-4) -> CuspReport:
    """One-sided derivatives at ``r = 0`` with one Richardson step.

    ``profile`` is a signed section ``r -> C(r)``; ``D(h) = (C(h) - C(0))/h``
    and the refined value is ``2 D(h/2) - D(h)``.
    """
    f0 = float(profile(np.array([0.0]))[0])

    def one_sided(sign):
        def D(step):
            return sign * (float(profile(np.array([sign * step]))[0]) - f0) / step
        return 2 * D(h / 2) - D(h)

    right, left = one_sided(1.0), one_sided(-1.0)
    return CuspReport(left, right, abs(right - left))


# ---------------------------------------------------------------------------
# boundedness
# ---------------------------------------------------------------------------


@dataclass
class BoundednessReport:
    kernel: str
    t: float
    sup: float
    argmax: tuple
    bound: float
    passed: bool
    singular_points: list = field(default_factory=list)


def boundedness_scan(kind, qn, t: float, r_grid, r_perp_grid=None) -> BoundednessReport:
    """Scan ``|C|`` over separations at fixed ``t``.

    Regularized kernels pass when the sup equals ``|t|^(-2 delta)`` and is
    attained at zero separation (if on the grid).  For holomorphic kernels
    the report lists grid points flagged singular plus the location of the
    largest modulus when it is an isolated spike.
    """
    kind = ck.CorrelatorKind(kind)
    bound = abs(t) ** (-2 * qn.delta)
    rs = np.asarray(r_grid, dtype=float)
    two_d = r_perp_grid is not None
    vals, coords, singular = [], [], []
    for rp in rs:
        for rq in (np.asarray(r_perp_grid, dtype=float) if two_d else [None]):
            if two_d:
                res = ck.evaluate(kind, ck.Point2D(t, rp, rq), ck.Point2D(0.0, 0.0, 0.0), qn, qn)
                coord = (float(rp), float(rq))
            else:
                res = ck.evaluate(kind, ck.Point1D(t, rp), ck.Point1D(0.0, 0.0), qn, qn)
                coord = (float(rp),)
            if res.is_singular:
                singular.append(coord)
                continue
            vals.append(abs(res.value))
            coords.append(coord)
    vals_a = np.array(vals)
    k = int(np.argmax(vals_a))
    sup = float(vals_a[k])
    regularized = kind in (ck.CorrelatorKind.META1D_REG, ck.CorrelatorKind.META2D_REG, ck.CorrelatorKind.CGA_REG)
    if regularized:
        at_origin = all(abs(c) == 0 for c in coords[k]) or not any(all(abs(c) == 0 for c in cc) for cc in coords)
        passed = sup <= bound * (1 + 1e-14) and at_origin and not singular
    else:
        spike = sup > 10 * float(np.median(vals_a))
        if spike and coords[k] not in singular:
            singular.append(coords[k])
        passed = not singular and sup <= bound * (1 + 1e-14)
    return BoundednessReport(kind.value, t, sup, coords[k], bound, bool(passed), singular)
