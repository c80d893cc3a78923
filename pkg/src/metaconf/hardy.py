"""Hardy spaces of the upper half-plane and of the first-quadrant tube.

Half-line Fourier representations, the Cauchy boundary representation,
norm suprema over horizontal lines, the exponential-decay sufficient
criterion, and the explicit norm of ``u ** (-2 nu)`` together with a
Lanczos Gamma function.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, interpolate

from .errors import (
    BoundaryDecayInsufficient,
    NonPositiveImaginaryPart,
    NuOutOfRange,
    TailNotNegligible,
)
from .quadrature import ORDER, _rule, adaptive_gl, integrate_real_line

SQRT_2PI = math.sqrt(2 * math.pi)

# ---------------------------------------------------------------------------
# Gamma function
# ---------------------------------------------------------------------------

_LANCZOS_G = 607 / 128
_LANCZOS = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)


def gamma_fn(x: float) -> float:
    """Euler's Gamma by a 15-term Lanczos sum (g = 607/128), reflection below 1/2."""
    x = float(x)
    if x <= 0 and x.is_integer():
        raise ValueError("Gamma has poles at non-positive integers")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1 - x))
    z = x - 1
    s = _LANCZOS[0]
    for k in range(1, len(_LANCZOS)):
        s += _LANCZOS[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    # split the power so that large arguments do not overflow early
    p = t ** ((z + 0.5) / 2)
    return SQRT_2PI * p * (p * math.exp(-t)) * s


# ---------------------------------------------------------------------------
# spectra and tube points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TubePoint:
    """``x + i y`` with ``y > 0`` (scalars for the half-plane, pairs for the quadrant)."""

    x: object
    y: object

    def __post_init__(self):
        ys = np.atleast_1d(np.asarray(self.y, dtype=float))
        if not np.all(ys > 0):
            raise NonPositiveImaginaryPart(f"imaginary part {self.y!r} not strictly inside the cone")

    @property
    def z(self):
        if np.ndim(self.x) == 0:
            return complex(self.x, self.y)
        return tuple(complex(a, b) for a, b in zip(self.x, self.y))


@dataclass(frozen=True)
class HalfLineSpectrum:
    """A density on ``[0, inf)``.

    Either ``func`` (vectorized callable) or samples on ``grid`` are given.
    ``decay_rate`` declares ``|f(zeta)| ~ exp(-rate zeta)`` beyond
    ``zeta_max``; the reconstruction then adds the analytic tail.
    ``decay_power`` declares an algebraic tail ``zeta**(-p)`` instead.
    """

    func: Callable | None = None
    zeta_max: float = 40.0
    decay_rate: float | None = None
    decay_power: float | None = None
    grid: np.ndarray | None = field(default=None, repr=False)
    values: np.ndarray | None = field(default=None, repr=False)
    rule: str = "gauss-legendre"

    def __post_init__(self):
        if self.func is None and self.grid is None:
            raise ValueError("need either func or samples")
        if self.grid is not None:
            g = np.asarray(self.grid, dtype=float)
            if g[0] < 0 or np.any(np.diff(g) <= 0):
                raise ValueError("sample grid must be increasing and start at >= 0")
            v = np.asarray(self.values, dtype=complex)
            object.__setattr__(self, "grid", g)
            object.__setattr__(self, "values", v)
            object.__setattr__(self, "zeta_max", float(g[-1]))
            re = interpolate.CubicSpline(g, v.real)
            im = interpolate.CubicSpline(g, v.imag)
            object.__setattr__(self, "_interp", (re, im))

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=float)
        if self.func is not None:
            return np.asarray(self.func(zeta), dtype=complex) * np.ones_like(zeta)
        re, im = self._interp
        out = re(zeta) + 1j * im(zeta)
        return np.where((zeta >= self.grid[0]) & (zeta <= self.grid[-1]), out, 0)

    @classmethod
    def from_samples(cls, grid, values, decay_rate=None, decay_power=None) -> "HalfLineSpectrum":
        return cls(grid=np.asarray(grid), values=np.asarray(values), decay_rate=decay_rate,
                   decay_power=decay_power, rule="spline+gauss-legendre")

    @classmethod
    def from_csv(cls, path, decay_rate=None, decay_power=None) -> "HalfLineSpectrum":
        """Three columns ``zeta, re, im``; ``#`` lines are comments."""
        rows = []
        with open(path, newline="") as fh:
            for row in csv.reader(line for line in fh if not line.lstrip().startswith("#")):
                if row:
                    rows.append([float(c) for c in row[:3]])
        arr = np.array(rows)
        return cls.from_samples(arr[:, 0], arr[:, 1] + 1j * arr[:, 2], decay_rate, decay_power)

    def l2_norm_sq(self) -> float:
        """``int_0^inf |f|^2``, including the declared tail."""
        val, _ = adaptive_gl(lambda s: np.abs(self(s)) ** 2, 0.0, self.zeta_max)
        tail = 0.0
        end = abs(complex(self(np.array([self.zeta_max]))[0])) ** 2
        if self.decay_rate:
            tail = end / (2 * self.decay_rate)
        elif self.decay_power and self.decay_power > 0.5:
            tail = end * self.zeta_max / (2 * self.decay_power - 1)
        return float(val.real + tail)

    def tail_fraction(self) -> float:
        """Declared-tail share of the squared norm (the square-integrability proxy)."""
        total = self.l2_norm_sq()
        body, _ = adaptive_gl(lambda s: np.abs(self(s)) ** 2, 0.0, self.zeta_max)
        return 0.0 if total == 0 else float((total - body.real) / total)


@dataclass(frozen=True)
class QuadrantSpectrum:
    """Density on the first quadrant; ``func(t1, t2)`` is vectorized."""

    func: Callable
    zeta_max: tuple = (40.0, 40.0)
    decay_rates: tuple | None = None


# ---------------------------------------------------------------------------
# reconstructions
# ---------------------------------------------------------------------------


def _half_line_cutoff(spec: HalfLineSpectrum, y: float) -> float:
    if spec.decay_rate and spec.func is not None:
        # integrand decays like exp(-(rate + y) zeta); stop where it is ~1e-17
        return min(spec.zeta_max, 40.0 / (spec.decay_rate + y))
    return spec.zeta_max


def half_line_transform(spec: HalfLineSpectrum, z: complex, tail_tol: float = 1e-10) -> tuple[complex, float]:
    """``(2 pi)^(-1/2) int_0^inf exp(i z zeta) f(zeta) d zeta`` for ``Im z >= 0``.

    On the real axis (``Im z = 0``) a declared exponential decay is
    required so that the integral converges absolutely.
    """
    x, y = z.real, z.imag
    if y < 0 or (y == 0 and not spec.decay_rate):
        raise NonPositiveImaginaryPart(f"Im z = {y} needs to be positive (or zero with a declared decay)")
    cut = _half_line_cutoff(spec, y)
    # panels short enough to resolve the oscillation exp(i x zeta)
    step = min(cut, max(math.pi / max(abs(x), 1e-300), cut / 64))
    bps = tuple(np.arange(step, cut, step)) if step < cut else ()

    def g(s):
        return np.exp(1j * z * s) * spec(s)

    body, err = adaptive_gl(g, 0.0, cut, breakpoints=bps)
    end = complex(spec(np.array([cut]))[0])
    if spec.decay_rate:
        tail = end * np.exp(1j * z * cut) / (spec.decay_rate - 1j * z)
    else:
        tail = 0j
        bound = abs(end) * math.exp(-y * cut) / y
        if spec.decay_power and spec.decay_power > 0:
            bound = abs(end) * math.exp(-y * cut) * min(1 / y, cut / spec.decay_power)
        if bound > tail_tol * max(abs(body), 1e-300) and bound > 1e-300:
            raise TailNotNegligible(f"tail bound {bound:.3e} vs integral {abs(body):.3e}")
        err += bound
    return complex((body + tail) / SQRT_2PI), float(err / SQRT_2PI)


def hardy_reconstruct_1d(spec: HalfLineSpectrum, z, tail_tol: float = 1e-10) -> tuple[complex, float]:
    """H2+ element ``f(z)`` from its half-line spectrum, with an error estimate.

    ``z`` is a :class:`TubePoint` or a complex number with positive
    imaginary part.
    """
    z = z.z if isinstance(z, TubePoint) else complex(z)
    if not z.imag > 0:
        raise NonPositiveImaginaryPart(f"Im z = {z.imag} <= 0")
    return half_line_transform(spec, z, tail_tol)


def hardy_reconstruct_2d(spec: QuadrantSpectrum, z, n: int = ORDER) -> complex:
    """``(2 pi)^(-1) int int exp(i z.t) f(t) dt`` on the first quadrant by tensor Gauss-Legendre."""
    if isinstance(z, TubePoint):
        z1, z2 = z.z
    else:
        z1, z2 = (complex(v) for v in z)
    if not (z1.imag > 0 and z2.imag > 0):
        raise NonPositiveImaginaryPart("both imaginary parts must be positive")
    axes = []
    for k, zk in enumerate((z1, z2)):
        cut = spec.zeta_max[k]
        if spec.decay_rates:
            cut = min(cut, 40.0 / (spec.decay_rates[k] + zk.imag))
        length = min(1.0, math.pi / max(abs(zk.real), 1e-300))
        panels = max(1, math.ceil(cut / length))
        edges = np.linspace(0.0, cut, panels + 1)
        xg, wg = _rule(n)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        nodes = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
        weights = (half[:, None] * wg[None, :]).ravel()
        axes.append((nodes, weights * np.exp(1j * zk * nodes)))
    (t1, a1), (t2, a2) = axes
    F = np.asarray(spec.func(t1[:, None], t2[None, :]), dtype=complex)
    return complex(a1 @ F @ a2) / (2 * math.pi)


def _check_boundary_decay(boundary: Callable) -> None:
    probe = np.array([-1e8, -1e6, 1e6, 1e8])
    vals = np.abs(np.asarray(boundary(probe), dtype=complex)) * np.sqrt(np.abs(probe))
    near = np.abs(np.asarray(boundary(np.array([-1.0, 0.0, 1.0])), dtype=complex)).max()
    if not np.all(np.isfinite(vals)) or vals.max() > 1e-2 * max(near, 1e-300):
        raise BoundaryDecayInsufficient("boundary data do not decay fast enough for the Cauchy integral")


def cauchy_boundary_rep(boundary: Callable, z) -> tuple[complex, complex]:
    """Cauchy integral of boundary data at ``z`` and at ``conj(z)``.

    Returns ``(value, conjugate_residual)``; for boundary values of an
    H2+ element the second vanishes.
    """
    z = z.z if isinstance(z, TubePoint) else complex(z)
    if not z.imag > 0:
        raise NonPositiveImaginaryPart(f"Im z = {z.imag} <= 0")
    _check_boundary_decay(boundary)
    scale = max(abs(z.imag), 1.0)
    pref = 1 / (2j * math.pi)
    v, _ = integrate_real_line(lambda s: boundary(s) / (s - z), center=z.real, scale=scale)
    c, _ = integrate_real_line(lambda s: boundary(s) / (s - z.conjugate()), center=z.real, scale=scale)
    return complex(pref * v), complex(pref * c)


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------


@dataclass
class NormReport:
    heights: list
    integrals: list
    sup: float
    argsup: float
    non_increasing: bool


def line_norm_sq(f: Callable, y: float, scale: float | None = None) -> float:
    """``int_R |f(x + i y)|^2 dx`` for a vectorized ``f``."""
    s = scale if scale is not None else 1.0 + abs(y)
    val, _ = integrate_real_line(lambda x: np.abs(f(x + 1j * y)) ** 2, scale=s)
    return float(val.real)


def hardy_norm_sup(f: Callable, y_grid: Sequence[float]) -> NormReport:
    """Sup over ``y_grid`` of the horizontal-line L2 norms (the M^2 estimate)."""
    ys = sorted(float(y) for y in y_grid)
    vals = [line_norm_sq(f, y) for y in ys]
    k = int(np.argmax(vals)) if vals else 0
    mono = all(b <= a * (1 + 1e-10) + 1e-300 for a, b in zip(vals, vals[1:]))
    return NormReport(ys, vals, float(vals[k]) if vals else 0.0, ys[k] if ys else math.nan, mono)


def plancherel_line_norm_sq(spec: HalfLineSpectrum, y: float) -> float:
    """``int_0^inf |f(zeta)|^2 exp(-2 y zeta) d zeta``, equal to :func:`line_norm_sq` of the reconstruction."""
    cut = _half_line_cutoff(spec, y)
    val, _ = adaptive_gl(lambda s: np.abs(spec(s)) ** 2 * np.exp(-2 * y * s), 0.0, cut)
    end = abs(complex(spec(np.array([cut]))[0])) ** 2
    tail = end * math.exp(-2 * y * cut) / (2 * spec.decay_rate + 2 * y) if spec.decay_rate else 0.0
    return float(val.real + tail)


def proposition_norm(nu: float, lam: float, v: float = 0.0) -> tuple[float, float]:
    """Closed form and quadrature of ``int_R (u^2 + c^2)^(-2 nu) du``, ``c = v + lam``.

    The quadrature substitutes ``u = c tan(theta)`` and then
    ``s = sin(theta)``, leaving ``c^(1-4nu) int_{-1}^{1} (1-s^2)^(2nu-3/2) ds``;
    the algebraic endpoint weight is handled by QUADPACK's QAWS rule, so
    no Gamma function enters the numerical side.
    """
    if not nu > 0.25:
        raise NuOutOfRange(f"nu = {nu} must exceed 1/4")
    c = v + lam
    if not c > 0:
        raise ValueError("v + lambda must be positive")
    closed = math.sqrt(math.pi) * gamma_fn(2 * nu - 0.5) / gamma_fn(2 * nu) * c ** (1 - 4 * nu)
    a = 2 * nu - 1.5
    val, _ = integrate.quad(lambda s: 1.0, -1.0, 1.0, weight="alg", wvar=(a, a), epsabs=0, epsrel=2e-14)
    return closed, val * c ** (1 - 4 * nu)


# ---------------------------------------------------------------------------
# sufficient criterion and limit behaviour
# ---------------------------------------------------------------------------


@dataclass
class LemmaReport:
    decay_hypothesis: bool
    l2_hypothesis: bool
    radii: list
    arc_values: list
    arc_bounds: list
    bound_holds: bool
    scaled_arc: list  # R * |F2(R)|

    @property
    def hypotheses_hold(self) -> bool:
        return self.decay_hypothesis and self.l2_hypothesis


def arc_contribution(f: Callable, z: complex, R: float) -> complex:
    """``(2 pi i)^(-1) int over the upper semicircle of radius R of f(w)/(w - z) dw``."""

    def g(theta):
        w = R * np.exp(1j * theta)
        return f(w) / (w - z) * 1j * w

    edge = min(math.pi / 4, 40.0 / R)
    bps = tuple(np.geomspace(edge / 2 ** 12, edge, 13)) + tuple(math.pi - np.geomspace(edge / 2 ** 12, edge, 13))
    val, _ = adaptive_gl(g, 0.0, math.pi, breakpoints=bps, rel_tol=1e-12)
    return val / (2j * math.pi)


def lemma_check(f: Callable, f0: float, delta: float, R_list: Sequence[float], z: complex = 1j,
                n_arc: int = 257) -> LemmaReport:
    """Test the hypotheses of the exponential-decay criterion and its arc estimate.

    The decay hypothesis is sampled on semicircles of every radius; square
    integrability on the real line is judged from ``|f(x)|^2 |x|`` at
    ``|x|`` up to 1e8, which must fall well below the central peak.
    """
    theta = np.linspace(0.0, math.pi, n_arc)
    decay_ok = True
    for R in list(R_list) + [0.5, 1.0]:
        w = R * np.exp(1j * theta)
        if np.any(np.abs(f(w)) > f0 * np.exp(-delta * w.imag) * (1 + 1e-12) + 1e-300):
            decay_ok = False
    # square integrability: |f(x)|^2 |x| must die off along the real axis
    probes = np.array([1e4, 1e6, 1e8])
    tail = [float(np.max(np.abs(f(np.array([-p, p]) + 0j)) ** 2) * p) for p in probes]
    peak = float(np.max(np.abs(f(np.linspace(-10, 10, 201) + 0j)) ** 2))
    l2_ok = peak == 0 or (tail[-1] <= 1e-3 * peak and tail[-1] <= tail[0])
    arcs = [arc_contribution(f, z, R) for R in R_list]
    bounds = [f0 / (delta * R) for R in R_list]
    return LemmaReport(
        decay_hypothesis=decay_ok,
        l2_hypothesis=l2_ok,
        radii=list(R_list),
        arc_values=arcs,
        arc_bounds=bounds,
        bound_holds=all(abs(a) <= b for a, b in zip(arcs, bounds)),
        scaled_arc=[R * abs(a) for R, a in zip(R_list, arcs)],
    )


@dataclass
class LimitReport:
    heights: list
    sup_abs: list              # sup_x |f(x + i y)| per height
    sqrt_y_product: float      # max over the grid of |f| * sqrt(y)
    bounded: bool
    tends_to_zero: bool


def limit_behavior_check(spec, x_list: Sequence[float], y_list: Sequence[float]) -> LimitReport:
    """Check ``|f(x+iy)| sqrt(y)`` stays bounded and ``sup_x |f|`` decreases to 0 in y.

    ``spec`` is a :class:`HalfLineSpectrum` or a callable on the tube.
    """
    if isinstance(spec, HalfLineSpectrum):
        def f(zz):
            return hardy_reconstruct_1d(spec, zz)[0]
    else:
        f = spec
    ys = sorted(float(y) for y in y_list)
    sups, prod = [], 0.0
    for y in ys:
        vals = [abs(f(complex(x, y))) for x in x_list]
        sups.append(max(vals))
        prod = max(prod, max(vals) * math.sqrt(y))
    decreasing = all(b <= a * (1 + 1e-9) + 1e-300 for a, b in zip(sups, sups[1:]))
    small = sups[-1] <= 1e-2 * sups[0] if sups[0] > 0 else True
    return LimitReport(ys, sups, prod, math.isfinite(prod), decreasing and small)


# ---------------------------------------------------------------------------
# cones
# ---------------------------------------------------------------------------


def dual_cone_check(n: int = 6, n_dirs: int | None = None) -> dict:
    """Discrete self-duality of the first quadrant on the integer grid ``[-n, n]^2``.

    The dual cone is computed against sampled open-quadrant directions
    fine enough to separate every grid vector, and compared with the
    closed quadrant restricted to the grid.
    """
    k = n_dirs or 8 * n
    th = (np.arange(k) + 0.5) * (math.pi / 2) / k
    dirs = np.stack([np.cos(th), np.sin(th)], axis=1)
    g = np.arange(-n, n + 1)
    X, Y = np.meshgrid(g, g, indexing="ij")
    pts = np.stack([X.ravel(), Y.ravel()], axis=1)
    pts = pts[np.any(pts != 0, axis=1)]
    dual = np.all(pts @ dirs.T >= 0, axis=1)
    closure = np.all(pts >= 0, axis=1)
    return {"n_points": int(len(pts)), "dual_size": int(dual.sum()), "closure_size": int(closure.sum()),
            "self_dual": bool(np.array_equal(dual, closure))}
