"""Verification batteries shared by ``metaconf verify`` and the test suite.

Every suite returns a list of case records
``{id, params, observed, expected, tolerance, pass}``; observed values are
plain floats, ints, bools or strings so records serialize to JSON as is.
"""

from __future__ import annotations

import math
import os
from typing import Callable

import numpy as np

from . import analysis as an
from . import corrkernels as ck
from . import dualpipe as dp
from . import hardy as hd
from . import liealg as la

FIG00 = {"delta": 0.22, "gamma": 0.33, "mu": 1.0}
FIG2 = {"gamma_par": 0.25, "gamma_perp": 0.0, "mu": 1.0}
FIG3 = {"gamma_par": 0.25, "gamma_perp": 1.5, "mu": 1.0}
# figure captions leave the scaling dimension open; at t = 1 it drops out
FIG_DELTA = 0.25
ANGLES = (0.0, 30.0, 60.0, 90.0)


def seed() -> int:
    return int(os.environ.get("METACONF_SEED", "0"))


def case(cid: str, observed, expected, tolerance, passed: bool, **params) -> dict:
    return {"id": cid, "params": params, "observed": observed, "expected": expected,
            "tolerance": tolerance, "pass": bool(passed)}


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / abs(b)


# ---------------------------------------------------------------------------
# lie
# ---------------------------------------------------------------------------

LIE_FAMILIES = (
    ("ortho", la.GeneratorFamily(la.Kind.ORTHO)),
    ("meta1d", la.GeneratorFamily(la.Kind.META1D)),
    ("meta2d", la.GeneratorFamily(la.Kind.META2D)),
    ("meta1d-dual", la.GeneratorFamily(la.Kind.META1D_DUAL)),
    ("meta1d-dual-rescaled", la.GeneratorFamily(la.Kind.META1D_DUAL, rescaled=True)),
    ("cga1d", la.GeneratorFamily(la.Kind.CGA1D)),
    ("cga-3d", la.GeneratorFamily(la.Kind.CGA_DDIM, d=3)),
)


def suite_lie(index_range=(-1, 2)) -> list:
    cases = []
    for name, fam in LIE_FAMILIES:
        rep = la.verify_algebra(fam, index_range)
        failures = [e.lhs for e in rep.entries if not e.skipped and not e.passed]
        cases.append(case(f"closure/{name}", len(failures), 0, 0, not failures,
                          family=name, index_range=list(index_range), n_checked=rep.n_checked))
        for e in rep.eigen:
            cases.append(case(f"eigen/{name}/{e.generator}", str(e.observed), str(e.expected), 0, e.passed,
                              family=name))
    # the vector field with a first power of (t + mu r) does not close
    rep = la.verify_algebra(la.GeneratorFamily(la.Kind.META1D, ellbar_as_printed=True), index_range)
    n_bad = sum(1 for e in rep.entries if not e.skipped and not e.passed)
    cases.append(case("control/meta1d-first-power", n_bad, ">0", 0, n_bad > 0))
    # rescaled dual generators contract onto the galilean ones
    dual = la.GeneratorFamily(la.Kind.META1D_DUAL, rescaled=True)
    cga = la.GeneratorFamily(la.Kind.CGA1D)
    ok = all(
        la.contract_mu_to_zero(la.make_generator(dual, lbl, n)) == la.make_generator(cga, lbl, n)
        for lbl in ("X", "Y") for n in range(index_range[0], index_range[1] + 1)
    )
    cases.append(case("contraction/dual-to-cga", ok, True, 0, ok))
    return cases


# ---------------------------------------------------------------------------
# ward
# ---------------------------------------------------------------------------


def ward_points_1d(kernel: la.KernelSpec, n: int, rng, sector: Callable | None = None) -> list:
    pts = []
    while len(pts) < n:
        t1, t2 = rng.uniform(0.5, 3.0, 2)
        r1, r2 = rng.uniform(-1.0, 1.0, 2)
        c = {"t1": float(t1 + 3.0), "t2": float(t2), "r1": float(r1), "r2": float(r2)}
        if kernel.margin(c) > 0.05 and (sector is None or sector(c)):
            pts.append(c)
    return pts


def ward_points_2d(n: int, rng) -> list:
    return [{"t1": float(3 + rng.uniform(0.5, 2)), "t2": float(rng.uniform(0, 1)),
             "r_par1": float(rng.uniform(-1, 1)), "r_par2": float(rng.uniform(-1, 1)),
             "r_perp1": float(rng.uniform(-1, 1)), "r_perp2": float(rng.uniform(-1, 1))} for _ in range(n)]


def suite_ward(n_points: int = 20, tol: float = 1e-6) -> list:
    rng = np.random.default_rng(seed())
    cases = []
    q1 = ck.QuantumNumbers1D(0.22, 0.33, 1.0)
    holo1 = la.KernelSpec("meta1d-holo", q1, q1)
    pts1 = ward_points_1d(holo1, n_points, rng)
    gens1 = la.lifted_ward_generators(la.Kind.META1D)
    for gid, G in gens1.items():
        rep = la.ward_residual(holo1, G, pts1, tol=tol, generator_id=gid)
        cases.append(case(f"meta1d-holo/{gid}", rep.max_residual, 0.0, tol, rep.passed, n_points=len(pts1)))

    q2 = ck.QuantumNumbers2D(0.3, 0.25, 0.1, 1.0)
    holo2 = la.KernelSpec("meta2d-holo", q2, q2)
    pts2 = ward_points_2d(n_points, rng)
    for gid, G in la.lifted_ward_generators(la.Kind.META2D).items():
        rep = la.ward_residual(holo2, G, pts2, tol=tol, generator_id=gid)
        cases.append(case(f"meta2d-holo/{gid}", rep.max_residual, 0.0, tol, rep.passed, n_points=len(pts2)))

    # regularized kernel inside the holomorphic sector (mu dr / t > 0, gamma/mu > 0)
    reg1 = la.KernelSpec("meta1d-reg", q1, q1)

    def sector(c):
        return (c["r1"] - c["r2"]) / (c["t1"] - c["t2"]) > 0

    pts_r = ward_points_1d(reg1, n_points, rng, sector)
    for gid, G in gens1.items():
        rep = la.ward_residual(reg1, G, pts_r, tol=tol, generator_id=gid)
        cases.append(case(f"meta1d-reg-sector/{gid}", rep.max_residual, 0.0, tol, rep.passed,
                          n_points=len(pts_r)))

    # negative control: the special generator sees a scaling-dimension mismatch
    G = gens1["X_1"]
    ctrl = pts1[:3]
    per_offset = []
    for off in (1e-2, 2e-2):
        rep = la.ward_residual(holo1, G, ctrl, values={"delta2": q1.delta + off}, tol=tol)
        per_offset.append([r / off for r in rep.extrapolated])
        detected = min(rep.extrapolated) > tol
        cases.append(case(f"control/delta-mismatch/{off:g}", min(rep.extrapolated), f">{tol:g}", tol, detected))
    spread = max(abs(a / b - 1) for a, b in zip(*per_offset))
    cases.append(case("control/delta-mismatch/linear", spread, 0.0, 1e-3, spread < 1e-3))
    return cases


# ---------------------------------------------------------------------------
# dual
# ---------------------------------------------------------------------------


def equivalence_points_1d(n: int = 1000) -> list:
    side = int(math.isqrt(n))
    ts = np.linspace(-2.0, 2.0, side + 1)
    ts = ts[ts != 0][:side]
    rs = np.linspace(-3.0, 3.0, math.ceil(n / side))
    return [(float(t), float(r)) for t in ts for r in rs][:n]


def equivalence_points_2d(n: int = 1000) -> list:
    m = round(n ** (1 / 3))
    ts = [t for t in np.linspace(-2.0, 2.0, m + 1) if t != 0][:m]
    rs = np.linspace(-3.0, 3.0, m)
    return [(float(t), float(a), float(b)) for t in ts for a in rs for b in rs][:n]


def suite_dual(tol: float = 1e-10) -> list:
    cases = []
    pts1 = equivalence_points_1d(1000)
    for g in (0.33, 0.25):
        rep = dp.flat_equivalence_1d(pts1, 0.22, g)
        cases.append(case(f"flat-1d/g={g}", rep.max_rel_dev, 0.0, tol, rep.max_rel_dev < tol,
                          n_points=rep.n_points, sectors=rep.sectors))
    pts2 = equivalence_points_2d(1000)
    rep = dp.flat_equivalence_2d(pts2, 0.22, 0.25, 1.5)
    cases.append(case("flat-2d", rep.max_rel_dev, 0.0, tol, rep.max_rel_dev < tol,
                      n_points=rep.n_points, sectors=rep.sectors))

    # the inversion depends on lambda only through exp(-2|g||lambda|)
    spec = dp.SectorSpectra1D(hd.HalfLineSpectrum(lambda s: np.exp(-s) * (1 + s * s), decay_rate=1.0),
                              hd.HalfLineSpectrum(lambda s: np.exp(-2 * s), decay_rate=2.0))
    a = dp.invert_to_physical_1d(0.4, 1.0, 0.4, 1.0, 0.3, spec)
    b = dp.invert_to_physical_1d(0.4, 1.0, 0.4, 1.0, 1.1, spec)
    dev = abs(b / a - math.exp(-0.8 * 0.8)) / math.exp(-0.64)
    cases.append(case("lambda-factorization", dev, 0.0, 1e-14, dev < 1e-14))

    # dual Ward identities of the delta-reduced dual correlator
    flat = dp.SectorSpectra1D(hd.HalfLineSpectrum(lambda s: np.exp(-s), decay_rate=1.0),
                              hd.HalfLineSpectrum(lambda s: np.exp(-s), decay_rate=1.0))

    def dual_kernel(eta, etabar, t, xi, xibar):
        dv = dp.DualVars1D(eta / 2, math.log1p(xi / t))
        return dp.dual_correlator_1d(dv, 0.3, t, flat)

    pts = [{"eta": e, "t": t, "xi": x} for e, t, x in ((0.3, 1.0, 0.7), (-0.8, 2.0, 1.5), (1.2, 1.5, 4.0))]
    for pde in ("1d-eta", "1d-scale"):
        rep = la.dual_ward_residual(dual_kernel, pde, pts, delta1=0.3)
        cases.append(case(f"dual-ward/{pde}", rep.max_residual, 0.0, 1e-6, rep.max_residual < 1e-6))
    return cases


# ---------------------------------------------------------------------------
# hardy
# ---------------------------------------------------------------------------

TUBE_POINTS = tuple(complex(x, y) for x, y in
                    ((0.0, 0.1), (0.5, 0.3), (-1.0, 0.5), (2.0, 1.0), (-3.0, 0.2),
                     (0.7, 2.0), (5.0, 0.05), (-0.4, 4.0), (10.0, 1.5), (-7.5, 0.8)))


def exp_closed_form(z: complex) -> complex:
    return 1 / (hd.SQRT_2PI * (1 - 1j * z))


def suite_hardy() -> list:
    cases = []
    for nu in (0.5, 1.0, 1.5):
        for c in (0.5, 1.0, 2.0):
            closed, quad = hd.proposition_norm(nu, c)
            err = abs(quad - closed) / closed
            cases.append(case(f"proposition/nu={nu}/c={c}", err, 0.0, 1e-8, err < 1e-8))
    _, quad = hd.proposition_norm(0.5, 1.0)
    err = abs(quad - math.pi) / math.pi
    cases.append(case("proposition/pi", err, 0.0, 1e-10, err < 1e-10))

    spec = hd.HalfLineSpectrum(lambda s: np.exp(-s), decay_rate=1.0)
    worst = max(_rel(hd.hardy_reconstruct_1d(spec, z)[0], exp_closed_form(z)) for z in TUBE_POINTS)
    cases.append(case("reconstruct-1d/exponential", worst, 0.0, 1e-10, worst < 1e-10, n_points=len(TUBE_POINTS)))

    def boundary(x):
        return 1 / (hd.SQRT_2PI * (1 - 1j * np.asarray(x, dtype=complex)))

    # 1/(1 - i x) decays only like 1/|x|; use the squared element, still in H2+
    def boundary_sq(x):
        return boundary(x) ** 2

    val_err, conj_res = 0.0, 0.0
    for z in TUBE_POINTS[:6]:
        v, c = hd.cauchy_boundary_rep(boundary_sq, z)
        val_err = max(val_err, _rel(v, exp_closed_form(z) ** 2))
        conj_res = max(conj_res, abs(c) / abs(v))
    cases.append(case("cauchy/value", val_err, 0.0, 1e-8, val_err < 1e-8))
    cases.append(case("cauchy/conjugate-residual", conj_res, 0.0, 1e-8, conj_res < 1e-8))

    qspec = hd.QuadrantSpectrum(lambda a, b: np.exp(-a - 2 * b), decay_rates=(1.0, 2.0))
    worst = 0.0
    for z1, z2 in ((0.5j, 1 + 0.3j), (-1 + 1j, 0.2j), (2 + 0.5j, -0.5 + 2j)):
        ref = exp_closed_form(z1) / (hd.SQRT_2PI * (2 - 1j * z2))
        worst = max(worst, _rel(hd.hardy_reconstruct_2d(qspec, (z1, z2)), ref))
    cases.append(case("reconstruct-2d/product", worst, 0.0, 1e-10, worst < 1e-10))

    for y in (0.5, 2.0):
        pl = hd.plancherel_line_norm_sq(spec, y)
        ref = 1 / (2 * (1 + y))
        cases.append(case(f"plancherel/y={y}", abs(pl - ref) / ref, 0.0, 1e-10, abs(pl - ref) / ref < 1e-10))

    gam_err = max(abs(hd.gamma_fn(x) - ref) / ref for x, ref in
                  ((0.5, math.sqrt(math.pi)), (1.0, 1.0), (2.5, 0.75 * math.sqrt(math.pi)), (6.0, 120.0)))
    cases.append(case("gamma", gam_err, 0.0, 1e-13, gam_err < 1e-13))
    cone = hd.dual_cone_check()
    cases.append(case("dual-cone", cone["self_dual"], True, 0, cone["self_dual"]))
    return cases


# ---------------------------------------------------------------------------
# positivity
# ---------------------------------------------------------------------------


def positivity_reports() -> list:
    out = []
    q = ck.QuantumNumbers1D(0.22, 0.33, 1.0)
    out.append(("meta1d-reg", an.wiener_khintchine_check(an.meta1d_reg_profile(q), 200.0, 2 ** 14,
                                                          kernel="meta1d-reg")))
    for tag, pars in (("fig2", FIG2), ("fig3", FIG3)):
        q2 = ck.QuantumNumbers2D(FIG_DELTA, **pars)
        for phi in ANGLES:
            out.append((f"{tag}/phi={phi:g}", an.wiener_khintchine_check(
                an.ray_profile(q2, phi), 1000.0, 2 ** 15, kernel="meta2d-reg")))
    return out


def suite_positivity() -> list:
    cases = []
    for cid, rep in positivity_reports():
        cases.append(case(cid, min(rep.min_ratio, rep.refined_min_ratio), f">=-{an.POS_TOL:g}", an.POS_TOL,
                          rep.passed, half_width=rep.half_width, n=rep.n))
    g = an.wiener_khintchine_check(an.gaussian_profile(), 20.0, 2 ** 12)
    cases.append(case("control/gaussian", g.min_ratio, ">=0", an.POS_TOL, g.passed))
    rect = an.wiener_khintchine_check(an.rectangular_profile(), 20.0, 2 ** 12, refine=False)
    cases.append(case("control/rectangular-flagged", rect.min_ratio, "<0", an.POS_TOL, not rect.passed))
    return cases


# ---------------------------------------------------------------------------
# limits
# ---------------------------------------------------------------------------

MU_LIST = (1e-1, 1e-2, 1e-3, 1e-4)


def suite_limits() -> list:
    cases = []
    for cid, qn, pts in (
        ("mu-limit/1d", ck.QuantumNumbers1D(0.2, 1.0, 1.0), [(1.0, 1.0), (1.0, -0.5), (-2.0, 1.0), (0.5, 0.3)]),
        ("mu-limit/2d", ck.QuantumNumbers2D(0.2, 1.0, 0.5, 1.0),
         [(1.0, 1.0, 0.3), (1.0, -0.5, 1.0), (-2.0, 1.0, -1.0)]),
    ):
        tab = an.mu_limit_check(qn, MU_LIST, pts)
        ok = tab.linear and tab.monotone
        cases.append(case(cid, [round(r, 6) for r in tab.decade_ratios], "[8, 12]", None, ok,
                          mu=list(MU_LIST)))
    # 2D -> 1D at zero transverse separation
    worst = 0.0
    for gp, mu in ((0.25, 1.0), (-0.4, 0.7), (0.9, 2.0)):
        q2 = ck.QuantumNumbers2D(0.3, gp, 1.5, mu)
        q1 = ck.QuantumNumbers1D(0.3, gp, mu)
        for t in (-1.5, 0.7, 2.0):
            for r in (-2.0, -0.3, 0.0, 0.4, 3.0):
                a = ck.eval_meta2d_reg(ck.Point2D(t, r, 0.0), ck.Point2D(0, 0, 0), q2, q2).value.real
                b = ck.eval_meta1d_reg(ck.Point1D(t, r), ck.Point1D(0, 0), q1, q1).value.real
                worst = max(worst, abs(a - b) / b)
    cases.append(case("ladder/2d-to-1d", worst, 0.0, 1e-12, worst < 1e-12))
    # 2D -> ortho at zero longitudinal separation, |t| prefactors divided out
    worst = 0.0
    for gp, gq, mu in ((0.25, 1.5, 1.0), (-0.4, 0.6, 0.7), (0.9, -1.1, 2.0)):
        q2 = ck.QuantumNumbers2D(0.3, gp, gq, mu)
        qo = ck.QuantumNumbers1D(abs(gp / mu), gq, mu)
        for t in (-1.5, 0.7, 2.0):
            for r in (-2.0, -0.3, 0.4, 3.0):
                if gq * mu * r / t < 0:
                    continue
                a = ck.eval_meta2d_reg(ck.Point2D(t, 0.0, r), ck.Point2D(0, 0, 0), q2, q2).value.real
                b = ck.eval_ortho_physical(t, r, qo).value.real
                a *= abs(t) ** (2 * q2.delta)
                b *= abs(t) ** (2 * qo.delta)
                worst = max(worst, abs(a - b) / b)
    cases.append(case("ladder/2d-to-ortho", worst, 0.0, 1e-12, worst < 1e-12))
    return cases


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------


def suite_figures() -> list:
    cases = []
    q2 = ck.QuantumNumbers2D(FIG_DELTA, **FIG2)
    for phi in ANGLES:
        fit = an.asymptotic_exponent(q2, phi)
        cases.append(case(f"slope/fig2/phi={phi:g}", fit.slope, fit.expected, 0.02, fit.within(0.02),
                          window=list(fit.window)))
    q3 = ck.QuantumNumbers2D(FIG_DELTA, **FIG3)
    for phi in (30.0, 60.0):
        fit = an.asymptotic_exponent(q3, phi)
        cases.append(case(f"slope/fig3/phi={phi:g}", fit.slope, fit.expected, 0.05, fit.within(0.05),
                          window=list(fit.window)))

    q1 = ck.QuantumNumbers1D(**FIG00)
    grid = np.linspace(-1.0, 1.0, 201)
    for t in (-0.6, 0.5, 1.0):
        rep = an.boundedness_scan("meta1d-reg", q1, t, grid)
        cases.append(case(f"bounded/meta1d-reg/t={t:g}", rep.sup, rep.bound, 1e-14, rep.passed))
    for tag, pars in (("fig2", FIG2), ("fig3", FIG3)):
        qq = ck.QuantumNumbers2D(FIG_DELTA, **pars)
        rep = an.boundedness_scan("meta2d-reg", qq, 1.0, np.linspace(-3, 3, 41), np.linspace(-3, 3, 41))
        cases.append(case(f"bounded/meta2d-reg/{tag}", rep.sup, rep.bound, 1e-14, rep.passed))
    rep = an.boundedness_scan("meta1d-holo", q1, -0.6, grid)
    cell = grid[1] - grid[0]
    near = [p[0] for p in rep.singular_points]
    hit = bool(near) and min(abs(r - 0.6) for r in near) <= cell + 1e-12
    cases.append(case("singular/meta1d-holo", sorted(near), 0.6, float(cell), hit))

    cusp = an.cusp_detect(an.meta1d_reg_profile(ck.QuantumNumbers1D(0.0, 0.25, 1.0)))
    cases.append(case("cusp/meta1d-reg", cusp.gap, 1.0, 1e-6, abs(cusp.gap - 1.0) < 1e-6))
    cusp = an.cusp_detect(an.line_section(q2, 90.0))
    cases.append(case("cusp/fig2/phi=90", cusp.gap, 0.0, 1e-6, cusp.gap < 1e-6))
    return cases


SUITES = {
    "lie": suite_lie,
    "ward": suite_ward,
    "dual": suite_dual,
    "hardy": suite_hardy,
    "positivity": suite_positivity,
    "limits": suite_limits,
    "figures": suite_figures,
}


def run_suite(name: str) -> dict:
    cases = SUITES[name]()
    n_pass = sum(c["pass"] for c in cases)
    return {"suite": name, "cases": cases,
            "summary": {"n_cases": len(cases), "n_pass": n_pass, "pass": n_pass == len(cases)}}
