"""First-order differential operators with polynomial coefficients.

Every generator family used for the two-point functions lives here as an
exact :class:`DiffOp`.  Commutators are computed symbolically over the
Gaussian rationals, so Lie-algebra relations are checked with zero
tolerance.  Lifting to two-body operators and the numeric Ward-identity
residuals (central differences plus Richardson extrapolation) sit on top.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from . import corrkernels as ck
from .errors import SingularSamplePoint, StepTooLarge, UnsupportedIndex
from .poly import I, QI, MultiPoly, const_or_symbol

# ---------------------------------------------------------------------------
# DiffOp
# ---------------------------------------------------------------------------


class DiffOp:
    """``sum_x a_x * d/dx + a_0`` with :class:`MultiPoly` coefficients.

    Variables that appear only inside coefficients (``delta``, ``mu``...)
    are parameters; they are differentiated only by operators that carry a
    vector-field component along them (e.g. ``mu*d/dmu`` in ``N``).
    """

    __slots__ = ("vec", "zeroth")

    def __init__(self, vec: Mapping[str, MultiPoly] | None = None, zeroth=None):
        clean = {}
        for v, c in (vec or {}).items():
            c = MultiPoly.coerce(c)
            if not c.is_zero():
                clean[v] = c
        object.__setattr__(self, "vec", dict(sorted(clean.items())))
        object.__setattr__(self, "zeroth", MultiPoly.coerce(0 if zeroth is None else zeroth))

    def __setattr__(self, *_):
        raise AttributeError("DiffOp is immutable")

    @property
    def variables(self) -> frozenset:
        """Variables with a derivative component."""
        return frozenset(self.vec)

    @property
    def symbols(self) -> frozenset:
        out = set(self.vec)
        for c in self.vec.values():
            out |= c.variables
        return frozenset(out | self.zeroth.variables)

    def __add__(self, other: "DiffOp") -> "DiffOp":
        vec = dict(self.vec)
        for v, c in other.vec.items():
            vec[v] = vec.get(v, MultiPoly()) + c
        return DiffOp(vec, self.zeroth + other.zeroth)

    def __neg__(self) -> "DiffOp":
        return DiffOp({v: -c for v, c in self.vec.items()}, -self.zeroth)

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def __mul__(self, scalar) -> "DiffOp":
        """Multiplication by a number or a MultiPoly (from the left)."""
        s = MultiPoly.coerce(scalar)
        return DiffOp({v: s * c for v, c in self.vec.items()}, s * self.zeroth)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.vec == other.vec and self.zeroth == other.zeroth

    def __hash__(self):
        return hash((frozenset(self.vec.items()), self.zeroth))

    def is_zero(self) -> bool:
        return not self.vec and self.zeroth.is_zero()

    def derive(self, p: MultiPoly) -> MultiPoly:
        """Vector-field part acting on ``p``."""
        out = MultiPoly()
        for v, c in self.vec.items():
            out = out + c * p.diff(v)
        return out

    def apply(self, p) -> MultiPoly:
        """Exact action on a polynomial: vector part plus multiplication."""
        p = MultiPoly.coerce(p)
        return self.derive(p) + self.zeroth * p

    def subs(self, mapping) -> "DiffOp":
        bad = set(mapping) & set(self.vec)
        if bad:
            raise ValueError(f"cannot substitute differentiated variables {sorted(bad)}")
        return DiffOp({v: c.subs(mapping) for v, c in self.vec.items()}, self.zeroth.subs(mapping))

    def rename(self, mapping: Mapping[str, str]) -> "DiffOp":
        return DiffOp(
            {mapping.get(v, v): c.rename(mapping) for v, c in self.vec.items()},
            self.zeroth.rename(mapping),
        )

    def coefficients_at(self, point: Mapping[str, complex]) -> tuple[dict, complex]:
        return {v: c.evaluate(point) for v, c in self.vec.items()}, self.zeroth.evaluate(point)

    def __repr__(self):
        parts = [f"({c!r})*d_{v}" for v, c in self.vec.items()]
        if not self.zeroth.is_zero():
            parts.append(f"({self.zeroth!r})")
        return " + ".join(parts) if parts else "0"


def diffop_commutator(A: DiffOp, B: DiffOp) -> DiffOp:
    """Exact ``[A, B] = AB - BA``; again first order."""
    vec = {}
    for y in set(A.vec) | set(B.vec):
        vec[y] = A.derive(B.vec.get(y, MultiPoly())) - B.derive(A.vec.get(y, MultiPoly()))
    return DiffOp(vec, A.derive(B.zeroth) - B.derive(A.zeroth))


def scalar_ratio(C: DiffOp, G: DiffOp):
    """Return ``alpha`` with ``C == alpha*G`` exactly, or None."""
    if C.is_zero():
        return QI(0)
    if G.is_zero():
        return None
    m, c = next(iter((G.vec or {"": G.zeroth}).items()))
    src = C.vec.get(m, MultiPoly()) if m else C.zeroth
    if src.is_zero():
        return None
    mono, g = next(iter(c.terms.items()))
    alpha = src.terms.get(mono, QI(0)) / g
    return alpha if C == G * alpha else None


# ---------------------------------------------------------------------------
# Generator families
# ---------------------------------------------------------------------------


class Kind(enum.Enum):
    ORTHO = "ortho"
    META1D = "meta1d"
    META2D = "meta2d"
    META1D_DUAL = "meta1d-dual"
    CGA1D = "cga1d"
    CGA_DDIM = "cga-ddim"


LABELS = {
    Kind.ORTHO: ("ell", "ellbar"),
    Kind.META1D: ("ell", "ellbar", "X", "Y"),
    Kind.META2D: ("A", "Bplus", "Bminus"),
    Kind.META1D_DUAL: ("X", "Y", "N"),
    Kind.CGA1D: ("X", "Y", "N"),
    Kind.CGA_DDIM: ("X", "Y", "R", "N"),
}


@dataclass(frozen=True)
class GeneratorFamily:
    """A generator family together with its quantum-number parameters.

    Parameters left as ``None`` stay symbolic (a polynomial variable named
    after the parameter); numbers are converted to exact rationals.
    """

    kind: Kind
    delta: object = None
    gamma: object = None
    gamma_par: object = None
    gamma_perp: object = None
    mu: object = None
    nu: object = None
    kappa: object = 0
    Delta: object = None
    Deltabar: object = None
    d: int = 2
    rescaled: bool = False
    # first power of (t+mu r) in the vector field; kept to show
    # that the algebra does not close with it.
    ellbar_as_printed: bool = False

    def p(self, name: str) -> MultiPoly:
        return const_or_symbol(getattr(self, name), name)


def _inv(p: MultiPoly) -> MultiPoly:
    if len(p.terms) != 1:
        raise ValueError("can only invert a monomial parameter")
    return p ** -1


def _pow(base: MultiPoly, n: int) -> MultiPoly:
    if n < 0:
        if len(base.terms) == 1:
            return base ** n
        raise UnsupportedIndex(f"negative power of a non-monomial (n={n})")
    return base ** n


def make_generator(family: GeneratorFamily, label: str, n: int = 0, j: int = 1, k: int = 2) -> DiffOp:
    """Exact generator ``label_n`` of ``family``.

    ``j`` selects the vector component for CGA ``Y`` and ``(j, k)`` the
    rotation plane for CGA ``R``.
    """
    if label != "N" and n < -1:
        raise UnsupportedIndex(f"index n={n} < -1 leaves the polynomial ring")
    if label not in LABELS[family.kind]:
        raise ValueError(f"label {label!r} not available for {family.kind.value}")
    kind = family.kind
    V = MultiPoly.var
    np1 = n + 1

    if kind is Kind.ORTHO:
        z, w = ("z", "Delta") if label == "ell" else ("zbar", "Deltabar")
        zz = V(z)
        zeroth = -np1 * family.p(w) * _pow(zz, n) if np1 else MultiPoly()
        return DiffOp({z: -_pow(zz, n + 1)}, zeroth)

    if kind is Kind.META1D:
        t, r = V("t"), V("r")
        mu, imu = family.p("mu"), _inv(family.p("mu"))
        delta, gamma = family.p("delta"), family.p("gamma")
        if label in ("X", "Y"):
            ell_bar = make_generator(family, "ellbar", n)
            return ell_bar if label == "Y" else make_generator(family, "ell", n) + ell_bar
        if label == "ell":
            tn1 = _pow(t, n + 1)
            zeroth = -np1 * (delta - gamma * imu) * _pow(t, n) if np1 else MultiPoly()
            return DiffOp({"t": -tn1, "r": tn1 * imu}, zeroth)
        ubar = t + mu * r
        vec_power = 1 if family.ellbar_as_printed else n + 1
        zeroth = -np1 * gamma * imu * _pow(ubar, n) if np1 else MultiPoly()
        return DiffOp({"r": -imu * _pow(ubar, vec_power)}, zeroth)

    if kind is Kind.META2D:
        t, rp, rq = V("t"), V("r_par"), V("r_perp")
        mu, imu = family.p("mu"), _inv(family.p("mu"))
        gpar, gperp = family.p("gamma_par"), family.p("gamma_perp")
        if label == "A":
            tn1 = _pow(t, n + 1)
            zeroth = -np1 * (family.p("delta") - 2 * gpar * imu) * _pow(t, n) if np1 else MultiPoly()
            return DiffOp({"t": -tn1, "r_par": tn1 * imu}, zeroth)
        s = 1 if label == "Bplus" else -1
        w = t + mu * (rp + s * I * rq)
        pref = -(imu / 2) * _pow(w, n + 1)
        zeroth = -np1 * (gpar - s * I * gperp) * imu * _pow(w, n) if np1 else MultiPoly()
        # (d_par -/+ i d_perp)
        return DiffOp({"r_par": pref, "r_perp": pref * (-s * I)}, zeroth)

    if kind is Kind.META1D_DUAL:
        t, r, mu_p = V("t"), V("r"), family.p("mu")
        imu = _inv(mu_p)
        ubar = t + mu_p * r
        if label == "N":
            if family.mu is not None and not isinstance(family.mu, str):
                raise ValueError("N treats mu as a variable; construct the family with symbolic mu")
            mu_name = family.mu if isinstance(family.mu, str) else "mu"
            return DiffOp(
                {"zeta": -V("zeta") + I * family.p("kappa"), "r": -r, mu_name: V(mu_name)},
                -family.p("nu"),
            )
        if label == "Y":
            vec = {
                "zeta": I * np1 * imu * _pow(ubar, n) if np1 else MultiPoly(),
                "r": -imu * _pow(ubar, n + 1),
            }
            op = DiffOp(vec)
            return op * mu_p if family.rescaled else op
        vec = {
            "zeta": I * np1 * imu * (_pow(ubar, n) - _pow(t, n)) if np1 else MultiPoly(),
            "t": -_pow(t, n + 1),
            "r": -imu * (_pow(ubar, n + 1) - _pow(t, n + 1)),
        }
        zeroth = -np1 * family.p("delta") * _pow(t, n) if np1 else MultiPoly()
        return DiffOp(vec, zeroth)

    if kind in (Kind.CGA1D, Kind.CGA_DDIM):
        t = V("t")
        if kind is Kind.CGA1D:
            rs, zs = ["r"], ["zeta"]
        else:
            rs = [f"r_{a}" for a in range(1, family.d + 1)]
            zs = [f"zeta_{a}" for a in range(1, family.d + 1)]
        if label == "N":
            vec = {x: -V(x) for x in rs + zs}
            return DiffOp(vec, -family.p("nu"))
        if label == "Y":
            a = j - 1 if kind is Kind.CGA_DDIM else 0
            vec = {zs[a]: I * np1 * _pow(t, n) if np1 else MultiPoly(), rs[a]: -_pow(t, n + 1)}
            return DiffOp(vec)
        if label == "R":
            a, b = j - 1, k - 1
            tn = _pow(t, n)
            vec = {
                rs[b]: -tn * V(rs[a]),
                rs[a]: tn * V(rs[b]),
                zs[b]: -tn * V(zs[a]),
                zs[a]: tn * V(zs[b]),
            }
            return DiffOp(vec)
        vec = {"t": -_pow(t, n + 1)}
        for x, zx in zip(rs, zs):
            if np1 * n:
                vec[zx] = I * (np1 * n) * _pow(t, n - 1) * V(x)
            vec[x] = -np1 * _pow(t, n) * V(x) if np1 else MultiPoly()
        zeroth = -np1 * family.p("delta") * _pow(t, n) if np1 else MultiPoly()
        return DiffOp(vec, zeroth)

    raise ValueError(f"unknown family {kind}")


# ---------------------------------------------------------------------------
# Algebra verification
# ---------------------------------------------------------------------------


@dataclass
class AlgebraEntry:
    lhs: str
    expected: str
    passed: bool
    skipped: bool = False
    note: str = ""


@dataclass
class EigenEntry:
    generator: str
    expected: object
    observed: object
    passed: bool


@dataclass
class AlgebraReport:
    family: str
    entries: list = field(default_factory=list)
    eigen: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries if not e.skipped) and all(e.passed for e in self.eigen)

    @property
    def n_checked(self) -> int:
        return sum(1 for e in self.entries if not e.skipped) + len(self.eigen)


def _structure(kind: Kind, a: str, b: str, n: int, m: int, rescaled: bool):
    """Predicted ``[a_n, b_m]`` as ``(coefficient, label)``; label None means 0."""
    virasoro = (n - m, a)
    zero = (0, None)
    if kind in (Kind.ORTHO, Kind.META2D) or (kind is Kind.META1D and {a, b} <= {"ell", "ellbar"}):
        return virasoro if a == b else zero
    if kind is Kind.META1D:
        pair = {("X", "X"): "X", ("X", "Y"): "Y", ("Y", "X"): "Y", ("Y", "Y"): "Y"}
        return (n - m, pair[a, b])
    if kind is Kind.META1D_DUAL:
        if (a, b) == ("Y", "Y"):
            return (n - m, "muY" if rescaled else "Y")
        return (n - m, "X" if (a, b) == ("X", "X") else "Y")
    if kind is Kind.CGA1D:
        if (a, b) == ("Y", "Y"):
            return zero
        return (n - m, "X" if (a, b) == ("X", "X") else "Y")
    raise KeyError((kind, a, b))


_PAIRS = {
    Kind.ORTHO: ["ell", "ellbar"],
    Kind.META1D: ["ell", "ellbar"],
    Kind.META2D: ["A", "Bplus", "Bminus"],
    Kind.META1D_DUAL: ["X", "Y"],
    Kind.CGA1D: ["X", "Y"],
}


def _n_eigenvalues(family: GeneratorFamily) -> dict:
    if family.kind is Kind.META1D_DUAL:
        # mu*d/dmu inside N sees the explicit mu of a rescaled Y
        return {"X": 0, "Y": 1 if family.rescaled else 0}
    if family.kind is Kind.CGA1D:
        return {"X": 0, "Y": 1}
    if family.kind is Kind.CGA_DDIM:
        return {"X": 0, "Y": 1, "R": 0}
    return {}


def _verify_cga_ddim(family: GeneratorFamily, idx, report: "AlgebraReport") -> None:
    """Vector CGA: X/Y Virasoro-type relations plus the rotations R_0.

    ``[X_n, R_m] = -m R_{n+m}`` holds for every m.  Rotations only close
    with ``Y`` at ``m = 0``; that is the sub-algebra used for rotation
    invariance, so ``R`` is paired with ``Y`` and ``R`` at index 0 only.
    """
    d = family.d
    comps = range(1, d + 1)
    planes = [(j, k) for j in comps for k in comps if j < k]

    def gen(lbl, n, j=1, k=2):
        return make_generator(family, lbl, n, j, k)

    def add(lhs, expected, comm, rhs):
        report.entries.append(AlgebraEntry(lhs, expected, (comm - rhs).is_zero()))

    for n in idx:
        for m in idx:
            if n + m < -1:
                continue
            add(f"[X_{n}, X_{m}]", f"{n - m}*X_{n + m}", diffop_commutator(gen("X", n), gen("X", m)),
                gen("X", n + m) * (n - m))
            for a in comps:
                add(f"[X_{n}, Y{a}_{m}]", f"{n - m}*Y{a}_{n + m}",
                    diffop_commutator(gen("X", n), gen("Y", m, a)), gen("Y", n + m, a) * (n - m))
                for b in comps:
                    add(f"[Y{a}_{n}, Y{b}_{m}]", "0", diffop_commutator(gen("Y", n, a), gen("Y", m, b)), DiffOp())
            for j, k in planes:
                add(f"[X_{n}, R{j}{k}_{m}]", f"{-m}*R{j}{k}_{n + m}",
                    diffop_commutator(gen("X", n), gen("R", m, j, k)), gen("R", n + m, j, k) * (-m))
    for n in idx:
        for a in comps:
            for j, k in planes:
                rhs = DiffOp()
                if a == j:
                    rhs = rhs - gen("Y", n, k)
                if a == k:
                    rhs = rhs + gen("Y", n, j)
                add(f"[Y{a}_{n}, R{j}{k}_0]", "rotated Y", diffop_commutator(gen("Y", n, a), gen("R", 0, j, k)), rhs)
    for i, j in planes:
        for k, l in planes:
            rhs = DiffOp()
            for cond, p, q, sign in ((j == k, i, l, -1), (i == k, j, l, 1), (j == l, i, k, 1), (i == l, j, k, -1)):
                if cond and p != q:
                    rhs = rhs + gen("R", 0, p, q) * sign
            add(f"[R{i}{j}_0, R{k}{l}_0]", "so(d)", diffop_commutator(gen("R", 0, i, j), gen("R", 0, k, l)), rhs)


def verify_algebra(family: GeneratorFamily, index_range: Sequence[int] = (-1, 2)) -> AlgebraReport:
    """Check every commutator ``[G_n, H_m]`` in the range against the table.

    Exact comparison: the residual ``[G_n, H_m] - predicted`` must be the
    zero operator.  For families with an ``N`` generator, ``[N, G_n]`` is
    compared with ``alpha * G_n`` and the observed ``alpha`` is reported.
    """
    n_min, n_max = index_range
    if n_min < -1:
        raise UnsupportedIndex("index range must start at n >= -1")
    kind = family.kind
    report = AlgebraReport(family=kind.value + ("-rescaled" if family.rescaled else ""))
    gens = {}

    def gen(lbl, n):
        key = (lbl, n)
        if key not in gens:
            gens[key] = make_generator(family, lbl, n)
        return gens[key]

    idx = range(n_min, n_max + 1)
    if kind is Kind.CGA_DDIM:
        _verify_cga_ddim(family, idx, report)
    else:
        labels = _PAIRS[kind]
        for a in labels:
            for b in labels:
                for n in idx:
                    for m in idx:
                        lhs = f"[{a}_{n}, {b}_{m}]"
                        coef, lbl = _structure(kind, a, b, n, m, family.rescaled)
                        if n + m < -1 and coef != 0 and lbl is not None:
                            report.entries.append(AlgebraEntry(lhs, "n+m<-1", True, skipped=True,
                                                               note="outside representable range"))
                            continue
                        comm = diffop_commutator(gen(a, n), gen(b, m))
                        if lbl is None or coef == 0:
                            expected, rhs = "0", DiffOp()
                        elif lbl == "muY":
                            expected = f"{coef}*mu*Y_{n + m}"
                            rhs = gen("Y", n + m) * (coef * family.p("mu"))
                        else:
                            expected = f"{coef}*{lbl}_{n + m}"
                            rhs = gen(lbl, n + m) * coef
                        report.entries.append(AlgebraEntry(lhs, expected, (comm - rhs).is_zero()))

    eigen = _n_eigenvalues(family)
    if eigen:
        fam = family
        if kind is Kind.META1D_DUAL and (family.mu is not None and not isinstance(family.mu, str)):
            fam = GeneratorFamily(**{**family.__dict__, "mu": None})
        N = make_generator(fam, "N")
        for lbl, alpha in eigen.items():
            for n in idx:
                G = make_generator(fam, lbl, n)
                obs = scalar_ratio(diffop_commutator(N, G), G)
                report.eigen.append(EigenEntry(f"[N, {lbl}_{n}]", alpha, obs, obs == alpha))
    return report


def contract_mu_to_zero(op: DiffOp, mu: str = "mu") -> DiffOp:
    """Coefficient-wise ``mu -> 0`` of an operator polynomial in ``mu``."""
    for c in list(op.vec.values()) + [op.zeroth]:
        if c.min_degree(mu) < 0:
            raise ValueError("operator is singular at mu = 0")
    return op.subs({mu: 0})


# ---------------------------------------------------------------------------
# Two-body lift and Ward identities
# ---------------------------------------------------------------------------


def lift_two_body(G: DiffOp, point_labels: tuple = (1, 2)) -> DiffOp:
    """``G^(1) + G^(2)``: every symbol ``x`` becomes ``x1`` resp. ``x2``.

    Quantum numbers must be symbolic in ``G`` for the copies to carry
    different values; numeric parameters are shared by both copies.
    """
    out = DiffOp()
    for lab in point_labels:
        out = out + G.rename({s: f"{s}{lab}" for s in G.symbols})
    return out


def apply_power_product(G: DiffOp, factors: Sequence[tuple]) -> MultiPoly:
    """Exact Ward residual on ``f = prod_k P_k ** e_k``.

    ``G f = f * N / prod_k P_k`` with ``N = sum_k e_k (G P_k) prod_{j!=k} P_j
    + G_0 prod_j P_j``; ``N`` is returned.  Exponents may be polynomials in
    the parameters (they must not depend on differentiated variables).
    """
    bases = [MultiPoly.coerce(b) for b, _ in factors]
    exps = [MultiPoly.coerce(e) for _, e in factors]
    for e in exps:
        if e.variables & G.variables:
            raise ValueError("exponents must not depend on differentiated variables")
    total = G.zeroth
    for b in bases:
        total = total * b
    for k, (b, e) in enumerate(zip(bases, exps)):
        term = e * G.derive(b)
        for j, other in enumerate(bases):
            if j != k:
                term = term * other
        total = total + term
    return total


def apply_numeric(G: DiffOp, func: Callable[[dict], complex], point: Mapping[str, complex], h: float) -> complex:
    """``(G f)(point)`` with second-order central differences of step ``h``.

    Points may be complex; each derivative is taken along the real axis of
    its variable, which equals the complex derivative for holomorphic f.
    """
    vec, a0 = G.coefficients_at(point)
    val = a0 * func(dict(point)) if a0 != 0 else 0j
    for v, a in vec.items():
        if a == 0:
            continue
        up, dn = dict(point), dict(point)
        up[v] = point[v] + h
        dn[v] = point[v] - h
        val += a * (func(up) - func(dn)) / (2 * h)
    return val


@dataclass
class WardReport:
    generator: str
    points: list
    steps: tuple
    residuals: list          # per point: relative residual per step
    extrapolated: list       # per point: Richardson-extrapolated relative residual
    tolerance: float
    max_residual: float = 0.0
    step_ratios: list = field(default_factory=list)
    passed: bool = False

    def summary(self) -> dict:
        return {
            "generator": self.generator,
            "n_points": len(self.points),
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class KernelSpec:
    """A closed-form correlator with fixed quantum numbers."""

    kind: str
    qn1: object
    qn2: object
    alpha: float = 1.0
    F0: float = 1.0

    @property
    def dims(self) -> int:
        return 2 if self.kind in ("meta2d-holo", "meta2d-reg") or isinstance(self.qn1, ck.QuantumNumbers2D) else 1

    def coords(self) -> tuple:
        if self.dims == 1:
            return ("t1", "r1", "t2", "r2")
        return ("t1", "r_par1", "r_perp1", "t2", "r_par2", "r_perp2")

    def points(self, c: Mapping[str, float]):
        if self.dims == 1:
            return ck.Point1D(c["t1"], c["r1"]), ck.Point1D(c["t2"], c["r2"])
        return (ck.Point2D(c["t1"], c["r_par1"], c["r_perp1"]),
                ck.Point2D(c["t2"], c["r_par2"], c["r_perp2"]))

    def evaluate(self, c: Mapping[str, float]) -> ck.EvalResult:
        p1, p2 = self.points(c)
        return ck.evaluate(self.kind, p1, p2, self.qn1, self.qn2, alpha=self.alpha, F0=self.F0)

    def __call__(self, c: Mapping[str, float]) -> complex:
        return self.evaluate(c).value

    def generator_values(self) -> dict:
        """Numeric values of the lifted generator symbols (delta1, mu2, ...)."""
        out = {}
        for lab, qn in (("1", self.qn1), ("2", self.qn2)):
            for name, val in qn.__dict__.items():
                out[f"{name}{lab}"] = val
        return out

    def margin(self, c: Mapping[str, float]) -> float:
        """Distance-like measure to the kernel's singular / non-analytic loci."""
        q = self.qn1
        if self.dims == 1:
            t = c["t1"] - c["t2"]
            xi = q.mu * c["r1"] - self.qn2.mu * c["r2"]
            if self.kind == "meta1d-holo":
                return min(abs(t), abs(t + xi))
            if self.kind in ("meta1d-reg", "cga-reg"):
                return min(abs(t), abs(xi))
            return abs(t)
        t = c["t1"] - c["t2"]
        a = q.mu * c["r_par1"] - self.qn2.mu * c["r_par2"]
        b = q.mu * c["r_perp1"] - self.qn2.mu * c["r_perp2"]
        if self.kind == "meta2d-holo":
            return min(abs(t), abs(complex(t + a, b)))
        if self.kind in ("meta2d-reg", "cga-reg"):
            return min(abs(t), abs(a), abs(b), abs(t + a))
        return abs(t)


def ward_residual(
    kernel,
    G2: DiffOp,
    pts: Sequence[Mapping[str, float]],
    steps: Sequence[float] = (1e-3, 5e-4),
    values: Mapping[str, complex] | None = None,
    tol: float = 1e-6,
    generator_id: str = "G",
    noise_floor: float = 1e-9,
) -> WardReport:
    """Relative Ward residual ``|G2 C| / |C|`` at each sample point.

    ``kernel`` is a :class:`KernelSpec` (singular loci are then checked) or
    any callable on a coordinate dict.  ``values`` supplies numbers for the
    generator's parameter symbols; for a KernelSpec they default to its
    quantum numbers.  Two step sizes are combined by Richardson
    extrapolation of the second-order central differences.
    """
    if len(steps) < 2:
        raise ValueError("need at least two step sizes")
    h1, h2 = steps[0], steps[1]
    params = dict(kernel.generator_values()) if isinstance(kernel, KernelSpec) else {}
    params.update(values or {})
    residuals, extrap, ratios = [], [], []
    for c in pts:
        if isinstance(kernel, KernelSpec):
            if kernel.evaluate(c).is_singular or kernel.margin(c) < 10 * max(steps):
                raise SingularSamplePoint(f"sample point {dict(c)} too close to a singular locus")
        point = {**params, **c}
        f0 = kernel(point)
        if not np.isfinite(complex(f0)):
            raise SingularSamplePoint(f"kernel not finite at {dict(c)}")
        scale = max(abs(f0), 1e-30)
        r1 = apply_numeric(G2, kernel, point, h1)
        r2 = apply_numeric(G2, kernel, point, h2)
        rex = (h1 * h1 * r2 - h2 * h2 * r1) / (h1 * h1 - h2 * h2)
        a1, a2 = abs(r1) / scale, abs(r2) / scale
        if a1 > noise_floor and a2 > noise_floor and a2 > a1 * 1.01:
            raise StepTooLarge(f"residual grew from {a1:.3e} to {a2:.3e} when h shrank")
        residuals.append((a1, a2))
        extrap.append(abs(rex) / scale)
        ratios.append(a1 / a2 if a2 > 0 else math.inf)
    worst = max(extrap) if extrap else 0.0
    return WardReport(
        generator=generator_id,
        points=[dict(c) for c in pts],
        steps=tuple(steps),
        residuals=residuals,
        extrapolated=extrap,
        tolerance=tol,
        max_residual=worst,
        step_ratios=ratios,
        passed=worst < tol,
    )


def dual_pde(pde_id: str, delta1=None) -> DiffOp:
    """Dual-space Ward operators in the variables eta, etabar, t, xi, xibar.

    ``2d-eta``, ``2d-etabar`` and ``2d-scale`` are the three 2D equations;
    ``1d-eta`` and ``1d-scale`` the 1D pair (with delta2 = delta1).
    """
    V = MultiPoly.var
    d1 = const_or_symbol(delta1, "delta1")
    t = V("t")
    if pde_id in ("2d-eta", "1d-eta"):
        return DiffOp({"eta": 2 * I, "xi": -(t + V("xi"))})
    if pde_id == "2d-etabar":
        return DiffOp({"etabar": 2 * I, "xibar": -(t + V("xibar"))})
    if pde_id == "2d-scale":
        return DiffOp({"t": t, "xi": V("xi"), "xibar": V("xibar")}, 2 * d1)
    if pde_id == "1d-scale":
        return DiffOp({"t": -t, "xi": -V("xi")}, -2 * d1)
    raise ValueError(f"unknown dual PDE {pde_id!r}")


DUAL_PDES = ("1d-eta", "1d-scale", "2d-eta", "2d-etabar", "2d-scale")


def dual_ward_residual(
    dual_kernel: Callable,
    pde_id: str,
    points: Sequence[Mapping[str, complex]],
    delta1: float,
    steps: Sequence[float] = (1e-3, 5e-4),
    tol: float = 1e-6,
) -> WardReport:
    """Residual of a dual-space PDE on ``dual_kernel(eta, etabar, t, xi, xibar)``."""
    op = dual_pde(pde_id, Fraction(repr(float(delta1))))

    def f(c):
        return dual_kernel(c["eta"], c.get("etabar", 0.0), c["t"], c["xi"], c.get("xibar", 0.0))

    full = [{"eta": 0.0, "etabar": 0.0, "t": 1.0, "xi": 0.0, "xibar": 0.0, **p} for p in points]
    return ward_residual(f, op, full, steps=steps, tol=tol, generator_id=pde_id)


def lifted_ward_generators(kind: Kind, mu=None) -> dict:
    """The lifted finite-subalgebra generators (n = -1, 0, 1) with symbolic quantum numbers."""
    fam = GeneratorFamily(kind, mu=mu)
    labels = {Kind.META1D: ("X", "Y"), Kind.META2D: ("A", "Bplus", "Bminus")}[kind]
    return {f"{lbl}_{n}": lift_two_body(make_generator(fam, lbl, n)) for lbl in labels for n in (-1, 0, 1)}
