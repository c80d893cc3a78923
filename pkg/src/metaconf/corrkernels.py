"""Closed-form two-point correlators.

Holomorphic kernels use principal-branch complex powers and flag their
singular loci.  Regularized kernels depend on absolute values only and are
real, finite and bounded by ``|t1 - t2| ** (-2 delta1)`` off ``t1 = t2``.

Selection rules (Kronecker factors) compare quantum numbers within
``EQ_TOL``; a violation gives value 0 with a diagnostic, or raises
:class:`SelectionRuleViolation` when ``strict=True``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

from .errors import SelectionRuleViolation, SingularSeparation, SingularTime

EQ_TOL = 1e-9


class CorrelatorKind(str, enum.Enum):
    ORTHO_Z = "ortho-z"
    ORTHO_PHYSICAL = "ortho-physical"
    META1D_HOLO = "meta1d-holo"
    META1D_REG = "meta1d-reg"
    META2D_HOLO = "meta2d-holo"
    META2D_REG = "meta2d-reg"
    CGA_NAIVE = "cga-naive"
    CGA_REG = "cga-reg"


@dataclass(frozen=True)
class QuantumNumbers1D:
    delta: float
    gamma: float
    mu: float = 1.0

    def __post_init__(self):
        for v in (self.delta, self.gamma, self.mu):
            if not math.isfinite(v):
                raise ValueError("quantum numbers must be finite")


@dataclass(frozen=True)
class QuantumNumbers2D:
    delta: float
    gamma_par: float
    gamma_perp: float
    mu: float = 1.0

    def __post_init__(self):
        for v in (self.delta, self.gamma_par, self.gamma_perp, self.mu):
            if not math.isfinite(v):
                raise ValueError("quantum numbers must be finite")


@dataclass(frozen=True)
class Point1D:
    t: float
    r: float


@dataclass(frozen=True)
class Point2D:
    t: float
    r_par: float
    r_perp: float


@dataclass
class EvalResult:
    value: complex
    is_singular: bool = False
    is_real: bool = True
    diagnostic: str | None = None
    meta: dict = field(default_factory=dict)

    def __float__(self):
        return float(self.value.real)


def _zero(reason: str, strict: bool) -> EvalResult:
    if strict:
        raise SelectionRuleViolation(reason)
    return EvalResult(0j, diagnostic=f"selection rule violated: {reason}", meta={"violation": reason})


def _mismatch(pairs, tol=EQ_TOL):
    """First ``(name, a, b)`` with ``|a - b| > tol``, else None."""
    for name, a, b in pairs:
        if abs(a - b) > tol:
            return f"{name}: {a!r} != {b!r}"
    return None


def _ratio(g, mu):
    if mu == 0:
        raise ValueError("mu must be nonzero for meta-conformal kernels")
    return g / mu


def _cpow(base: complex, expo: complex) -> complex:
    """Principal branch ``base ** expo`` via ``exp(expo * Log base)``."""
    return cmath.exp(expo * cmath.log(base))


def _real_power_flag(base: complex, expo: complex) -> bool:
    """Whether the principal power of a real base is real."""
    if isinstance(expo, complex) and expo.imag != 0:
        return False
    b = complex(base)
    if b.imag != 0:
        return False
    return b.real > 0 or float(complex(expo).real).is_integer()


# ---------------------------------------------------------------------------
# ortho-conformal
# ---------------------------------------------------------------------------


def eval_ortho_zform(z1, zbar1, z2, zbar2, D1, Dbar1, D2, Dbar2, strict: bool = False) -> EvalResult:
    """``(z1 - z2)^(-2 D1) (zbar1 - zbar2)^(-2 Dbar1)`` with selection on the weights."""
    dz, dzb = complex(z1) - complex(z2), complex(zbar1) - complex(zbar2)
    if dz == 0 or dzb == 0:
        raise SingularSeparation("z1 = z2 or zbar1 = zbar2")
    bad = _mismatch([("Delta", D1, D2), ("Deltabar", Dbar1, Dbar2)])
    if bad:
        return _zero(bad, strict)
    val = _cpow(dz, -2 * complex(D1)) * _cpow(dzb, -2 * complex(Dbar1))
    return EvalResult(val, is_real=abs(val.imag) <= 1e-15 * abs(val))


def eval_ortho_physical(t: float, r: float, qn: QuantumNumbers1D) -> EvalResult:
    """Real ortho-conformal form in time-space coordinates.

    ``|t|^(-2d) [1 + (mu r/t)^2]^(-d) exp(-(2 g/mu) arctan(mu r/t))``; at
    ``mu = 0`` the limit ``exp(-2 g r/t)`` is used.
    """
    if t == 0:
        raise SingularTime("t = 0")
    x = qn.mu * r / t
    log_val = -2 * qn.delta * math.log(abs(t)) - qn.delta * math.log1p(x * x)
    if qn.mu == 0:
        log_val -= 2 * qn.gamma * r / t
    else:
        log_val -= 2 * qn.gamma / qn.mu * math.atan(x)
    return EvalResult(complex(math.exp(log_val)))


# ---------------------------------------------------------------------------
# meta-conformal, 1D
# ---------------------------------------------------------------------------


def _sep1d(p1: Point1D, p2: Point1D, qn1, qn2):
    t = p1.t - p2.t
    if t == 0:
        raise SingularTime("t1 = t2")
    return t, qn1.mu * p1.r - qn2.mu * p2.r


def eval_meta1d_holo(p1: Point1D, p2: Point1D, qn1: QuantumNumbers1D, qn2: QuantumNumbers1D,
                     strict: bool = False) -> EvalResult:
    """``t^(-2 d1) (1 + xi/t)^(-2 g1/mu1)`` with ``xi = mu1 r1 - mu2 r2``.

    For ``mu1 = mu2`` the selection on ``gamma/mu`` is the selection on
    ``gamma``.  The value is flagged singular where ``t + xi = 0``.
    """
    t, xi = _sep1d(p1, p2, qn1, qn2)
    bad = _mismatch([("delta", qn1.delta, qn2.delta),
                     ("gamma/mu", _ratio(qn1.gamma, qn1.mu), _ratio(qn2.gamma, qn2.mu))])
    if bad:
        return _zero(bad, strict)
    s = 1 + xi / t
    a = -2 * qn1.gamma / qn1.mu
    if abs(t + xi) <= 1e-14 * max(abs(t), abs(xi)):
        return EvalResult(complex(math.nan, math.nan), is_singular=True, is_real=False,
                          diagnostic="1 + mu*dr/t = 0", meta={"scaling_variable": s})
    val = _cpow(t, -2 * qn1.delta) * _cpow(s, a)
    is_real = _real_power_flag(t, -2 * qn1.delta) and _real_power_flag(s, a)
    if is_real:
        val = complex(val.real, 0.0)
    return EvalResult(val, is_real=is_real, meta={"scaling_variable": s})


def eval_meta1d_reg(p1: Point1D, p2: Point1D, qn1: QuantumNumbers1D, qn2: QuantumNumbers1D,
                    strict: bool = False) -> EvalResult:
    """``|t|^(-2 d1) (1 + |xi/t|)^(-2 |g1/mu1|)``; real and bounded."""
    t, xi = _sep1d(p1, p2, qn1, qn2)
    g1, g2 = _ratio(qn1.gamma, qn1.mu), _ratio(qn2.gamma, qn2.mu)
    bad = _mismatch([("delta", qn1.delta, qn2.delta), ("gamma/mu", g1, g2)])
    if bad:
        return _zero(bad, strict)
    log_val = -2 * qn1.delta * math.log(abs(t)) - 2 * abs(g1) * math.log1p(abs(xi / t))
    return EvalResult(complex(math.exp(log_val)))


# ---------------------------------------------------------------------------
# meta-conformal, 2D
# ---------------------------------------------------------------------------


def _sep2d(p1: Point2D, p2: Point2D, qn1, qn2):
    t = p1.t - p2.t
    if t == 0:
        raise SingularTime("t1 = t2")
    return t, qn1.mu * p1.r_par - qn2.mu * p2.r_par, qn1.mu * p1.r_perp - qn2.mu * p2.r_perp


def _select2d(qn1, qn2):
    return _mismatch([
        ("delta", qn1.delta, qn2.delta),
        ("gamma_par/mu", _ratio(qn1.gamma_par, qn1.mu), _ratio(qn2.gamma_par, qn2.mu)),
        ("gamma_perp/mu", _ratio(qn1.gamma_perp, qn1.mu), _ratio(qn2.gamma_perp, qn2.mu)),
    ])


def eval_meta2d_holo(p1: Point2D, p2: Point2D, qn1: QuantumNumbers2D, qn2: QuantumNumbers2D,
                     strict: bool = False) -> EvalResult:
    """Chiral product ``t^(-2d) (1 + w/t)^(-2g/mu) (1 + wbar/t)^(-2gbar/mu)``.

    ``w = xi_par + i xi_perp`` and ``g = gamma_par - i gamma_perp``.
    """
    t, a, b = _sep2d(p1, p2, qn1, qn2)
    bad = _select2d(qn1, qn2)
    if bad:
        return _zero(bad, strict)
    s_plus = 1 + complex(a, b) / t
    s_minus = 1 + complex(a, -b) / t
    if abs(complex(t + a, b)) <= 1e-14 * max(abs(t), abs(a), abs(b)):
        return EvalResult(complex(math.nan, math.nan), is_singular=True, is_real=False,
                          diagnostic="1 + mu*(dr_par + i dr_perp)/t = 0")
    g = complex(qn1.gamma_par, -qn1.gamma_perp) / qn1.mu
    val = _cpow(t, -2 * qn1.delta) * _cpow(s_plus, -2 * g) * _cpow(s_minus, -2 * g.conjugate())
    # the chiral product is real whenever the branch cuts are not crossed
    chiral_real = not (b == 0 and s_plus.real < 0)
    is_real = _real_power_flag(t, -2 * qn1.delta) and chiral_real
    if is_real:
        val = complex(val.real, 0.0)
    return EvalResult(val, is_real=is_real)


def _atan_ratio(num: float, den: float) -> float:
    """Principal ``arctan(num/den)``, with the limits at ``den = 0``."""
    if num == 0:
        return 0.0
    if den == 0:
        return math.copysign(math.pi / 2, num)
    return math.atan(num / den)


def eval_meta2d_reg(p1: Point2D, p2: Point2D, qn1: QuantumNumbers2D, qn2: QuantumNumbers2D,
                    strict: bool = False) -> EvalResult:
    """Regularized 2D form: algebraic factor times arctan factor, both at most 1."""
    t, a, b = _sep2d(p1, p2, qn1, qn2)
    bad = _select2d(qn1, qn2)
    if bad:
        return _zero(bad, strict)
    xp, xq = a / t, b / t
    gp, gq = qn1.gamma_par / qn1.mu, qn1.gamma_perp / qn1.mu
    ax = abs(xp)
    # log[(1+|x|)^2 + y^2] = 2 log1p(|x|) + log1p(y^2/(1+|x|)^2)
    log_alg = 2 * math.log1p(ax) + math.log1p((xq / (1 + ax)) ** 2)
    angle = _atan_ratio(xq, 1 + xp)
    log_val = -2 * qn1.delta * math.log(abs(t)) - abs(gp) * log_alg - abs(2 * gq * angle)
    return EvalResult(complex(math.exp(log_val)), meta={"lambda_perp": angle})


# ---------------------------------------------------------------------------
# conformal galilean
# ---------------------------------------------------------------------------


def _cga_geometry(p1, p2, qn1, qn2):
    """``(t, gamma.dr, separated sum, selection pairs)`` for either dimension."""
    if isinstance(p1, Point2D):
        t = p1.t - p2.t
        dp, dq = p1.r_par - p2.r_par, p1.r_perp - p2.r_perp
        dot = qn1.gamma_par * dp + qn1.gamma_perp * dq
        sep = abs(qn1.gamma_par * dp) + abs(qn1.gamma_perp * dq)
        pairs = [("delta", qn1.delta, qn2.delta), ("gamma_par", qn1.gamma_par, qn2.gamma_par),
                 ("gamma_perp", qn1.gamma_perp, qn2.gamma_perp)]
        dim = 2
    else:
        t = p1.t - p2.t
        dot = qn1.gamma * (p1.r - p2.r)
        sep = abs(dot)
        pairs = [("delta", qn1.delta, qn2.delta), ("gamma", qn1.gamma, qn2.gamma)]
        dim = 1
    if t == 0:
        raise SingularTime("t1 = t2")
    return t, dot, sep, pairs, dim


def eval_cga_naive(p1, p2, qn1, qn2, strict: bool = False) -> EvalResult:
    """``t^(-2d) exp(-2 g.dr/t)`` (1D) or ``exp(-4 g.dr/t)`` (2D).

    Not singular, but unbounded upstream: ``meta['upstream']`` is true
    where the exponential factor exceeds 1.
    """
    t, dot, _, pairs, dim = _cga_geometry(p1, p2, qn1, qn2)
    bad = _mismatch(pairs)
    if bad:
        return _zero(bad, strict)
    expo = -(2 if dim == 1 else 4) * dot / t
    val = _cpow(t, -2 * qn1.delta) * math.exp(expo)
    is_real = _real_power_flag(t, -2 * qn1.delta)
    if is_real:
        val = complex(val.real, 0.0)
    return EvalResult(val, is_real=is_real, meta={"upstream": expo > 0, "exponent": expo},
                      diagnostic="upstream growth" if expo > 0 else None)


def eval_cga_reg(p1, p2, qn1, qn2, alpha: float = 1.0, F0: float = 1.0,
                 vectorial: bool = False, strict: bool = False) -> EvalResult:
    """``F0 |t|^(-2d) exp(-2 alpha |g.dr/t|)``.

    In 2D the default uses separated components,
    ``exp(-2 alpha (|g_par dr_par| + |g_perp dr_perp|)/|t|)``; pass
    ``vectorial=True`` for the ``|g.dr|`` form.
    """
    t, dot, sep, pairs, dim = _cga_geometry(p1, p2, qn1, qn2)
    bad = _mismatch(pairs)
    if bad:
        return _zero(bad, strict)
    s = abs(dot) if (dim == 1 or vectorial) else sep
    log_val = -2 * qn1.delta * math.log(abs(t)) - 2 * alpha * s / abs(t)
    return EvalResult(complex(F0 * math.exp(log_val)))


_DISPATCH = {
    CorrelatorKind.META1D_HOLO: eval_meta1d_holo,
    CorrelatorKind.META1D_REG: eval_meta1d_reg,
    CorrelatorKind.META2D_HOLO: eval_meta2d_holo,
    CorrelatorKind.META2D_REG: eval_meta2d_reg,
    CorrelatorKind.CGA_NAIVE: eval_cga_naive,
}


def evaluate(kind, p1, p2, qn1, qn2, alpha: float = 1.0, F0: float = 1.0, strict: bool = False) -> EvalResult:
    """Dispatch on :class:`CorrelatorKind` (or its string value)."""
    kind = CorrelatorKind(kind)
    if kind is CorrelatorKind.CGA_REG:
        return eval_cga_reg(p1, p2, qn1, qn2, alpha=alpha, F0=F0, strict=strict)
    if kind is CorrelatorKind.ORTHO_PHYSICAL:
        bad = _mismatch([("delta", qn1.delta, qn2.delta), ("gamma", qn1.gamma, qn2.gamma),
                         ("mu", qn1.mu, qn2.mu)])
        if bad:
            return _zero(bad, strict)
        return eval_ortho_physical(p1.t - p2.t, p1.r - p2.r, qn1)
    if kind is CorrelatorKind.ORTHO_Z:
        raise ValueError("ortho-z takes complex light-cone coordinates; call eval_ortho_zform")
    return _DISPATCH[kind](p1, p2, qn1, qn2, strict=strict)
