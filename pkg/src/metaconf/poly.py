"""Exact multivariate (Laurent) polynomials over the Gaussian rationals.

Coefficients are :class:`QI` numbers ``a + b*i`` with ``a, b`` rational.
Monomials are stored as sorted tuples of ``(name, exponent)`` pairs; zero
coefficients are never stored, so two polynomials are equal iff their
term dictionaries are equal.

Negative exponents are allowed.  They only ever appear for the velocity
scale ``mu`` (generators carry ``1/mu``), and the ring of Laurent
polynomials is still closed under ``+``, ``*`` and differentiation.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

Number = Union[int, float, Fraction, complex, "QI"]


def to_fraction(x) -> Fraction:
    """Exact rational from an int, Fraction, or float (via its repr)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        # repr gives the shortest decimal that round-trips: 0.22 -> 11/50
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


class QI:
    """Gaussian rational ``re + im*i``; immutable and hashable."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", to_fraction(re))
        object.__setattr__(self, "im", to_fraction(im))

    def __setattr__(self, *_):
        raise AttributeError("QI is immutable")

    @classmethod
    def coerce(cls, x) -> "QI":
        if isinstance(x, QI):
            return x
        if isinstance(x, complex):
            return cls(x.real, x.imag)
        return cls(x, 0)

    def __add__(self, other):
        if isinstance(other, MultiPoly):
            return NotImplemented
        o = QI.coerce(other)
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, MultiPoly):
            return NotImplemented
        return self + (-QI.coerce(other))

    def __rsub__(self, other):
        return QI.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, MultiPoly):
            return NotImplemented
        o = QI.coerce(other)
        return QI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "QI":
        return QI(self.re, -self.im)

    def __truediv__(self, other):
        if isinstance(other, MultiPoly):
            return NotImplemented
        o = QI.coerce(other)
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("QI division by zero")
        num = self * o.conjugate()
        return QI(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        return QI.coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("integer powers only")
        if n < 0:
            return QI(1) / (self ** (-n))
        out = QI(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        try:
            o = QI.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*I"
        return f"({self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}*I)"


I = QI(0, 1)

Monomial = tuple  # tuple[tuple[str, int], ...], sorted by name


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in exps.items() if e != 0))


class MultiPoly:
    """Immutable sparse polynomial ``{monomial: QI}`` in named variables."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None):
        clean = {}
        for mono, c in (terms or {}).items():
            c = QI.coerce(c)
            if c:
                clean[tuple(sorted((v, e) for v, e in mono if e != 0))] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *_):
        raise AttributeError("MultiPoly is immutable")

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c: Number) -> "MultiPoly":
        return cls({(): c})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "MultiPoly":
        return cls({((name, power),): 1})

    @classmethod
    def coerce(cls, x) -> "MultiPoly":
        if isinstance(x, MultiPoly):
            return x
        return cls.const(x)

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        o = MultiPoly.coerce(other)
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out.get(m, QI(0)) + c
        return MultiPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-MultiPoly.coerce(other))

    def __rsub__(self, other):
        return MultiPoly.coerce(other) - self

    def __mul__(self, other):
        o = MultiPoly.coerce(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, QI(0)) + c1 * c2
        return MultiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            # a single monomial may be inverted (Laurent); sums may not
            if isinstance(n, int) and len(self.terms) == 1:
                (m, c), = self.terms.items()
                return MultiPoly({tuple((v, e * n) for v, e in m): QI(1) / (c ** (-n))})
            raise ValueError("only nonnegative integer powers of non-monomials")
        out = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        """Division by a nonzero scalar only."""
        c = QI.coerce(other)
        return MultiPoly({m: v / c for m, v in self.terms.items()})

    # -- calculus and substitution ---------------------------------------
    def diff(self, name: str) -> "MultiPoly":
        out: dict = {}
        for m, c in self.terms.items():
            exps = dict(m)
            e = exps.get(name, 0)
            if e == 0:
                continue
            exps[name] = e - 1
            mono = tuple(sorted((v, k) for v, k in exps.items() if k != 0))
            out[mono] = out.get(mono, QI(0)) + c * e
        return MultiPoly(out)

    def subs(self, mapping: Mapping[str, "MultiPoly | Number"]) -> "MultiPoly":
        """Substitute polynomials (or numbers) for variables, exactly."""
        mapping = {k: MultiPoly.coerce(v) for k, v in mapping.items()}
        out = MultiPoly()
        for m, c in self.terms.items():
            term = MultiPoly.const(c)
            for v, e in m:
                if v in mapping:
                    term = term * (mapping[v] ** e)
                else:
                    term = term * MultiPoly.var(v, e)
            out = out + term
        return out

    def rename(self, mapping: Mapping[str, str]) -> "MultiPoly":
        return MultiPoly(
            {tuple((mapping.get(v, v), e) for v, e in m): c for m, c in self.terms.items()}
        )

    def evaluate(self, point: Mapping[str, complex]) -> complex:
        total = 0j
        for m, c in self.terms.items():
            val = complex(c)
            for v, e in m:
                val *= complex(point[v]) ** e
            total += val
        return total

    # -- inspection ------------------------------------------------------
    @property
    def variables(self) -> frozenset:
        return frozenset(v for m in self.terms for v, _ in m)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def constant_term(self) -> QI:
        return self.terms.get((), QI(0))

    def min_degree(self, name: str) -> int:
        return min((dict(m).get(name, 0) for m in self.terms), default=0)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                other = MultiPoly.coerce(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda mm: (-sum(e for _, e in mm), mm)):
            c = self.terms[m]
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            parts.append(f"{c!r}*{mono}" if mono else repr(c))
        return " + ".join(parts)


def const_or_symbol(value, name: str) -> MultiPoly:
    """A parameter that is either a numeric value or kept as a symbol."""
    if value is None:
        return MultiPoly.var(name)
    if isinstance(value, str):
        return MultiPoly.var(value)
    if isinstance(value, MultiPoly):
        return value
    return MultiPoly.const(QI.coerce(value if not isinstance(value, float) else to_fraction(value)))


def poly_sum(items: Iterable[MultiPoly]) -> MultiPoly:
    out = MultiPoly()
    for p in items:
        out = out + p
    return out
