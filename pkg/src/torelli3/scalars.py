"""Exact coefficient rings: rationals, prime fields and parameter polynomials.

Every coefficient used by the package lives in one of three rings:

* ``QQ`` -- elements are :class:`fractions.Fraction` (always in lowest terms).
* ``GF(p)`` -- elements are :class:`FpElement` with a value in ``[0, p)``.
* ``PARAM`` -- elements are :class:`ParamPoly`, sparse polynomials in named
  parameter symbols with rational coefficients.

The ring objects convert foreign values into their native element type and
expose ``zero``/``one``/``inv``; the element types overload the arithmetic
operators so that polynomial and matrix code can stay ring-agnostic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Rational
from typing import Any, Mapping


class RingMismatchError(TypeError):
    """Operands belong to different coefficient rings."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def parse_rational(text: Any) -> Fraction:
    """Parse ``int``, ``Fraction`` or strings like ``"3"``, ``"-2/5"``."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational number: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, str):
        s = text.strip()
        if not s:
            raise ValueError("empty rational literal")
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {text!r}") from exc
    raise ValueError(f"not a rational number: {text!r}")


# ---------------------------------------------------------------------------
# prime field elements


class FpElement:
    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other) -> int | None:
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise RingMismatchError(f"GF({self.p}) vs GF({other.p})")
            return other.v
        if isinstance(other, Integral):
            return int(other) % self.p
        if isinstance(other, Fraction):
            den = other.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return other.numerator * pow(den, -1, self.p) % self.p
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElement(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElement(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElement(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElement(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return FpElement(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.v == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return FpElement(o * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return FpElement(-self.v, self.p)

    def __pow__(self, n: int):
        if n < 0:
            return FpElement(pow(pow(self.v, -1, self.p), -n, self.p), self.p)
        return FpElement(pow(self.v, n, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.p == other.p and self.v == other.v
        if isinstance(other, (Integral, Fraction)):
            try:
                return self.v == self._coerce(other)
            except ZeroDivisionError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"FpElement({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


# ---------------------------------------------------------------------------
# parameter polynomials

# key: tuple of (symbol, exponent) pairs sorted by symbol name
ParamKey = tuple


def _key_mul(a: ParamKey, b: ParamKey) -> ParamKey:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for s, e in b:
        d[s] = d.get(s, 0) + e
    return tuple(sorted(d.items()))


class ParamPoly:
    """Sparse polynomial in named parameters with rational coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[ParamKey, Any] | None = None):
        clean = {}
        for k, c in (terms or {}).items():
            c = Fraction(c)
            if c != 0:
                clean[tuple(sorted(k))] = c
        self.terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def symbol(cls, name: str) -> "ParamPoly":
        return cls({((name, 1),): 1})

    @classmethod
    def const(cls, c) -> "ParamPoly":
        return cls({(): c})

    @classmethod
    def monomial(cls, key: Mapping[str, int] | ParamKey, coeff=1) -> "ParamPoly":
        items = key.items() if isinstance(key, Mapping) else key
        return cls({tuple(sorted((s, e) for s, e in items if e)): coeff})

    @staticmethod
    def _lift(other) -> "ParamPoly | None":
        if isinstance(other, ParamPoly):
            return other
        if isinstance(other, bool):
            return None
        if isinstance(other, (Integral, Fraction)):
            return ParamPoly.const(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        t = dict(self.terms)
        for k, c in o.terms.items():
            t[k] = t.get(k, 0) + c
        return ParamPoly(t)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        t: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in o.terms.items():
                k = _key_mul(k1, k2)
                t[k] = t.get(k, 0) + c1 * c2
        return ParamPoly(t)

    __rmul__ = __mul__

    def __truediv__(self, other):
        # only division by nonzero rational constants
        if isinstance(other, ParamPoly):
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("ParamPoly division by non-constant")
            other = other.constant_value()
        if isinstance(other, (Integral, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("ParamPoly division by zero")
            return ParamPoly({k: c / other for k, c in self.terms.items()})
        return NotImplemented

    def __pow__(self, n: int):
        out = ParamPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(k == () for k in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def is_term(self) -> bool:
        """True for a single rational multiple of one parameter monomial."""
        return len(self.terms) == 1

    def symbols(self) -> set[str]:
        return {s for k in self.terms for s, _ in k}

    def degree(self) -> int:
        return max((sum(e for _, e in k) for k in self.terms), default=-1)

    def diff(self, sym: str) -> "ParamPoly":
        t = {}
        for k, c in self.terms.items():
            d = dict(k)
            e = d.get(sym, 0)
            if e == 0:
                continue
            if e == 1:
                del d[sym]
            else:
                d[sym] = e - 1
            t[tuple(sorted(d.items()))] = c * e
        return ParamPoly(t)

    def subs(self, values: Mapping[str, Any]) -> "ParamPoly":
        """Substitute rational values (or ParamPolys) for some symbols."""
        out = ParamPoly()
        for k, c in self.terms.items():
            term = ParamPoly.const(c)
            rest = []
            for s, e in k:
                if s in values:
                    term = term * (ParamPoly._lift(values[s]) ** e)
                else:
                    rest.append((s, e))
            out = out + term * ParamPoly({tuple(rest): 1})
        return out

    def evaluate(self, values: Mapping[str, Any], ring=None):
        """Evaluate at a full assignment, returning an element of ``ring``."""
        ring = ring or QQ
        total = ring.zero
        for k, c in self.terms.items():
            v = ring(c)
            for s, e in k:
                v = v * ring(values[s]) ** e
            total = total + v
        return total

    def __repr__(self):
        return f"ParamPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.terms.items():
            mono = "*".join(s if e == 1 else f"{s}^{e}" for s, e in k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# ring descriptors


@dataclass(frozen=True)
class RationalField:
    name: str = "rational"
    is_field: bool = True
    characteristic: int = 0

    def __call__(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, FpElement):
            raise RingMismatchError("cannot lift a GF(p) element to QQ")
        if isinstance(x, ParamPoly):
            if not x.is_constant():
                raise RingMismatchError("non-constant ParamPoly is not rational")
            return x.constant_value()
        if isinstance(x, Rational):
            return Fraction(x)
        return parse_rational(x)

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def inv(self, x) -> Fraction:
        return 1 / self(x)

    def contains(self, x) -> bool:
        return isinstance(x, Fraction)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class PrimeField:
    p: int
    is_field: bool = True

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def name(self) -> str:
        return f"fp:{self.p}"

    @property
    def characteristic(self) -> int:
        return self.p

    def __call__(self, x) -> FpElement:
        if isinstance(x, FpElement):
            if x.p != self.p:
                raise RingMismatchError(f"GF({x.p}) element into GF({self.p})")
            return x
        if isinstance(x, ParamPoly):
            if not x.is_constant():
                raise RingMismatchError("non-constant ParamPoly is not in GF(p)")
            x = x.constant_value()
        if isinstance(x, str):
            x = parse_rational(x)
        if isinstance(x, Integral):
            return FpElement(int(x), self.p)
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"{x} has denominator divisible by {self.p}")
            return FpElement(x.numerator * pow(den, -1, self.p), self.p)
        raise TypeError(f"cannot convert {x!r} into GF({self.p})")

    @property
    def zero(self) -> FpElement:
        return FpElement(0, self.p)

    @property
    def one(self) -> FpElement:
        return FpElement(1, self.p)

    def inv(self, x) -> FpElement:
        x = self(x)
        if x.v == 0:
            raise ZeroDivisionError(f"zero has no inverse in GF({self.p})")
        return FpElement(pow(x.v, -1, self.p), self.p)

    def contains(self, x) -> bool:
        return isinstance(x, FpElement) and x.p == self.p

    def elements(self):
        return (FpElement(v, self.p) for v in range(self.p))

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class ParamRing:
    name: str = "param"
    is_field: bool = False
    characteristic: int = 0

    def __call__(self, x) -> ParamPoly:
        if isinstance(x, ParamPoly):
            return x
        if isinstance(x, FpElement):
            raise RingMismatchError("cannot lift a GF(p) element to parameter polynomials")
        if isinstance(x, str):
            x = parse_rational(x)
        return ParamPoly.const(x)

    @property
    def zero(self) -> ParamPoly:
        return ParamPoly()

    @property
    def one(self) -> ParamPoly:
        return ParamPoly.const(1)

    def inv(self, x: ParamPoly) -> ParamPoly:
        if not x.is_constant() or x.is_zero():
            raise ZeroDivisionError(f"{x} is not a unit")
        return ParamPoly.const(1 / x.constant_value())

    def contains(self, x) -> bool:
        return isinstance(x, ParamPoly)

    def __str__(self):
        return self.name


QQ = RationalField()
PARAM = ParamRing()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(text: str):
    """``"rational"`` or ``"fp:<prime>"`` (prime >= 5) to a ring object."""
    text = text.strip()
    if text in ("rational", "QQ", "Q"):
        return QQ
    if text.startswith("fp:"):
        try:
            p = int(text[3:])
        except ValueError as exc:
            raise ValueError(f"bad field spec {text!r}") from exc
        if p < 5 or not is_prime(p):
            raise ValueError(f"field fp:{p} needs a prime p >= 5")
        return PrimeField(p)
    raise ValueError(f"unknown field {text!r}; use 'rational' or 'fp:<prime>'")


def scalar_to_str(x) -> str:
    return str(x)
