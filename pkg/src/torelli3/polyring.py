"""Sparse polynomials in the five coordinates W0, X1, X2, Y3, Y4.

Monomials are plain 5-tuples of exponents.  The cyclic group of order three
acts by scaling X-variables by a primitive cube root of unity and Y-variables
by its inverse; all of that is handled through integer weights mod 3, so no
cyclotomic arithmetic is needed anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .scalars import QQ, RingMismatchError

VARS = ("W0", "X1", "X2", "Y3", "Y4")
VAR_WEIGHTS = (0, 1, 1, 2, 2)
NVARS = 5

Monomial = tuple


def mono_degree(m: Monomial) -> int:
    return sum(m)


def mono_weight(m: Monomial) -> int:
    """Eigenvalue exponent of ``m`` under the order-3 action, in {0, 1, 2}."""
    return (m[1] + m[2] - m[3] - m[4]) % 3


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_str(m: Monomial) -> str:
    parts = []
    for name, e in zip(VARS, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) or "1"


def parse_monomial(text: str) -> Monomial:
    """Inverse of :func:`mono_str`, e.g. ``"W0*X1^2"``."""
    exps = [0] * NVARS
    text = text.strip()
    if text == "1":
        return tuple(exps)
    for factor in text.split("*"):
        name, _, e = factor.partition("^")
        exps[VARS.index(name.strip())] += int(e) if e else 1
    return tuple(exps)


def mono_sort_key(m: Monomial):
    # graded lex, W0 > X1 > X2 > Y3 > Y4; sort with reverse=True
    return (sum(m), m)


def monomials_of_degree(n: int, nvars: int = NVARS) -> list[Monomial]:
    """All degree-``n`` monomials, largest first in graded-lex order."""
    out = []
    for combo in combinations_with_replacement(range(nvars), n):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=mono_sort_key, reverse=True)
    return out


class Polynomial:
    """Immutable sparse polynomial over a coefficient ring."""

    __slots__ = ("terms", "ring", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None, ring=QQ):
        self.ring = ring
        clean = {}
        for m, c in (terms or {}).items():
            c = ring(c)
            if c != 0:
                clean[tuple(m)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, ring) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        p.ring = ring
        p._hash = None
        return p

    @classmethod
    def var(cls, i: int | str, ring=QQ) -> "Polynomial":
        if isinstance(i, str):
            i = VARS.index(i)
        e = [0] * NVARS
        e[i] = 1
        return cls({tuple(e): ring.one}, ring)

    @classmethod
    def constant(cls, c, ring=QQ) -> "Polynomial":
        return cls({(0,) * NVARS: c}, ring)

    @classmethod
    def monomial(cls, m: Monomial, c=1, ring=QQ) -> "Polynomial":
        return cls({tuple(m): c}, ring)

    @classmethod
    def zero(cls, ring=QQ) -> "Polynomial":
        return cls._raw({}, ring)

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if other.ring != self.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")

    def _scalar(self, c):
        return self.ring(c)

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self._scalar(other), self.ring)
        self._check(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m)
            s = c if s is None else s + c
            if s == 0:
                t.pop(m, None)
            else:
                t[m] = s
        return Polynomial._raw(t, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self.terms.items()}, self.ring)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self._scalar(other), self.ring)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = self._scalar(other)
            if c == 0:
                return Polynomial.zero(self.ring)
            return Polynomial._raw({m: v * c for m, v in self.terms.items()}, self.ring)
        self._check(other)
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2],
                     m1[3] + m2[3], m1[4] + m2[4])
                s = t.get(m)
                t[m] = c1 * c2 if s is None else s + c1 * c2
        return Polynomial._raw({m: c for m, c in t.items() if c != 0}, self.ring)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Polynomial.constant(self.ring.one, self.ring)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # -- queries ----------------------------------------------------------

    def coeff(self, m: Monomial):
        return self.terms.get(tuple(m), self.ring.zero)

    def monomials(self) -> list[Monomial]:
        return sorted(self.terms, key=mono_sort_key, reverse=True)

    def homogeneous_degree(self) -> int | None:
        """The common degree of all monomials, or None if inhomogeneous/zero."""
        degs = {sum(m) for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def weight_components(self) -> dict[int, "Polynomial"]:
        comps: dict[int, dict] = {0: {}, 1: {}, 2: {}}
        for m, c in self.terms.items():
            comps[mono_weight(m)][m] = c
        return {w: Polynomial._raw(t, self.ring) for w, t in comps.items()}

    def is_weight_homogeneous(self, w: int) -> bool:
        return all(mono_weight(m) == w % 3 for m in self.terms)

    def is_invariant(self) -> bool:
        return self.is_weight_homogeneous(0)

    # -- calculus and substitution ---------------------------------------

    def derivative(self, i: int | str) -> "Polynomial":
        if isinstance(i, str):
            i = VARS.index(i)
        t = {}
        for m, c in self.terms.items():
            e = m[i]
            if e == 0:
                continue
            dm = list(m)
            dm[i] -= 1
            v = c * e
            if v != 0:
                t[tuple(dm)] = v
        return Polynomial._raw(t, self.ring)

    def gradient(self) -> list["Polynomial"]:
        return [self.derivative(i) for i in range(NVARS)]

    def substitute(self, forms: Sequence["Polynomial"]) -> "Polynomial":
        """Replace variable ``i`` by ``forms[i]`` simultaneously."""
        if len(forms) != NVARS:
            raise ValueError("need one polynomial per variable")
        for f in forms:
            self._check(f)
        powers: list[list[Polynomial]] = [[Polynomial.constant(self.ring.one, self.ring)]
                                          for _ in range(NVARS)]

        def power(i, e):
            while len(powers[i]) <= e:
                powers[i].append(powers[i][-1] * forms[i])
            return powers[i][e]

        out = Polynomial.zero(self.ring)
        for m, c in self.terms.items():
            term = Polynomial.constant(c, self.ring)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out

    def evaluate(self, point: Sequence):
        total = self.ring.zero
        pt = [self.ring(x) for x in point]
        for m, c in self.terms.items():
            v = c
            for x, e in zip(pt, m):
                if e:
                    v = v * x ** e
            total = total + v
        return total

    def map_coefficients(self, f, ring) -> "Polynomial":
        """Apply ``f`` to every coefficient, landing in ``ring``."""
        return Polynomial({m: f(c) for m, c in self.terms.items()}, ring)

    def change_ring(self, ring) -> "Polynomial":
        return self.map_coefficients(ring, ring)

    # -- display ----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in self.monomials():
            c = self.terms[m]
            cs = str(c)
            if any(ch in cs.lstrip("-") for ch in "+- "):
                cs = f"({cs})"
            mono = mono_str(m)
            if mono == "1":
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Polynomial({self}, ring={self.ring})"


def variables(ring=QQ) -> list[Polynomial]:
    return [Polynomial.var(i, ring) for i in range(NVARS)]


def poly_derivative(p: Polynomial, var_index: int) -> Polynomial:
    return p.derivative(var_index)


# ---------------------------------------------------------------------------
# the order-3 action, tracked by weight tags


@dataclass(frozen=True)
class TauImage:
    """Weight decomposition of a polynomial with accumulated eigenvalue tags.

    ``components`` maps weight ``m`` to ``(k, component)``: the image equals
    the sum over ``m`` of ``eps**k * component``.  Applying the action adds
    ``m`` to ``k`` modulo 3.
    """

    components: tuple

    @classmethod
    def of(cls, p: Polynomial) -> "TauImage":
        comps = p.weight_components()
        return cls(tuple((w, 0, comps[w]) for w in (0, 1, 2) if not comps[w].is_zero()))

    def tags(self) -> dict[int, int]:
        return {w: k for w, k, _ in self.components}

    def component(self, w: int) -> Polynomial | None:
        for ww, _, c in self.components:
            if ww == w:
                return c
        return None

    def is_invariant(self) -> bool:
        return all(w == 0 for w, _, _ in self.components)

    def degree(self) -> int | None:
        degs = {c.homogeneous_degree() for _, _, c in self.components}
        return degs.pop() if len(degs) == 1 else None


def apply_tau(p: Polynomial | TauImage) -> TauImage:
    """One application of the generator of the cyclic action."""
    img = TauImage.of(p) if isinstance(p, Polynomial) else p
    return TauImage(tuple((w, (k + w) % 3, c) for w, k, c in img.components))


def linear_form(coeffs: Iterable, ring=QQ) -> Polynomial:
    """sum_i coeffs[i] * var_i."""
    t = {}
    for i, c in enumerate(coeffs):
        e = [0] * NVARS
        e[i] = 1
        t[tuple(e)] = c
    return Polynomial(t, ring)
