"""The invariant cubic pairs: general 26-parameter and normalized 14-parameter.

General shape, for i = 1, 2::

    F_i = a_i_0 W0^3 + W0 (a_i_1 X1Y3 + a_i_2 X1Y4 + a_i_3 X2Y3 + a_i_4 X2Y4)
          + a_i_5 X1^3 + a_i_6 X1^2X2 + a_i_7 X1X2^2 + a_i_8 X2^3
          + a_i_9 Y3^3 + a_i_10 Y3^2Y4 + a_i_11 Y3Y4^2 + a_i_12 Y4^3

Normalized shape (parameters a1 b1 c1 d1 e1 h1 l1 a2 b2 c2 d2 g2 h2 l2)::

    F1 = W0^3 + W0(a1 X1Y3 + b1 X1Y4 + c1 X2Y3 + d1 X2Y4)
         + X1^3 + e1 X1^2X2 + Y3^3 + h1 Y3^2Y4 + l1 Y3Y4^2
    F2 = W0^3 + W0(a2 X1Y3 + b2 X1Y4 + c2 X2Y3 + d2 X2Y4)
         + g2 X1X2^2 + X2^3 + h2 Y3^2Y4 + l2 Y3Y4^2 + Y4^3
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping, Sequence

from .geomchecks import X_VARS, Y_VARS, binary_coeffs, binary_part, free_action_check
from .polyring import NVARS, Monomial, Polynomial, parse_monomial
from .scalars import PARAM, QQ, ParamPoly, PrimeField, parse_field, parse_rational

NORMALIZED_KEYS = ("a1", "b1", "c1", "d1", "e1", "h1", "l1",
                   "a2", "b2", "c2", "d2", "g2", "h2", "l2")
GENERAL_KEYS = tuple(f"a_{i}_{j}" for i in (1, 2) for j in range(13))

# monomial multiplied by a_i_j
GENERAL_MONOMIALS = tuple(parse_monomial(s) for s in (
    "W0^3", "W0*X1*Y3", "W0*X1*Y4", "W0*X2*Y3", "W0*X2*Y4",
    "X1^3", "X1^2*X2", "X1*X2^2", "X2^3",
    "Y3^3", "Y3^2*Y4", "Y3*Y4^2", "Y4^3"))

# (component, monomial) carried by each normalized parameter
NORMALIZED_SLOTS = {
    "a1": (0, "W0*X1*Y3"), "b1": (0, "W0*X1*Y4"), "c1": (0, "W0*X2*Y3"),
    "d1": (0, "W0*X2*Y4"), "e1": (0, "X1^2*X2"), "h1": (0, "Y3^2*Y4"),
    "l1": (0, "Y3*Y4^2"),
    "a2": (1, "W0*X1*Y3"), "b2": (1, "W0*X1*Y4"), "c2": (1, "W0*X2*Y3"),
    "d2": (1, "W0*X2*Y4"), "g2": (1, "X1*X2^2"), "h2": (1, "Y3^2*Y4"),
    "l2": (1, "Y3*Y4^2"),
}
# coefficient-one monomials of the normalized shape
NORMALIZED_FIXED = ((0, "W0^3"), (0, "X1^3"), (0, "Y3^3"),
                    (1, "W0^3"), (1, "X2^3"), (1, "Y4^3"))

# normalized key -> general index j
_EMBED_INDEX = {"a": 1, "b": 2, "c": 3, "d": 4}
_EMBED_FIXED = {"a_1_0": 1, "a_1_5": 1, "a_1_9": 1, "a_2_0": 1, "a_2_8": 1, "a_2_12": 1}


class ParamsError(ValueError):
    """Malformed parameter input."""


class FreeActionViolation(ValueError):
    """The group does not act freely on the complete intersection."""


class NotNormalizableOverField(ValueError):
    """The coefficient reduction needs points or cube roots outside the field."""


class SamplingError(RuntimeError):
    pass


@dataclass(frozen=True)
class ParamPoint:
    model: str  # "normalized14" | "general26"
    values: tuple
    ring: Any = QQ
    provenance: str = field(default="user", compare=False)

    def __post_init__(self):
        keys = self.keys()
        if len(self.values) != len(keys):
            raise ParamsError(f"{self.model} needs {len(keys)} entries, got {len(self.values)}")

    def keys(self) -> tuple[str, ...]:
        if self.model == "normalized14":
            return NORMALIZED_KEYS
        if self.model == "general26":
            return GENERAL_KEYS
        raise ParamsError(f"unknown model {self.model!r}")

    def as_dict(self) -> dict[str, Any]:
        return dict(zip(self.keys(), self.values))

    def __getitem__(self, key: str):
        return self.values[self.keys().index(key)]

    @classmethod
    def normalized(cls, values: Mapping[str, Any] | Sequence | None = None, ring=QQ,
                   provenance: str = "user") -> "ParamPoint":
        return cls._make("normalized14", NORMALIZED_KEYS, values, ring, provenance)

    @classmethod
    def general(cls, values: Mapping[str, Any] | Sequence | None = None, ring=QQ,
                provenance: str = "user") -> "ParamPoint":
        return cls._make("general26", GENERAL_KEYS, values, ring, provenance)

    @classmethod
    def _make(cls, model, keys, values, ring, provenance):
        if values is None:
            values = {}
        if isinstance(values, Mapping):
            unknown = set(values) - set(keys)
            if unknown:
                raise ParamsError(f"unknown parameter names: {sorted(unknown)}")
            vals = tuple(ring(values.get(k, 0)) for k in keys)
        else:
            vals = tuple(ring(v) for v in values)
        return cls(model, vals, ring, provenance)

    def replace(self, **changes) -> "ParamPoint":
        d = self.as_dict()
        for k, v in changes.items():
            if k not in d:
                raise ParamsError(f"unknown parameter {k!r}")
            d[k] = self.ring(v)
        return ParamPoint(self.model, tuple(d[k] for k in self.keys()), self.ring,
                          self.provenance)

    def change_ring(self, ring) -> "ParamPoint":
        return ParamPoint(self.model, tuple(ring(v) for v in self.values), ring,
                          self.provenance)

    def to_json(self) -> dict:
        return {"model": self.model, "field": str(self.ring),
                "coeffs": {k: str(v) for k, v in self.as_dict().items()}}


def symbolic_point() -> ParamPoint:
    """The normalized family with every parameter a free symbol."""
    return ParamPoint("normalized14", tuple(ParamPoly.symbol(k) for k in NORMALIZED_KEYS),
                      PARAM, "symbolic")


@dataclass(frozen=True)
class CubicPair:
    F1: Polynomial
    F2: Polynomial
    source: ParamPoint | None = field(default=None, compare=False)

    @property
    def ring(self):
        return self.F1.ring

    def __iter__(self):
        return iter((self.F1, self.F2))

    def is_invariant(self) -> bool:
        return self.F1.is_invariant() and self.F2.is_invariant()

    def linearly_independent(self) -> bool:
        if self.F1.is_zero() or self.F2.is_zero():
            return False
        m = next(iter(self.F1.terms))
        c1, c2 = self.F1.coeff(m), self.F2.coeff(m)
        # F2 = (c2/c1) F1 is the only possible dependence
        if c2 == 0:
            return True
        return self.F1 * c2 != self.F2 * c1


def _from_slots(slots: Sequence[tuple[int, Monomial, Any]], ring) -> tuple[Polynomial, Polynomial]:
    terms: list[dict] = [{}, {}]
    for comp, m, c in slots:
        terms[comp][m] = terms[comp].get(m, ring.zero) + c
    return Polynomial(terms[0], ring), Polynomial(terms[1], ring)


def build_general(p: ParamPoint) -> CubicPair:
    if p.model != "general26":
        raise ParamsError("build_general expects a general26 point")
    d = p.as_dict()
    slots = [(i - 1, GENERAL_MONOMIALS[j], d[f"a_{i}_{j}"]) for i in (1, 2) for j in range(13)]
    return CubicPair(*_from_slots(slots, p.ring), source=p)


def build_normalized(p: ParamPoint) -> CubicPair:
    if p.model != "normalized14":
        raise ParamsError("build_normalized expects a normalized14 point")
    ring = p.ring
    slots = [(comp, parse_monomial(m), ring.one) for comp, m in NORMALIZED_FIXED]
    d = p.as_dict()
    slots += [(comp, parse_monomial(m), d[k]) for k, (comp, m) in NORMALIZED_SLOTS.items()]
    return CubicPair(*_from_slots(slots, ring), source=p)


def build_pair(p: ParamPoint) -> CubicPair:
    return build_normalized(p) if p.model == "normalized14" else build_general(p)


def embed_params(p: ParamPoint) -> ParamPoint:
    """Normalized 14-tuple as a point of the 26-parameter space."""
    if p.model != "normalized14":
        raise ParamsError("embed_params expects a normalized14 point")
    ring = p.ring
    out = {k: ring.zero for k in GENERAL_KEYS}
    for k, v in _EMBED_FIXED.items():
        out[k] = ring(v)
    d = p.as_dict()
    for i in (1, 2):
        for letter, j in _EMBED_INDEX.items():
            out[f"a_{i}_{j}"] = d[f"{letter}{i}"]
        out[f"a_{i}_10"] = d[f"h{i}"]
        out[f"a_{i}_11"] = d[f"l{i}"]
    out["a_1_6"] = d["e1"]
    out["a_2_7"] = d["g2"]
    return ParamPoint("general26", tuple(out[k] for k in GENERAL_KEYS), ring, p.provenance)


def extract_normalized(pair: CubicPair) -> ParamPoint | None:
    """Read the 14 parameters off a pair of normalized shape, else None."""
    ring = pair.ring
    F = (pair.F1, pair.F2)
    vals = {k: F[comp].coeff(parse_monomial(m)) for k, (comp, m) in NORMALIZED_SLOTS.items()}
    t = ParamPoint.normalized(vals, ring)
    rebuilt = build_normalized(t)
    if (rebuilt.F1, rebuilt.F2) != (pair.F1, pair.F2):
        return None
    return t


# ---------------------------------------------------------------------------
# random sampling


def _slices_generic(pair: CubicPair) -> tuple[bool, str | None]:
    from .quotient import graded_piece

    for n in (3, 4):
        piece = graded_piece(pair, n)
        if not piece.generic:
            return False, f"ideal slice rank in degree {n} is {piece.slice_rank}"
    return True, None


def random_params(seed: int, field=QQ, bound: int = 9, retry_cap: int = 100,
                  check: bool = True) -> ParamPoint:
    """Seeded uniform integers in [-bound, bound], resampled until generic."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if isinstance(field, str):
        field = parse_field(field)
    rng = random.Random(seed)
    first_failure = None
    for attempt in range(retry_cap):
        vals = [rng.randint(-bound, bound) for _ in NORMALIZED_KEYS]
        p = ParamPoint.normalized(vals, field, f"random(seed={seed},bound={bound})")
        if not check:
            return p
        pair = build_normalized(p)
        report = free_action_check(pair)
        if not report.passed:
            first_failure = first_failure or f"free_action_check: {report.first_failure()}"
            continue
        ok, why = _slices_generic(pair)
        if not ok:
            first_failure = first_failure or f"genericity: {why}"
            continue
        return p
    raise SamplingError(f"no acceptable sample after {retry_cap} draws; "
                        f"first failing predicate: {first_failure}")


# ---------------------------------------------------------------------------
# coefficient reduction


def _icbrt(n: int) -> int | None:
    if n < 0:
        r = _icbrt(-n)
        return None if r is None else -r
    r = round(n ** (1 / 3)) if n < 2 ** 60 else int(round(float(n) ** (1 / 3)))
    while r ** 3 > n:
        r -= 1
    while (r + 1) ** 3 <= n:
        r += 1
    return r if r ** 3 == n else None


def cube_root(x, ring):
    """A cube root of ``x`` inside ``ring`` (first in enumeration order), or None."""
    if ring == QQ:
        x = Fraction(x)
        a, b = _icbrt(x.numerator), _icbrt(x.denominator)
        return None if a is None or b is None else Fraction(a, b)
    if isinstance(ring, PrimeField):
        p = ring.p
        v = ring(x).v
        if v == 0:
            return ring.zero
        if p % 3 == 2:
            return ring(pow(v, (2 * p - 1) // 3, p))
        for r in range(1, p):
            if pow(r, 3, p) == v:
                return ring(r)
        return None
    raise NotNormalizableOverField(f"no cube roots in {ring}")


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def binary_roots(coeffs: Sequence, ring) -> list[tuple]:
    """Roots in P^1(ring) of sum c_k x^(d-k) y^k, as normalised pairs.

    Order: finite roots (x:1) first (by value for QQ, by residue for GF(p)),
    then (1:0).
    """
    coeffs = [ring(c) for c in coeffs]
    if all(c == 0 for c in coeffs):
        raise ValueError("zero form has every point as a root")
    roots = []
    if isinstance(ring, PrimeField):
        for x in range(ring.p):
            xv = ring(x)
            v = ring.zero
            for c in coeffs:
                v = v * xv + c
            if v == 0:
                roots.append((xv, ring.one))
    elif ring == QQ:
        poly = list(coeffs)
        while poly and poly[0] == 0:
            poly.pop(0)
        den = 1
        for c in poly:
            den = den * c.denominator // _gcd(den, c.denominator)
        ints = [int(c * den) for c in poly]
        found = set()
        if ints and ints[-1] == 0:
            found.add(Fraction(0))
        while ints and ints[-1] == 0:
            ints.pop()
        if len(ints) > 1:
            for u in _divisors(ints[-1]):
                for v in _divisors(ints[0]):
                    for s in (1, -1):
                        r = Fraction(s * u, v)
                        val = 0
                        for c in ints:
                            val = val * r + c
                        if val == 0:
                            found.add(r)
        roots = [(r, ring.one) for r in sorted(found)]
    else:
        raise NotNormalizableOverField(f"root search not available over {ring}")
    if coeffs[0] == 0:
        roots.append((ring.one, ring.zero))
    return roots


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


@dataclass(frozen=True)
class NormalizationWitness:
    """Change of coordinates and of pencil basis.

    new F_i = sum_k pencil[i][k] * F_k(w W0, x_matrix . (X1, X2), y_matrix . (Y3, Y4))
    """

    x_matrix: tuple
    y_matrix: tuple
    w_scale: Any
    pencil: tuple

    def substitution(self, ring) -> list[Polynomial]:
        v = [Polynomial.var(i, ring) for i in range(NVARS)]
        (x00, x01), (x10, x11) = self.x_matrix
        (y00, y01), (y10, y11) = self.y_matrix
        return [v[0] * self.w_scale,
                v[1] * x00 + v[2] * x01, v[1] * x10 + v[2] * x11,
                v[3] * y00 + v[4] * y01, v[3] * y10 + v[4] * y11]

    def apply(self, pair: CubicPair) -> CubicPair:
        ring = pair.ring
        sub = self.substitution(ring)
        G = [f.substitute(sub) for f in pair]
        out = [G[0] * self.pencil[i][0] + G[1] * self.pencil[i][1] for i in (0, 1)]
        return CubicPair(out[0], out[1])

    def to_json(self) -> dict:
        s = lambda m: [[str(x) for x in r] for r in m]  # noqa: E731
        return {"x_matrix": s(self.x_matrix), "y_matrix": s(self.y_matrix),
                "w_scale": str(self.w_scale), "pencil": s(self.pencil)}


def _eval_binary(f: Polynomial, variables, pt) -> Any:
    forms = [0] * NVARS
    forms[variables[0]], forms[variables[1]] = pt
    return f.evaluate(forms)


def normalize(p: ParamPoint) -> tuple[ParamPoint, NormalizationWitness]:
    """Bring a general pair to normalized shape by the coefficient reduction.

    Two pencil members whose X-parts have double roots (ramification points
    of (X1:X2) -> (alpha_1 : alpha_2)) become F1, F2; those roots move to
    (0:1) and (1:0); roots of the Y-parts likewise; diagonal rescaling then
    makes the six leading coefficients 1.  Choices are taken first in
    enumeration order; the first combination that works inside the field
    is returned.
    """
    if p.model != "general26":
        raise ParamsError("normalize expects a general26 point")
    ring = p.ring
    if not getattr(ring, "is_field", False):
        raise NotNormalizableOverField(f"{ring} is not a field")
    pair = build_general(p)
    report = free_action_check(pair)
    if not report.passed:
        raise FreeActionViolation(f"free action fails: {report.first_failure()}")

    alpha = [binary_part(f, X_VARS) for f in pair]
    beta = [binary_part(f, Y_VARS) for f in pair]
    jac = (alpha[0].derivative(1) * alpha[1].derivative(2)
           - alpha[0].derivative(2) * alpha[1].derivative(1))
    ram = binary_roots(binary_coeffs(jac, X_VARS, 4), ring)

    def member(P):
        return (_eval_binary(alpha[1], X_VARS, P), -_eval_binary(alpha[0], X_VARS, P))

    for P in ram:
        for Q in ram:
            if P == Q:
                continue
            lp, lq = member(P), member(Q)
            if lp[0] * lq[1] - lp[1] * lq[0] == 0:
                continue
            b1 = beta[0] * lp[0] + beta[1] * lp[1]
            b2 = beta[0] * lq[0] + beta[1] * lq[1]
            for R in binary_roots(binary_coeffs(b1, Y_VARS), ring):
                for S in binary_roots(binary_coeffs(b2, Y_VARS), ring):
                    if R == S:
                        continue
                    w = _try_combination(pair, ring, P, Q, R, S, lp, lq)
                    if w is not None:
                        return w
    raise NotNormalizableOverField(
        f"no admissible choice of pencil members, roots and cube roots over {ring}")


def _try_combination(pair, ring, P, Q, R, S, lp, lq):
    one = ring.one
    x_mat = ((Q[0], P[0]), (Q[1], P[1]))
    y_mat = ((S[0], R[0]), (S[1], R[1]))
    trial = NormalizationWitness(x_mat, y_mat, one, (lp, lq)).apply(pair)
    G1, G2 = trial
    A1, A2 = G1.coeff((3, 0, 0, 0, 0)), G2.coeff((3, 0, 0, 0, 0))
    p1, r1 = G1.coeff((0, 3, 0, 0, 0)), G1.coeff((0, 0, 0, 3, 0))
    p2, r2 = G2.coeff((0, 0, 3, 0, 0)), G2.coeff((0, 0, 0, 0, 3))
    if any(c == 0 for c in (A1, A2, p1, r1, p2, r2)):
        return None
    roots = [cube_root(A1 / p1, ring), cube_root(A2 / p2, ring),
             cube_root(A1 / r1, ring), cube_root(A2 / r2, ring)]
    if any(r is None for r in roots):
        return None
    x1, x2, y3, y4 = roots
    witness = NormalizationWitness(
        ((x_mat[0][0] * x1, x_mat[0][1] * x2), (x_mat[1][0] * x1, x_mat[1][1] * x2)),
        ((y_mat[0][0] * y3, y_mat[0][1] * y4), (y_mat[1][0] * y3, y_mat[1][1] * y4)),
        one,
        ((lp[0] / A1, lp[1] / A1), (lq[0] / A2, lq[1] / A2)))
    out = witness.apply(pair)
    t = extract_normalized(out)
    if t is None:
        return None
    return t, witness


# ---------------------------------------------------------------------------
# parameter files


def load_params(source: str | Path | Mapping) -> ParamPoint:
    """Read ``{"model", "field", "coeffs"}`` JSON (path, text or dict)."""
    if isinstance(source, Mapping):
        data = source
    else:
        path = Path(source)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ParamsError(f"cannot read parameter file {source}: {exc}") from exc
    if not isinstance(data, Mapping):
        raise ParamsError("parameter file must hold a JSON object")
    model = data.get("model", "normalized14")
    if model not in ("normalized14", "general26"):
        raise ParamsError(f"unknown model {model!r}")
    try:
        ring = parse_field(str(data.get("field", "rational")))
    except ValueError as exc:
        raise ParamsError(str(exc)) from exc
    coeffs = data.get("coeffs", {})
    if not isinstance(coeffs, Mapping):
        raise ParamsError("'coeffs' must be an object")
    parsed = {}
    for k, v in coeffs.items():
        try:
            parsed[k] = ring(parse_rational(v) if isinstance(v, str) else v)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise ParamsError(f"bad value for {k}: {v!r} ({exc})") from exc
    maker = ParamPoint.normalized if model == "normalized14" else ParamPoint.general
    return maker(parsed, ring, f"file:{source}" if not isinstance(source, Mapping) else "user")


def dump_params(p: ParamPoint) -> str:
    return json.dumps(p.to_json(), indent=2)
