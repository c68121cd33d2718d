"""Membership tests for the parameter spaces.

* free action of the order-3 group on Z: three coefficient conditions, each
  decided by a Sylvester resultant and cross-checked by restricting the
  equations to the fixed loci and running a Euclidean gcd;
* a brute-force smoothness scan over P^4(F_p) for a few small primes.
  The scan is heuristic evidence only: no singular F_p-point for several p
  does not certify smoothness over QQ.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactla import ExactMatrix, det_bareiss
from .polyring import NVARS, Polynomial
from .scalars import QQ, FpElement, is_prime

DEFAULT_PRIMES = (7, 11, 13, 31)

X_VARS = (1, 2)
Y_VARS = (3, 4)


# ---------------------------------------------------------------------------
# binary forms


def binary_coeffs(f: Polynomial, variables: tuple[int, int], degree: int = 3) -> list:
    """[c_0, ..., c_d] with c_k the coefficient of x^(d-k) y^k."""
    i, j = variables
    out = [f.ring.zero] * (degree + 1)
    for m, c in f.terms.items():
        if sum(m) != degree or m[i] + m[j] != degree:
            raise ValueError(f"{f} is not a binary form of degree {degree} in vars {variables}")
        out[m[j]] = c
    return out


def binary_part(f: Polynomial, variables: tuple[int, int]) -> Polynomial:
    """Terms of ``f`` involving only the two given variables."""
    others = [k for k in range(NVARS) if k not in variables]
    return Polynomial({m: c for m, c in f.terms.items() if all(m[k] == 0 for k in others)},
                      f.ring)


def _infer_vars(f: Polynomial, g: Polynomial) -> tuple[int, int]:
    support = sorted({k for p in (f, g) for m in p.terms for k in range(NVARS) if m[k]})
    if len(support) > 2:
        raise ValueError("forms involve more than two variables")
    if len(support) < 2:
        raise ValueError("cannot infer the two variables; pass them explicitly")
    return tuple(support)


def sylvester_resultant_cubics(f, g, variables: tuple[int, int] | None = None, ring=None):
    """Resultant of two binary cubics via the 6x6 Sylvester determinant.

    ``f`` and ``g`` are Polynomials (homogeneous cubic in two variables) or
    coefficient sequences ``[c0, c1, c2, c3]``.
    """
    if isinstance(f, Polynomial):
        for p in (f, g):
            if not p.is_zero() and p.homogeneous_degree() != 3:
                raise ValueError("inputs must be homogeneous cubics")
        variables = variables or _infer_vars(f, g)
        ring = f.ring
        fc, gc = binary_coeffs(f, variables), binary_coeffs(g, variables)
    else:
        ring = ring or QQ
        fc, gc = [ring(x) for x in f], [ring(x) for x in g]
        if len(fc) != 4 or len(gc) != 4:
            raise ValueError("need four coefficients per cubic")
    z = ring.zero
    rows = []
    for coeffs in (fc, gc):
        for shift in range(3):
            rows.append([z] * shift + list(coeffs) + [z] * (2 - shift))
    return det_bareiss(ExactMatrix(rows, ring))


# univariate helpers, dense coefficient lists, highest degree first


def _strip(a: list) -> list:
    i = 0
    while i < len(a) and a[i] == 0:
        i += 1
    return a[i:]


def _poly_rem(a: list, b: list, ring) -> list:
    a = _strip(list(a))
    b = _strip(list(b))
    inv = ring.inv(b[0])
    while len(a) >= len(b) and a:
        f = a[0] * inv
        for k in range(len(b)):
            a[k] = a[k] - f * b[k]
        a = _strip(a)
    return a


def univariate_gcd(a: list, b: list, ring) -> list:
    a, b = _strip([ring(x) for x in a]), _strip([ring(x) for x in b])
    while b:
        a, b = b, _poly_rem(a, b, ring)
    if not a:
        return a
    inv = ring.inv(a[0])
    return [x * inv for x in a]


def common_root_by_gcd(fc: Sequence, gc: Sequence, ring) -> bool:
    """Do two binary forms share a projective root over the algebraic closure?"""
    fc, gc = [ring(x) for x in fc], [ring(x) for x in gc]
    if all(x == 0 for x in fc) or all(x == 0 for x in gc):
        return True
    # root (1:0) kills the x^d coefficient
    if fc[0] == 0 and gc[0] == 0:
        return True
    g = univariate_gcd(fc, gc, ring)
    return len(g) > 1


# ---------------------------------------------------------------------------
# free action


@dataclass
class ActionCheckReport:
    cond_i: bool
    cond_ii: bool
    cond_iii: bool
    resultant_ii: object
    resultant_iii: object
    direct_i: bool
    direct_ii: bool
    direct_iii: bool

    @property
    def cross_oracle_agreement(self) -> bool:
        return (self.cond_i, self.cond_ii, self.cond_iii) == (
            self.direct_i, self.direct_ii, self.direct_iii)

    @property
    def passed(self) -> bool:
        return self.cond_i and self.cond_ii and self.cond_iii

    def first_failure(self) -> str | None:
        for name, ok in (("cond_i", self.cond_i), ("cond_ii", self.cond_ii),
                         ("cond_iii", self.cond_iii)):
            if not ok:
                return name
        return None

    def to_json(self) -> dict:
        return {"cond_i": self.cond_i, "cond_ii": self.cond_ii, "cond_iii": self.cond_iii,
                "resultant_ii": str(self.resultant_ii),
                "resultant_iii": str(self.resultant_iii),
                "cross_oracle_agreement": self.cross_oracle_agreement,
                "passed": self.passed}


def _restrict(f: Polynomial, zero_vars: Sequence[int]) -> Polynomial:
    ring = f.ring
    forms = [Polynomial.zero(ring) if k in zero_vars else Polynomial.var(k, ring)
             for k in range(NVARS)]
    return f.substitute(forms)


def free_action_check(pair) -> ActionCheckReport:
    F1, F2 = pair.F1, pair.F2
    ring = F1.ring
    w3 = (3, 0, 0, 0, 0)
    cond_i = F1.coeff(w3) != 0 or F2.coeff(w3) != 0
    res_ii = sylvester_resultant_cubics(binary_part(F1, X_VARS), binary_part(F2, X_VARS),
                                        X_VARS)
    res_iii = sylvester_resultant_cubics(binary_part(F1, Y_VARS), binary_part(F2, Y_VARS),
                                         Y_VARS)

    # fixed loci: the point (1:0:0:0:0) and the lines W0=Y=0, W0=X=0
    pt = (1, 0, 0, 0, 0)
    direct_i = not (F1.evaluate(pt) == 0 and F2.evaluate(pt) == 0)
    on_x = [_restrict(F, (0, 3, 4)) for F in (F1, F2)]
    on_y = [_restrict(F, (0, 1, 2)) for F in (F1, F2)]
    direct_ii = not common_root_by_gcd(binary_coeffs(on_x[0], X_VARS),
                                       binary_coeffs(on_x[1], X_VARS), ring)
    direct_iii = not common_root_by_gcd(binary_coeffs(on_y[0], Y_VARS),
                                        binary_coeffs(on_y[1], Y_VARS), ring)
    return ActionCheckReport(cond_i, res_ii != 0, res_iii != 0, res_ii, res_iii,
                             direct_i, direct_ii, direct_iii)


# ---------------------------------------------------------------------------
# finite-field smoothness scan


@dataclass
class PrimeScan:
    prime: int
    points_scanned: int
    singular_points: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "singular-points-found" if self.singular_points else "no-singular-points"

    def to_json(self, max_points: int = 50) -> dict:
        return {"prime": self.prime, "points_scanned": self.points_scanned,
                "singular_count": len(self.singular_points),
                "singular_points": [list(p) for p in self.singular_points[:max_points]],
                "verdict": self.verdict}


@dataclass
class SmoothScanReport:
    scans: list[PrimeScan]

    @property
    def verdict(self) -> str:
        if any(s.singular_points for s in self.scans):
            return "singular-points-found"
        return "no-singular-points"

    def to_json(self) -> dict:
        return {"heuristic": True, "verdict": self.verdict,
                "primes": [s.to_json() for s in self.scans]}


def projective_points(p: int, n: int = NVARS) -> np.ndarray:
    """Normalised representatives of P^(n-1)(F_p): first nonzero coordinate 1."""
    blocks = []
    for lead in range(n):
        free = n - 1 - lead
        tail = np.indices((p,) * free).reshape(free, -1).T if free else np.zeros((1, 0), int)
        blk = np.zeros((tail.shape[0], n), dtype=np.int64)
        blk[:, lead] = 1
        blk[:, lead + 1:] = tail
        blocks.append(blk)
    return np.concatenate(blocks)


def _int_coeffs_mod(f: Polynomial, p: int) -> list[tuple[tuple, int]]:
    out = []
    for m, c in f.terms.items():
        if isinstance(c, FpElement):
            if c.p != p:
                raise ValueError(f"polynomial over GF({c.p}) scanned at p={p}")
            v = c.v
        elif isinstance(c, Fraction):
            if c.denominator % p == 0:
                raise ValueError(f"coefficient {c} not defined mod {p}")
            v = c.numerator * pow(c.denominator, -1, p) % p
        else:
            raise TypeError("smooth_scan needs rational or GF(p) coefficients")
        out.append((m, v))
    return out


def _eval_mod(terms, pts: np.ndarray, p: int) -> np.ndarray:
    acc = np.zeros(pts.shape[0], dtype=np.int64)
    for m, c in terms:
        v = np.full(pts.shape[0], c % p, dtype=np.int64)
        for k, e in enumerate(m):
            for _ in range(e):
                v = v * pts[:, k] % p
        acc = (acc + v) % p
    return acc


def smooth_scan(pair, primes: Sequence[int] = DEFAULT_PRIMES) -> SmoothScanReport:
    """Jacobian-criterion scan of the complete intersection over P^4(F_p)."""
    scans = []
    for p in primes:
        if p < 5 or not is_prime(p):
            raise ValueError(f"prime {p} rejected: need an odd prime p >= 5")
        F = (pair.F1, pair.F2)
        polys = [_int_coeffs_mod(f, p) for f in F]
        grads = [[_int_coeffs_mod(f.derivative(k), p) for k in range(NVARS)] for f in F]
        pts = projective_points(p)
        on = (_eval_mod(polys[0], pts, p) == 0) & (_eval_mod(polys[1], pts, p) == 0)
        cand = pts[on]
        if cand.shape[0]:
            J1 = np.stack([_eval_mod(g, cand, p) for g in grads[0]], axis=1)
            J2 = np.stack([_eval_mod(g, cand, p) for g in grads[1]], axis=1)
            sing = np.ones(cand.shape[0], dtype=bool)
            for a in range(NVARS):
                for b in range(a + 1, NVARS):
                    minor = (J1[:, a] * J2[:, b] - J1[:, b] * J2[:, a]) % p
                    sing &= minor == 0
            found = sorted(tuple(int(x) for x in row) for row in cand[sing])
        else:
            found = []
        scans.append(PrimeScan(p, int(pts.shape[0]), found))
    return SmoothScanReport(scans)

