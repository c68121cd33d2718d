"""Graded pieces of R = k[W0, X1, X2, Y3, Y4] / (F1, F2).

Each piece ``R_n`` is described by the degree-``n`` slice of the ideal,
row-reduced with graded-lex pivots.  Pivot monomials are eliminated; the
remaining monomials (in global order) form the canonical quotient basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .exactla import ExactMatrix, rref
from .polyring import Monomial, Polynomial, mono_str, mono_weight, monomials_of_degree

MAX_DEGREE = 8


class InhomogeneousError(ValueError):
    pass


def expected_slice_rank(n: int) -> int:
    """Rank of the degree-n slice of a complete intersection of two cubics."""
    if n < 3:
        return 0
    k = len(monomials_of_degree(n - 3))
    k6 = len(monomials_of_degree(n - 6)) if n >= 6 else 0
    return 2 * k - k6


@dataclass(frozen=True)
class QuotientElement:
    piece: "GradedPiece"
    coords: tuple

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def lift(self) -> Polynomial:
        return Polynomial({m: c for m, c in zip(self.piece.basis, self.coords)},
                          self.piece.ring)

    def weight_coords(self, w: int) -> list:
        return [self.coords[i] for i in self.piece.weight_positions(w)]

    def __add__(self, other: "QuotientElement") -> "QuotientElement":
        return QuotientElement(self.piece, tuple(a + b for a, b in zip(self.coords, other.coords)))


@dataclass(eq=False)
class GradedPiece:
    degree: int
    ring: object
    monomials: list[Monomial]
    pivot_rows: list[tuple[int, list]]  # (pivot column, reduced row)
    slice_rank: int
    basis: list[Monomial] = field(init=False)

    def __post_init__(self):
        pivots = {c for c, _ in self.pivot_rows}
        self.basis = [m for i, m in enumerate(self.monomials) if i not in pivots]
        self._col = {m: i for i, m in enumerate(self.monomials)}
        self._basis_index = {m: i for i, m in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def expected_rank(self) -> int:
        return expected_slice_rank(self.degree)

    @property
    def generic(self) -> bool:
        return self.slice_rank == self.expected_rank

    @cached_property
    def pivot_monomials(self) -> list[Monomial]:
        return [self.monomials[c] for c, _ in self.pivot_rows]

    def weight_positions(self, w: int) -> list[int]:
        return [i for i, m in enumerate(self.basis) if mono_weight(m) == w % 3]

    def eigenbasis(self, w: int) -> list[Monomial]:
        return [m for m in self.basis if mono_weight(m) == w % 3]

    def weight_dims(self) -> tuple[int, int, int]:
        return tuple(len(self.eigenbasis(w)) for w in (0, 1, 2))

    def basis_index(self, m: Monomial) -> int:
        return self._basis_index[m]

    def reduce(self, p: Polynomial) -> QuotientElement:
        """Canonical representative of ``p`` in this piece."""
        if p.ring != self.ring:
            raise ValueError(f"polynomial over {p.ring}, piece over {self.ring}")
        vec = [self.ring.zero] * len(self.monomials)
        for m, c in p.terms.items():
            if sum(m) != self.degree:
                raise InhomogeneousError(
                    f"monomial {mono_str(m)} is not of degree {self.degree}")
            vec[self._col[m]] = c
        for pc, row in self.pivot_rows:
            f = vec[pc]
            if f != 0:
                for j, x in row:
                    vec[j] = vec[j] - f * x
        coords = tuple(vec[self._col[m]] for m in self.basis)
        return QuotientElement(self, coords)

    def coords(self, p: Polynomial) -> list:
        return list(self.reduce(p).coords)

    def summary(self) -> dict:
        return {"degree": self.degree, "monomials": len(self.monomials),
                "slice_rank": self.slice_rank, "expected_slice_rank": self.expected_rank,
                "dim": self.dim, "weight_dims": list(self.weight_dims()),
                "generic": self.generic}


def ideal_slice(F: tuple[Polynomial, Polynomial], n: int) -> ExactMatrix:
    """Rows m*F_i for degree-(n-3) monomials m, in monomial coordinates."""
    ring = F[0].ring
    monos = monomials_of_degree(n)
    col = {m: i for i, m in enumerate(monos)}
    rows = []
    labels = []
    if n >= 3:
        for m in monomials_of_degree(n - 3):
            mp = Polynomial.monomial(m, ring.one, ring)
            for i, f in enumerate(F):
                g = mp * f
                row = [ring.zero] * len(monos)
                for mm, c in g.terms.items():
                    row[col[mm]] = c
                rows.append(row)
                labels.append(f"{mono_str(m)}*F{i + 1}")
    return ExactMatrix(rows, ring, labels or None, [mono_str(m) for m in monos],
                       ncols_hint=len(monos))


def graded_piece(pair, n: int) -> GradedPiece:
    """Degree-``n`` piece of the quotient by a cubic pair (n <= 8)."""
    if not 0 <= n <= MAX_DEGREE:
        raise ValueError(f"degree {n} outside 0..{MAX_DEGREE}")
    F = _polys(pair)
    ring = F[0].ring
    for f in F:
        if f.homogeneous_degree() != 3:
            raise InhomogeneousError("both generators must be cubic forms")
    monos = monomials_of_degree(n)
    S = ideal_slice(F, n)
    if S.nrows:
        R, pivots = rref(S)
        pivot_rows = []
        for i, pc in enumerate(pivots):
            row = R.rows[i]
            pivot_rows.append((pc, [(j, x) for j, x in enumerate(row) if x != 0 and j != pc]))
    else:
        pivot_rows = []
    return GradedPiece(n, ring, monos, pivot_rows, len(pivot_rows))


def _polys(pair) -> tuple[Polynomial, Polynomial]:
    if hasattr(pair, "F1"):
        return (pair.F1, pair.F2)
    return tuple(pair)


def eigenbasis(piece: GradedPiece, m: int) -> list[Monomial]:
    return piece.eigenbasis(m)


def reduce(piece: GradedPiece, p: Polynomial) -> QuotientElement:
    return piece.reduce(p)


class PieceCache:
    """Lazily built graded pieces of one pair."""

    def __init__(self, pair):
        self.pair = pair
        self._pieces: dict[int, GradedPiece] = {}

    def __getitem__(self, n: int) -> GradedPiece:
        if n not in self._pieces:
            self._pieces[n] = graded_piece(self.pair, n)
        return self._pieces[n]


def mult_map(piece_n: GradedPiece, multiplier: Polynomial,
             target: GradedPiece | None = None, pair=None) -> ExactMatrix:
    """Matrix of multiplication by a form, R_n -> R_{n+k}."""
    k = multiplier.homogeneous_degree()
    if k is None:
        if multiplier.is_zero():
            k = 0
        else:
            raise InhomogeneousError("multiplier must be homogeneous")
    if target is None:
        if pair is None:
            raise ValueError("need the target piece or the pair")
        target = graded_piece(pair, piece_n.degree + k)
    ring = piece_n.ring
    cols = []
    for m in piece_n.basis:
        img = Polynomial.monomial(m, ring.one, ring) * multiplier
        cols.append(list(target.reduce(img).coords))
    return ExactMatrix.from_columns(cols, ring, nrows=target.dim,
                                    row_labels=[mono_str(m) for m in target.basis],
                                    col_labels=[mono_str(m) for m in piece_n.basis]) \
        if cols else ExactMatrix.zeros(target.dim, 0, ring)


def monic_reduce(p: Polynomial, relations: list[tuple[Monomial, Polynomial]]) -> Polynomial:
    """Eliminate designated pivot monomials using relations monic in them.

    Works over any coefficient ring (including parameter polynomials) as long
    as each relation has coefficient 1 at its pivot and contains no other
    relation's pivot.
    """
    for piv, rel in relations:
        if rel.coeff(piv) != 1:
            raise ValueError(f"relation is not monic at {mono_str(piv)}")
        for other, _ in relations:
            if other != piv and rel.coeff(other) != 0:
                raise ValueError("relations overlap in pivot monomials")
    for piv, rel in relations:
        c = p.coeff(piv)
        if c != 0:
            p = p - rel * c
    return p


def weight_dims_table(pair, degrees=range(0, 5)) -> list[dict]:
    return [graded_piece(pair, n).summary() for n in degrees]

