"""Exact dense linear algebra over QQ, GF(p) and parameter polynomials.

Pivoting is always "first nonzero entry, scanning top to bottom", so every
echelon form, kernel basis and reported pivot set is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Any, Callable, Iterable, Sequence

from .scalars import PARAM, QQ, ParamPoly, PrimeField


class NotAFieldError(TypeError):
    """Field-only routine called on a matrix over a non-field ring."""


class ZeroPivotError(ValueError):
    def __init__(self, r: int, c: int):
        super().__init__(f"entry ({r}, {c}) is zero; cannot pivot there")
        self.position = (r, c)


class NonSquareError(ValueError):
    pass


@dataclass
class ExactMatrix:
    rows: list[list[Any]]
    ring: Any = QQ
    row_labels: list[str] | None = None
    col_labels: list[str] | None = None
    ncols_hint: int | None = field(default=None, repr=False)

    def __post_init__(self):
        self.rows = [[self.ring(x) for x in r] for r in self.rows]
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise ValueError("ragged matrix")
        if self.rows:
            self.ncols_hint = len(self.rows[0])
        elif self.ncols_hint is None:
            self.ncols_hint = 0
        if self.row_labels is not None and len(self.row_labels) != self.nrows:
            raise ValueError("row label count mismatch")
        if self.col_labels is not None and len(self.col_labels) != self.ncols:
            raise ValueError("column label count mismatch")

    @classmethod
    def zeros(cls, nrows: int, ncols: int, ring=QQ, **kw) -> "ExactMatrix":
        return cls([[ring.zero] * ncols for _ in range(nrows)], ring, ncols_hint=ncols, **kw)

    @classmethod
    def identity(cls, n: int, ring=QQ) -> "ExactMatrix":
        return cls([[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)], ring)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], ring=QQ, nrows: int | None = None,
                     **kw) -> "ExactMatrix":
        if not cols:
            return cls.zeros(nrows or 0, 0, ring, **kw)
        n = len(cols[0])
        return cls([[cols[j][i] for j in range(len(cols))] for i in range(n)], ring, **kw)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return self.ncols_hint if not self.rows else len(self.rows[0])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def copy(self) -> "ExactMatrix":
        return ExactMatrix([list(r) for r in self.rows], self.ring,
                           list(self.row_labels) if self.row_labels else None,
                           list(self.col_labels) if self.col_labels else None,
                           ncols_hint=self.ncols)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([list(c) for c in zip(*self.rows)] if self.rows else
                           [[] for _ in range(self.ncols)], self.ring,
                           self.col_labels, self.row_labels, ncols_hint=self.nrows)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "ExactMatrix":
        rows, cols = list(rows), list(cols)
        return ExactMatrix(
            [[self.rows[i][j] for j in cols] for i in rows], self.ring,
            [self.row_labels[i] for i in rows] if self.row_labels else None,
            [self.col_labels[j] for j in cols] if self.col_labels else None,
            ncols_hint=len(cols))

    def delete(self, rows: Iterable[int] = (), cols: Iterable[int] = ()) -> "ExactMatrix":
        rs, cs = set(rows), set(cols)
        return self.submatrix([i for i in range(self.nrows) if i not in rs],
                              [j for j in range(self.ncols) if j not in cs])

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if other.nrows != self.nrows:
            raise ValueError("row count mismatch")
        labels = None
        if self.col_labels and other.col_labels:
            labels = self.col_labels + other.col_labels
        return ExactMatrix([a + b for a, b in zip(self.rows, other.rows)], self.ring,
                           self.row_labels, labels, ncols_hint=self.ncols + other.ncols)

    def map(self, f: Callable, ring) -> "ExactMatrix":
        return ExactMatrix([[f(x) for x in r] for r in self.rows], ring,
                           self.row_labels, self.col_labels, ncols_hint=self.ncols)

    def evaluate(self, values, ring=QQ) -> "ExactMatrix":
        """Specialise a parameter matrix at a full assignment."""
        return self.map(lambda x: x.evaluate(values, ring), ring)

    def subs(self, values) -> "ExactMatrix":
        return self.map(lambda x: x.subs(values), PARAM)

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = list(zip(*other.rows)) if other.rows else []
            z = self.ring.zero
            out = []
            for r in self.rows:
                row = []
                for c in cols:
                    s = z
                    for a, b in zip(r, c):
                        if a != 0 and b != 0:
                            s = s + a * b
                    row.append(s)
                out.append(row)
            return ExactMatrix(out, self.ring, self.row_labels, other.col_labels,
                               ncols_hint=other.ncols)
        return mat_vec(self, other)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def to_json(self) -> dict:
        out = {"shape": [self.nrows, self.ncols], "ring": str(self.ring),
               "rows": [[str(x) for x in r] for r in self.rows]}
        if self.row_labels:
            out["row_labels"] = list(self.row_labels)
        if self.col_labels:
            out["col_labels"] = list(self.col_labels)
        return out

    @classmethod
    def from_json(cls, data: dict, ring=QQ) -> "ExactMatrix":
        nrows, ncols = data["shape"]
        return cls([[ring(x) for x in r] for r in data["rows"]], ring,
                   data.get("row_labels"), data.get("col_labels"), ncols_hint=ncols)

    def pretty(self) -> str:
        cells = [[str(x) if x != 0 else "." for x in r] for r in self.rows]
        w = max((len(c) for r in cells for c in r), default=1)
        return "\n".join(" ".join(c.rjust(w) for c in r) for r in cells)


def mat_vec(M: ExactMatrix, v: Sequence) -> list:
    z = M.ring.zero
    out = []
    for r in M.rows:
        s = z
        for a, b in zip(r, v):
            if a != 0 and b != 0:
                s = s + a * b
        out.append(s)
    return out


def _require_field(M: ExactMatrix):
    if not getattr(M.ring, "is_field", False):
        raise NotAFieldError(f"{M.ring} is not a field; use det_symbolic_sparse")


# ---------------------------------------------------------------------------
# elimination


def rref(M: ExactMatrix) -> tuple[ExactMatrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    _require_field(M)
    A = [list(r) for r in M.rows]
    m, n = len(A), M.ncols
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        k = next((i for i in range(r, m) if A[i][c] != 0), None)
        if k is None:
            continue
        A[r], A[k] = A[k], A[r]
        inv = M.ring.inv(A[r][c])
        A[r] = [x * inv for x in A[r]]
        piv = A[r]
        nz = [j for j in range(c, n) if piv[j] != 0]
        for i in range(m):
            if i != r:
                f = A[i][c]
                if f != 0:
                    row = A[i]
                    for j in nz:
                        row[j] = row[j] - f * piv[j]
        pivots.append(c)
        r += 1
    return ExactMatrix(A, M.ring, None, M.col_labels, ncols_hint=n), pivots


def _integer_rows(M: ExactMatrix) -> list[list[int]]:
    out = []
    for r in M.rows:
        d = lcm(*(x.denominator for x in r)) if r else 1
        out.append([int(x * d) for x in r])
    return out


def _rank_bareiss_int(A: list[list[int]], ncols: int) -> int:
    A = [list(r) for r in A]
    m = len(A)
    rank = 0
    prev = 1
    for c in range(ncols):
        if rank == m:
            break
        k = next((i for i in range(rank, m) if A[i][c] != 0), None)
        if k is None:
            continue
        A[rank], A[k] = A[k], A[rank]
        p = A[rank][c]
        for i in range(rank + 1, m):
            a_ic = A[i][c]
            row = A[i]
            prow = A[rank]
            for j in range(c + 1, ncols):
                row[j] = (p * row[j] - a_ic * prow[j]) // prev
            row[c] = 0
        prev = p
        rank += 1
    return rank


def _rank_mod_p(A: list[list[int]], ncols: int, p: int) -> int:
    A = [[x % p for x in r] for r in A]
    m = len(A)
    rank = 0
    for c in range(ncols):
        if rank == m:
            break
        k = next((i for i in range(rank, m) if A[i][c]), None)
        if k is None:
            continue
        A[rank], A[k] = A[k], A[rank]
        inv = pow(A[rank][c], -1, p)
        prow = A[rank]
        for i in range(rank + 1, m):
            f = A[i][c] * inv % p
            if f:
                row = A[i]
                for j in range(c, ncols):
                    row[j] = (row[j] - f * prow[j]) % p
        rank += 1
    return rank


def rank(M: ExactMatrix) -> int:
    """Exact rank (fraction-free over QQ, modular over GF(p))."""
    _require_field(M)
    if M.nrows == 0 or M.ncols == 0:
        return 0
    if M.ring == QQ:
        return _rank_bareiss_int(_integer_rows(M), M.ncols)
    if isinstance(M.ring, PrimeField):
        return _rank_mod_p([[x.v for x in r] for r in M.rows], M.ncols, M.ring.p)
    return len(rref(M)[1])


def rank_mod_p(M: ExactMatrix, p: int) -> int:
    """Rank of an integer/rational matrix after reduction modulo ``p``."""
    if M.ring != QQ:
        raise NotAFieldError("reduction mod p needs a rational matrix")
    F = PrimeField(p)
    return rank(M.map(F, F))


def kernel_basis(M: ExactMatrix) -> list[list]:
    """Basis of the right kernel; each vector is checked against ``M``."""
    R, pivots = rref(M)
    n = M.ncols
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [M.ring.zero] * n
        v[f] = M.ring.one
        for i, pc in enumerate(pivots):
            v[pc] = -R.rows[i][f]
        basis.append(v)
    for v in basis:
        if any(x != 0 for x in mat_vec(M, v)):
            raise ArithmeticError("kernel vector failed verification")
    return basis


def solve(M: ExactMatrix, B: ExactMatrix) -> ExactMatrix:
    """Solve ``M X = B`` for square invertible ``M``."""
    _require_field(M)
    if M.nrows != M.ncols:
        raise NonSquareError("solve expects a square matrix")
    aug = M.hstack(B)
    R, pivots = rref(aug)
    n = M.ncols
    if pivots[:n] != list(range(n)):
        raise ArithmeticError("matrix is singular")
    return ExactMatrix([r[n:] for r in R.rows[:n]], M.ring, M.col_labels, B.col_labels,
                       ncols_hint=B.ncols)


def det_bareiss(M: ExactMatrix):
    """Determinant by fraction-free (Bareiss) elimination."""
    _require_field(M)
    n = M.nrows
    if n != M.ncols:
        raise NonSquareError(f"determinant of a {M.nrows}x{M.ncols} matrix")
    if n == 0:
        return M.ring.one
    A = [list(r) for r in M.rows]
    sign = 1
    prev = M.ring.one
    for k in range(n - 1):
        if A[k][k] == 0:
            s = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if s is None:
                return M.ring.zero
            A[k], A[s] = A[s], A[k]
            sign = -sign
        p = A[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * p - A[i][k] * A[k][j]) / prev
        prev = p
    d = A[n - 1][n - 1]
    return d if sign == 1 else -d


def strike_pivot(M: ExactMatrix, r: int, c: int) -> ExactMatrix:
    """Clear column ``c`` with row ``r`` then delete both (0-based).

    rank(M) == 1 + rank(result) holds unconditionally.
    """
    _require_field(M)
    piv = M.rows[r][c]
    if piv == 0:
        raise ZeroPivotError(r, c)
    inv = M.ring.inv(piv)
    prow = M.rows[r]
    rows = []
    for i, row in enumerate(M.rows):
        if i == r:
            continue
        f = row[c]
        if f != 0:
            f = f * inv
            row = [a - f * b for a, b in zip(row, prow)]
        rows.append(row)
    out = ExactMatrix(rows, M.ring,
                      [l for i, l in enumerate(M.row_labels) if i != r] if M.row_labels else None,
                      M.col_labels, ncols_hint=M.ncols)
    return out.delete(cols=[c])


# ---------------------------------------------------------------------------
# symbolic determinants


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign via inversion count."""
    inv = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inv += 1
    return -1 if inv % 2 else 1


@dataclass
class Contribution:
    """One nonzero term of the Leibniz expansion."""

    positions: list[tuple[int, int]]  # 1-based (row, col)
    sign: int
    coefficient: Fraction  # signed rational factor of the term

    def to_json(self) -> dict:
        return {"positions": [list(p) for p in self.positions], "sign": self.sign,
                "coefficient": str(self.coefficient)}


@dataclass
class SymbolicDeterminant:
    det: ParamPoly
    census_index: dict | None  # parameter monomial key -> [Contribution]
    n_terms: int

    def census(self, monomial) -> list[Contribution]:
        if self.census_index is None:
            raise LookupError("census unavailable (Laplace fallback was used)")
        key = _param_key(monomial)
        return list(self.census_index.get(key, []))


def _param_key(monomial):
    if isinstance(monomial, ParamPoly):
        if not monomial.is_term():
            raise ValueError("census key must be a single monomial")
        return next(iter(monomial.terms))
    if isinstance(monomial, dict):
        return tuple(sorted((s, e) for s, e in monomial.items() if e))
    return tuple(sorted(monomial))


def det_symbolic_sparse(M: ExactMatrix) -> SymbolicDeterminant:
    """Leibniz expansion over nonzero entries, with a per-monomial census.

    Requires single-term entries for the census; otherwise a memoised
    Laplace expansion over column subsets gives the determinant only.
    """
    n = M.nrows
    if n != M.ncols:
        raise NonSquareError(f"determinant of a {M.nrows}x{M.ncols} matrix")
    entries = [[PARAM(x) for x in r] for r in M.rows]
    if all(x.is_term() or x.is_zero() for r in entries for x in r):
        return _det_leibniz(entries)
    return SymbolicDeterminant(_det_laplace(entries), None, 0)


def _det_leibniz(entries) -> SymbolicDeterminant:
    n = len(entries)
    nz = [[(j, next(iter(x.terms.items()))) for j, x in enumerate(r) if not x.is_zero()]
          for r in entries]
    index: dict = {}
    total: dict = {}
    count = 0
    perm = [0] * n
    used = [False] * n

    def rec(i, key_acc: dict, coeff):
        nonlocal count
        if i == n:
            sign = permutation_sign(perm)
            key = tuple(sorted(key_acc.items()))
            c = coeff * sign
            contrib = Contribution([(r + 1, perm[r] + 1) for r in range(n)], sign, c)
            index.setdefault(key, []).append(contrib)
            total[key] = total.get(key, 0) + c
            count += 1
            return
        for j, (k, c) in nz[i]:
            if used[j]:
                continue
            used[j] = True
            perm[i] = j
            acc = dict(key_acc)
            for s, e in k:
                acc[s] = acc.get(s, 0) + e
            rec(i + 1, acc, coeff * c)
            used[j] = False

    rec(0, {}, Fraction(1))
    return SymbolicDeterminant(ParamPoly(total), index, count)


def _det_laplace(entries) -> ParamPoly:
    n = len(entries)
    memo: dict = {}

    def minor(i, cols: frozenset):
        # determinant of rows i.. and the given columns
        if i == n:
            return ParamPoly.const(1)
        key = (i, cols)
        if key in memo:
            return memo[key]
        ordered = sorted(cols)
        out = ParamPoly()
        for pos, j in enumerate(ordered):
            a = entries[i][j]
            if a.is_zero():
                continue
            sub = minor(i + 1, cols - {j})
            term = a * sub
            out = out + (term if pos % 2 == 0 else -term)
        memo[key] = out
        return out

    return minor(0, frozenset(range(n)))
