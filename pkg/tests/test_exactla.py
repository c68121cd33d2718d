"""Exact linear algebra against brute-force and floating-point oracles."""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from torelli3.exactla import (ExactMatrix, NonSquareError, NotAFieldError, ZeroPivotError,
                              det_bareiss, det_symbolic_sparse, kernel_basis, mat_vec,
                              permutation_sign, rank, rank_mod_p, rref, solve, strike_pivot)
from torelli3.scalars import GF, PARAM, QQ, FpElement, ParamPoly, parse_field, parse_rational

small_ints = st.integers(-6, 6)


def int_matrices(max_n=6, square=False):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_n))
        m = n if square else draw(st.integers(1, max_n))
        rows = [[draw(small_ints) for _ in range(m)] for _ in range(n)]
        return rows
    return build()


def leibniz_det(rows):
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        prod = 1
        for i, j in enumerate(perm):
            prod *= rows[i][j]
        total += permutation_sign(perm) * prod
    return total


def test_permutation_sign_matches_cycle_parity():
    for perm in itertools.permutations(range(5)):
        seen, cycles = set(), 0
        for s in range(5):
            if s not in seen:
                cycles += 1
                j = s
                while j not in seen:
                    seen.add(j)
                    j = perm[j]
        assert permutation_sign(perm) == (-1) ** (5 - cycles)


@given(int_matrices(5, square=True))
def test_bareiss_det_matches_leibniz(rows):
    assert det_bareiss(ExactMatrix(rows)) == leibniz_det(rows)


@given(int_matrices(7))
def test_rank_matches_float_svd(rows):
    # small integer entries keep the floating oracle reliable
    assert rank(ExactMatrix(rows)) == np.linalg.matrix_rank(np.array(rows, dtype=float))


@given(int_matrices(6))
def test_rank_nullity(rows):
    M = ExactMatrix(rows)
    ker = kernel_basis(M)
    assert rank(M) + len(ker) == M.ncols
    for v in ker:
        assert all(x == 0 for x in mat_vec(M, v))


@given(int_matrices(6), st.sampled_from([5, 7, 13]))
def test_rank_mod_p_never_exceeds_rational_rank(rows, p):
    M = ExactMatrix(rows)
    assert rank_mod_p(M, p) <= rank(M)


def test_rank_mod_p_drop():
    M = ExactMatrix([[1, 2], [3, 1]])  # det -5
    assert rank(M) == 2
    assert rank_mod_p(M, 5) == 1


@given(int_matrices(5))
def test_rref_is_reduced(rows):
    R, piv = rref(ExactMatrix(rows))
    for i, c in enumerate(piv):
        assert R.rows[i][c] == 1
        assert all(R.rows[k][c] == 0 for k in range(R.nrows) if k != i)
    assert piv == sorted(piv)


@given(int_matrices(5, square=True))
def test_solve_inverts(rows):
    M = ExactMatrix(rows)
    if det_bareiss(M) == 0:
        return
    B = ExactMatrix([[i + j for j in range(2)] for i in range(M.nrows)])
    X = solve(M, B)
    assert M @ X == B


@given(int_matrices(6), st.data())
def test_strike_pivot_drops_rank_by_one(rows, data):
    M = ExactMatrix(rows)
    nz = [(i, j) for i, r in enumerate(rows) for j, x in enumerate(r) if x != 0]
    if not nz:
        return
    i, j = data.draw(st.sampled_from(nz))
    assert rank(strike_pivot(M, i, j)) == rank(M) - 1


def test_strike_pivot_zero_raises():
    with pytest.raises(ZeroPivotError):
        strike_pivot(ExactMatrix([[0, 1], [1, 0]]), 0, 0)


def test_det_nonsquare_raises():
    with pytest.raises(NonSquareError):
        det_bareiss(ExactMatrix([[1, 2, 3], [4, 5, 6]]))


def test_rank_over_parameter_ring_is_refused():
    with pytest.raises(NotAFieldError):
        rank(ExactMatrix([[ParamPoly.symbol("a1")]], PARAM))


def test_finite_field_rank_and_det():
    F = GF(7)
    M = ExactMatrix([[1, 2], [4, 1]], F)  # det = -7
    assert det_bareiss(M) == 0
    assert rank(M) == 1


@given(st.integers(0, 30), st.integers(1, 30), st.sampled_from([5, 7, 11, 31]))
def test_fp_arithmetic_matches_integers(a, b, p):
    F = GF(p)
    x, y = F(a), F(b)
    assert (x + y).v == (a + b) % p
    assert (x * y).v == (a * b) % p
    assert (x - y).v == (a - b) % p
    if b % p:
        assert (x / y) * y == x


def test_parse_field_and_rational():
    assert parse_field("rational") is QQ
    assert parse_field("fp:10007").p == 10007
    for bad in ("fp:4", "fp:3", "fp:9", "complex"):
        with pytest.raises(ValueError):
            parse_field(bad)
    assert parse_rational("-2/5") == Fraction(-2, 5)
    assert isinstance(GF(7)(3), FpElement)


@st.composite
def sparse_symbolic(draw):
    n = draw(st.integers(1, 5))
    names = ["a1", "b1", "c1", "h1"]
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            kind = draw(st.integers(0, 3))
            if kind == 0:
                row.append(ParamPoly())
            elif kind == 1:
                row.append(ParamPoly.const(draw(st.integers(-3, 3))))
            else:
                c = draw(st.integers(1, 3))
                row.append(ParamPoly.symbol(draw(st.sampled_from(names))) * c)
        rows.append(row)
    return rows


@given(sparse_symbolic(), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_symbolic_det_specializes_to_numeric_det(rows, vals):
    values = dict(zip(["a1", "b1", "c1", "h1"], vals))
    M = ExactMatrix(rows, PARAM)
    sd = det_symbolic_sparse(M)
    assert sd.det.evaluate(values) == det_bareiss(M.evaluate(values))
    # the census partitions the full Leibniz expansion
    assert sum(len(v) for v in sd.census_index.values()) == sd.n_terms


def test_census_counts_permutations():
    a = ParamPoly.symbol("a1")
    # det [[a, a], [a, a]] = a^2 - a^2: two contributions, total zero
    sd = det_symbolic_sparse(ExactMatrix([[a, a], [a, a]], PARAM))
    assert sd.det.is_zero()
    cons = sd.census({"a1": 2})
    assert len(cons) == 2
    assert sorted(c.sign for c in cons) == [-1, 1]


def test_json_round_trip():
    M = ExactMatrix([[Fraction(1, 2), 0], [3, -4]], QQ, ["r1", "r2"], ["c1", "c2"])
    assert ExactMatrix.from_json(M.to_json()) == M


def test_float_oracle_on_hilbert_determinant():
    n = 5
    H = ExactMatrix([[Fraction(1, i + j + 1) for j in range(n)] for i in range(n)])
    exact = det_bareiss(H)
    # closed form for the Hilbert determinant
    c = [math.factorial(k) for k in range(2 * n)]
    num = 1
    for k in range(n):
        num *= c[k] ** 4
    den = 1
    for k in range(2 * n):
        den *= c[k]
    assert exact == Fraction(num, den)
