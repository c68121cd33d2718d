"""Graded pieces of the quotient ring against enumeration and Hilbert-series oracles."""

import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from torelli3.family import build_normalized, random_params
from torelli3.polyring import Polynomial, mono_weight, monomials_of_degree
from torelli3.quotient import (InhomogeneousError, expected_slice_rank, graded_piece,
                               monic_reduce, mult_map)
from torelli3.scalars import GF


def hilbert_ci_33(n):
    """Coefficient of t^n in (1 - t^3)^2 / (1 - t)^5."""
    def h(k):
        return math.comb(k + 4, 4) if k >= 0 else 0
    return h(n) - 2 * h(n - 3) + h(n - 6)


@pytest.fixture(scope="module")
def pair():
    return build_normalized(random_params(7))


def test_dims_match_hilbert_series(pair):
    for n in range(0, 7):
        piece = graded_piece(pair, n)
        assert piece.dim == hilbert_ci_33(n)
        assert piece.dim == len(monomials_of_degree(n)) - piece.slice_rank
        assert piece.slice_rank == expected_slice_rank(n)


def test_named_dimensions(pair):
    assert [graded_piece(pair, n).dim for n in range(5)] == [1, 5, 15, 33, 60]
    assert graded_piece(pair, 3).slice_rank == 2
    assert graded_piece(pair, 4).slice_rank == 10


def test_eigenbases_in_low_degree(pair):
    r1, r2 = graded_piece(pair, 1), graded_piece(pair, 2)
    from torelli3.polyring import mono_str
    assert [mono_str(m) for m in r1.eigenbasis(0)] == ["W0"]
    assert [mono_str(m) for m in r1.eigenbasis(1)] == ["X1", "X2"]
    assert [mono_str(m) for m in r2.eigenbasis(2)] == ["W0*Y3", "W0*Y4", "X1^2", "X1*X2",
                                                       "X2^2"]
    assert graded_piece(pair, 4).weight_dims() == (20, 20, 20)


def test_generators_reduce_to_zero(pair):
    r3 = graded_piece(pair, 3)
    assert r3.reduce(pair.F1).is_zero() and r3.reduce(pair.F2).is_zero()
    r5 = graded_piece(pair, 5)
    q = Polynomial.var("X1") * Polynomial.var("Y4")
    assert r5.reduce(q * pair.F1 - q * pair.F2 * 2).is_zero()


def test_wrong_degree_is_rejected(pair):
    with pytest.raises(InhomogeneousError):
        graded_piece(pair, 3).reduce(Polynomial.var("W0"))


def test_degenerate_slice_flagged():
    # F2 a multiple of F1: the degree-3 slice has rank 1, not 2
    from torelli3.family import CubicPair
    f = build_normalized(random_params(1)).F1
    piece = graded_piece(CubicPair(f, f * 2), 3)
    assert piece.slice_rank == 1 and not piece.generic


@given(st.integers(0, 10 ** 6), st.integers(1, 2), st.integers(1, 2))
def test_weight_additivity(seed, n, k):
    rng = random.Random(seed)
    pair = _pair_cache()
    m, w = rng.randrange(3), rng.randrange(3)
    src = [x for x in monomials_of_degree(n) if mono_weight(x) == m]
    mul = [x for x in monomials_of_degree(k) if mono_weight(x) == w]
    p = Polynomial({rng.choice(src): rng.randint(1, 5) for _ in range(3)})
    q = Polynomial({rng.choice(mul): rng.randint(1, 5) for _ in range(2)})
    red = graded_piece(pair, n + k).reduce(p * q)
    target = (m + w) % 3
    for i, b in enumerate(red.piece.basis):
        if red.coords[i] != 0:
            assert mono_weight(b) == target
    # mult_map on the piece keeps weight as well
    piece = graded_piece(pair, n)
    M = mult_map(piece, q, graded_piece(pair, n + k))
    tgt = red.piece.basis
    for j, b in enumerate(piece.basis):
        for i in range(M.nrows):
            if M.rows[i][j] != 0:
                assert mono_weight(tgt[i]) == (mono_weight(b) + w) % 3


_PAIR = []


def _pair_cache():
    if not _PAIR:
        _PAIR.append(build_normalized(random_params(11)))
    return _PAIR[0]


def test_mult_map_composes(pair):
    w0 = Polynomial.var("W0")
    x1 = Polynomial.var("X1")
    r1, r2, r3 = (graded_piece(pair, n) for n in (1, 2, 3))
    assert mult_map(r2, x1, r3) @ mult_map(r1, w0, r2) == mult_map(r1, w0 * x1, r3)


def test_monic_reduce_matches_canonical_reduction(pair):
    r4 = graded_piece(pair, 4)
    w0 = Polynomial.var("W0")
    from torelli3.polyring import parse_monomial
    rel = [(parse_monomial("W0*X1^3"), w0 * pair.F1), (parse_monomial("W0*X2^3"), w0 * pair.F2)]
    p = Polynomial.monomial(parse_monomial("W0*X1^3")) * 3 + Polynomial.monomial(
        parse_monomial("X1^2*Y3^2"))
    assert r4.reduce(monic_reduce(p, rel)) == r4.reduce(p)


def test_finite_field_piece():
    pair = build_normalized(random_params(3, GF(10007)))
    assert graded_piece(pair, 4).dim == 60
