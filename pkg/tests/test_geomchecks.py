"""Free-action and smoothness gates against independent oracles."""

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from torelli3.family import CubicPair, ParamPoint, build_general, build_normalized, random_params
from torelli3.geomchecks import (common_root_by_gcd, free_action_check, projective_points,
                                 smooth_scan, sylvester_resultant_cubics)
from torelli3.polyring import Polynomial, parse_monomial
from torelli3.scalars import GF, QQ

roots = st.integers(-5, 5)


def cubic_from_roots(lead, rs):
    """lead * prod (x - r y) as [c0..c3] (coefficient of x^(3-k) y^k)."""
    c = [Fraction(lead)]
    for r in rs:
        c = [a - r * b for a, b in zip(c + [0], [0] + c)]
    return c


@given(st.integers(1, 4), st.lists(roots, min_size=3, max_size=3),
       st.integers(1, 4), st.lists(roots, min_size=3, max_size=3))
def test_resultant_is_product_of_root_differences(a, rs, b, ss):
    f, g = cubic_from_roots(a, rs), cubic_from_roots(b, ss)
    expected = Fraction(a) ** 3 * Fraction(b) ** 3
    for r, s in itertools.product(rs, ss):
        expected *= r - s
    assert sylvester_resultant_cubics(f, g) == expected


def test_resultant_of_polynomials_infers_variables():
    x1, x2 = Polynomial.var("X1"), Polynomial.var("X2")
    assert sylvester_resultant_cubics(x1 ** 3, x2 ** 3) != 0
    assert sylvester_resultant_cubics(x1 ** 3, x1 * x2 ** 2) == 0


def test_fermat_point_passes_all_three():
    rep = free_action_check(build_normalized(ParamPoint.normalized()))
    assert (rep.cond_i, rep.cond_ii, rep.cond_iii) == (True, True, True)
    assert rep.cross_oracle_agreement


def test_each_condition_can_fail():
    base = {"a_1_0": 1, "a_2_0": 1, "a_1_5": 1, "a_2_8": 1, "a_1_9": 1, "a_2_12": 1}
    no_w = dict(base, a_1_0=0, a_2_0=0)
    assert free_action_check(build_general(ParamPoint.general(no_w))).first_failure() == "cond_i"
    same_x = dict(base, a_2_8=0, a_2_5=1)
    assert free_action_check(build_general(ParamPoint.general(same_x))).first_failure() == "cond_ii"
    same_y = dict(base, a_2_12=0, a_2_9=1)
    assert free_action_check(build_general(ParamPoint.general(same_y))).first_failure() == "cond_iii"
    # normalized family: alpha-parts share a root exactly when e1*g2 = 1
    bad = build_normalized(ParamPoint.normalized({"e1": 1, "g2": 1}))
    assert free_action_check(bad).first_failure() == "cond_ii"


def test_smooth_scan_point_counts():
    for p in (7, 11, 13):
        pts = projective_points(p)
        assert pts.shape[0] == (p ** 5 - 1) // (p - 1)
        assert len({tuple(r) for r in pts}) == pts.shape[0]


def _brute_singular(pair, p):
    F = GF(p)
    polys = [f.change_ring(F) for f in pair]
    grads = [[f.derivative(k) for k in range(5)] for f in polys]
    out = []
    for pt in projective_points(p):
        pt = [int(x) for x in pt]
        if any(f.evaluate(pt) != 0 for f in polys):
            continue
        J = [[g.evaluate(pt) for g in row] for row in grads]
        if all(J[0][a] * J[1][b] - J[0][b] * J[1][a] == 0
               for a in range(5) for b in range(a + 1, 5)):
            out.append(tuple(pt))
    return sorted(out)


@pytest.mark.parametrize("seed", [0, 2])
def test_smooth_scan_matches_pointwise_oracle(seed):
    pair = build_normalized(random_params(seed))
    rep = smooth_scan(pair, (7,))
    assert rep.scans[0].singular_points == _brute_singular(pair, 7)


def test_smooth_scan_detects_a_cone():
    # both cubics avoid W0 entirely: (1:0:0:0:0) is a singular point
    x1, x2, y3, y4 = (Polynomial.var(v) for v in ("X1", "X2", "Y3", "Y4"))
    pair = CubicPair(x1 ** 3 + y3 ** 3, x2 ** 3 + y4 ** 3)
    rep = smooth_scan(pair, (7,))
    assert (1, 0, 0, 0, 0) in rep.scans[0].singular_points
    assert rep.verdict == "singular-points-found"
    assert rep.to_json()["heuristic"] is True


@pytest.mark.parametrize("p", [2, 3, 9])
def test_smooth_scan_rejects_bad_primes(p):
    with pytest.raises(ValueError):
        smooth_scan(build_normalized(ParamPoint.normalized()), (p,))


def test_gcd_oracle_examples():
    # (x - y)(x - 2y)(x - 3y) and (x - 3y) x^2 share (3:1)
    f = cubic_from_roots(1, [1, 2, 3])
    g = cubic_from_roots(1, [3, 0, 0])
    assert common_root_by_gcd(f, g, QQ)
    assert not common_root_by_gcd(cubic_from_roots(1, [1, 2, 3]), cubic_from_roots(1, [4, 5, 6]), QQ)


def test_resultant_vs_gcd_random_pairs():
    rng = random.Random(1)
    for _ in range(200):
        f = [rng.randint(-3, 3) for _ in range(4)]
        g = [rng.randint(-3, 3) for _ in range(4)]
        if not any(f) or not any(g):
            continue
        assert (sylvester_resultant_cubics(f, g) == 0) == common_root_by_gcd(f, g, QQ)


def test_monomials_used_by_conditions():
    assert parse_monomial("W0^3") == (3, 0, 0, 0, 0)
