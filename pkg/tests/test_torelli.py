"""The Jacobian maps, V, M', L1..L5 and the verdict."""

import pytest

from torelli3.exactla import kernel_basis, mat_vec, rank
from torelli3.family import ParamPoint, build_normalized, random_params
from torelli3.polyring import mono_str, parse_monomial
from torelli3.quotient import PieceCache
from torelli3.scalars import GF, QQ, ParamPoly
from torelli3 import torelli as T

S = ParamPoly.symbol


@pytest.fixture(scope="module")
def point():
    return random_params(0)


@pytest.fixture(scope="module")
def pair(point):
    return build_normalized(point)


@pytest.fixture(scope="module")
def pieces(pair):
    return PieceCache(pair)


def test_euler_vector_killed_in_degree_one(pair, pieces):
    J = T.jacobian_map(pair, 1, pieces)
    assert all(x == 0 for x in mat_vec(J.matrix, T.euler_vector(pieces[1])))


def test_degree_two_kernel_is_spanned_by_euler_multiples(pair, pieces):
    J = T.jacobian_map(pair, 2, pieces)
    eulers = [T.euler_vector(pieces[2], parse_monomial(v)) for v in ("W0", "X1", "X2", "Y3", "Y4")]
    for e in eulers:
        assert all(x == 0 for x in mat_vec(J.matrix, e))
    ker = kernel_basis(J.matrix)
    assert len(ker) == 5
    # the Euler multiples span the kernel
    from torelli3.exactla import ExactMatrix
    assert rank(ExactMatrix.from_columns(eulers, QQ)) == 5
    # cokernel 50, and 50 + 1 = 51 = h^{1,1} from e = 63, b2 = 61
    coker = J.matrix.nrows - rank(J.matrix)
    e, K2, q = 63, 9, 0
    chi_O = (K2 + e) // 12  # Noether
    pg = chi_O - 1 + q
    b2 = e - 2
    assert coker == 50 and coker + 1 == b2 - 2 * pg == 51


def test_jacobian_maps_are_equivariant(pair, pieces):
    for d in (1, 2):
        assert T.jacobian_map(pair, d, pieces).off_weight_zero()


def test_w0_square_commutes(pair, pieces):
    assert T.w0_commutes(pair, pieces)


def test_h1_theta_counts(pair, pieces):
    rep = T.h1_theta_report(pair, pieces)
    assert rep.weight_domain_dims[0] == 9
    assert rep.coker_dims[0] == 14
    assert rep.total == 42 == rep.riemann_roch_total


def test_riemann_roch_oracle():
    assert T.riemann_roch_h1_theta() == 42


def test_basis_lists():
    V, Mp = T.v_basis(), T.mprime_basis()
    assert len(V) == 25 and len(Mp) == 26
    assert V[5].label("V") == "(W0*X1)_2"
    assert V[0].label("V") == "(W0^2)_1"
    assert Mp[13].label("M'") == "(0, W0^4)"
    assert mono_str(Mp[1].monomial) == "W0*X1*X2^2"
    assert mono_str(Mp[14].monomial) == "W0*X1^2*X2"
    assert sum(T.euler2_vector()) == 5


def test_displacement_columns(pair, pieces):
    A = T.displacement_A(pair, pieces)
    assert A.matrix.shape == (40, 14)
    assert rank(A.matrix) == 14
    p4 = pieces[4]
    w0x1y3 = p4.reduce(_mono("W0^2*X1*Y3")).weight_coords(0)
    assert A.matrix.column(0) == w0x1y3 + [0] * 20
    l2 = p4.reduce(_mono("W0*Y3*Y4^2")).weight_coords(0)
    assert A.matrix.column(13) == [0] * 20 + l2


def _mono(text):
    from torelli3.polyring import Polynomial
    return Polynomial.monomial(parse_monomial(text))


def test_C_kills_euler_everywhere():
    for t in (ParamPoint.normalized(), random_params(3), ParamPoint.normalized({"e1": 1})):
        C = T.c_matrix(build_normalized(t))
        assert all(x == 0 for x in mat_vec(C, T.euler2_vector()))


def test_direct_sum_and_numeric_L1(pair, pieces):
    split = T.map_C(pair, pieces)
    assert split.direct_sum
    assert split.L1.shape == (26, 25)
    # two independent routes to D and D'
    D, L1 = T.split_by_monomials(pair)
    assert L1 == split.L1 and D == split.D


def test_symbolic_L1_named_entries():
    L1 = T.symbolic_L1()
    assert L1.rows[0][0] == 3
    assert L1.rows[4][1] == S("a1")
    assert L1.rows[13][0] == 3


def test_symbolic_L1_specializes_to_numeric(point, pair):
    assert T.symbolic_L1().evaluate(point.as_dict(), QQ) == T.matrix_L1(pair)


def test_star_entries_are_logged_not_compared():
    bc = T.block_check(T.symbolic_L1())
    assert bc.ok
    assert len(bc.skipped_star_positions) == 4
    assert {(s["block"], s["row"], s["col"]) for s in bc.skipped_star_positions} == {
        ("L13", 2, 5), ("L13", 2, 10), ("L23", 2, 3), ("L23", 2, 8)}


def test_block_check_reports_structured_diff():
    L1 = T.symbolic_L1()
    L1.rows[0][0] = ParamPoly.const(4)
    bc = T.block_check(L1)
    assert bc.mismatches == [{"block": "L11", "row": 1, "col": 1, "L1_row": 1, "L1_col": 1,
                              "expected": "3", "computed": "4"}]


def test_symbolic_L5_is_the_reference():
    from torelli3.reference_blocks import reference_l5
    L5 = T.symbolic_L5()
    assert L5.shape == (10, 10)
    assert L5.rows == reference_l5()
    chain = T.symbolic_chain()
    assert chain["l2"].shape == (18, 16) and chain["l4"].shape == (12, 10)


def test_chain_ranks_at_generic_point(point, pair):
    L1 = T.matrix_L1(pair)
    special = T.matrix_L1(build_normalized(point.replace(e1=0, g2=0)))
    ch = T.chain_L(L1, special)
    assert (ch.rank_L1, ch.rank_L2, ch.rank_L4) == (24, 16, 10)
    assert ch.relation_L1_L2 and ch.relation_L3_L4 and ch.det_L5_nonzero
    assert ch.literal_matches_elimination_L2 and ch.literal_matches_elimination_L4


def test_specialization_is_identity_on_the_special_locus(point):
    t = point.replace(e1=0, g2=0)
    L1 = T.matrix_L1(build_normalized(t))
    ch = T.chain_L(L1, L1)
    assert ch.rank_L2 == ch.rank_L3


def test_certificate():
    cert = T.det_l5_certificate()
    assert cert.census_size == 1
    assert set(cert.positions) == set(T.EXPECTED_POSITIONS)
    assert abs(cert.coefficient) == 4
    assert cert.passed and cert.l5_matches_reference


def test_verdict_injective_at_generic_point(point):
    v = T.torelli_verdict(point)
    assert v.conclusion == "injective"
    assert v.rank_A == 14 and v.rank_Dprime == 24 and v.dim_ker_Dprime == 1
    assert v.recheck["composite_kernel_dim"] == 0
    assert v.recheck["D_vanishes_on_ker_Dprime"]


def test_verdict_gate_on_free_action():
    v = T.torelli_verdict(ParamPoint.normalized({"e1": 1, "g2": 1}))
    assert v.conclusion == "non-generic-input" and v.failed_stage == "free_action"


@pytest.mark.parametrize("key", ["e1", "g2", "l1", "h2"])
def test_strike_pivot_hyperplanes_are_degenerate(point, key):
    """Zeroing a non-constant strike pivot drops rank D' to 23, in every field tested."""
    t = point.replace(**{key: 0})
    v = T.torelli_verdict(t)
    assert v.conclusion == "degenerate"
    assert v.rank_Dprime == 23
    assert v.recheck["composite_kernel_dim"] == 1
    assert not v.generic_flags["chain_pivots_nonvanishing"]
    assert T.torelli_verdict(t.change_ring(GF(10007))).rank_Dprime == 23


def test_other_single_zeros_stay_injective(point):
    for key in ("a1", "b1", "c1", "d1", "h1", "a2", "b2", "c2", "d2", "l2"):
        assert T.torelli_verdict(point.replace(**{key: 0})).conclusion == "injective"


def test_verification_report_schema(point):
    rep = T.verification_report(point, seed=0)
    for key in ("params", "field", "dims", "ranks", "detL5_nonzero", "euler_in_kerC",
                "free_action", "smooth_scan", "block_check", "conclusion", "seed", "runtime_ms"):
        assert key in rep
    assert rep["dims"]["V"] == 25 and rep["dims"]["R4w0x2"] == 40
    assert set(rep["block_check"]) >= {"mismatches", "skipped_star_positions"}
