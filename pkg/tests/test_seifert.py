import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import cofactor_det, random_seifert, rank_one_base, reduced
from seifert_calc.errors import PreconditionFailed, StructuralError, ValidationRequired
from seifert_calc.exactmath import FpAbelianGroup, IntMatrix, subgroup_membership
from seifert_calc.localmodel import CyclicChart, reduce_chart
from seifert_calc.seifert import (
    BaseVariety,
    ContractionType,
    Divisor,
    MarkedPoint,
    QClass,
    SeifertData,
    canonical_class_Y,
    chern_class,
    chern_multiple,
    class_group_Y,
    contraction_type,
    global_order,
    is_smooth_over,
    multiplicity_at,
    quotient_by_mu,
    singularity_predicates,
    validate,
)

TRIVIAL_CHART = reduce_chart(CyclicChart(1, (0,)))


def a1_base(points=()):
    G = FpAbelianGroup.free(0)
    return BaseVariety(G, (), (Divisor("O", G.zero()),), G.zero(), marked_points=tuple(points))


def weighted_base(extra_points=()):
    """P(1,1,5): Cl = Z, Pic = 5Z, a 1/5(1,1) point at which x0 = 0 passes."""
    G = FpAbelianGroup.free(1)
    apex = MarkedPoint("apex", reduce_chart(CyclicChart(5, (1, 1))), (1,), ((0, 0),))
    return BaseVariety(
        clX=G,
        picX=(G.element((5,)),),
        divisors=(Divisor("x0", G.element((1,))), Divisor("S1", G.element((5,))), Divisor("S2", G.element((5,)))),
        canonical_class=G.element((-7,)),
        ample_direction=G.element((1,)),
        marked_points=(apex,) + tuple(extra_points),
    )


# --- construction ------------------------------------------------------------

def test_base_rejects_foreign_classes():
    G = FpAbelianGroup.free(1)
    with pytest.raises(StructuralError):
        BaseVariety(G, (FpAbelianGroup.free(2).zero(),), (), G.zero())


def test_marked_point_restriction_must_kill_relations():
    G = FpAbelianGroup.cyclic(3)
    bad = MarkedPoint("p", reduce_chart(CyclicChart(5, (1, 1))), (1,))
    with pytest.raises(StructuralError):
        BaseVariety(G, (), (), G.zero(), marked_points=(bad,))


def test_marked_point_incidence_must_match_chart():
    G = FpAbelianGroup.free(1)
    p = MarkedPoint("p", reduce_chart(CyclicChart(5, (1, 2))), (1,), ((0, 1),))
    with pytest.raises(StructuralError):
        BaseVariety(G, (), (Divisor("D", G.element((1,))),), G.zero(), marked_points=(p,))


def test_coefficients_must_be_reduced(p1_base):
    with pytest.raises(ValueError):
        SeifertData(p1_base, p1_base.clX.zero(), ((2, 4), (0, 1)))
    with pytest.raises(ValueError):
        SeifertData(p1_base, p1_base.clX.zero(), ((3, 2), (0, 1)))


# --- validate ----------------------------------------------------------------

def test_validate_trivial(p1_base):
    rep = validate(SeifertData(p1_base, p1_base.clX.zero(), ((0, 1), (0, 1))))
    assert rep.valid and rep.picard_order == 1


def test_validate_p1(p1_data):
    # 6 * (-1) + 3 + 4 = 1 is in Pic, and no smaller multiple of lcm(2, 3) exists
    rep = validate(p1_data)
    assert rep.valid and rep.picard_order == 6


def test_validate_intersecting():
    base = rank_one_base([1, 1], K=-3, intersections=[(0, 1)])
    sd = SeifertData(base, base.clX.zero(), ((1, 2), (1, 4)))
    rep = validate(sd)
    assert not rep.valid
    assert any("non-coprime" in f for f in rep.failures())
    with pytest.raises(ValidationRequired):
        global_order(sd)


def test_validate_bound():
    base = weighted_base()
    sd = SeifertData(base, base.clX.element((1,)), ((0, 1), (0, 1), (0, 1)))
    assert validate(sd).picard_order == 5
    rep = validate(sd, bound=4)
    assert rep.picard_order is None and not rep.valid


def test_validate_picard_point_check():
    G = FpAbelianGroup.free(1)
    p = MarkedPoint("p", reduce_chart(CyclicChart(5, (1, 1))), (1,))
    base = BaseVariety(G, (G.element((1,)),), (), G.zero(), marked_points=(p,))
    rep = validate(SeifertData(base, G.zero(), ()))
    assert not rep.valid


def test_picard_order_matches_scan():
    rng = random.Random(7)
    for _ in range(200):
        sd = random_seifert(rng)
        m = sd.branch_lcm
        expect = next(
            k * m for k in range(1, 10**4)
            if subgroup_membership(chern_multiple(sd, k * m), sd.base.picX, sd.base.clX)
        )
        assert validate(sd).picard_order == expect


# --- Chern classes and quotients ---------------------------------------------

def test_chern_examples(p1_base, p1_data):
    assert chern_class(SeifertData(p1_base, p1_base.clX.zero(), ((0, 1), (0, 1)))).is_zero()
    c1 = chern_class(p1_data)
    assert c1.numerator.coordinates == (1,) and c1.denominator == 6
    assert c1.free_part() == (Fraction(1, 6),)
    assert Fraction(-1) + Fraction(1, 2) + Fraction(2, 3) == Fraction(1, 6)


def test_qclass_equality_is_rational():
    G = FpAbelianGroup.free(1)
    assert QClass(G.element((2,)), 12) == QClass(G.element((1,)), 6)
    assert QClass(G.element((1,)), 6) * 6 == QClass(G.element((1,)), 1)
    assert -QClass(G.element((1,)), 6) == QClass(G.element((-1,)), 6)


def test_quotient_examples(p1_base, p1_data):
    assert quotient_by_mu(p1_data, 1) == p1_data
    half = SeifertData(p1_base, p1_base.clX.element((3,)), ((1, 2), (0, 1)))
    q = quotient_by_mu(half, 2)
    assert q.coeffs == ((0, 1), (0, 1))
    assert q.L == p1_base.clX.element((2 * 3 + 1,))
    q = quotient_by_mu(p1_data, 6)
    assert q.coeffs == ((0, 1), (0, 1))
    assert q.L.coordinates == (1,)
    assert chern_class(q) == QClass(p1_base.clX.element((1,)), 1)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 24))
def test_chern_scales(seed, M):
    sd = random_seifert(random.Random(seed))
    q = quotient_by_mu(sd, M)
    assert chern_class(q) == chern_class(sd) * M
    m = sd.branch_lcm * q.branch_lcm
    assert chern_multiple(q, m) == chern_multiple(sd, M * m)


# --- orders and multiplicities -----------------------------------------------

def test_global_order_examples(p1_base, p1_data):
    assert global_order(SeifertData(p1_base, p1_base.clX.zero(), ((0, 1), (0, 1)))) == 1
    assert global_order(p1_data) == 6
    base = weighted_base()
    sd = SeifertData(base, base.clX.element((1,)), ((0, 1), (1, 2), (2, 3)))
    assert multiplicity_at(sd, base.point("apex")) == 5
    assert global_order(sd) == 30


def test_multiplicity_examples():
    G = FpAbelianGroup.free(1)
    smooth = MarkedPoint("q", TRIVIAL_CHART, (0,))
    base = weighted_base([smooth])
    sd = SeifertData(base, base.clX.element((1,)), ((0, 1), (0, 1), (0, 1)))
    assert multiplicity_at(sd, base.point("q")) == 1
    assert multiplicity_at(sd, base.point("apex")) == 5
    assert is_smooth_over(sd, base.point("apex"))
    generic = MarkedPoint("g", TRIVIAL_CHART, (0,), ((0, 0),))
    base = rank_one_base([1, 1], points=[generic])
    sd = SeifertData(base, G.element((-1,)), ((2, 7), (0, 1)))
    assert multiplicity_at(sd, base.point("g")) == 7


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_global_order_kills_everything(seed):
    rng = random.Random(seed)
    base = weighted_base([MarkedPoint("q", TRIVIAL_CHART, (0,), ((1, 0),))])
    coeffs = tuple(reduced(rng.randrange(c), c) for c in (1, rng.randint(1, 6), rng.randint(1, 6)))
    sd = SeifertData(base, base.clX.element((rng.randint(-6, 6),)), coeffs)
    m = global_order(sd)
    q = quotient_by_mu(sd, m)
    assert all(c == (0, 1) for c in q.coeffs)
    assert base.in_picard(q.L)
    for p in base.marked_points:
        assert m % multiplicity_at(sd, p) == 0


# --- class group and canonical class -----------------------------------------

@pytest.mark.parametrize("b,c", [(1, 2), (2, 5), (5, 7), (3, 8)])
def test_class_group_over_a1(b, c):
    base = a1_base()
    sd = SeifertData(base, base.clX.zero(), ((b, c),))
    assert class_group_Y(sd).group.is_trivial()
    assert canonical_class_Y(sd).is_zero()


def test_class_group_p1(p1_data):
    rows = [[1, -2, 0], [1, 0, -3], [-1, 1, 2]]
    assert abs(cofactor_det(rows)) == 1
    cg = class_group_Y(p1_data)
    assert cg.group.is_trivial()
    assert cg.labels == ("f*e0", "D^Y_D0", "D^Y_D1")
    assert canonical_class_Y(p1_data, cg).is_zero()


def test_class_group_no_branch(p1_base):
    sd = SeifertData(p1_base, p1_base.clX.zero(), ((0, 1), (0, 1)))
    cg = class_group_Y(sd)
    assert cg.group == p1_base.clX
    assert canonical_class_Y(sd, cg) == cg.pullback(p1_base.canonical_class)
    with pytest.raises(StructuralError):
        cg.fiber_divisor(0)


@pytest.mark.parametrize("L", [-3, -1, 0, 1, 2, 5])
def test_class_group_no_branch_is_quotient_by_L(p1_base, L):
    sd = SeifertData(p1_base, p1_base.clX.element((L,)), ((0, 1), (0, 1)))
    assert class_group_Y(sd).group == p1_base.clX.quotient([sd.L])


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_class_group_invariant_under_reordering(seed):
    rng = random.Random(seed)
    sd = random_seifert(rng)
    perm = list(range(len(sd.base.divisors)))
    rng.shuffle(perm)
    base = sd.base
    shuffled = BaseVariety(
        base.clX, base.picX, tuple(base.divisors[i] for i in perm), base.canonical_class, base.ample_direction
    )
    sd2 = SeifertData(shuffled, sd.L, tuple(sd.coeffs[i] for i in perm))
    assert class_group_Y(sd).group == class_group_Y(sd2).group


def test_class_group_invariant_under_row_operations():
    G = FpAbelianGroup(2, IntMatrix.from_rows([[0, 4]]))
    H = FpAbelianGroup(2, IntMatrix.from_rows([[0, 4], [0, 8], [0, -4]]))
    base_g = BaseVariety(G, (G.element((2, 0)), G.element((0, 1))), (Divisor("D", G.element((1, 1))),), G.zero())
    base_h = BaseVariety(H, (H.element((2, 0)), H.element((0, 1))), (Divisor("D", H.element((1, 1))),), H.zero())
    a = class_group_Y(SeifertData(base_g, G.element((1, 3)), ((1, 3),))).group
    b = class_group_Y(SeifertData(base_h, H.element((1, 3)), ((1, 3),))).group
    assert a == b


# --- contraction and singularities -------------------------------------------

def test_contraction_examples(p1_base, p1_data):
    assert contraction_type(SeifertData(p1_base, p1_base.clX.zero(), ((0, 1), (0, 1)))) is ContractionType.NEITHER
    assert contraction_type(p1_data) is ContractionType.INFINITY_SECTION
    neg = p1_data.with_L(p1_base.clX.element((-2,)))
    assert chern_class(neg).free_part() == (Fraction(-5, 6),)
    assert contraction_type(neg) is ContractionType.ZERO_SECTION
    no_ample = rank_one_base([1, 1], ample=None)
    assert contraction_type(SeifertData(no_ample, no_ample.clX.element((-1,)), p1_data.coeffs)) is ContractionType.UNDECIDABLE


def test_singularity_p1(p1_data):
    preds = singularity_predicates(p1_data)
    assert (preds.q_cartier, preds.log_terminal) == (True, True)


def test_singularity_torsion_canonical():
    G = FpAbelianGroup(2, IntMatrix.from_rows([[0, 2]]))
    base = BaseVariety(G, (G.element((1, 0)), G.element((0, 1))), (), G.element((0, 1)), ample_direction=G.element((1, 0)))
    preds = singularity_predicates(SeifertData(base, G.element((1, 0)), ()))
    assert (preds.q_cartier, preds.log_terminal) == (True, False)


def test_singularity_rank_two_undecidable():
    G = FpAbelianGroup.free(2)
    base = BaseVariety(G, (G.element((1, 0)), G.element((0, 1))), (), G.element((-2, -2)))
    preds = singularity_predicates(SeifertData(base, G.element((1, 1)), ()))
    assert (preds.q_cartier, preds.log_terminal) == (None, None)


def test_singularity_needs_positive_c1(p1_data):
    with pytest.raises(PreconditionFailed):
        singularity_predicates(p1_data.with_L(p1_data.base.clX.element((-2,))))


def test_weighted_cone_is_smooth():
    # Y = A^3 minus the origin over P(1,1,5): smooth everywhere, cone is A^3
    base = weighted_base()
    sd = SeifertData(base, base.clX.element((1,)), ((0, 1), (0, 1), (0, 1)))
    assert class_group_Y(sd).group.is_trivial()
    assert is_smooth_over(sd, base.point("apex"))
    preds = singularity_predicates(sd)
    assert preds.q_cartier and preds.log_terminal
    assert math.gcd(global_order(sd), 5) == 5
