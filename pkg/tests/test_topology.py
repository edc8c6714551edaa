import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import cofactor_det, rank_one_base
from seifert_calc.errors import AmbiguityPossible, DimensionMismatch, Undecidable
from seifert_calc.exactmath import FpAbelianGroup, IntMatrix
from seifert_calc.seifert import BaseVariety, QClass, SeifertData, chern_class, global_order
from seifert_calc.topology import (
    BettiData,
    IntersectionProfile,
    edge_class,
    h1_is_trivial_orbifold,
    h1_orb,
    h1_orb_relations,
    h1_Y,
    h1_Y_relations,
    qhs_check,
    reconstruct_from_chern,
    section_lattice,
)

P1 = IntersectionProfile.build([[1], [1]], L_pairings=[-1])


def random_profile(rng, max_rank=3, max_n=4, max_c=6):
    t = rng.randint(0, max_rank)
    n = rng.randint(0, max_n)
    pairings = [[rng.randint(-4, 4) for _ in range(t)] for _ in range(n)]
    profile = IntersectionProfile(t, IntMatrix.from_rows(pairings, cols=t), tuple(rng.randint(-4, 4) for _ in range(t)))
    coeffs = []
    for _ in range(n):
        c = rng.randint(1, max_c)
        coeffs.append((rng.randrange(c), c))
    return profile, coeffs


# --- presentations -----------------------------------------------------------

def test_h1_orb_examples():
    assert h1_orb(IntersectionProfile.build([], h2_rank=1), []).is_trivial()
    for m in range(1, 9):
        for d in range(1, 9):
            G = h1_orb(IntersectionProfile.build([[d]]), [m])
            assert G == FpAbelianGroup.cyclic(math.gcd(m, d))
    assert h1_orb(P1, [2, 3]).is_trivial()


def test_h1_Y_examples():
    assert h1_Y(IntersectionProfile.build([], L_pairings=[1]), []).is_trivial()
    assert abs(cofactor_det([[1, 2, 0], [2, 0, 3], [-1, -1, -1]])) == 1
    assert h1_Y(P1, [(1, 2), (2, 3)]).is_trivial()
    assert h1_Y_relations(P1, [(1, 2), (2, 3)]).to_lists() == [[1, 2, 0], [2, 0, 3], [-1, -1, -1]]
    G = h1_Y(IntersectionProfile.build([[1]], L_pairings=[0]), [(1, 2)])
    assert G.is_trivial()


def test_lens_space():
    # two exceptional fibres 2/5 and 4/5 over P^1 with L = O(-1): |det| = 5
    profile = IntersectionProfile.build([[1], [1]], L_pairings=[-1])
    rows = h1_Y_relations(profile, [(2, 5), (4, 5)]).to_lists()
    assert abs(cofactor_det(rows)) == 5
    assert h1_Y(profile, [(2, 5), (4, 5)]) == FpAbelianGroup.cyclic(5)


@pytest.mark.parametrize("p", range(1, 12))
def test_circle_bundles(p):
    # degree -p circle bundle over S^2 is the lens space L(p, 1)
    G = h1_Y(IntersectionProfile.build([], L_pairings=[-p]), [])
    assert G == FpAbelianGroup.cyclic(p)


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        h1_orb(P1, [2])
    with pytest.raises(DimensionMismatch):
        h1_Y(P1, [(1, 2)])
    with pytest.raises(DimensionMismatch):
        IntersectionProfile(2, IntMatrix.from_rows([[1]]))


@settings(max_examples=300)
@given(st.integers(0, 2**32))
def test_killing_k_gives_orbifold_group(seed):
    profile, coeffs = random_profile(random.Random(seed))
    Y = h1_Y_relations(profile, coeffs)
    n = profile.num_divisors
    killed = FpAbelianGroup(n + 1, Y.stack([(1,) + (0,) * n]))
    assert killed == h1_orb(profile, [c for _, c in coeffs])


@settings(max_examples=200)
@given(st.integers(0, 2**32))
def test_unramified_reduces_to_circle_bundle(seed):
    rng = random.Random(seed)
    profile, _ = random_profile(rng)
    n = profile.num_divisors
    G = h1_Y(profile, [(0, 1)] * n)
    expect = FpAbelianGroup(1, IntMatrix.from_rows([[x] for x in profile.L_pairings], cols=1))
    assert G == expect


@settings(max_examples=200)
@given(st.integers(0, 2**32))
def test_h1_orb_invariances(seed):
    rng = random.Random(seed)
    profile, coeffs = random_profile(rng)
    c = [c for _, c in coeffs]
    G = h1_orb(profile, c)
    perm = list(range(profile.num_divisors))
    rng.shuffle(perm)
    P = profile.divisor_pairings
    permuted = IntersectionProfile(profile.h2_rank, IntMatrix.from_rows([P.entries[i] for i in perm], cols=P.cols))
    assert h1_orb(permuted, [c[i] for i in perm]) == G
    t = profile.h2_rank
    if t >= 2:
        # unimodular change of H_2 basis: eta_0 -> eta_0 + k eta_1
        k = rng.randint(-3, 3)
        rows = [list(r) for r in P.entries]
        for r in rows:
            r[0] += k * r[1]
        assert h1_orb(IntersectionProfile(t, IntMatrix.from_rows(rows, cols=t)), c) == G


def test_orbifold_presentation_shape():
    rel = h1_orb_relations(P1, [2, 3])
    assert rel.to_lists() == [[2, 0], [0, 3], [1, 1]]


# --- section lattice and edge class ------------------------------------------

def test_section_lattice():
    assert section_lattice([1, 1, 1]) == 1
    assert section_lattice([2, 3]) == 6
    assert section_lattice([4, 6]) == section_lattice([6, 4]) == 12
    with pytest.raises(ValueError):
        section_lattice([])


def test_section_lattice_matches_global_order(p1_data):
    assert section_lattice([c for _, c in p1_data.coeffs]) == global_order(p1_data)


def test_edge_class(p1_base, p1_data):
    assert edge_class(SeifertData(p1_base, p1_base.clX.zero(), ((0, 1), (0, 1)))).is_zero()
    e = edge_class(p1_data)
    assert e.coordinates == (1,)
    c1 = chern_class(p1_data)
    assert QClass(e, 1) == c1 * global_order(p1_data)


# --- rational homology spheres -----------------------------------------------

def test_qhs_examples():
    assert qhs_check(BettiData((1, 0, 1)), True)
    assert not qhs_check(BettiData((1, 0, 1)), False)
    assert not qhs_check(BettiData((1, 2, 1)), True)
    assert not qhs_check(BettiData((1, 0, 2, 0, 1)), True)
    assert qhs_check(BettiData((1, 0, 1, 0, 1), (True, True)), True)
    assert not qhs_check(BettiData((1, 0, 1, 0, 1), (True, False)), True)
    with pytest.raises(ValueError):
        BettiData((1, 0))


# --- reconstruction ----------------------------------------------------------

def test_reconstruct_examples(p1_base, p1_data):
    base = rank_one_base([1])
    zero = QClass(base.clX.zero(), 1)
    sd = reconstruct_from_chern(base, [1], zero)
    assert sd.L.is_zero() and sd.coeffs == ((0, 1),)
    sd = reconstruct_from_chern(p1_base, [2, 3], QClass(p1_base.clX.element((1,)), 6))
    assert sd == p1_data
    assert reconstruct_from_chern(p1_base, [2, 3], QClass(p1_base.clX.element((1,)), 5)) is None


def test_reconstruct_refuses_ambiguity():
    base = rank_one_base([2, 2])
    assert not h1_is_trivial_orbifold(base, [2, 2])
    with pytest.raises(AmbiguityPossible):
        reconstruct_from_chern(base, [2, 2], QClass(base.clX.element((1,)), 2))


def test_reconstruct_needs_rank_one():
    G = FpAbelianGroup.free(2)
    base = BaseVariety(G, (G.element((1, 0)), G.element((0, 1))), (), G.zero())
    with pytest.raises(Undecidable):
        reconstruct_from_chern(base, [], QClass(G.zero(), 1))


def test_reconstruct_round_trip_small():
    for degrees, denominators in [([1, 1], [2, 3]), ([1, 1, 1], [2, 3, 5]), ([1, 2], [3, 5])]:
        base = rank_one_base(degrees)
        if not h1_is_trivial_orbifold(base, denominators):
            continue
        for L in range(-3, 4):
            for b in range(denominators[0]):
                s = Fraction(b, denominators[0])
                coeffs = ((s.numerator, s.denominator),) + tuple((1, c) for c in denominators[1:])
                sd = SeifertData(base, base.clX.element((L,)), coeffs)
                assert reconstruct_from_chern(base, denominators, chern_class(sd)) == sd
