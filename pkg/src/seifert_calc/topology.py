"""Abelian topological invariants of Seifert C*-bundles.

``H_1`` of the total space and the abelian orbifold fundamental group of the
base are computed from explicit presentations. These presentations are only
valid when X is a complex manifold with ``H_1(X, Z) = 0`` and the ``D_i`` are
smooth and meet transversally; the library cannot check this, so callers
assert it and the CLI echoes the assertion in its reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import AmbiguityPossible, DimensionMismatch, Undecidable
from .exactmath import FpAbelianGroup, GroupElement, IntMatrix, lcm_all
from .seifert import BaseVariety, QClass, SeifertData, global_order, quotient_by_mu


@dataclass(frozen=True)
class IntersectionProfile:
    """Pairings against a Z-basis ``eta_1..eta_t`` of ``H_2(X, Z)`` mod torsion.

    ``divisor_pairings[i][k] = [D_i] . eta_k`` and ``L_pairings[k] = c_1(L) . eta_k``.
    """

    h2_rank: int
    divisor_pairings: IntMatrix
    L_pairings: tuple[int, ...] = ()

    def __post_init__(self):
        if self.divisor_pairings.cols != self.h2_rank:
            raise DimensionMismatch("divisor pairings need one column per H_2 basis class")
        object.__setattr__(self, "L_pairings", tuple(self.L_pairings) or (0,) * self.h2_rank)
        if len(self.L_pairings) != self.h2_rank:
            raise DimensionMismatch("L pairings need one entry per H_2 basis class")

    @property
    def num_divisors(self) -> int:
        return self.divisor_pairings.rows

    @classmethod
    def build(cls, divisor_pairings: Sequence[Sequence[int]], L_pairings: Sequence[int] = (), h2_rank: int | None = None):
        if h2_rank is None:
            h2_rank = len(divisor_pairings[0]) if divisor_pairings else len(L_pairings)
        return cls(h2_rank, IntMatrix.from_rows(divisor_pairings, cols=h2_rank), tuple(L_pairings))


def h1_orb_relations(profile: IntersectionProfile, c: Sequence[int]) -> IntMatrix:
    """Generators ``g_i``; relations ``c_i g_i = 0`` and ``sum_i ([D_i].eta_k) g_i = 0``."""
    n = profile.num_divisors
    if len(c) != n:
        raise DimensionMismatch("one multiplicity per divisor is required")
    rows = [tuple(c[i] if j == i else 0 for j in range(n)) for i in range(n)]
    P = profile.divisor_pairings
    rows += [tuple(P[i, k] for i in range(n)) for k in range(profile.h2_rank)]
    return IntMatrix.from_rows(rows, cols=n)


def h1_orb(profile: IntersectionProfile, c: Sequence[int]) -> FpAbelianGroup:
    """Abelian orbifold fundamental group of ``(X, sum (1 - 1/c_i) D_i)``."""
    rel = h1_orb_relations(profile, c)
    return FpAbelianGroup(rel.cols, rel)


def h1_Y_relations(profile: IntersectionProfile, coeffs: Sequence[tuple[int, int]]) -> IntMatrix:
    """Generators ``k, g_1..g_n``; relations ``c_i g_i + b_i k = 0`` and
    ``(c_1(L).eta) k - sum_i ([D_i].eta) g_i = 0``."""
    n = profile.num_divisors
    if len(coeffs) != n:
        raise DimensionMismatch("one (b, c) pair per divisor is required")
    rows = []
    for i, (b, c) in enumerate(coeffs):
        row = [0] * (n + 1)
        row[0] = b
        row[i + 1] = c
        rows.append(tuple(row))
    P = profile.divisor_pairings
    for k in range(profile.h2_rank):
        rows.append((profile.L_pairings[k],) + tuple(-P[i, k] for i in range(n)))
    return IntMatrix.from_rows(rows, cols=n + 1)


def h1_Y(profile: IntersectionProfile, coeffs: Sequence[tuple[int, int]]) -> FpAbelianGroup:
    """``H_1(Y, Z)`` for ``Y = Y(L, sum (b_i/c_i) D_i)``."""
    rel = h1_Y_relations(profile, coeffs)
    return FpAbelianGroup(rel.cols, rel)


def section_lattice(multiplicities: Sequence[int]) -> int:
    """Generator ``m(U)`` of the image of ``H^0(U, R^1 f_* Z)`` in ``H^0(U, Z) = Z``."""
    if not multiplicities:
        raise ValueError("need at least one multiplicity")
    if any(m < 1 for m in multiplicities):
        raise ValueError("multiplicities are positive integers")
    return lcm_all(multiplicities)


def edge_class(sd: SeifertData) -> GroupElement:
    """The integral class ``m(X) c_1(Y/X)``, i.e. ``[L]`` of ``Y / mu_{m(X)}``."""
    return quotient_by_mu(sd, global_order(sd)).L


@dataclass(frozen=True)
class BettiData:
    """Rational Betti numbers ``b_0..b_2n`` of X and caller-asserted flags
    ``c_1^k != 0`` in ``H^2k(X, Q)`` for ``k = 1..n``."""

    betti: tuple[int, ...]
    c1_power_nonzero: tuple[bool, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "betti", tuple(self.betti))
        object.__setattr__(self, "c1_power_nonzero", tuple(self.c1_power_nonzero))
        if len(self.betti) % 2 == 0 or any(b < 0 for b in self.betti):
            raise ValueError("need Betti numbers b_0..b_2n (odd length, non-negative)")
        if self.betti[0] != 1:
            raise ValueError("X must be connected (b_0 = 1)")
        if self.c1_power_nonzero and len(self.c1_power_nonzero) != self.dim:
            raise ValueError("one c_1 power flag per k = 1..n")

    @property
    def dim(self) -> int:
        return (len(self.betti) - 1) // 2


def qhs_check(betti: BettiData, c1_nonzero: bool) -> bool:
    """Whether Y is a rational homology sphere, i.e. ``H^*(X, Q) = Q[c_1]/(c_1^{n+1})``.

    Betti numbers are checked here; the cup product flags are trusted.
    """
    n = betti.dim
    if any(betti.betti[2 * k] != 1 for k in range(n + 1)):
        return False
    if any(betti.betti[2 * k + 1] for k in range(n)):
        return False
    if not c1_nonzero:
        return False
    flags = betti.c1_power_nonzero or (True,) * n
    return all(flags)


def _rank_one_coordinates(base: BaseVariety) -> list[int]:
    G = base.clX
    if G.free_rank != 1 or G.torsion:
        raise Undecidable(f"reconstruction needs Cl(X) = Z, got {G}")
    return [G.free_coordinates(D.cls)[0] for D in base.divisors]


def reconstruct_from_chern(base: BaseVariety, denominators: Sequence[int], target: QClass) -> SeifertData | None:
    """The Seifert data over ``(X, sum (1 - 1/c_i) D_i)`` with Chern class ``target``.

    Searches all ``0 <= b_i < c_i``; each candidate fixes ``[L]``. Requires
    ``Cl(X) = Z`` and a trivial abelian orbifold fundamental group, which makes
    the answer unique. Returns None when no candidate matches.
    """
    degrees = _rank_one_coordinates(base)
    if len(denominators) != len(degrees):
        raise DimensionMismatch("one denominator per divisor is required")
    if not base.clX.same_presentation(target.group):
        raise DimensionMismatch("target is not a class on this base")
    profile = IntersectionProfile.build([[k] for k in degrees], h2_rank=1)
    orb = h1_orb(profile, denominators)
    if not orb.is_trivial():
        raise AmbiguityPossible(f"abelian orbifold fundamental group is {orb}, not trivial")
    value = target.free_part()[0]
    found = []
    for b in product(*(range(c) for c in denominators)):
        L = value - sum(Fraction(bi * k, c) for bi, k, c in zip(b, degrees, denominators))
        if L.denominator == 1:
            found.append((int(L), b))
    if not found:
        return None
    if len(found) > 1:
        raise AssertionError(f"Chern class is not injective here: {found}")
    L, b = found[0]
    coeffs = []
    for bi, c in zip(b, denominators):
        s = Fraction(bi, c)
        coeffs.append((s.numerator, s.denominator))
    return SeifertData(base, base.clX.from_normal_coordinates((L,)), tuple(coeffs))


def orbifold_profile(base: BaseVariety) -> IntersectionProfile:
    """Pairing profile of a base with ``Cl(X) = Z`` against the dual of the generator."""
    return IntersectionProfile.build([[k] for k in _rank_one_coordinates(base)], h2_rank=1)


def h1_is_trivial_orbifold(base: BaseVariety, denominators: Sequence[int]) -> bool:
    return h1_orb(orbifold_profile(base), denominators).is_trivial()

