"""Local theory of Seifert G_m-bundles over cyclic quotient singularities.

A chart ``A^n / mu_M(a_1, ..., a_n)`` is the quotient of affine space by
``z_i -> lambda^{a_i} z_i``. A quotient presentation ``G_m x A^n / mu_M(r, a)``
of the total space corresponds to Seifert data ``Y(O_X(l), sum (b_i/c_i) D_i)``
over the reduced chart ``A^n / mu_{M/C}(d_1, ..., d_n)``; this module converts
between the two and evaluates smoothness and fiber multiplicity.

The base field is assumed to have characteristic 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Sequence

from .errors import HypothesisNotMet, InvalidChart, InvalidLocalData, StructuralError
from .exactmath import (
    FpAbelianGroup,
    GroupElement,
    element_generates,
    gcd_all,
    inverse_mod,
    lcm_all,
)


@dataclass(frozen=True)
class CyclicChart:
    """``A^n / mu_M(a_1, ..., a_n)``; weights are stored as residues mod M."""

    M: int
    weights: tuple[int, ...]

    def __post_init__(self):
        if self.M < 1:
            raise InvalidChart(f"group order must be positive, got {self.M}")
        if len(self.weights) < 1:
            raise InvalidChart("a chart needs at least one coordinate")
        w = tuple(int(a) % self.M for a in self.weights)
        object.__setattr__(self, "weights", w)
        if gcd_all(w + (self.M,)) != 1:
            raise InvalidChart(f"gcd{w + (self.M,)} != 1")

    @property
    def n(self) -> int:
        return len(self.weights)

    def rescaled(self, s: int) -> CyclicChart:
        """The isomorphic chart with the generator of mu_M changed by ``s``."""
        if math.gcd(s, self.M) != 1:
            raise ValueError("rescaling factor must be a unit mod M")
        return CyclicChart(self.M, tuple(s * a for a in self.weights))


@dataclass(frozen=True)
class ReducedChart:
    """A chart with its quasi-reflections divided out.

    ``c_i`` is the order of the subgroup acting only on the i-th coordinate,
    ``C`` their product and the source is isomorphic, as a variety, to
    ``A^n / mu_{Mred}(d_1, ..., d_n)`` with ``Mred = M / C``. The ``d_i`` are
    kept as exact integers ``a_i c_i / C`` (so ``0 <= d_i < Mred * c_i``).
    """

    source: CyclicChart
    c: tuple[int, ...]
    C: int
    d: tuple[int, ...]
    Mred: int

    @property
    def n(self) -> int:
        return len(self.c)

    def divisor_class(self, j: int) -> int:
        """Class of the j-th coordinate divisor in ``Cl = Z/Mred``."""
        if not 0 <= j < self.n:
            raise StructuralError(f"coordinate index {j} out of range")
        return self.d[j] % self.Mred

    @classmethod
    def from_reduced(cls, Mred: int, d: Sequence[int], c: Sequence[int]) -> ReducedChart:
        """Rebuild the chart ``A^n / mu_{Mred * prod c}(d_i * C / c_i)``.

        ``d_i`` is read modulo ``Mred * c_i``. Raises InvalidLocalData when the
        data is not the reduction of any cyclic chart.
        """
        if Mred < 1 or any(ci < 1 for ci in c) or len(c) != len(d) or not c:
            raise InvalidLocalData("need Mred >= 1, c_i >= 1 and matching non-empty d, c")
        c = tuple(c)
        for i, j in product(range(len(c)), repeat=2):
            if i < j and math.gcd(c[i], c[j]) != 1:
                raise InvalidLocalData(f"c_{i}={c[i]} and c_{j}={c[j]} are not coprime")
        d = tuple(di % (Mred * ci) for di, ci in zip(d, c))
        C = math.prod(c)
        M = Mred * C
        try:
            chart = CyclicChart(M, tuple(di * C // ci for di, ci in zip(d, c)))
        except InvalidChart as exc:
            raise InvalidLocalData(f"reconstructed weights are not a valid chart: {exc}") from None
        rc = reduce_chart(chart)
        if rc.c != c or rc.d != d:
            raise InvalidLocalData(
                f"(Mred={Mred}, d={d}, c={c}) is not the reduction of {chart} "
                f"(which reduces to c={rc.c}, d={rc.d})"
            )
        return rc


@dataclass(frozen=True)
class QuotientPresentation:
    """``G_m x A^n / mu_M(r, a_1, ..., a_n)`` over ``A^n / mu_M(a_1, ..., a_n)``."""

    r: int
    chart: CyclicChart

    def __post_init__(self):
        object.__setattr__(self, "r", int(self.r) % self.chart.M)


@dataclass(frozen=True)
class LocalSeifertData:
    """``Y(O_X(l), sum (b_i/c_i) D_i)`` over a reduced chart."""

    reduced: ReducedChart
    l: int
    b: tuple[int, ...]

    def __post_init__(self):
        if len(self.b) != self.reduced.n:
            raise InvalidLocalData("one b_i per coordinate divisor is required")
        for bi, ci in zip(self.b, self.reduced.c):
            if not 0 <= bi < ci:
                raise InvalidLocalData(f"need 0 <= b_i < c_i, got b={bi}, c={ci}")
        object.__setattr__(self, "l", int(self.l) % self.reduced.Mred)
        object.__setattr__(self, "b", tuple(self.b))

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(bi, ci) for bi, ci in zip(self.b, self.reduced.c))


@lru_cache(maxsize=1 << 16)
def reduce_chart(chart: CyclicChart) -> ReducedChart:
    """Divide out quasi-reflections: ``c_i = gcd(a_1..^a_i..a_n, M)``, ``d_i = a_i c_i / C``."""
    a, M = chart.weights, chart.M
    c = tuple(gcd_all(a[:i] + a[i + 1:] + (M,)) for i in range(len(a)))
    C = math.prod(c)
    d = tuple(ai * ci // C for ai, ci in zip(a, c))
    return ReducedChart(source=chart, c=c, C=C, d=d, Mred=M // C)


def decompose_residue(chart: CyclicChart, r: int) -> tuple[int, tuple[int, ...]]:
    """The unique ``(l, b)`` with ``r = l*C + sum a_i b_i (mod M)`` and ``0 <= b_i < c_i``.

    ``b_i`` solves ``a_i b_i = r (mod c_i)`` (every other ``a_j`` is divisible by
    ``c_i``), then ``l`` is what remains divided by ``C``.
    """
    rc = reduce_chart(chart)
    M, a = chart.M, chart.weights
    b = tuple((r * inverse_mod(ai, ci)) % ci for ai, ci in zip(a, rc.c))
    rest = (r - sum(ai * bi for ai, bi in zip(a, b))) % M
    assert rest % rc.C == 0
    return (rest // rc.C) % rc.Mred, b


def to_seifert(qp: QuotientPresentation) -> LocalSeifertData:
    rc = reduce_chart(qp.chart)
    l, b = decompose_residue(qp.chart, qp.r)
    return LocalSeifertData(rc, l, b)


def to_quotient(lsd: LocalSeifertData) -> QuotientPresentation:
    rc = lsd.reduced
    chart = rc.source
    # re-derive the reduction so hand-built charts are checked too
    if reduce_chart(chart) != rc:
        raise InvalidLocalData("reduced chart is inconsistent with its source")
    r = lsd.l * rc.C + sum(ai * bi for ai, bi in zip(chart.weights, lsd.b))
    return QuotientPresentation(r, chart)


def quotient_is_smooth(qp: QuotientPresentation) -> bool:
    """Total space is smooth iff ``gcd(r, M) = 1``, or ``r = 0`` over a smooth base."""
    if math.gcd(qp.r, qp.chart.M) == 1:
        return True
    return qp.r == 0 and reduce_chart(qp.chart).Mred == 1


def _check_coprime_numerators(b, c):
    for bi, ci in zip(b, c):
        if math.gcd(bi, ci) != 1:
            raise HypothesisNotMet(f"smoothness criterion needs gcd(b_i, c_i) = 1, got {bi}/{ci}")


def smooth_class(Mred: int, d: Sequence[int], l: int, b: Sequence[int], c: Sequence[int]) -> int:
    """``l * prod c + sum_i (prod_{j != i} c_j) b_i d_i`` modulo ``Mred``.

    This is the local class of ``(prod c_i) c_1(Y/X)`` in ``Cl(X) = Z/Mred``.
    """
    C = math.prod(c)
    return (l * C + sum((C // ci) * bi * di for bi, ci, di in zip(b, c, d))) % Mred


def local_is_smooth(Mred: int, d: Sequence[int], l: int, b: Sequence[int], c: Sequence[int]) -> bool:
    """Smoothness of ``Y(O(l), sum (b_i/c_i) D_i)`` over ``A^n / mu_Mred(d)``.

    The c_i must be pairwise coprime and the local class of
    ``(prod c_i) c_1`` must be a unit mod ``Mred``. Requires ``gcd(b_i, c_i) = 1``.
    """
    _check_coprime_numerators(b, c)
    if any(math.gcd(c[i], c[j]) != 1 for i in range(len(c)) for j in range(i + 1, len(c))):
        return False
    return math.gcd(smooth_class(Mred, d, l, b, c), Mred) == 1


def seifert_is_smooth(lsd: LocalSeifertData, cross_check: bool = False) -> bool:
    """Arithmetic smoothness test; ``cross_check`` also runs the class group test."""
    rc = lsd.reduced
    result = local_is_smooth(rc.Mred, rc.d, lsd.l, lsd.b, rc.c)
    if cross_check:
        other = smooth_by_generator(lsd)
        if other != result:
            raise AssertionError(f"smoothness criteria disagree on {lsd}")
    return result


def smooth_by_generator(lsd: LocalSeifertData) -> bool:
    """Smoothness via the class group: the c_i are pairwise coprime and
    ``O_X(l prod c)(sum (prod_{j != i} c_j) b_i D_i)`` generates ``Cl(X)``."""
    rc = lsd.reduced
    _check_coprime_numerators(lsd.b, rc.c)
    if any(math.gcd(x, y) != 1 for i, x in enumerate(rc.c) for y in rc.c[i + 1:]):
        return False
    C = rc.C
    k = lsd.l * C + sum((C // cj) * bj * rc.divisor_class(j) for j, (bj, cj) in enumerate(zip(lsd.b, rc.c)))
    return _generates(rc.Mred, k % rc.Mred)


@lru_cache(maxsize=1 << 14)
def _generates(m: int, k: int) -> bool:
    G = _cyclic(m)
    return element_generates(G.element([k]), G)


@lru_cache(maxsize=None)
def _cyclic(m: int) -> FpAbelianGroup:
    return FpAbelianGroup.cyclic(m)


def local_class_group(rc: ReducedChart) -> FpAbelianGroup:
    """``Cl(A^n / mu_Mred(d)) = Z/Mred``, generated by ``O_X(1)``."""
    return _cyclic(rc.Mred)


def local_divisor_class(rc: ReducedChart, j: int) -> GroupElement:
    """``[D_j] = O_X(d_j)`` in the local class group."""
    return local_class_group(rc).element([rc.divisor_class(j)])


def local_chern(rc: ReducedChart, cls: GroupElement) -> int:
    """Local Chern class: the residue mod Mred of a local class."""
    G = local_class_group(rc)
    if not G.same_presentation(cls.group):
        raise StructuralError("class does not belong to this chart's class group")
    return cls.coordinates[0] % rc.Mred


def local_multiplicity(Mred: int, d: Sequence[int], l: int, b: Sequence[int], c: Sequence[int]) -> int:
    """Fiber multiplicity over the chart center.

    Smallest ``m`` such that ``m b_i / c_i`` is integral for every i and
    ``m l + sum (m b_i / c_i) d_i = 0 (mod Mred)``.
    """
    base = lcm_all(ci // math.gcd(bi, ci) for bi, ci in zip(b, c))
    for k in range(1, Mred + 1):
        m = base * k
        if (m * l + sum(m * bi // ci * di for bi, ci, di in zip(b, c, d))) % Mred == 0:
            return m
    raise AssertionError("unreachable: the local class group has order Mred")


def multiplicity_at_center(lsd: LocalSeifertData) -> int:
    rc = lsd.reduced
    return local_multiplicity(rc.Mred, rc.d, lsd.l, lsd.b, rc.c)


def charts_equivalent(x: CyclicChart, y: CyclicChart) -> bool:
    """Whether ``y`` is ``x`` with the generator of mu_M changed (test helper)."""
    if x.M != y.M or x.n != y.n:
        return False
    return any(
        x.rescaled(s) == y for s in range(1, x.M + 1) if math.gcd(s, x.M) == 1
    )
