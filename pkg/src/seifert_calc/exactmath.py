"""Exact integer arithmetic: gcd/CRT, integer matrices, Smith normal form and
finitely presented abelian groups.

Everything here works with Python integers (arbitrary precision) and
:class:`fractions.Fraction`; no floating point is used anywhere.

Convention for presentations: a relation matrix has one row per relation and
one column per generator, so the group is ``Z^cols / (row lattice)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Sequence

from .errors import DimensionMismatch

Rat = Fraction


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``g = gcd(|a|, |b|) >= 0`` and ``a*x + b*y = g``."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    if old_r == 0:
        return 0, 0, 0
    return old_r, old_x, old_y


def inverse_mod(a: int, m: int) -> int:
    """Inverse of ``a`` modulo ``m`` in ``[0, m)``; ValueError if not a unit."""
    if m == 1:
        return 0
    g, x, _ = ext_gcd(a % m, m)
    if g != 1:
        raise ValueError(f"{a} is not invertible modulo {m}")
    return x % m


def gcd_all(values: Iterable[int]) -> int:
    """Non-negative gcd; the gcd of an empty collection is 0."""
    return math.gcd(*values)


def lcm_all(values: Iterable[int]) -> int:
    """lcm of the values; the lcm of an empty collection is 1."""
    return reduce(math.lcm, values, 1)


def crt_solve(congruences: Sequence[tuple[int, int]]) -> tuple[int, int] | None:
    """Solve ``x = r_i (mod m_i)`` for all i.

    Moduli need not be coprime. Returns ``(x, lcm)`` with ``0 <= x < lcm``, or
    ``None`` when the system is inconsistent.
    """
    x, m = 0, 1
    for r, mod in congruences:
        if mod < 1:
            raise ValueError("moduli must be positive")
        g, p, _ = ext_gcd(m, mod)
        diff = r - x
        if diff % g:
            return None
        step = mod // g
        # x + m*t = r (mod mod)  =>  t = (diff/g) * p  (mod mod/g)
        t = (diff // g) * p % step
        x += m * t
        m *= step
        x %= m
    return x, m


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch("negative matrix dimension")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionMismatch("entries do not match the declared shape")
        for row in self.entries:
            for v in row:
                if isinstance(v, bool) or not isinstance(v, int):
                    raise TypeError(f"matrix entries must be integers, got {v!r}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [tuple(r) for r in rows]
        if cols is None:
            if not rows:
                raise DimensionMismatch("column count needed for a matrix without rows")
            cols = len(rows[0])
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        ocols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix(
            self.rows,
            other.cols,
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in ocols) for row in self.entries),
        )

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)))

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def stack(self, extra_rows: Sequence[Sequence[int]]) -> IntMatrix:
        """Return this matrix with ``extra_rows`` appended below."""
        extra = tuple(tuple(r) for r in extra_rows)
        if any(len(r) != self.cols for r in extra):
            raise DimensionMismatch("appended row has the wrong length")
        return IntMatrix(self.rows + len(extra), self.cols, self.entries + extra)

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.entries[i][i] for i in range(min(self.rows, self.cols)))

    def is_diagonal(self) -> bool:
        return all(v == 0 for i, row in enumerate(self.entries) for j, v in enumerate(row) if i != j)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise DimensionMismatch("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_lists()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def inverse(self) -> IntMatrix:
        """Inverse of a unimodular matrix (ValueError otherwise)."""
        if self.rows != self.cols:
            raise DimensionMismatch("inverse of a non-square matrix")
        n = self.rows
        aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(self.entries)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
            if piv is None:
                raise ValueError("matrix is singular")
            aug[col], aug[piv] = aug[piv], aug[col]
            p = aug[col][col]
            aug[col] = [v / p for v in aug[col]]
            for r in range(n):
                if r != col and aug[r][col] != 0:
                    f = aug[r][col]
                    aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
        out = []
        for row in aug:
            inv_row = row[n:]
            if any(v.denominator != 1 for v in inv_row):
                raise ValueError("matrix is not unimodular")
            out.append(tuple(int(v) for v in inv_row))
        return IntMatrix(n, n, tuple(out))


def row_times(vec: Sequence[int], mat: IntMatrix) -> tuple[int, ...]:
    """Row vector times matrix."""
    if len(vec) != mat.rows:
        raise DimensionMismatch("vector length does not match matrix rows")
    return tuple(sum(v * mat.entries[i][j] for i, v in enumerate(vec)) for j in range(mat.cols))


@dataclass(frozen=True)
class SmithDecomposition:
    """``U * A * V == S`` with U, V unimodular and S diagonal with d_1 | d_2 | ...

    ``invariant_factors`` lists the nonzero diagonal entries (units included);
    the cokernel ``Z^cols / rows(A)`` is then ``Z^free_rank`` plus ``Z/d`` for
    every ``d > 1`` in ``torsion``.
    """

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def free_rank(self) -> int:
        return self.S.cols - self.rank

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d > 1)


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form with smallest-absolute-value pivoting."""
    m, n = A.rows, A.cols
    S = A.to_lists()
    U = IntMatrix.identity(m).to_lists()
    V = IntMatrix.identity(n).to_lists()

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M_ in (S, V):
            for row in M_:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        # row dst += k * row src
        S[dst] = [a + k * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for M_ in (S, V):
            for row in M_:
                row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = S[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = S[t][t]
            for i in range(t + 1, m):
                q = S[i][t] // p
                if q:
                    add_row(i, t, -q)
            for j in range(t + 1, n):
                q = S[t][j] // p
                if q:
                    add_col(j, t, -q)
            # a nonzero remainder is smaller than the pivot: make it the new pivot
            cand = [(abs(S[i][t]), i, t) for i in range(t + 1, m) if S[i][t]]
            cand += [(abs(S[t][j]), t, j) for j in range(t + 1, n) if S[t][j]]
            if cand:
                _, i, j = min(cand)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if S[t][t] < 0:
            S[t] = [-v for v in S[t]]
            U[t] = [-v for v in U[t]]
        t += 1

    factors = tuple(S[i][i] for i in range(t))
    return SmithDecomposition(
        U=IntMatrix.from_rows(U, cols=m),
        S=IntMatrix.from_rows(S, cols=n),
        V=IntMatrix.from_rows(V, cols=n),
        invariant_factors=factors,
    )


def format_normal_form(free_rank: int, torsion: Sequence[int]) -> str:
    """Render as ``Z^r + Z/d1 + ...`` using the usual symbols; ``0`` if trivial."""
    parts = []
    if free_rank == 1:
        parts.append("ℤ")
    elif free_rank > 1:
        parts.append(f"ℤ^{free_rank}")
    parts.extend(f"ℤ/{d}" for d in torsion)
    return " ⊕ ".join(parts) if parts else "0"


@dataclass(frozen=True, eq=False)
class FpAbelianGroup:
    """Finitely presented abelian group ``Z^num_generators / rows(relations)``.

    Two groups compare equal when they are isomorphic, i.e. when their normal
    forms (free rank and torsion invariant factors) agree.
    """

    num_generators: int
    relations: IntMatrix
    free_rank: int = field(init=False)
    torsion: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if self.relations.cols != self.num_generators:
            raise DimensionMismatch("relation matrix must have one column per generator")
        snf = self.smith
        object.__setattr__(self, "free_rank", snf.free_rank)
        object.__setattr__(self, "torsion", snf.torsion)

    @cached_property
    def smith(self) -> SmithDecomposition:
        return smith_normal_form(self.relations)

    @cached_property
    def _v_inverse(self) -> IntMatrix:
        return self.smith.V.inverse()

    @classmethod
    def free(cls, n: int) -> FpAbelianGroup:
        return cls(n, IntMatrix.zeros(0, n))

    @classmethod
    def cyclic(cls, m: int) -> FpAbelianGroup:
        """``Z/m`` on one generator (``m = 0`` gives ``Z``)."""
        return cls(1, IntMatrix.from_rows([[m]]))

    def __eq__(self, other):
        if not isinstance(other, FpAbelianGroup):
            return NotImplemented
        return self.normal_form == other.normal_form

    def __hash__(self):
        return hash(self.normal_form)

    def __repr__(self):
        return f"FpAbelianGroup({self})"

    def __str__(self):
        return format_normal_form(self.free_rank, self.torsion)

    @property
    def normal_form(self) -> tuple[int, tuple[int, ...]]:
        return self.free_rank, self.torsion

    def same_presentation(self, other: FpAbelianGroup) -> bool:
        return self is other or (
            self.num_generators == other.num_generators and self.relations == other.relations
        )

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def order(self) -> int | None:
        """Group order, or None when the group is infinite."""
        if self.free_rank:
            return None
        return math.prod(self.torsion)

    def exponent(self) -> int | None:
        if self.free_rank:
            return None
        return lcm_all(self.torsion)

    def element(self, coords: Sequence[int]) -> GroupElement:
        return GroupElement(self, tuple(coords))

    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * self.num_generators)

    def generator(self, i: int) -> GroupElement:
        return GroupElement(self, tuple(int(j == i) for j in range(self.num_generators)))

    def _check(self, g: GroupElement):
        if not self.same_presentation(g.group):
            raise DimensionMismatch("element belongs to a different presentation")

    def _smith_coords(self, g: GroupElement) -> tuple[int, ...]:
        self._check(g)
        return row_times(g.coordinates, self.smith.V)

    def normal_coordinates(self, g: GroupElement) -> tuple[int, ...]:
        """Coordinates in the normal form: torsion residues first, then free part."""
        return self.torsion_coordinates(g) + self.free_coordinates(g)

    def torsion_coordinates(self, g: GroupElement) -> tuple[int, ...]:
        y = self._smith_coords(g)
        return tuple(y[k] % d for k, d in enumerate(self.smith.invariant_factors) if d > 1)

    def free_coordinates(self, g: GroupElement) -> tuple[int, ...]:
        y = self._smith_coords(g)
        return tuple(y[self.smith.rank:])

    def from_normal_coordinates(self, coords: Sequence[int]) -> GroupElement:
        """Inverse of :meth:`normal_coordinates` (up to equality in the group)."""
        nt = len(self.torsion)
        if len(coords) != nt + self.free_rank:
            raise DimensionMismatch("wrong number of normal-form coordinates")
        it = iter(coords[:nt])
        y = [next(it) if d > 1 else 0 for d in self.smith.invariant_factors]
        y.extend(coords[nt:])
        return GroupElement(self, row_times(y, self._v_inverse))

    def is_zero(self, g: GroupElement) -> bool:
        return not any(self.normal_coordinates(g))

    def order_of(self, g: GroupElement) -> int | None:
        """Order of ``g``; None if it has infinite order."""
        if any(self.free_coordinates(g)):
            return None
        tors = [d for d in self.smith.invariant_factors if d > 1]
        return lcm_all(d // math.gcd(y, d) for y, d in zip(self.torsion_coordinates(g), tors))

    def quotient(self, elements: Iterable[GroupElement]) -> FpAbelianGroup:
        """``G / <elements>`` on the same generators."""
        rows = []
        for g in elements:
            self._check(g)
            rows.append(g.coordinates)
        return FpAbelianGroup(self.num_generators, self.relations.stack(rows))


@dataclass(frozen=True, eq=False)
class GroupElement:
    """Element of an :class:`FpAbelianGroup`, given by generator coordinates.

    Equality is equality of classes in the group, so different coordinate
    vectors can compare equal.
    """

    group: FpAbelianGroup
    coordinates: tuple[int, ...]

    def __post_init__(self):
        if len(self.coordinates) != self.group.num_generators:
            raise DimensionMismatch(
                f"element has {len(self.coordinates)} coordinates, group has "
                f"{self.group.num_generators} generators"
            )
        object.__setattr__(self, "coordinates", tuple(int(c) for c in self.coordinates))

    def _other(self, other):
        if not isinstance(other, GroupElement):
            return None
        if not self.group.same_presentation(other.group):
            raise DimensionMismatch("elements of different groups")
        return other

    def __add__(self, other):
        if self._other(other) is None:
            return NotImplemented
        return GroupElement(self.group, tuple(a + b for a, b in zip(self.coordinates, other.coordinates)))

    def __sub__(self, other):
        if self._other(other) is None:
            return NotImplemented
        return GroupElement(self.group, tuple(a - b for a, b in zip(self.coordinates, other.coordinates)))

    def __neg__(self):
        return GroupElement(self.group, tuple(-a for a in self.coordinates))

    def __mul__(self, k):
        if isinstance(k, bool) or not isinstance(k, int):
            return NotImplemented
        return GroupElement(self.group, tuple(k * a for a in self.coordinates))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        if not self.group.same_presentation(other.group):
            return False
        return self.group.is_zero(self - other)

    def __hash__(self):
        return hash(self.group.normal_coordinates(self))

    def __repr__(self):
        return f"GroupElement({list(self.coordinates)} in {self.group})"

    def is_zero(self) -> bool:
        return self.group.is_zero(self)


def cokernel(relations: IntMatrix, num_generators: int | None = None) -> FpAbelianGroup:
    """The group ``Z^n / rows(relations)``."""
    n = relations.cols if num_generators is None else num_generators
    return FpAbelianGroup(n, relations)


def sum_elements(elements: Iterable[GroupElement], group: FpAbelianGroup) -> GroupElement:
    total = group.zero()
    for g in elements:
        total = total + g
    return total


def element_generates(g: GroupElement, G: FpAbelianGroup) -> bool:
    """True iff the cyclic subgroup generated by ``g`` is all of ``G``."""
    G._check(g)
    return G.quotient([g]).is_trivial()


def subgroup_membership(g: GroupElement, H: Sequence[GroupElement], G: FpAbelianGroup) -> bool:
    """True iff ``g`` lies in the subgroup of ``G`` generated by ``H``.

    Solved as an integer linear system: ``g`` must be in the row lattice of
    ``[H; relations]``, which is read off the Smith form of that matrix.
    """
    G._check(g)
    for h in H:
        G._check(h)
    lattice = IntMatrix.from_rows([h.coordinates for h in H], cols=G.num_generators).stack(
        G.relations.entries
    )
    snf = smith_normal_form(lattice)
    y = row_times(g.coordinates, snf.V)
    for k, v in enumerate(y):
        d = snf.invariant_factors[k] if k < snf.rank else 0
        if d == 0:
            if v:
                return False
        elif v % d:
            return False
    return True
