"""Global Seifert G_m-bundles ``Y(L, sum s_i D_i)`` over a declared base.

The base is described purely by data: its class group with a Picard subgroup,
a list of prime divisors with their classes, the canonical class, and marked
points carrying cyclic quotient charts. Local freeness of a rank one sheaf is
modelled as membership in the Picard subgroup (globally) and vanishing under
each marked point's restriction map (locally). Results such as the global
order are only as complete as the declared data: marked points must include
every singular point of X for them to be exact.

Coefficients are stored as reduced fractions ``b_i/c_i`` with ``0 <= b_i < c_i``;
a divisor outside the branch set carries ``(0, 1)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    DimensionMismatch,
    PreconditionFailed,
    StructuralError,
    ValidationRequired,
)
from .exactmath import FpAbelianGroup, GroupElement, IntMatrix, lcm_all, subgroup_membership
from .localmodel import ReducedChart, local_is_smooth, local_multiplicity


@dataclass(frozen=True)
class Divisor:
    name: str
    cls: GroupElement


@dataclass(frozen=True)
class MarkedPoint:
    """A point of X with a cyclic quotient chart ``A^n / mu_Mred(d)``.

    ``restriction[g]`` is the image of the g-th generator of Cl(X) in the local
    class group ``Z/Mred``. ``incident_divisors`` maps a divisor index to the
    coordinate divisor of the chart it restricts to.
    """

    name: str
    chart: ReducedChart
    restriction: tuple[int, ...]
    incident_divisors: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "restriction", tuple(int(v) % self.chart.Mred for v in self.restriction))
        inc = tuple(sorted((int(i), int(j)) for i, j in dict(self.incident_divisors).items()))
        object.__setattr__(self, "incident_divisors", inc)
        locals_used = [j for _, j in inc]
        if len(set(locals_used)) != len(locals_used):
            raise StructuralError(f"point {self.name}: two divisors on one coordinate divisor")
        if any(not 0 <= j < self.chart.n for j in locals_used):
            raise StructuralError(f"point {self.name}: coordinate index out of range")

    @property
    def order(self) -> int:
        return self.chart.Mred

    def restrict(self, g: GroupElement) -> int:
        if len(g.coordinates) != len(self.restriction):
            raise DimensionMismatch(f"point {self.name}: restriction map has the wrong length")
        return sum(x * y for x, y in zip(g.coordinates, self.restriction)) % self.order


@dataclass(frozen=True)
class BaseVariety:
    clX: FpAbelianGroup
    picX: tuple[GroupElement, ...]
    divisors: tuple[Divisor, ...]
    canonical_class: GroupElement
    ample_direction: GroupElement | None = None
    marked_points: tuple[MarkedPoint, ...] = ()
    intersections: frozenset = field(default_factory=frozenset)
    generator_names: tuple[str, ...] | None = None

    def __post_init__(self):
        for attr in ("picX", "divisors", "marked_points"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))
        G = self.clX
        classes = list(self.picX) + [D.cls for D in self.divisors] + [self.canonical_class]
        if self.ample_direction is not None:
            classes.append(self.ample_direction)
        for g in classes:
            if not G.same_presentation(g.group):
                raise StructuralError("class does not belong to Cl(X)")
        names = [D.name for D in self.divisors]
        if len(set(names)) != len(names):
            raise StructuralError("divisor names must be unique")
        if self.generator_names is not None and len(self.generator_names) != G.num_generators:
            raise StructuralError("one name per Cl(X) generator is required")
        if self.ample_direction is not None:
            if G.free_rank != 1 or G.free_coordinates(self.ample_direction)[0] not in (1, -1):
                raise StructuralError("ample direction must generate Cl(X)/torsion of rank 1")
        pairs = set()
        for pair in self.intersections:
            i, j = sorted(pair)
            if i == j or not (0 <= i < len(names) and 0 <= j < len(names)):
                raise StructuralError(f"bad intersection pair {pair}")
            pairs.add(frozenset((i, j)))
        object.__setattr__(self, "intersections", frozenset(pairs))
        pnames = [p.name for p in self.marked_points]
        if len(set(pnames)) != len(pnames):
            raise StructuralError("marked point names must be unique")
        for p in self.marked_points:
            self._check_point(p)

    def _check_point(self, p: MarkedPoint):
        G = self.clX
        if len(p.restriction) != G.num_generators:
            raise StructuralError(f"point {p.name}: one restriction value per Cl(X) generator")
        for row in G.relations.entries:
            if sum(x * y for x, y in zip(row, p.restriction)) % p.order:
                raise StructuralError(f"point {p.name}: restriction does not kill relation {list(row)}")
        for i, j in p.incident_divisors:
            if not 0 <= i < len(self.divisors):
                raise StructuralError(f"point {p.name}: divisor index {i} out of range")
            if p.restrict(self.divisors[i].cls) != p.chart.divisor_class(j):
                raise StructuralError(
                    f"point {p.name}: [{self.divisors[i].name}] restricts to "
                    f"{p.restrict(self.divisors[i].cls)}, chart divisor has class {p.chart.divisor_class(j)}"
                )

    def divisor_index(self, name: str) -> int:
        for i, D in enumerate(self.divisors):
            if D.name == name:
                return i
        raise StructuralError(f"unknown divisor {name!r}")

    def point(self, name: str) -> MarkedPoint:
        for p in self.marked_points:
            if p.name == name:
                return p
        raise StructuralError(f"unknown marked point {name!r}")

    def in_picard(self, g: GroupElement) -> bool:
        return subgroup_membership(g, self.picX, self.clX)

    def gen_names(self) -> tuple[str, ...]:
        if self.generator_names is not None:
            return self.generator_names
        return tuple(f"e{i}" for i in range(self.clX.num_generators))


@dataclass(frozen=True, eq=False)
class QClass:
    """``numerator / denominator`` in ``Cl(X) (x) Q``.

    Equality is equality in ``Cl(X) (x) Q``, where torsion dies. The integral
    multiples ``k * c_1`` that keep torsion are computed from Seifert data by
    :func:`chern_multiple`.
    """

    numerator: GroupElement
    denominator: int

    def __post_init__(self):
        if self.denominator < 1:
            raise ValueError("denominator must be positive")

    @property
    def group(self) -> FpAbelianGroup:
        return self.numerator.group

    def free_part(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, self.denominator) for v in self.group.free_coordinates(self.numerator))

    def is_zero(self) -> bool:
        return not any(self.free_part())

    def __eq__(self, other):
        if not isinstance(other, QClass):
            return NotImplemented
        if not self.group.same_presentation(other.group):
            return False
        return self.free_part() == other.free_part()

    def __hash__(self):
        return hash(self.free_part())

    def __mul__(self, k):
        if isinstance(k, bool) or not isinstance(k, int):
            return NotImplemented
        return QClass(self.numerator * k, self.denominator)

    __rmul__ = __mul__

    def __neg__(self):
        return QClass(-self.numerator, self.denominator)

    def __str__(self):
        return "(" + ", ".join(str(v) for v in self.free_part()) + ")"


@dataclass(frozen=True)
class SeifertData:
    """``Y(L, sum (b_i/c_i) D_i)`` over ``base``; one ``(b, c)`` per base divisor."""

    base: BaseVariety
    L: GroupElement
    coeffs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        coeffs = tuple((int(b), int(c)) for b, c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if not self.base.clX.same_presentation(self.L.group):
            raise StructuralError("[L] must be a class in Cl(X)")
        if len(coeffs) != len(self.base.divisors):
            raise StructuralError("one coefficient per base divisor is required")
        for b, c in coeffs:
            if c < 1 or not 0 <= b < c or math.gcd(b, c) != 1:
                raise StructuralError(f"coefficient {b}/{c} must be reduced with 0 <= b < c")

    @property
    def fractions(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(b, c) for b, c in self.coeffs)

    @property
    def branch_indices(self) -> tuple[int, ...]:
        return tuple(i for i, (_, c) in enumerate(self.coeffs) if c > 1)

    @property
    def branch_lcm(self) -> int:
        return lcm_all(c for _, c in self.coeffs)

    def orbifold_divisor(self) -> tuple[Fraction, ...]:
        """Coefficients ``1 - 1/c_i`` of the branch divisor."""
        return tuple(1 - Fraction(1, c) for _, c in self.coeffs)

    def with_L(self, L: GroupElement) -> SeifertData:
        return SeifertData(self.base, L, self.coeffs)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate`.

    ``picard_order`` is the least M > 0 with every ``M b_i / c_i`` integral and
    ``M[L] + sum (M b_i / c_i)[D_i]`` in Pic(X), or None if there is none
    (within ``bound`` when one was given).
    """

    picard_order: int | None
    bound: int | None
    coprime_pairs: tuple[tuple[str, str, int, int, bool], ...]
    point_checks: tuple[tuple[str, bool, str], ...]

    @property
    def valid(self) -> bool:
        return (
            self.picard_order is not None
            and all(p[-1] for p in self.coprime_pairs)
            and all(ok for _, ok, _ in self.point_checks)
        )

    def failures(self) -> list[str]:
        out = []
        if self.picard_order is None:
            extra = f" up to {self.bound}" if self.bound is not None else ""
            out.append(f"no multiple of c_1 is a Picard class{extra}")
        for a, b, ca, cb, ok in self.coprime_pairs:
            if not ok:
                out.append(f"intersecting divisors {a}, {b} have non-coprime multiplicities {ca}, {cb}")
        out.extend(f"point {name}: {msg}" for name, ok, msg in self.point_checks if not ok)
        return out


def chern_multiple(sd: SeifertData, k: int) -> GroupElement:
    """The integral class ``k * c_1(Y/X) = k[L] + sum (k b_i / c_i)[D_i]``.

    Defined before tensoring with Q, so torsion is kept; needs every c_i | k.
    """
    if k < 1 or any(k % c for _, c in sd.coeffs):
        raise ValueError(f"{k} is not a multiple of every c_i")
    total = sd.L * k
    for (b, c), D in zip(sd.coeffs, sd.base.divisors):
        if b:
            total = total + D.cls * (k * b // c)
    return total


def _picard_order(sd: SeifertData, bound: int | None) -> int | None:
    # M must be a multiple of m = lcm(c_i), and the class at M = k*m is k times the class at m.
    m = sd.branch_lcm
    Q = sd.base.clX.quotient(sd.base.picX)
    x = chern_multiple(sd, m)
    k = Q.order_of(Q.element(x.coordinates))
    if k is None:
        return None
    M = m * k
    if bound is not None and M > bound:
        return None
    return M


def validate(sd: SeifertData, bound: int | None = None) -> ValidationReport:
    base = sd.base
    pairs = []
    for pair in sorted(tuple(sorted(p)) for p in base.intersections):
        i, j = pair
        ci, cj = sd.coeffs[i][1], sd.coeffs[j][1]
        pairs.append((base.divisors[i].name, base.divisors[j].name, ci, cj, math.gcd(ci, cj) == 1))
    points = []
    for p in base.marked_points:
        bad = [k for k, g in enumerate(base.picX) if p.restrict(g)]
        if bad:
            points.append((p.name, False, f"Picard generators {bad} do not restrict to 0"))
        else:
            points.append((p.name, True, "restriction consistent"))
    return ValidationReport(_picard_order(sd, bound), bound, tuple(pairs), tuple(points))


def _require_valid(sd: SeifertData) -> ValidationReport:
    report = validate(sd)
    if not report.valid:
        raise ValidationRequired("; ".join(report.failures()))
    return report


def chern_class(sd: SeifertData) -> QClass:
    """``c_1(Y/X) = c_1(L) + sum s_i [D_i]`` with denominator ``lcm(c_i)``."""
    m = sd.branch_lcm
    return QClass(chern_multiple(sd, m), m)


def quotient_by_mu(sd: SeifertData, M: int) -> SeifertData:
    """Seifert data of ``Y / mu_M``; its Chern class is ``M * c_1(Y/X)``."""
    if M < 1:
        raise ValueError("M must be a positive integer")
    L = sd.L * M
    coeffs = []
    for (b, c), D in zip(sd.coeffs, sd.base.divisors):
        q, rem = divmod(M * b, c)
        if q:
            L = L + D.cls * q
        s = Fraction(rem, c)
        coeffs.append((s.numerator, s.denominator))
    return SeifertData(sd.base, L, tuple(coeffs))


def _local_data(sd: SeifertData, p: MarkedPoint):
    if p not in sd.base.marked_points:
        raise StructuralError(f"point {p.name} is not a marked point of the base")
    n = p.chart.n
    b, c = [0] * n, [1] * n
    for i, j in p.incident_divisors:
        b[j], c[j] = sd.coeffs[i]
    d = tuple(p.chart.divisor_class(j) for j in range(n))
    return p.order, d, p.restrict(sd.L), tuple(b), tuple(c)


def multiplicity_at(sd: SeifertData, p: MarkedPoint) -> int:
    """Multiplicity of the Seifert fiber over the marked point ``p``."""
    return local_multiplicity(*_local_data(sd, p))


def is_smooth_over(sd: SeifertData, p: MarkedPoint) -> bool:
    """Whether the total space is smooth along the fiber over ``p``."""
    return local_is_smooth(*_local_data(sd, p))


def global_order(sd: SeifertData) -> int:
    """m(X) relative to the declared data: the lcm of all fiber multiplicities."""
    report = _require_valid(sd)
    values = [c for _, c in sd.coeffs]
    values += [multiplicity_at(sd, p) for p in sd.base.marked_points]
    values.append(report.picard_order)
    return lcm_all(values)


@dataclass(frozen=True)
class ClassGroupY:
    """Presentation of Cl(Y): generators of Cl(X) followed by one ``D^Y_i`` per
    branch divisor."""

    group: FpAbelianGroup
    labels: tuple[str, ...]
    branch: tuple[int, ...]
    num_base_generators: int

    def pullback(self, g: GroupElement) -> GroupElement:
        pad = (0,) * len(self.branch)
        return self.group.element(tuple(g.coordinates) + pad)

    def fiber_divisor(self, i: int) -> GroupElement:
        """``D^Y_i = red f^{-1}(D_i)``; for a non-branch divisor this is ``f^*[D_i]``."""
        if i not in self.branch:
            raise StructuralError(f"divisor {i} is not in the branch set")
        k = self.num_base_generators + self.branch.index(i)
        return self.group.generator(k)


def class_group_Y(sd: SeifertData) -> ClassGroupY:
    _require_valid(sd)
    base = sd.base
    g = base.clX.num_generators
    branch = sd.branch_indices
    n = g + len(branch)
    rows = [tuple(r) + (0,) * len(branch) for r in base.clX.relations.entries]
    last = list(sd.L.coordinates) + [0] * len(branch)
    for k, i in enumerate(branch):
        b, c = sd.coeffs[i]
        row = list(base.divisors[i].cls.coordinates) + [0] * len(branch)
        row[g + k] = -c
        rows.append(tuple(row))
        last[g + k] = b
    rows.append(tuple(last))
    group = FpAbelianGroup(n, IntMatrix.from_rows(rows, cols=n))
    labels = tuple(f"f*{name}" for name in base.gen_names()) + tuple(
        f"D^Y_{base.divisors[i].name}" for i in branch
    )
    return ClassGroupY(group, labels, branch, g)


def canonical_class_Y(sd: SeifertData, cg: ClassGroupY | None = None) -> GroupElement:
    """``K_Y = f^*K_X + sum (c_i - 1) D^Y_i``."""
    cg = cg or class_group_Y(sd)
    K = cg.pullback(sd.base.canonical_class)
    for i in cg.branch:
        K = K + cg.fiber_divisor(i) * (sd.coeffs[i][1] - 1)
    return K


class ContractionType(enum.Enum):
    ZERO_SECTION = "zero_section_contractible"
    INFINITY_SECTION = "infinity_section_contractible"
    NEITHER = "neither"
    UNDECIDABLE = "undecidable"


def _ample_sign(base: BaseVariety, q: QClass) -> int | None:
    """Sign of ``q`` against the ample direction, or None when undecidable."""
    if base.ample_direction is None or base.clX.free_rank != 1:
        return None
    unit = base.clX.free_coordinates(base.ample_direction)[0]
    v = q.free_part()[0] * unit
    return (v > 0) - (v < 0)


def contraction_type(sd: SeifertData) -> ContractionType:
    c1 = chern_class(sd)
    if c1.is_zero():
        return ContractionType.NEITHER
    sign = _ample_sign(sd.base, c1)
    if sign is None:
        return ContractionType.UNDECIDABLE
    return ContractionType.INFINITY_SECTION if sign > 0 else ContractionType.ZERO_SECTION


def log_canonical_class(sd: SeifertData) -> QClass:
    """``K_X + Delta`` with ``Delta = sum (1 - 1/c_i) D_i``."""
    m = sd.branch_lcm
    total = sd.base.canonical_class * m
    for (_, c), D in zip(sd.coeffs, sd.base.divisors):
        if c > 1:
            total = total + D.cls * (m - m // c)
    return QClass(total, m)


def proportional(u: Sequence[Fraction], v: Sequence[Fraction]) -> bool:
    """Whether ``u`` is a rational multiple of the nonzero vector ``v``."""
    return all(u[i] * v[j] == u[j] * v[i] for i in range(len(u)) for j in range(len(u)))


@dataclass(frozen=True)
class SingularityPredicates:
    """Properties of the cone singularity; None means undecidable from the data."""

    q_cartier: bool | None
    log_terminal: bool | None


def singularity_predicates(sd: SeifertData) -> SingularityPredicates:
    """Q-Cartier and log terminal tests for the cone obtained by contracting
    the infinity section (only defined when ``c_1`` is ample)."""
    ctype = contraction_type(sd)
    if ctype is ContractionType.UNDECIDABLE:
        return SingularityPredicates(None, None)
    if ctype is not ContractionType.INFINITY_SECTION:
        raise PreconditionFailed(f"c_1 is not positive (contraction type: {ctype.value})")
    kd = log_canonical_class(sd)
    q_cartier = proportional(kd.free_part(), chern_class(sd).free_part())
    sign = _ample_sign(sd.base, -kd)
    return SingularityPredicates(q_cartier, sign is not None and sign > 0)
