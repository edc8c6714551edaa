"""JSON input documents and report serialization.

Integers are JSON numbers when ``|v| < 2**53`` and decimal strings otherwise,
in both directions. Rationals are ``"p/q"`` strings in lowest terms.
See ``docs/schema.md`` for the document layout.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .errors import SeifertError
from .exactmath import FpAbelianGroup, GroupElement, IntMatrix, format_normal_form
from .localmodel import CyclicChart, reduce_chart
from .seifert import BaseVariety, Divisor, MarkedPoint, SeifertData
from .topology import BettiData, IntersectionProfile

SCHEMA_VERSION = "1.0"
SAFE_INT = 2**53
_INT_RE = re.compile(r"-?\d+")


class InputError(SeifertError, ValueError):
    """The input document is malformed."""


def parse_int(v: Any, where: str) -> int:
    if isinstance(v, bool):
        raise InputError(f"{where}: expected an integer, got a boolean")
    if isinstance(v, int):
        if abs(v) >= SAFE_INT:
            raise InputError(f"{where}: integers of size >= 2^53 must be given as decimal strings")
        return v
    if isinstance(v, str) and _INT_RE.fullmatch(v.strip()):
        return int(v)
    raise InputError(f"{where}: expected an integer, got {v!r}")


def dump_int(v: int) -> int | str:
    return v if abs(v) < SAFE_INT else str(v)


def parse_rational(v: Any, where: str) -> Fraction:
    if isinstance(v, str) and "/" in v:
        p, _, q = v.partition("/")
        num, den = parse_int(p, where), parse_int(q, where)
        if den == 0:
            raise InputError(f"{where}: zero denominator")
        return Fraction(num, den)
    return Fraction(parse_int(v, where))


def dump_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _int_list(v: Any, where: str, length: int | None = None) -> list[int]:
    if not isinstance(v, list):
        raise InputError(f"{where}: expected a list of integers")
    out = [parse_int(x, f"{where}[{i}]") for i, x in enumerate(v)]
    if length is not None and len(out) != length:
        raise InputError(f"{where}: expected {length} entries, got {len(out)}")
    return out


def _require(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object")
    if key not in obj:
        raise InputError(f"{where}: missing field {key!r}")
    return obj[key]


@dataclass(frozen=True)
class InputDocument:
    """A parsed input file: a base, optional Seifert data and optional topology blocks.

    ``generator_pairings`` (one row per Cl(X) generator, one column per H_2
    basis class) defines the intersection pairing, so both ``[D_i].eta`` and
    ``c_1(L).eta`` are derived from classes.
    """

    base: BaseVariety
    seifert: SeifertData | None = None
    generator_pairings: IntMatrix | None = None
    hypotheses_asserted: bool = False
    betti: BettiData | None = None
    schema_version: str = SCHEMA_VERSION

    def pairing(self, g: GroupElement) -> tuple[int, ...]:
        P = self.generator_pairings
        return tuple(sum(x * P[i, k] for i, x in enumerate(g.coordinates)) for k in range(P.cols))

    def profile(self) -> IntersectionProfile | None:
        if self.generator_pairings is None:
            return None
        P = self.generator_pairings
        rows = [self.pairing(D.cls) for D in self.base.divisors]
        L = self.pairing(self.seifert.L) if self.seifert is not None else (0,) * P.cols
        return IntersectionProfile(P.cols, IntMatrix.from_rows(rows, cols=P.cols), L)

    def with_seifert(self, sd: SeifertData) -> InputDocument:
        return InputDocument(sd.base, sd, self.generator_pairings, self.hypotheses_asserted, self.betti, self.schema_version)


def _parse_base(obj: dict):
    cg = _require(obj, "class_group", "base")
    gens = _require(cg, "generators", "base.class_group")
    if not isinstance(gens, list) or not all(isinstance(g, str) for g in gens):
        raise InputError("base.class_group.generators: expected a list of names")
    n = len(gens)
    rels = cg.get("relations", [])
    if not isinstance(rels, list):
        raise InputError("base.class_group.relations: expected a list of rows")
    rows = [_int_list(r, f"base.class_group.relations[{i}]", n) for i, r in enumerate(rels)]
    G = FpAbelianGroup(n, IntMatrix.from_rows(rows, cols=n))

    def elem(v, where):
        return G.element(_int_list(v, where, n))

    pic = obj.get("picard", [])
    if not isinstance(pic, list):
        raise InputError("base.picard: expected a list of classes")
    picX = tuple(elem(v, f"base.picard[{i}]") for i, v in enumerate(pic))
    divs = obj.get("divisors", [])
    if not isinstance(divs, list):
        raise InputError("base.divisors: expected a list")
    divisors = []
    for i, D in enumerate(divs):
        name = _require(D, "name", f"base.divisors[{i}]")
        if not isinstance(name, str):
            raise InputError(f"base.divisors[{i}].name: expected a string")
        divisors.append(Divisor(name, elem(_require(D, "class", f"base.divisors[{i}]"), f"base.divisors[{i}].class")))
    index = {D.name: i for i, D in enumerate(divisors)}

    def div_index(name, where):
        if name not in index:
            raise InputError(f"{where}: unknown divisor {name!r}")
        return index[name]

    K = elem(_require(obj, "canonical_class", "base"), "base.canonical_class")
    ample = obj.get("ample_direction")
    ample = elem(ample, "base.ample_direction") if ample is not None else None

    points = []
    for i, p in enumerate(obj.get("marked_points", [])):
        where = f"base.marked_points[{i}]"
        name = _require(p, "name", where)
        ch = _require(p, "chart", where)
        chart = CyclicChart(
            parse_int(_require(ch, "order", f"{where}.chart"), f"{where}.chart.order"),
            tuple(_int_list(_require(ch, "weights", f"{where}.chart"), f"{where}.chart.weights")),
        )
        restriction = _int_list(_require(p, "restriction", where), f"{where}.restriction", n)
        inc = p.get("incident", {})
        if not isinstance(inc, dict):
            raise InputError(f"{where}.incident: expected an object")
        incident = {div_index(k, f"{where}.incident"): parse_int(v, f"{where}.incident.{k}") for k, v in inc.items()}
        points.append(MarkedPoint(str(name), reduce_chart(chart), tuple(restriction), tuple(incident.items())))

    inters = []
    for i, pair in enumerate(obj.get("intersections", [])):
        if not isinstance(pair, list) or len(pair) != 2:
            raise InputError(f"base.intersections[{i}]: expected a pair of divisor names")
        inters.append(frozenset(div_index(x, f"base.intersections[{i}]") for x in pair))

    base = BaseVariety(
        clX=G,
        picX=picX,
        divisors=tuple(divisors),
        canonical_class=K,
        ample_direction=ample,
        marked_points=tuple(points),
        intersections=frozenset(inters),
        generator_names=tuple(gens),
    )

    pairings, asserted = None, False
    prof = obj.get("intersection_profile")
    if prof is not None:
        rank = parse_int(_require(prof, "h2_rank", "base.intersection_profile"), "base.intersection_profile.h2_rank")
        gp = _require(prof, "generator_pairings", "base.intersection_profile")
        if not isinstance(gp, list) or len(gp) != n:
            raise InputError("base.intersection_profile.generator_pairings: one row per Cl(X) generator")
        prow = [_int_list(r, f"base.intersection_profile.generator_pairings[{i}]", rank) for i, r in enumerate(gp)]
        pairings = IntMatrix.from_rows(prow, cols=rank)
        for row in rows:
            if any(sum(row[i] * prow[i][k] for i in range(n)) for k in range(rank)):
                raise InputError("base.intersection_profile: pairing does not vanish on Cl(X) relations")
        asserted = prof.get("hypotheses_asserted", False)
        if not isinstance(asserted, bool):
            raise InputError("base.intersection_profile.hypotheses_asserted: expected a boolean")

    betti = None
    bobj = obj.get("betti")
    if bobj is not None:
        nums = _int_list(_require(bobj, "numbers", "base.betti"), "base.betti.numbers")
        flags = bobj.get("c1_power_nonzero", [])
        if not isinstance(flags, list) or not all(isinstance(f, bool) for f in flags):
            raise InputError("base.betti.c1_power_nonzero: expected a list of booleans")
        try:
            betti = BettiData(tuple(nums), tuple(flags))
        except ValueError as exc:
            raise InputError(f"base.betti: {exc}") from None
    return base, pairings, asserted, betti


def _parse_seifert(obj: dict, base: BaseVariety) -> SeifertData:
    n = base.clX.num_generators
    L = base.clX.element(_int_list(_require(obj, "L", "seifert"), "seifert.L", n))
    coeffs_in = obj.get("coefficients", {})
    if not isinstance(coeffs_in, dict):
        raise InputError("seifert.coefficients: expected an object keyed by divisor name")
    names = [D.name for D in base.divisors]
    unknown = sorted(set(coeffs_in) - set(names))
    if unknown:
        raise InputError(f"seifert.coefficients: unknown divisors {unknown}")
    coeffs = []
    for name in names:
        s = parse_rational(coeffs_in.get(name, 0), f"seifert.coefficients.{name}")
        if not 0 <= s < 1:
            raise InputError(f"seifert.coefficients.{name}: need 0 <= s < 1, got {s}")
        coeffs.append((s.numerator, s.denominator))
    return SeifertData(base, L, tuple(coeffs))


def parse_document(obj: Any) -> InputDocument:
    if not isinstance(obj, dict):
        raise InputError("document must be a JSON object")
    version = _require(obj, "schema_version", "document")
    if version != SCHEMA_VERSION:
        raise InputError(f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION!r})")
    try:
        base, pairings, asserted, betti = _parse_base(_require(obj, "base", "document"))
        sd = _parse_seifert(obj["seifert"], base) if obj.get("seifert") is not None else None
    except InputError:
        raise
    except (SeifertError, ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None
    return InputDocument(base, sd, pairings, asserted, betti, version)


def load_document(text: str) -> InputDocument:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None
    return parse_document(obj)


def _elem(g: GroupElement) -> list:
    return [dump_int(v) for v in g.coordinates]


def dump_document(doc: InputDocument) -> dict:
    base = doc.base
    names = [D.name for D in base.divisors]
    out_base: dict[str, Any] = {
        "class_group": {
            "generators": list(base.gen_names()),
            "relations": [[dump_int(v) for v in r] for r in base.clX.relations.entries],
        },
        "picard": [_elem(g) for g in base.picX],
        "divisors": [{"name": D.name, "class": _elem(D.cls)} for D in base.divisors],
        "canonical_class": _elem(base.canonical_class),
    }
    if base.ample_direction is not None:
        out_base["ample_direction"] = _elem(base.ample_direction)
    if base.marked_points:
        out_base["marked_points"] = [
            {
                "name": p.name,
                "chart": {"order": dump_int(p.chart.source.M), "weights": [dump_int(a) for a in p.chart.source.weights]},
                "restriction": [dump_int(v) for v in p.restriction],
                "incident": {names[i]: j for i, j in p.incident_divisors},
            }
            for p in base.marked_points
        ]
    if base.intersections:
        out_base["intersections"] = sorted([names[i] for i in sorted(pair)] for pair in base.intersections)
    if doc.generator_pairings is not None:
        out_base["intersection_profile"] = {
            "h2_rank": doc.generator_pairings.cols,
            "generator_pairings": [[dump_int(v) for v in r] for r in doc.generator_pairings.entries],
            "hypotheses_asserted": doc.hypotheses_asserted,
        }
    if doc.betti is not None:
        out_base["betti"] = {"numbers": list(doc.betti.betti), "c1_power_nonzero": list(doc.betti.c1_power_nonzero)}
    out: dict[str, Any] = {"schema_version": doc.schema_version, "base": out_base}
    if doc.seifert is not None:
        sd = doc.seifert
        out["seifert"] = {
            "L": _elem(sd.L),
            "coefficients": {D.name: dump_rational(s) for D, s in zip(base.divisors, sd.fractions)},
        }
    return out


def to_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def group_json(G: FpAbelianGroup) -> dict:
    return {"free_rank": G.free_rank, "torsion": [dump_int(d) for d in G.torsion], "text": str(G)}


def element_json(g: GroupElement) -> dict:
    G = g.group
    return {
        "torsion": [dump_int(v) for v in G.torsion_coordinates(g)],
        "free": [dump_int(v) for v in G.free_coordinates(g)],
    }


def element_text(g: GroupElement) -> str:
    G = g.group
    if G.is_trivial():
        return "0"
    tors = G.torsion_coordinates(g)
    free = G.free_coordinates(g)
    parts = [f"{v} mod {d}" for v, d in zip(tors, G.torsion)] + [str(v) for v in free]
    return "(" + ", ".join(parts) + ")"


def group_text(free_rank: int, torsion) -> str:
    return format_normal_form(free_rank, torsion)
