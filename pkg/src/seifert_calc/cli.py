"""Command line front end: ``seifert-calc {validate|analyze|local|h1|h1orb|quotient|snf}``.

Exit codes: 0 success, 1 input fault, 2 mathematical validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from .document import (
    InputDocument,
    InputError,
    dump_document,
    dump_int,
    dump_rational,
    element_json,
    element_text,
    group_json,
    load_document,
    parse_int,
    to_json,
)
from .errors import HypothesisNotMet, SeifertError
from .exactmath import FpAbelianGroup, IntMatrix, smith_normal_form
from .localmodel import (
    CyclicChart,
    LocalSeifertData,
    QuotientPresentation,
    ReducedChart,
    multiplicity_at_center,
    quotient_is_smooth,
    seifert_is_smooth,
    to_quotient,
    to_seifert,
)
from .seifert import (
    ContractionType,
    canonical_class_Y,
    chern_class,
    class_group_Y,
    contraction_type,
    global_order,
    is_smooth_over,
    multiplicity_at,
    quotient_by_mu,
    singularity_predicates,
    validate,
)
from .topology import edge_class, h1_orb, h1_Y, qhs_check

EXIT_OK, EXIT_INPUT, EXIT_INVALID = 0, 1, 2

TRUSTED_PROFILE = "topology: X assumed a complex manifold with H_1(X) = 0 and D_i smooth, meeting transversally (asserted by input)"
TRUSTED_BETTI = "qhs: cup-product flags c_1^k != 0 taken from input"


class Failure(Exception):
    """A command finished but the mathematical check failed (exit 2)."""

    def __init__(self, report):
        super().__init__("validation failed")
        self.report = report


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str, need_seifert: bool = True) -> InputDocument:
    doc = load_document(_read(path))
    if need_seifert and doc.seifert is None:
        raise InputError("document has no 'seifert' section")
    return doc


def _int_csv(text: str, flag: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    return [parse_int(x, flag) for x in text.split(",")]


def _qclass_json(q) -> dict:
    return {
        "free_part": [dump_rational(x) for x in q.free_part()],
        "denominator": dump_int(q.denominator),
        "integral_multiple": element_json(q.numerator),
    }


def _qclass_text(q) -> str:
    parts = [dump_rational(x) for x in q.free_part()]
    if not parts:
        return "0"
    text = parts[0] if len(parts) == 1 else "(" + ", ".join(parts) + ")"
    if q.group.torsion:
        text += f" [{q.denominator} c_1 = {element_text(q.numerator)}]"
    return text


def _validation(doc: InputDocument):
    rep = validate(doc.seifert)
    data = {
        "valid": rep.valid,
        "picard_order": dump_int(rep.picard_order) if rep.picard_order is not None else None,
        "failures": rep.failures(),
    }
    text = f"valid (Picard order {rep.picard_order})" if rep.valid else "INVALID: " + "; ".join(rep.failures())
    return rep, data, text


def cmd_validate(args) -> tuple[dict, list[tuple[str, str]]]:
    doc = _load(args.file)
    rep, data, text = _validation(doc)
    if not rep.valid:
        raise Failure(({"command": "validate", "validation": data}, [("validation", text)]))
    return {"command": "validate", "validation": data}, [("validation", text)]


def cmd_analyze(args):
    doc = _load(args.file)
    sd = doc.seifert
    rep, vdata, vtext = _validation(doc)
    if not rep.valid:
        raise Failure(({"command": "analyze", "validation": vdata}, [("validation", vtext)]))
    out: dict[str, Any] = {"command": "analyze", "validation": vdata}
    lines = [("validation", vtext)]
    provenance = []

    c1 = chern_class(sd)
    out["chern_class"] = _qclass_json(c1)
    lines.append(("c_1(Y/X)", _qclass_text(c1)))

    m = global_order(sd)
    out["global_order"] = dump_int(m)
    lines.append(("m(X)", f"{m} (relative to declared divisors and marked points)"))

    mult, smooth = {}, {}
    for p in doc.base.marked_points:
        mult[p.name] = dump_int(multiplicity_at(sd, p))
        try:
            smooth[p.name] = is_smooth_over(sd, p)
        except HypothesisNotMet as exc:
            smooth[p.name] = None
            provenance.append(f"smoothness over {p.name} undecided: {exc}")
    out["multiplicities"] = mult
    out["smooth_over_points"] = smooth
    for name in sorted(mult):
        s = smooth[name]
        flag = "undecided" if s is None else ("smooth" if s else "singular")
        lines.append((f"point {name}", f"multiplicity {mult[name]}, Y {flag} over it"))

    cg = class_group_Y(sd)
    out["class_group_Y"] = group_json(cg.group)
    lines.append(("Cl(Y)", str(cg.group)))
    K = canonical_class_Y(sd, cg)
    out["canonical_class_Y"] = element_json(K)
    lines.append(("K_Y", element_text(K)))

    ctype = contraction_type(sd)
    out["contraction_type"] = ctype.value
    lines.append(("contraction", ctype.value))
    if ctype in (ContractionType.INFINITY_SECTION, ContractionType.UNDECIDABLE):
        preds = singularity_predicates(sd)
        out["singularity"] = {"q_cartier": preds.q_cartier, "log_terminal": preds.log_terminal}
        lines.append(("q_cartier", _tri(preds.q_cartier)))
        lines.append(("log_terminal", _tri(preds.log_terminal)))
    else:
        out["singularity"] = None
        lines.append(("singularity", "not applicable (c_1 not positive)"))

    e = edge_class(sd)
    out["edge_class"] = element_json(e)
    lines.append(("m(X) c_1", element_text(e)))

    profile = doc.profile()
    if profile is not None:
        if not doc.hypotheses_asserted:
            provenance.append("topology skipped: intersection_profile.hypotheses_asserted is false")
        else:
            HY = h1_Y(profile, sd.coeffs)
            HO = h1_orb(profile, [c for _, c in sd.coeffs])
            out["h1_Y"] = group_json(HY)
            out["h1_orb"] = group_json(HO)
            lines.append(("H_1(Y)", str(HY)))
            lines.append(("H_1^orb(X)", str(HO)))
            provenance.append(TRUSTED_PROFILE)
    if doc.betti is not None:
        qhs = qhs_check(doc.betti, not c1.is_zero())
        out["rational_homology_sphere"] = qhs
        lines.append(("Q-homology sphere", "yes" if qhs else "no"))
        provenance.append(TRUSTED_BETTI)

    out["provenance"] = provenance
    for note in provenance:
        lines.append(("note", note))
    return out, lines


def _tri(v) -> str:
    return "undecidable" if v is None else ("true" if v else "false")


def _topology(args, which: str):
    doc = _load(args.file, need_seifert=(which == "h1"))
    profile = doc.profile()
    if profile is None:
        raise InputError("document has no base.intersection_profile block")
    if not doc.hypotheses_asserted:
        raise InputError("intersection_profile.hypotheses_asserted must be true for topology commands")
    if which == "h1":
        G = h1_Y(profile, doc.seifert.coeffs)
        label = "H_1(Y)"
    else:
        if doc.seifert is not None:
            c = [c for _, c in doc.seifert.coeffs]
        else:
            c = [1] * len(doc.base.divisors)
        G = h1_orb(profile, c)
        label = "H_1^orb(X)"
    out = {"command": which, "group": group_json(G), "provenance": [TRUSTED_PROFILE]}
    text = "trivial" if G.is_trivial() else str(G)
    return out, [(label, text), ("note", TRUSTED_PROFILE)]


def cmd_h1(args):
    return _topology(args, "h1")


def cmd_h1orb(args):
    return _topology(args, "h1orb")


def cmd_quotient(args):
    doc = _load(args.file)
    M = parse_int(args.m, "--m")
    if M < 1:
        raise InputError("--m must be a positive integer")
    return dump_document(doc.with_seifert(quotient_by_mu(doc.seifert, M))), None


def _base_text(rc: ReducedChart) -> str:
    if rc.Mred == 1:
        return "smooth"
    return f"A^{rc.n}/mu_{rc.Mred}({','.join(map(str, rc.d))})"


def _chart_json(rc: ReducedChart) -> dict:
    return {
        "order": rc.source.M,
        "weights": list(rc.source.weights),
        "c": list(rc.c),
        "d": list(rc.d),
        "Mred": rc.Mred,
    }


def _forward(args) -> QuotientPresentation:
    if args.m is None or args.weights is None or args.r is None:
        raise InputError("need --m, --weights and --r (or --mred, --d, --c, --l, --b)")
    chart = CyclicChart(parse_int(args.m, "--m"), tuple(_int_csv(args.weights, "--weights")))
    return QuotientPresentation(parse_int(args.r, "--r"), chart)


def _reverse(args) -> LocalSeifertData:
    if None in (args.d, args.c, args.l, args.b):
        raise InputError("reverse mode needs --mred, --d, --c, --l and --b")
    rc = ReducedChart.from_reduced(
        parse_int(args.mred, "--mred"), _int_csv(args.d, "--d"), _int_csv(args.c, "--c")
    )
    return LocalSeifertData(rc, parse_int(args.l, "--l"), tuple(_int_csv(args.b, "--b")))


def _local_data(args) -> tuple[QuotientPresentation, LocalSeifertData]:
    if args.mred is not None:
        lsd = _reverse(args)
        return to_quotient(lsd), lsd
    qp = _forward(args)
    return qp, to_seifert(qp)


def _fractions(lsd: LocalSeifertData) -> list[str]:
    return [dump_rational(s) for s in lsd.coefficients]


def cmd_local(args):
    qp, lsd = _local_data(args)
    rc = lsd.reduced
    out: dict[str, Any] = {
        "command": f"local {args.sub}",
        "chart": _chart_json(rc),
        "r": qp.r,
        "l": lsd.l,
        "b": list(lsd.b),
        "coefficients": _fractions(lsd),
    }
    lines = [
        ("chart", f"A^{rc.source.n}/mu_{rc.source.M}({','.join(map(str, rc.source.weights))}), r = {qp.r}"),
        ("l", str(lsd.l)),
        ("b", ",".join(_fractions(lsd)) or "(none)"),
        ("base", _base_text(rc)),
    ]
    if args.sub == "smooth":
        q = quotient_is_smooth(qp)
        out["quotient_smooth"] = q
        lines.append(("quotient smooth", "yes" if q else "no"))
        try:
            s = seifert_is_smooth(lsd, cross_check=True)
            out["seifert_criterion"] = s
            lines.append(("Seifert criterion", "smooth" if s else "singular"))
        except HypothesisNotMet as exc:
            out["seifert_criterion"] = None
            lines.append(("Seifert criterion", f"not applicable ({exc})"))
    elif args.sub == "mult":
        m = multiplicity_at_center(lsd)
        out["multiplicity"] = dump_int(m)
        lines.append(("multiplicity", str(m)))
    return out, lines


def _parse_matrix(args) -> IntMatrix:
    if args.matrix is not None:
        rows = [_int_csv(r, "--matrix") for r in args.matrix.split(";")]
    else:
        try:
            obj = json.loads(_read(args.file))
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from None
        raw = obj.get("matrix") if isinstance(obj, dict) else obj
        if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
            raise InputError("expected a list of integer rows (or {\"matrix\": [...]})")
        rows = [[parse_int(v, f"matrix[{i}]") for v in r] for i, r in enumerate(raw)]
    if rows and len({len(r) for r in rows}) != 1:
        raise InputError("matrix rows have different lengths")
    return IntMatrix.from_rows(rows, cols=len(rows[0]) if rows else 0)


def cmd_snf(args):
    A = _parse_matrix(args)
    sd = smith_normal_form(A)
    G = FpAbelianGroup(A.cols, A)

    def mat(X):
        return [[dump_int(v) for v in r] for r in X.entries]

    out = {
        "command": "snf",
        "S": mat(sd.S),
        "U": mat(sd.U),
        "V": mat(sd.V),
        "invariant_factors": [dump_int(v) for v in sd.invariant_factors],
        "cokernel": group_json(G),
    }
    lines = [
        ("invariant factors", ", ".join(map(str, sd.invariant_factors)) or "(none)"),
        ("cokernel", str(G)),
    ]
    return out, lines


def _render(lines: list[tuple[str, str]]) -> str:
    return "".join(f"{k}: {v}\n" for k, v in lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="seifert-calc", description="Invariants of Seifert G_m-bundles.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func, help_ in [
        ("validate", cmd_validate, "check the consistency conditions on Seifert data"),
        ("analyze", cmd_analyze, "compute all invariants of valid Seifert data"),
        ("h1", cmd_h1, "first homology of the total space"),
        ("h1orb", cmd_h1orb, "abelian orbifold fundamental group of the base"),
    ]:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("file", help="input document, or - for stdin")
        p.set_defaults(func=func)

    p = sub.add_parser("quotient", parents=[common], help="emit the document for Y / mu_M")
    p.add_argument("file", help="input document, or - for stdin")
    p.add_argument("--m", required=True, help="order of the cyclic subgroup")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("local", parents=[common], help="local dictionary at a cyclic quotient chart")
    p.add_argument("sub", choices=["dict", "smooth", "mult"])
    p.add_argument("--m", help="group order M")
    p.add_argument("--weights", help="comma separated weights a_1,...,a_n")
    p.add_argument("--r", help="residue r mod M")
    p.add_argument("--mred", help="reduced order (reverse direction)")
    p.add_argument("--d", help="reduced weights d_1,...,d_n")
    p.add_argument("--c", help="ramification indices c_1,...,c_n")
    p.add_argument("--l", help="class l mod Mred")
    p.add_argument("--b", help="numerators b_1,...,b_n")
    p.set_defaults(func=cmd_local)

    p = sub.add_parser("snf", parents=[common], help="Smith normal form of an integer matrix")
    p.add_argument("file", nargs="?", default="-", help="JSON matrix file, or - for stdin")
    p.add_argument("--matrix", help='inline rows, e.g. "2,0;0,3"')
    p.set_defaults(func=cmd_snf)
    return parser


def _emit(out, lines, as_json: bool, stream) -> None:
    if lines is None or as_json:
        stream.write(to_json(out))
    else:
        stream.write(_render(lines))


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out, lines = args.func(args)
    except Failure as exc:
        out, lines = exc.report
        _emit(out, lines, args.json, sys.stdout)
        return EXIT_INVALID
    except (SeifertError, ValueError) as exc:
        if args.json:
            sys.stdout.write(to_json({"command": args.command, "error": str(exc)}))
        print(f"seifert-calc: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(out, lines, args.json, sys.stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
