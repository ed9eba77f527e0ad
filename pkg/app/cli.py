# cli.py
"""Command-line front end. Every command prints one JSON (or DOT) document on stdout.

Exit codes: 0 success / true verdict, 1 false verdict, 2 input error, 3 resource limit, 4 internal defect.
"""

import argparse
import json
import sys
import traceback
from pathlib import Path
from typing import Optional, Sequence

from config import DEFAULT_CONFIGS, VERSION
from cones import dominant_cone, eff_cone, gs_cone, hilbert_basis, is_free_monoid, pha_cone, pha_generators
from exact_linalg import format_vector, qvec
from ff_verify import (SECTION_NAMES, check_equivariance, check_torus_weight, default_sections, make_field,
                       section_weight)
from root_datum import datum_from_json
from sections import dual_basis_lambda, hasse_verdict, is_hasse_type, oracle_for
from u3_example import (CASES, F_lambda, czip_scan, czip_u3_contains, decompose_generators,
                        qualifying_indices, split_correspondence, U3Weight)
from utils import DETAILED_ERROR_LOGGING, InvariantViolation, ResourceLimitError, ZipInputError, get_logger
from weyl import WeylGroup, poset_to_dot, poset_to_json, strata_poset, z_element
from zip_datum import ZipDatum, build_zip_datum

logger = get_logger("zipcox")

DATA_DIR = Path(__file__).resolve().parent / "data"
CONE_KINDS = ("eff", "gs", "pha", "dominant")

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_LIMIT, EXIT_DEFECT = 0, 1, 2, 3, 4


def bundled_names() -> list[str]:
    return sorted(p.stem for p in DATA_DIR.glob("*.json"))


def _resolve(source: str) -> Path:
    path = Path(source)
    if path.is_file():
        return path
    bundled = DATA_DIR / (source if source.endswith(".json") else f"{source}.json")
    if bundled.is_file():
        return bundled
    raise ZipInputError(f"no datum file {source!r} (bundled: {', '.join(bundled_names())})")


def read_document(source: str) -> dict:
    path = _resolve(source)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ZipInputError(f"{path.name}: line {e.lineno} column {e.colno}: {e.msg}")
    if not isinstance(doc, dict):
        raise ZipInputError(f"{path.name}: top level must be a JSON object")
    return doc


def zip_from_document(doc: dict, limit: Optional[int] = None) -> ZipDatum:
    datum, mu = datum_from_json(doc)
    return build_zip_datum(datum, mu, limit)


def parse_weight(text: str) -> tuple:
    try:
        return qvec(part for part in text.split(",") if part.strip())
    except (ValueError, ZeroDivisionError):
        raise ZipInputError(f"cannot parse weight {text!r}; expected comma-separated rationals")


def parse_int_weight(text: str) -> tuple[int, ...]:
    weight = parse_weight(text)
    if any(a.denominator != 1 for a in weight):
        raise ZipInputError(f"weight {text!r} must be integral")
    return tuple(int(a) for a in weight)


# Documents -------------------------------------------------------------------


def describe_document(zip_datum: ZipDatum, doc: Optional[dict] = None) -> dict:
    group = WeylGroup(zip_datum.datum, zip_datum.roots)
    eff = eff_cone(zip_datum)
    out = zip_datum.to_json()
    out.update({
        "name": (doc or {}).get("name"),
        "datum": zip_datum.datum.to_json(),
        "weyl_order": len(group),
        "z": z_element(zip_datum, group).name,
        "hasse_type": is_hasse_type(zip_datum, group),
        "dual_basis": [format_vector(v) for v in dual_basis_lambda(zip_datum)],
        "eff_free_monoid": is_free_monoid(eff),
    })
    return out


def strata_document(zip_datum: ZipDatum) -> dict:
    return poset_to_json(strata_poset(zip_datum))


def cone_document(zip_datum: ZipDatum, which: str, with_hilbert: bool = False) -> dict:
    if which == "eff":
        cone = eff_cone(zip_datum)
    elif which == "gs":
        cone = gs_cone(zip_datum)
    elif which == "pha":
        cone = pha_cone(zip_datum)
    elif which == "dominant":
        cone = dominant_cone(zip_datum.datum)
    else:
        raise ZipInputError(f"unknown cone {which!r}, expected one of {', '.join(CONE_KINDS)}")
    out = {"cone": which, **cone.to_json()}
    if which == "pha":
        out["generators"] = [list(g) for g in pha_generators(zip_datum)]
    if with_hilbert:
        out["hilbert_basis"] = [list(v) for v in hilbert_basis(cone)]
    return out


def hasse_document(zip_datum: ZipDatum, lam: Sequence, doc: Optional[dict] = None) -> dict:
    return hasse_verdict(zip_datum, lam, oracle_for(zip_datum, doc), gs=gs_cone(zip_datum),
                         pha=pha_cone(zip_datum))


def u3_dim_document(lam: Sequence[int], p: int) -> dict:
    weight = U3Weight(tuple(lam), p)
    indices = qualifying_indices(weight.lam, p)
    return {
        "p": p,
        "lambda": list(weight.lam),
        "F": str(F_lambda(weight.lam, p)),
        "dim": len(indices),
        "indices": indices,
        "weights": [list(weight.nu(i)) for i in indices],
        "in_czip": czip_u3_contains(weight.lam, p),
    }


def u3_decompose_document(lam: Sequence[int], p: int, i: Optional[int] = None) -> dict:
    lam = U3Weight(tuple(lam), p).lam
    indices = [i] if i is not None else qualifying_indices(lam, p)
    return {"p": p, "lambda": list(lam),
            "decompositions": [decompose_generators(lam, p, j).to_json() for j in indices]}


def verify_document(case: str, p: int, degree: int, trials: int, seed: int, section: Optional[str] = None,
                    weight: Optional[Sequence[int]] = None, torus_only: bool = False) -> dict:
    field_ = make_field(p, degree)
    names = [section] if section else list(default_sections(case))
    check = check_torus_weight if torus_only else check_equivariance
    reports = []
    for name in names:
        expected = tuple(weight) if weight is not None else section_weight(name, case, p)
        reports.append(check(name, expected, case, field_, trials=trials, seed=seed).to_json())
    return {"field": {"p": p, "degree": degree, "modulus": list(field_.modulus)}, "reports": reports,
            "passed": all(r["passed"] for r in reports)}


# Commands ----------------------------------------------------------------------


def _emit(doc, out=None) -> None:
    out = out or sys.stdout
    out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def cmd_describe(args) -> int:
    doc = read_document(args.datum)
    _emit(describe_document(zip_from_document(doc), doc))
    return EXIT_OK


def cmd_strata(args) -> int:
    poset = strata_poset(zip_from_document(read_document(args.datum)))
    if args.format == "dot":
        sys.stdout.write(poset_to_dot(poset))
    else:
        _emit(poset_to_json(poset))
    return EXIT_OK


def cmd_cones(args) -> int:
    zip_datum = zip_from_document(read_document(args.datum))
    _emit(cone_document(zip_datum, args.which, args.hilbert))
    return EXIT_OK


def cmd_hasse(args) -> int:
    doc = read_document(args.datum)
    verdict = hasse_document(zip_from_document(doc), parse_weight(args.weight), doc)
    _emit(verdict)
    return EXIT_OK if verdict["mu_ordinary_hasse"] else EXIT_FALSE


def cmd_u3(args) -> int:
    if args.u3_command == "dim":
        _emit(u3_dim_document(parse_int_weight(args.weight), args.p))
        return EXIT_OK
    if args.u3_command == "decompose":
        doc = u3_decompose_document(parse_int_weight(args.weight), args.p, args.i)
        _emit(doc)
        return EXIT_OK if doc["decompositions"] else EXIT_FALSE
    if args.u3_command == "split":
        lam = parse_int_weight(args.weight)
        _emit({"lambda": list(lam), "symplectic_weight": list(split_correspondence(lam))})
        return EXIT_OK
    report = czip_scan(args.p, args.box)
    _emit(report)
    return EXIT_OK if report["ok"] else EXIT_FALSE


def cmd_verify(args) -> int:
    weight = parse_int_weight(args.weight) if args.weight else None
    doc = verify_document(args.case, args.p, args.degree, args.trials, args.seed, args.section, weight,
                          args.torus_only)
    _emit(doc)
    return EXIT_OK if doc["passed"] else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zipcox", description="Sections and cones on stacks of G-zips.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("describe", help="zip datum summary")
    p.add_argument("datum", help="datum JSON file or bundled name")
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("strata", help="stratification poset")
    p.add_argument("datum")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(func=cmd_strata)

    for which in ("eff", "gs", "pha"):
        p = sub.add_parser(f"{which}-cone", help=f"the {which} cone")
        p.add_argument("datum")
        p.add_argument("--hilbert", action="store_true", help="also compute the Hilbert basis")
        p.set_defaults(func=cmd_cones, which=which)

    p = sub.add_parser("hilbert-basis", help="Hilbert basis of one of the cones")
    p.add_argument("datum")
    p.add_argument("--cone", dest="which", choices=CONE_KINDS, default="eff")
    p.set_defaults(func=cmd_cones, hilbert=True)

    p = sub.add_parser("hasse-check", help="section criteria for a weight")
    p.add_argument("datum")
    p.add_argument("--lambda", dest="weight", required=True, help="comma-separated weight, e.g. 1,1,3")
    p.set_defaults(func=cmd_hasse)

    u3 = sub.add_parser("u3", help="the rank-3 worked example")
    u3_sub = u3.add_subparsers(dest="u3_command", required=True)
    for name in ("dim", "decompose", "split"):
        q = u3_sub.add_parser(name)
        q.add_argument("--lambda", dest="weight", required=True)
        if name != "split":
            q.add_argument("--p", type=int, required=True)
        if name == "decompose":
            q.add_argument("--i", type=int, default=None)
    q = u3_sub.add_parser("czip-scan")
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--box", type=int, default=None, help="box radius (default 3p(p+1))")
    u3.set_defaults(func=cmd_u3)

    p = sub.add_parser("verify-equivariance", help="finite-field equivariance checks")
    p.add_argument("--case", choices=CASES, default="inert")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--degree", type=int, default=DEFAULT_CONFIGS["DEFAULT_FIELD_DEGREE"])
    p.add_argument("--trials", type=int, default=DEFAULT_CONFIGS["DEFAULT_TRIALS"])
    p.add_argument("--seed", type=int, default=DEFAULT_CONFIGS["DEFAULT_SEED"])
    p.add_argument("--section", choices=SECTION_NAMES, default=None)
    p.add_argument("--weight", default=None, help="override the expected weight")
    p.add_argument("--torus-only", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ZipInputError as e:
        _emit({"error": str(e)}, sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as e:
        _emit({"error": str(e)}, sys.stderr)
        return EXIT_LIMIT
    except InvariantViolation as e:
        logger.error("internal invariant violated: %s", e)
        if DETAILED_ERROR_LOGGING:
            logger.error(traceback.format_exc())
        _emit({"error": f"internal invariant violated: {e}"}, sys.stderr)
        return EXIT_DEFECT


if __name__ == "__main__":
    raise SystemExit(main())
