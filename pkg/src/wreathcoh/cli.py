"""Single executable exposing the library operations with deterministic
JSON/text output and scripting-friendly exit codes (0 ok, 1 fail, 2 when a
budget or cap was hit, 64 on usage errors)."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Optional

from . import stabcoh, verify
from .groups import (
    BUDGET_EXHAUSTED,
    CapExceededError,
    DEFAULT_ORDER_CAP,
    DEFAULT_SEARCH_BUDGET,
    GroupError,
    OrderOverflowError,
    isomorphism_search,
    load_group,
)
from .isoclinism import is_isoclinic
from .wreath import (
    WitnessBudgetExhaustedError,
    classify_centralizer,
    cp_certificate,
    elab_descriptors,
    elem_abelians_bruteforce,
    format_element,
    make_iterated,
    maximal_elem_abelians,
    normal_form_case_b,
    parse_element,
    sylow_gl_parameters,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_BUDGET = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 64 instead of argparse's 2
        raise UsageError(message)


def _parse_wreath_name(name: str):
    import re

    m = re.match(r"wreath:p=(\d+),n=(\d+)$", name.strip())
    if not m:
        raise GroupError(
            f"this command needs a wreath tower group 'wreath:p=..,n=..', got {name!r}"
        )
    return int(m.group(1)), int(m.group(2))


def build_parser() -> _Parser:
    parser = _Parser(
        prog="wreathcoh",
        description=(
            "Finite p-group computations: wreath tower centralizers, "
            "isoclinism witnesses, elementary abelian subgroups, stable "
            "cohomology (Hilbert series, detection, products) and Sylow "
            "parameters of GL_n(F_q)."
        ),
    )
    parser.add_argument(
        "--seed", type=int, default=0,
        help="seed for randomized validation checks (default 0)",
    )
    parser.add_argument(
        "--cap", type=int, default=DEFAULT_ORDER_CAP,
        help=f"group order cap for constructions (default {DEFAULT_ORDER_CAP})",
    )
    parser.add_argument(
        "--timing", action="store_true",
        help="include wall-clock milliseconds in the report (off by default "
             "so identical inputs produce identical bytes)",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    cen = sub.add_parser("centralizer", help="classify a wreath tower centralizer")
    cen.add_argument("--group", required=True, help="tower name, e.g. wreath:p=2,n=3")
    cen.add_argument("--element", required=True,
                     help="element syntax: digit at level 1, [e_1,...,e_p;s] above")
    cen.add_argument("--certificate", action="store_true",
                     help="attach the closure-class certificate tree")

    iso = sub.add_parser("isoclinic", help="decide isoclinism of two groups")
    iso.add_argument("group_a")
    iso.add_argument("group_b")
    iso.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET,
                     help=f"search node budget (default {DEFAULT_SEARCH_BUDGET})")
    iso.add_argument("--witness", type=Path, default=None,
                     help="write the witness JSON to this path")

    isom = sub.add_parser("isomorphic", help="search for a group isomorphism")
    isom.add_argument("group_a")
    isom.add_argument("group_b")
    isom.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET)

    elab = sub.add_parser("elab", help="enumerate elementary abelian subgroups")
    elab.add_argument("--group", required=True)
    elab.add_argument("--maximal", action="store_true", help="only maximal classes")
    elab.add_argument("--p", type=int, default=None,
                      help="prime (inferred from a prime-power order if omitted)")
    elab.add_argument("--brute-cap", type=int, default=2048,
                      help="order cap for the exhaustive enumeration (default 2048)")

    hil = sub.add_parser("hilbert", help="Hilbert series of the stable ring")
    hil.add_argument("--p", type=int, required=True)
    hil.add_argument("--n", type=int, required=True)
    hil.add_argument("--max-degree", type=int, required=True)
    hil.add_argument("--format", choices=("json", "csv"), default="json")

    det = sub.add_parser("detect", help="detection matrices and rank certificates")
    det.add_argument("--p", type=int, required=True)
    det.add_argument("--n", type=int, required=True)
    det.add_argument("--degree", type=int, default=None,
                     help="single degree (default: all degrees up to the top)")

    sb = sub.add_parser("stable-basis", help="canonical basis in one degree")
    sb.add_argument("--p", type=int, required=True)
    sb.add_argument("--n", type=int, required=True)
    sb.add_argument("--degree", type=int, required=True)

    syl = sub.add_parser("sylow-gl", help="Sylow parameters of GL_n(F_q)")
    syl.add_argument("--n", type=int, required=True)
    syl.add_argument("--q", type=int, required=True)
    syl.add_argument("--p", type=int, required=True)

    ver = sub.add_parser("verify", help="run a named verification battery")
    ver.add_argument("suite", choices=sorted(verify.SUITES))
    ver.add_argument("--format", choices=("text", "json"), default="text")

    return parser


def _cmd_centralizer(args) -> dict:
    p, n = _parse_wreath_name(args.group)
    tower = make_iterated(p, n, cap=args.cap)
    element = parse_element(args.element, p, n)
    report = classify_centralizer(tower, element)
    payload = {
        "group": args.group,
        "element": format_element(element),
        "case": report.case,
        "conjugator": format_element(report.conjugator),
        "centralizer_order": report.order,
        "core": report.core,
        "generators": [format_element(g) for g in report.generators],
    }
    if report.case == "B":
        nf = normal_form_case_b(tower, element)
        payload["normal_form"] = format_element(nf.normal_form)
        payload["base_component"] = format_element(nf.base_component)
    if args.certificate:
        payload["certificate"] = cp_certificate(tower, element).to_json()
    return payload


def _cmd_isoclinic(args) -> dict:
    G1 = load_group(args.group_a, seed=args.seed, cap=args.cap)
    G2 = load_group(args.group_b, seed=args.seed, cap=args.cap)
    result = is_isoclinic(G1, G2, budget=args.budget)
    payload = {
        "group_a": args.group_a,
        "group_b": args.group_b,
        "status": result.status,
        "verdict": result.verdict,
        "nodes": result.nodes,
    }
    if result.witness is not None:
        witness_json = result.witness.to_json()
        payload["witness"] = witness_json
        if args.witness is not None:
            args.witness.write_text(
                json.dumps(witness_json, indent=2, sort_keys=True) + "\n",
                encoding="utf-8",
            )
            payload["witness_file"] = str(args.witness)
    if result.status == BUDGET_EXHAUSTED:
        raise _Budget(payload)
    return payload


def _cmd_isomorphic(args) -> dict:
    G1 = load_group(args.group_a, seed=args.seed, cap=args.cap)
    G2 = load_group(args.group_b, seed=args.seed, cap=args.cap)
    result = isomorphism_search(G1, G2, budget=args.budget)
    payload = {
        "group_a": args.group_a,
        "group_b": args.group_b,
        "status": result.status,
        "nodes": result.nodes,
    }
    if result.hom is not None:
        payload["mapping"] = list(result.hom.mapping)
    if result.status == BUDGET_EXHAUSTED:
        raise _Budget(payload)
    return payload


def _cmd_elab(args) -> dict:
    payload = {"group": args.group}
    try:
        p, n = _parse_wreath_name(args.group)
    except GroupError:
        G = load_group(args.group, seed=args.seed, cap=args.cap)
    else:
        tower = make_iterated(p, n, cap=args.cap)
        payload["descriptors"] = [
            d.to_json() for d in maximal_elem_abelians(tower)
        ]
        G = tower.materialize()
    catalog = elem_abelians_bruteforce(G, p=args.p, cap=args.brute_cap)
    classes = catalog.maximal_classes() if args.maximal else catalog.classes
    payload["p"] = catalog.p
    payload["order"] = G.order
    payload["classes"] = [
        {
            "representative": list(c["representative"]),
            "rank": c["rank"],
            "class_size": c["class_size"],
            "maximal": c["maximal"],
        }
        for c in classes
    ]
    payload["subgroup_count"] = len(catalog.subgroups)
    return payload


def _cmd_hilbert(args) -> dict:
    series = stabcoh.hilbert_series(args.p, args.n, args.max_degree)
    return series.to_json()


def _cmd_detect(args) -> dict:
    degrees = (
        [args.degree]
        if args.degree is not None
        else list(range(args.p ** (args.n - 1) + 1))
    )
    certs = [stabcoh.detection_matrix(args.p, args.n, k) for k in degrees]
    return {
        "p": args.p,
        "n": args.n,
        "descriptor_ranks": [d.rank for d in elab_descriptors(args.p, args.n)],
        "certificates": [c.to_json() for c in certs],
        "all_full_rank": all(c.full_row_rank for c in certs),
    }


def _cmd_stable_basis(args) -> dict:
    basis = stabcoh.stable_basis(args.p, args.n, args.degree)
    return {
        "p": args.p,
        "n": args.n,
        "degree": args.degree,
        "dimension": len(basis),
        "basis": [stabcoh.format_basis_element(b) for b in basis],
    }


def _cmd_sylow_gl(args) -> dict:
    return sylow_gl_parameters(args.n, args.q, args.p).to_json()


def _cmd_verify(args) -> dict:
    results = verify.run_suite(args.suite)
    return {
        "suite": args.suite,
        "checks": [
            {"name": r.name, "passed": r.passed, "detail": r.detail}
            for r in results
        ],
        "all_passed": all(r.passed for r in results),
    }


class _Budget(Exception):
    """Carries a payload for budget-limited outcomes (exit code 2)."""

    def __init__(self, payload: dict):
        super().__init__("budget exhausted")
        self.payload = payload


_HANDLERS = {
    "centralizer": _cmd_centralizer,
    "isoclinic": _cmd_isoclinic,
    "isomorphic": _cmd_isomorphic,
    "elab": _cmd_elab,
    "hilbert": _cmd_hilbert,
    "detect": _cmd_detect,
    "stable-basis": _cmd_stable_basis,
    "sylow-gl": _cmd_sylow_gl,
    "verify": _cmd_verify,
}


def _config_echo(args) -> dict:
    config = {
        "seed": args.seed,
        "cap": args.cap,
        "threads": os.environ.get("WREATHCOH_THREADS", "1"),
    }
    for key in ("budget", "brute_cap"):
        if hasattr(args, key):
            config[key] = getattr(args, key)
    return config


def _emit(report: dict) -> None:
    sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n\n")
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    started = time.monotonic()
    status = "ok"
    exit_code = EXIT_OK
    try:
        payload = _HANDLERS[args.verb](args)
    except _Budget as exc:
        payload = exc.payload
        status = "budget"
        exit_code = EXIT_BUDGET
    except (OrderOverflowError, CapExceededError, WitnessBudgetExhaustedError) as exc:
        payload = {"reason": str(exc), "kind": type(exc).__name__}
        status = "budget"
        exit_code = EXIT_BUDGET
    except GroupError as exc:
        payload = {"reason": str(exc), "kind": type(exc).__name__}
        status = "fail"
        exit_code = EXIT_FAIL
    report = {
        "verb": args.verb,
        "status": status,
        "payload": payload,
        "config": _config_echo(args),
    }
    if args.timing:
        report["timing_ms"] = int((time.monotonic() - started) * 1000)

    if args.verb == "hilbert" and status == "ok" and args.format == "csv":
        sys.stdout.write("degree,coefficient\n")
        for k, c in enumerate(payload["coefficients"]):
            sys.stdout.write(f"{k},{c}\n")
        return exit_code
    if args.verb == "verify" and status == "ok":
        if args.format == "text":
            for check in payload["checks"]:
                mark = "PASS" if check["passed"] else "FAIL"
                sys.stdout.write(f"{mark}  {check['name']}: {check['detail']}\n")
            sys.stdout.write(
                ("all checks passed\n" if payload["all_passed"] else "FAILURES present\n")
            )
        else:
            _emit(report)
        return EXIT_OK if payload["all_passed"] else EXIT_FAIL
    _emit(report)
    return exit_code


if __name__ == "__main__":
    raise SystemExit(main())
