"""Command-line surface: generate, validate, analyze, decompose, verify.

Every command emits one canonical JSON report on stdout (or to -o,
atomically). Exit codes: 0 all checks pass, 1 at least one check failed,
2 input or parse errors, 3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Optional

from . import budget
from .algebra_core import Element
from .decompose import (ExtremalExistence, decompose, extremal_exists,
                        verify_decomposition)
from .errors import (BudgetExceededError, CenterStructureError, GmalgError,
                     LieLeibnizError, SpecFileError)
from .exact_linear import FieldSpec, Subspace
from .fileformat import (context_fingerprint, context_to_dict, dumps_canonical,
                         load_context, load_json, load_map, map_from_dict,
                         map_to_dict, matrix_to_dict, save_atomic,
                         subspace_to_dict, context_from_dict, encode_vector)
from .gma import assemble, generate_builtin, validate_context
from .multilinear import (LeibnizWitness, MultilinearMap,
                          n_lie_derivation_space)
from .structure_analysis import (CheckStatus, center_data, derivation_space,
                                 lie_derivation_space, check_hypotheses)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_BUDGET = 3

_EPILOG = f"""\
fields are written 'q' (rationals) or 'gf:P' (odd prime P). All files are
JSON; map and spec coefficients are 'num/den' strings over q and residues
over gf:P. Global basis indices are block ordered: A block, M block,
N block, B block. The environment variable {budget.ENV_VAR} overrides the
basis-tuple budget (default {budget.DEFAULT_TUPLE_BUDGET}); one tenth of it
caps the unknown count of space computations.
"""


def _witness_json(obj):
    if obj is None:
        return None
    if isinstance(obj, Element):
        return {"coords": encode_vector(obj.algebra.field, obj.coords)}
    if isinstance(obj, LeibnizWitness):
        return {"slot": obj.slot, "args": list(obj.args), "partner": obj.partner}
    if isinstance(obj, Subspace):
        return subspace_to_dict(obj)
    if isinstance(obj, (list, tuple)):
        return [_witness_json(x) for x in obj]
    if isinstance(obj, (str, int, bool)):
        return obj
    return str(obj)


def _check(name: str, status: str, witness=None, reason: str = "") -> dict:
    rec = {"name": name, "status": status}
    if witness is not None:
        rec["witness"] = _witness_json(witness)
    if reason:
        rec["reason"] = reason
    return rec


def _status_check(name: str, st: CheckStatus) -> dict:
    return _check(name, st.status, st.witness, st.reason)


def _emit(report: dict, out: Optional[str], started: float) -> int:
    report["timings"] = {"elapsed_s": round(time.perf_counter() - started, 6)}
    text = dumps_canonical(report)
    if out:
        save_atomic(out, text)
    else:
        sys.stdout.write(text)
    failed = any(c.get("status") == "fail" for c in report.get("checks", []))
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def _report_skeleton(command: str, options: dict, ctx=None) -> dict:
    rep = {"format": "gma-report/1", "command": command, "options": options}
    if ctx is not None:
        rep["instance"] = context_fingerprint(ctx)
    return rep


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _cmd_gen(args) -> int:
    started = time.perf_counter()
    field = FieldSpec.from_name(args.field)
    kind = args.kind.replace("-", "_")
    if kind == "full_matrix":
        if args.r is None:
            raise SpecFileError("--r is required for full-matrix")
        ctx = generate_builtin(kind, field, r=args.r)
    else:
        if args.s is None or args.t is None:
            raise SpecFileError(f"--s and --t are required for {args.kind}")
        ctx = generate_builtin(kind, field, s=args.s, t=args.t)
    report = validate_context(ctx)
    if not report.ok:
        raise SpecFileError(f"generated context failed validation: "
                            f"{report.summary()}")
    text = dumps_canonical(context_to_dict(ctx))
    if args.output:
        save_atomic(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_validate(args) -> int:
    started = time.perf_counter()
    ctx = context_from_dict(load_json(args.spec))
    report = validate_context(ctx)
    rep = _report_skeleton("validate", {"spec": args.spec}, ctx)
    checks = [_check("context-valid", "pass" if report.ok else "fail",
                     reason=report.summary() if not report.ok else "")]
    for v in report.violations:
        checks.append(_check(f"axiom-{v.law}", "fail",
                             witness=list(v.indices), reason=v.detail))
    rep["checks"] = checks
    return _emit(rep, args.output, started)


def _cmd_center(args) -> int:
    started = time.perf_counter()
    ctx, _ = load_context(args.spec)
    g = assemble(ctx, validate=False)
    rep = _report_skeleton("center", {"spec": args.spec}, ctx)
    try:
        cd = center_data(g)
    except CenterStructureError as exc:
        rep["checks"] = [_check("center-structure", "fail", reason=str(exc))]
        return _emit(rep, args.output, started)
    rep["checks"] = [_check("center-structure", "pass")]
    rep["details"] = {
        "center_g": subspace_to_dict(cd.center_g),
        "center_a": subspace_to_dict(cd.center_a),
        "center_b": subspace_to_dict(cd.center_b),
        "a_part": subspace_to_dict(cd.a_part),
        "b_part": subspace_to_dict(cd.b_part),
        "a_to_b": matrix_to_dict(cd.a_to_b),
    }
    return _emit(rep, args.output, started)


def _cmd_hypotheses(args) -> int:
    started = time.perf_counter()
    ctx, _ = load_context(args.spec)
    g = assemble(ctx, validate=False)
    report = check_hypotheses(g, args.theorem)
    rep = _report_skeleton("hypotheses",
                           {"spec": args.spec, "theorem": args.theorem}, ctx)
    rep["checks"] = [
        _status_check(f"hypothesis-{args.theorem}-({num})", st)
        for num, st in report.conditions
    ]
    rep["details"] = {"all_pass": report.all_pass}
    return _emit(rep, args.output, started)


def _cmd_derivations(args) -> int:
    started = time.perf_counter()
    ctx, _ = load_context(args.spec)
    g = assemble(ctx, validate=False)
    rep = _report_skeleton(
        "derivations",
        {"spec": args.spec, "lie": args.lie, "arity": args.arity}, ctx)
    if args.arity == 1:
        space = (lie_derivation_space if args.lie else derivation_space)(g.algebra)
        maps = [_matrix_map_dict(g.field, g.dim, flat) for flat in space.basis]
        rep["details"] = {"dim": space.dim, "basis_maps": maps}
    else:
        if not args.lie:
            raise SpecFileError(
                "only Lie-type spaces are computed for arity >= 2; pass --lie")
        space = n_lie_derivation_space(g, args.arity)
        rep["details"] = {"dim": len(space),
                          "basis_maps": [map_to_dict(m) for m in space]}
    rep["checks"] = []
    return _emit(rep, args.output, started)


def _matrix_map_dict(field, dim, flat) -> dict:
    entries = {}
    for s in range(dim):
        vec = [flat[t * dim + s] for t in range(dim)]
        if any(vec):
            entries[(s,)] = vec
    return map_to_dict(MultilinearMap.from_entries(field, 1, dim, entries))


def _cmd_extremal(args) -> int:
    started = time.perf_counter()
    ctx, _ = load_context(args.spec)
    g = assemble(ctx, validate=False)
    ex = extremal_exists(g)
    rep = _report_skeleton("extremal", {"spec": args.spec}, ctx)
    agree = ex.solution == ex.offdiag_annihilator
    rep["checks"] = [
        _check("offdiagonal-annihilator-matches-linear-conditions",
               "pass" if agree else "fail",
               reason="" if agree else
               f"linear dim {ex.solution.dim} != projected dim "
               f"{ex.offdiag_annihilator.dim}")
    ]
    rep["details"] = {
        "exists": ex.exists,
        "witness": _witness_json(ex.witness),
        "solution": subspace_to_dict(ex.solution),
        "annihilator": subspace_to_dict(ex.annihilator),
        "offdiag_annihilator": subspace_to_dict(ex.offdiag_annihilator),
    }
    return _emit(rep, args.output, started)


def _cmd_decompose(args) -> int:
    started = time.perf_counter()
    ctx, _ = load_context(args.spec)
    g = assemble(ctx, validate=False)
    mmap = load_map(args.map, g.field)
    if mmap.dim != g.dim:
        raise SpecFileError(
            f"map dimension {mmap.dim} does not match instance {g.dim}")
    if args.arity is not None and args.arity != mmap.arity:
        raise SpecFileError(
            f"--arity {args.arity} does not match map arity {mmap.arity}")
    rep = _report_skeleton(
        "decompose", {"spec": args.spec, "map": args.map,
                      "arity": mmap.arity}, ctx)
    try:
        dec = decompose(g, mmap)
    except LieLeibnizError as exc:
        rep["checks"] = [_check("input-is-n-lie-derivation", "fail",
                                witness=exc.witness)]
        return _emit(rep, args.output, started)
    ch = dec.checks
    rep["checks"] = [
        _check("input-is-n-lie-derivation", "pass"),
        _check("exact-sum", "pass" if ch.exact_sum else "fail"),
        _check("seed-annihilates-commutators",
               "pass" if ch.seed_annihilates_commutators else "fail"),
        _check("central-part-centrally-valued",
               "pass" if ch.central_part_is_central.ok else "fail",
               witness=ch.central_part_is_central.witness),
    ]
    rep["details"] = {
        "seed": _witness_json(dec.seed),
        "seed_is_central_degenerate": ch.seed_is_central,
        "extremal_part": map_to_dict(dec.extremal_part),
        "central_part": map_to_dict(dec.central_part),
    }
    return _emit(rep, args.output, started)


def _cmd_verify(args) -> int:
    started = time.perf_counter()
    ctx, _ = load_context(args.spec)
    g = assemble(ctx, validate=False)
    vr = verify_decomposition(g, args.arity)
    rep = _report_skeleton("verify", {"spec": args.spec, "arity": args.arity},
                           ctx)
    checks = []
    for hrep in vr.hypothesis_reports:
        for num, st in hrep.conditions:
            checks.append(_status_check(
                f"hypothesis-{hrep.variant}-({num})", st))
    for v in vr.verdicts:
        checks.append(_check(f"element-{v.index}-exact-sum",
                             "pass" if v.exact_sum else "fail"))
        if vr.theorem_applicable:
            checks.append(_check(
                f"element-{v.index}-seed-annihilates",
                "pass" if v.seed_annihilates else "fail"))
            checks.append(_check(
                f"element-{v.index}-central-part-central",
                "pass" if v.central_part_central else "fail",
                witness=v.central_witness if not v.central_part_central else None))
        if v.triangular_seed_form is not None:
            checks.append(_check(
                f"element-{v.index}-triangular-seed-form",
                "pass" if v.triangular_seed_form else "fail"))
    rep["checks"] = checks
    rep["details"] = {
        "space_dim": vr.space_dim,
        "theorem_applicable": vr.theorem_applicable,
        "uniqueness_probe": {
            "admissible_dim": vr.uniqueness.admissible_dim,
            "kernel_dim": vr.uniqueness.kernel_dim,
            "unique_on_probe": vr.uniqueness.unique_on_probe,
        },
        "verdicts": [
            {
                "index": v.index,
                "exact_sum": v.exact_sum,
                "seed_coords": encode_vector(g.field, v.seed_coords),
                "seed_annihilates": v.seed_annihilates,
                "central_part_central": v.central_part_central,
                "seed_degenerate": v.seed_degenerate,
                "triangular_seed_form": v.triangular_seed_form,
            }
            for v in vr.verdicts
        ],
        "failures": list(vr.failures),
    }
    return _emit(rep, args.output, started)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gmalg",
        description="Exact analysis of generalized matrix algebras built "
                    "from Morita-context data.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a builtin example spec file")
    p.add_argument("--kind", required=True,
                   choices=["full-matrix", "upper-triangular",
                            "lower-triangular", "zero-pairing"])
    p.add_argument("--field", required=True, help="'q' or 'gf:P', P an odd prime")
    p.add_argument("--r", type=int, help="matrix size for full-matrix (>= 2)")
    p.add_argument("--s", type=int, help="size of the square block A = M_s")
    p.add_argument("--t", type=int, help="size of the square block B = M_t")
    p.add_argument("-o", "--output", help="output path (stdout if omitted)")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("validate", help="check every Morita-context axiom")
    p.add_argument("spec")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("center", help="centers, projections and linking map")
    p.add_argument("spec")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_center)

    p = sub.add_parser("hypotheses", help="evaluate a decomposition ruleset")
    p.add_argument("spec")
    p.add_argument("--theorem", required=True, choices=["4.1", "4.3"],
                   help="4.1: central-action ruleset; 4.3: annihilator ruleset")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_hypotheses)

    p = sub.add_parser("derivations", help="derivation-type spaces")
    p.add_argument("spec")
    p.add_argument("--lie", action="store_true",
                   help="Lie version (required for arity >= 2)")
    p.add_argument("--arity", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_derivations)

    p = sub.add_parser("extremal", help="existence of nonzero extremal maps")
    p.add_argument("spec")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_extremal)

    p = sub.add_parser("decompose", help="split a map file into parts")
    p.add_argument("spec")
    p.add_argument("map")
    p.add_argument("--arity", type=int, help="cross-check against the map file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("verify", help="decompose the whole n-Lie space")
    p.add_argument("spec")
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"gmalg: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except SpecFileError as exc:
        print(f"gmalg: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except GmalgError as exc:
        print(f"gmalg: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except ValueError as exc:
        print(f"gmalg: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
