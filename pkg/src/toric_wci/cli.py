"""Command-line front end: ``toric-wci {cl|classify|wf|betti|verdict|verify-paper}``.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Any

from . import __version__
from .coxcl import class_group, group_D, irrelevant_locus
from .fan import DEFAULT_BUDGET, BudgetExceeded, Fan, singularity_report
from .gwps import NotGwpsError, WeightSystem, classify, is_gwps, weights_well_formed
from .io import (
    InputError,
    betti_to_json,
    class_to_json,
    digest,
    dumps,
    fan_from_document,
    fan_to_document,
    load_json,
    resolve_path,
    spec_from_document,
    verdict_document,
    wellformed_to_json,
)
from .wci import (
    NotAmpleError,
    SpecError,
    UnsupportedError,
    ambient_betti,
    lefschetz_predict,
    theorem_verdict,
)

OK, VERIFY_FAIL, INPUT_ERROR, BUDGET = 0, 1, 2, 3
BUDGET_ENV = "TORIC_WCI_BUDGET"


class VerificationFailure(Exception):
    pass


def _budget(arg: int | None) -> int:
    if arg is not None:
        value = arg
    elif os.environ.get(BUDGET_ENV):
        raw = os.environ[BUDGET_ENV]
        try:
            value = int(raw)
        except ValueError:
            raise InputError(f"{BUDGET_ENV}={raw!r} is not an integer") from None
    else:
        return DEFAULT_BUDGET
    if value < 1:
        raise InputError(f"budget must be positive, got {value}")
    return value


def _read(path: str) -> tuple[Path, Any]:
    p = resolve_path(path)
    return p, load_json(p)


def _fan_file(path: str) -> tuple[Fan, dict]:
    p, doc = _read(path)
    return fan_from_document(doc, where=str(p)), doc


def _envelope(command: str, input_doc: Any, body: dict) -> dict:
    return {"tool": "toric-wci", "version": __version__, "command": command,
            "input_digest": digest(input_doc), **body}


def _tuple(xs) -> str:
    return "(" + ",".join(map(str, xs)) + ")"


# Commands return (exit code, human text, json document).


def cmd_cl(args) -> tuple[int, str, dict]:
    fan, doc = _fan_file(args.file)
    cl = class_group(fan)
    D = group_D(cl)
    Z = irrelevant_locus(fan)
    sing = singularity_report(fan, terminal=True, budget=args.budget)

    head = [f"Cl = {cl}"]
    if cl.free_rank == 1 and not cl.torsion:
        head.append(f"weights grading {_tuple(d.free[0] for d in cl.degrees)}")
    head.append(f"D = {D}")
    lines = ["; ".join(head), "grading:"]
    lines += [f"  x{i}  {d}" for i, d in enumerate(cl.degrees)]
    gens = " ".join("x" + "x".join(map(str, g)) if g else "1" for g in Z.generators)
    lines.append(f"irrelevant ideal: ({gens.replace(' ', ', ')})")
    comps = " ∪ ".join("{" + ", ".join(f"x{i}=0" for i in c) + "}" for c in Z.components())
    lines.append("irrelevant locus: " + ("origin" if Z.is_origin() else comps))
    if sing.smooth:
        lines.append("singularities: none (smooth)")
    else:
        lines.append(
            f"singularities: {len(sing.singular_cones)} singular cones, codim {sing.codim}, "
            f"isolated {str(sing.isolated).lower()}, terminal {str(sing.terminal).lower()}"
        )
    body = {
        "cl": str(cl),
        "free_rank": cl.free_rank,
        "torsion": list(cl.torsion),
        "group_D": str(D),
        "degrees": [class_to_json(d) for d in cl.degrees],
        "irrelevant_generators": [list(g) for g in Z.generators],
        "irrelevant_components": [list(c) for c in Z.components()],
        "irrelevant_is_origin": Z.is_origin(),
        "singular_cones": [list(c) for c in sing.singular_cones],
        "singular_codim": sing.codim,
        "isolated": sing.isolated,
        "terminal": sing.terminal,
        "fan": fan_to_document(fan),
    }
    return OK, "\n".join(lines), _envelope("cl", doc, body)


def cmd_classify(args) -> tuple[int, str, dict]:
    fan, doc = _fan_file(args.file)
    if not is_gwps(fan):
        text = "not a generalized weighted projective space (b ≠ N+1)"
        return OK, text, _envelope("classify", doc, {"gwps": False, "text": text})
    try:
        c = classify(fan)
    except NotGwpsError as exc:
        text = f"not a generalized weighted projective space ({exc})"
        return OK, text, _envelope("classify", doc, {"gwps": False, "text": text})
    body = {"gwps": True, "kind": c.kind, "weights": list(c.weights.weights),
            "quotient_group": list(c.quotient_group), "text": str(c)}
    return OK, str(c), _envelope("classify", doc, body)


def _spec(path: str):
    p, doc = _read(path)
    return spec_from_document(doc, base=p.parent, where=str(p)), doc


def cmd_wf(args) -> tuple[int, str, dict]:
    loaded, doc = _spec(args.file)
    spec = loaded.spec
    if isinstance(spec.ambient, WeightSystem) and not weights_well_formed(spec.ambient):
        text = f"weights {_tuple(spec.ambient.weights)} not well formed"
        return OK, text, _envelope("wf", doc, {"weights_well_formed": False, "text": text})
    v = theorem_verdict(spec)
    wf = v.well_formedness
    fano = v.flags["fano"]
    parts = ["well formed" if wf.well_formed else "not well formed"]
    if v.fano_index is not None:
        parts.append(f"Fano index {v.fano_index}")
    parts.append("Fano" if fano else "not Fano")
    lines = [", ".join(parts)]
    for s in wf.strata:
        verdict = "misses X" if s.trace_dim < 0 else f"meets X in dim {s.trace_dim}"
        lines.append(f"  stratum {s.label}: dim {s.dim}, cut by {len(s.cutting)} equations, "
                     f"{verdict} ({'ok' if s.ok else 'too big'})")
    lines += [f"  note: {c}" for c in wf.caveats]
    body = {"weights_well_formed": True, "well_formedness": wellformed_to_json(wf),
            "fano": fano, "fano_index": v.fano_index, "text": lines[0]}
    return OK, "\n".join(lines), _envelope("wf", doc, body)


def cmd_betti(args) -> tuple[int, str, dict]:
    p, doc = _read(args.file)
    if isinstance(doc, dict) and "rays" in doc:
        fan = fan_from_document(doc, where=str(p))
        b = ambient_betti(fan)
        text = f"b(Y) = {_tuple(b.ambient)}\nnote: {b.note}"
        return OK, text, _envelope("betti", doc, {"betti": betti_to_json(b)})
    spec = spec_from_document(doc, base=p.parent, where=str(p)).spec
    try:
        b = lefschetz_predict(spec)
    except NotAmpleError as exc:
        raise VerificationFailure(f"Lefschetz needs ample degrees: {exc}") from None
    lines = [f"b(Y) = {_tuple(b.ambient)}", f"dim X = {b.dim_x}"]
    if b.dim_x == 1:
        lines.append("X is connected (b_0 = 1); nothing more is predicted for a curve")
    else:
        lines.append(f"b_i(X) = b_i(Y) for i < {b.dim_x}: {_tuple(b.ci_low)}")
    lines.append(f"b_{b.dim_x}(X) >= {b.middle_lower_bound}")
    lines.append(f"note: {b.note}")
    return OK, "\n".join(lines), _envelope("betti", doc, {"betti": betti_to_json(b)})


def cmd_verdict(args) -> tuple[int, str, dict]:
    loaded, doc = _spec(args.file)
    v = theorem_verdict(loaded.spec)
    out = verdict_document(v, loaded.document, __version__)
    lines = [f"conclusion: {v.conclusion.value}", v.text, f"ambient: {v.classification}"]
    for f, val in v.flags.items():
        mark = {True: "yes", False: "NO", None: "?"}[val]
        lines.append(f"  {f:<24}{mark}")
    if v.fano_index is not None:
        lines.append(f"  Fano index {v.fano_index}")
    lines += [f"  assumed: {a}" for a in v.inconclusive]
    lines += [f"  note: {n}" for n in v.notes]
    if v.pic is not None:
        rel = "=" if v.pic.exact else ">="
        lines.append(f"  rk Pic(X) {rel} {v.pic.pic_rank_x}")
    return OK, "\n".join(lines), out


def cmd_verify_paper(args) -> tuple[int, str, dict]:
    from .paperchecks import ANCHORS, load_golden, verify_paper

    golden = load_golden(resolve_path(args.golden)) if args.golden else load_golden()
    if args.filter and not any(args.filter in n for n in ANCHORS):
        raise InputError(f"--filter {args.filter!r} matches no anchor (have: {', '.join(ANCHORS)})")
    try:
        results = verify_paper(golden, args.filter, args.budget)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None
    lines = []
    for r in results:
        lines.append(f"{r.status:<8} {r.name:<26} {r.title}")
        lines += [f"         - {d}" for d in r.diffs]
        lines += [f"         ~ {e}" for e in r.errata]
    counts = {s: sum(r.status == s for r in results) for s in ("PASS", "ERRATUM", "FAIL")}
    lines.append(f"{len(results)} anchors: {counts['PASS']} pass, {counts['ERRATUM']} erratum, {counts['FAIL']} fail")
    body = {
        "anchors": [
            {"name": r.name, "title": r.title, "status": r.status, "diffs": r.diffs, "errata": r.errata}
            for r in results
        ],
        "counts": counts,
    }
    code = VERIFY_FAIL if counts["FAIL"] else OK
    return code, "\n".join(lines), _envelope("verify-paper", golden, body)


COMMANDS = {
    "cl": (cmd_cl, "class group, grading, group D, irrelevant locus and singularities of a fan"),
    "classify": (cmd_classify, "is the fan a weighted projective space or a finite quotient of one"),
    "wf": (cmd_wf, "well-formedness and Fano index of a complete intersection"),
    "betti": (cmd_betti, "Betti numbers of a fan, or Lefschetz predictions for a spec"),
    "verdict": (cmd_verdict, "check every hypothesis of the characterization theorem"),
    "verify-paper": (cmd_verify_paper, "recompute the bundled examples and compare with golden values"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toric-wci", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"toric-wci {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--budget", type=int, default=None,
                        help=f"lattice-point enumeration budget (env {BUDGET_ENV}; default {DEFAULT_BUDGET})")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if name == "verify-paper":
            sp.add_argument("--filter", metavar="NAME", help="only anchors whose name contains NAME")
            sp.add_argument("--golden", metavar="PATH", help="golden file to compare against")
        else:
            sp.add_argument("file", metavar="FILE")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors exit 2 already
        return int(exc.code or 0)
    fn = COMMANDS[args.command][0]
    try:
        args.budget = _budget(args.budget)
        code, text, doc = fn(args)
    except BudgetExceeded as exc:
        print(f"toric-wci: budget exceeded: {exc}", file=sys.stderr)
        return BUDGET
    except VerificationFailure as exc:
        print(f"toric-wci: {exc}", file=sys.stderr)
        return VERIFY_FAIL
    except (InputError, SpecError, UnsupportedError, NotGwpsError, ValueError) as exc:
        print(f"toric-wci: error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    print(dumps(doc) if args.json else text)
    return code


if __name__ == "__main__":
    sys.exit(main())
