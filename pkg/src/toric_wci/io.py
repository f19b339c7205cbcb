"""JSON documents: fans, complete-intersection specs and verdicts.

Rationals are always ``[numerator, denominator]`` integer pairs; decimal
floats are rejected everywhere.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .coxcl import DivisorClass, class_group
from .fan import Fan, validate
from .gwps import WeightSystem, refine_lattice
from .wci import BettiPrediction, CiSpec, PicReport, TheoremVerdict, WellFormedness

CORPUS_DIR = Path(__file__).parent / "corpus"


class InputError(ValueError):
    """Unreadable or invalid input document (exit code 2)."""


def _fail(where: str, msg: str):
    raise InputError(f"{where}: {msg}")


def resolve_path(name: str | Path, base: Path | None = None) -> Path:
    """Find a file as given, relative to ``base``, or in the bundled corpus."""
    p = Path(name)
    candidates = [p]
    if base is not None and not p.is_absolute():
        candidates.append(base / p)
    candidates += [CORPUS_DIR / p.name]
    for c in candidates:
        if c.is_file():
            return c
    raise InputError(f"{name}: no such file")


def load_json(path: Path) -> Any:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not UTF-8 ({exc.reason})") from exc
    try:
        return json.loads(text, parse_float=_no_float, parse_constant=_no_float)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    except _FloatInInput as exc:
        raise InputError(f"{path}: {exc}") from exc


class _FloatInInput(ValueError):
    pass


def _no_float(s: str):
    raise _FloatInInput(f"decimal number {s} not allowed; write rationals as [num, den]")


def _int(x, where: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        _fail(where, f"expected an integer, got {x!r}")
    return x


def _int_list(x, where: str) -> list[int]:
    if not isinstance(x, list):
        _fail(where, f"expected an array, got {type(x).__name__}")
    return [_int(v, f"{where}[{i}]") for i, v in enumerate(x)]


def _rational_pair(x, where: str) -> tuple[int, int]:
    if not (isinstance(x, list) and len(x) == 2):
        _fail(where, f"rational must be [numerator, denominator], got {x!r}")
    n, d = _int(x[0], where), _int(x[1], where)
    if d == 0:
        _fail(where, "zero denominator")
    return n, d


def fan_from_document(doc: Any, where: str = "fan") -> Fan:
    if not isinstance(doc, dict):
        _fail(where, "expected a JSON object")
    for key in ("lattice_rank", "rays", "max_cones"):
        if key not in doc:
            _fail(where, f"missing field '{key}'")
    unknown = set(doc) - {"lattice_rank", "rays", "max_cones", "superlattice", "name", "comment"}
    if unknown:
        _fail(where, f"unknown fields {sorted(unknown)}")
    N = _int(doc["lattice_rank"], f"{where}.lattice_rank")
    if N < 1:
        _fail(f"{where}.lattice_rank", "must be positive")
    if not isinstance(doc["rays"], list) or not isinstance(doc["max_cones"], list):
        _fail(where, "rays and max_cones must be arrays")
    rays = [_int_list(r, f"{where}.rays[{i}]") for i, r in enumerate(doc["rays"])]
    cones = [_int_list(c, f"{where}.max_cones[{i}]") for i, c in enumerate(doc["max_cones"])]
    for i, r in enumerate(rays):
        if len(r) != N:
            _fail(f"{where}.rays[{i}]", f"has {len(r)} coordinates, lattice rank is {N}")
    for i, c in enumerate(cones):
        for j in c:
            if not 0 <= j < len(rays):
                _fail(f"{where}.max_cones[{i}]", f"ray index {j} out of range 0..{len(rays) - 1}")
    fan = Fan(N, tuple(map(tuple, rays)), tuple(map(tuple, cones)))
    if "superlattice" in doc:
        gens = doc["superlattice"]
        if not isinstance(gens, list):
            _fail(f"{where}.superlattice", "expected an array of rational vectors")
        parsed = []
        for i, g in enumerate(gens):
            if not isinstance(g, list) or len(g) != N:
                _fail(f"{where}.superlattice[{i}]", f"expected {N} rationals")
            parsed.append([_rational_pair(x, f"{where}.superlattice[{i}][{j}]") for j, x in enumerate(g)])
        fan = refine_lattice(fan, parsed)
    report = validate(fan)
    if not report.ok:
        _fail(where, "invalid fan: " + "; ".join(v.message for v in report.violations))
    return fan


def fan_to_document(fan: Fan) -> dict:
    return {
        "lattice_rank": fan.lattice_rank,
        "rays": [list(r) for r in fan.rays],
        "max_cones": [list(c) for c in fan.max_cones],
    }


def load_fan(path: str | Path) -> Fan:
    p = resolve_path(path)
    return fan_from_document(load_json(p), where=str(p))


@dataclass
class LoadedSpec:
    spec: CiSpec
    document: dict  # normalized, with the fan inlined


def spec_from_document(doc: Any, base: Path | None = None, where: str = "spec") -> LoadedSpec:
    if not isinstance(doc, dict):
        _fail(where, "expected a JSON object")
    if "degrees" not in doc or not isinstance(doc["degrees"], list):
        _fail(where, "missing array field 'degrees'")
    if "weights" in doc:
        if "fan" in doc:
            _fail(where, "give either 'weights' or 'fan', not both")
        w = _int_list(doc["weights"], f"{where}.weights")
        try:
            ws = WeightSystem(tuple(w))
        except ValueError as exc:
            _fail(f"{where}.weights", str(exc))
        degs = _int_list(doc["degrees"], f"{where}.degrees")
        return LoadedSpec(CiSpec(ws, tuple(degs)), {"weights": w, "degrees": degs})
    if "fan" not in doc:
        _fail(where, "need 'weights' or 'fan'")
    ref = doc["fan"]
    if isinstance(ref, str):
        p = resolve_path(ref, base)
        fan = fan_from_document(load_json(p), where=str(p))
    else:
        fan = fan_from_document(ref, where=f"{where}.fan")
    cl = class_group(fan)
    degrees, witnesses = [], []
    for i, d in enumerate(doc["degrees"]):
        w = f"{where}.degrees[{i}]"
        if not isinstance(d, dict):
            _fail(w, "expected an object with 'free'/'torsion' and/or 'witness'")
        wit = _int_list(d["witness"], f"{w}.witness") if "witness" in d else None
        if wit is not None and len(wit) != fan.n_rays:
            _fail(f"{w}.witness", f"needs {fan.n_rays} coefficients")
        if "free" in d:
            free = _int_list(d["free"], f"{w}.free")
            tors = _int_list(d.get("torsion", [0] * len(cl.torsion)), f"{w}.torsion")
            if len(free) != cl.free_rank or len(tors) != len(cl.torsion):
                _fail(w, f"class shape does not match Cl(Y) = {cl}")
            cls = cl.make(free, tors)
            if wit is not None and cl.class_of(wit) != cls:
                _fail(w, f"witness has class {cl.class_of(wit)}, not {cls}")
        elif wit is not None:
            cls = cl.class_of(wit)
        else:
            _fail(w, "give 'free' (and 'torsion') or 'witness'")
        degrees.append(cls)
        witnesses.append(tuple(wit) if wit is not None else cl.lift_class(cls))
    norm = {
        "fan": fan_to_document(fan),
        "degrees": [
            {"free": list(c.free), "torsion": list(c.torsion), "witness": list(w)}
            for c, w in zip(degrees, witnesses)
        ],
    }
    return LoadedSpec(CiSpec(fan, tuple(degrees), tuple(witnesses)), norm)


def load_spec(path: str | Path) -> LoadedSpec:
    p = resolve_path(path)
    return spec_from_document(load_json(p), base=p.parent, where=str(p))


def spec_to_document(spec: CiSpec) -> dict:
    if isinstance(spec.ambient, WeightSystem):
        return {"weights": list(spec.ambient.weights), "degrees": list(spec.degrees)}
    out = {"fan": fan_to_document(spec.ambient), "degrees": []}
    wits = spec.witnesses or (None,) * spec.k
    for d, w in zip(spec.degrees, wits):
        entry = {"free": list(d.free), "torsion": list(d.torsion)}
        if w is not None:
            entry["witness"] = list(w)
        out["degrees"].append(entry)
    return out


def digest(doc: Any) -> str:
    return hashlib.sha256(canonical_json(doc).encode()).hexdigest()


def canonical_json(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)


def class_to_json(c: DivisorClass) -> dict:
    return {"free": list(c.free), "torsion": list(c.torsion), "moduli": list(c.moduli)}


def wellformed_to_json(wf: WellFormedness | None) -> dict | None:
    if wf is None:
        return None
    return {
        "well_formed": wf.well_formed,
        "caveats": list(wf.caveats),
        "strata": [
            {
                "label": s.label,
                "variables": list(s.indices),
                "dim": s.dim,
                "cutting_equations": list(s.cutting),
                "trace_dim": s.trace_dim,
                "ok": s.ok,
            }
            for s in wf.strata
        ],
    }


def betti_to_json(b: BettiPrediction | None) -> dict | None:
    if b is None:
        return None
    return {
        "ambient": list(b.ambient),
        "dim_x": b.dim_x,
        "ci_low": list(b.ci_low),
        "middle_lower_bound": b.middle_lower_bound,
        "note": b.note,
    }


def pic_to_json(p: PicReport | None) -> dict | None:
    if p is None:
        return None
    return {"dim_x": p.dim_x, "cl_rank_y": p.cl_rank_y, "pic_rank_x": p.pic_rank_x, "exact": p.exact, "note": p.note}


def verdict_document(v: TheoremVerdict, input_doc: Any, version: str) -> dict:
    return {
        "tool": "toric-wci",
        "version": version,
        "input_digest": digest(input_doc),
        "flags": dict(v.flags),
        "conclusion": v.conclusion.value,
        "text": v.text,
        "failed": list(v.failed),
        "inconclusive": list(v.inconclusive),
        "proposition_branch": v.proposition_branch,
        "classification": v.classification,
        "fano_index": v.fano_index,
        "well_formedness": wellformed_to_json(v.well_formedness),
        "betti": betti_to_json(v.betti),
        "pic": pic_to_json(v.pic),
        "notes": list(v.notes),
    }
