"""Golden-value scorecard over the bundled example corpus.

Each anchor computes a flat dict of JSON values; ``golden.json`` holds the
expected dict per anchor.  A golden entry may be ``{"printed": p,
"computed": c, "erratum": reason}`` where the printed claim cannot hold for
the printed data: ``c`` is the golden value (any other result fails) and the
disagreement with ``p`` is reported on every run.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from pathlib import Path
from typing import Any, Callable

from .coxcl import class_group, group_D, irrelevant_locus
from .exactmat import content
from .fan import DEFAULT_BUDGET, cone_is_smooth, singularity_report, validate
from .gwps import (
    classify,
    fan_from_weights,
    is_gwps,
    projective_space_fan,
    quotient_images,
    weights_of,
    weights_well_formed,
)
from .io import CORPUS_DIR, load_fan, load_spec
from .wci import ambient_betti, lefschetz_predict, pic_rank_transfer, theorem_verdict, wci_well_formed

GOLDEN = CORPUS_DIR / "golden.json"

FAN_FILES = (
    "p2.fan", "p3.fan", "p4.fan", "p1xp1.fan", "example2.fan", "example3.fan",
    "example4_p3.fan", "example4_p5.fan", "example4_p7.fan",
)


def _cl_summary(fan) -> dict:
    cl = class_group(fan)
    return {
        "cl": str(cl),
        "cl_free_rank": cl.free_rank,
        "cl_torsion": list(cl.torsion),
        "group_D": str(group_D(cl)),
        "D_connected": group_D(cl).connected,
    }


def anchor_example1(budget: int) -> dict:
    out = {}
    for w in [(1, 1, 1), (1, 2, 3), (1, 1, 2, 3), (1, 1, 1, 1, 2, 3)]:
        fan = fan_from_weights(w)
        cl = class_group(fan)
        key = "P(" + ",".join(map(str, w)) + ")"
        out[key] = {
            "weights": list(weights_of(fan).weights),
            "cl": str(cl),
            "grading": [d.free[0] for d in cl.degrees],
            "group_D": str(group_D(cl)),
            "irrelevant_is_origin": irrelevant_locus(fan).is_origin(),
        }
    return out


def weight_systems(max_weight: int = 6, max_dim: int = 4):
    """All ordered weight systems with gcd 1, ``1 <= N <= max_dim``."""
    for n in range(2, max_dim + 2):
        for w in product(range(1, max_weight + 1), repeat=n):
            if content(w) == 1:
                yield w


def anchor_relation_roundtrip(budget: int) -> dict:
    return dict(_roundtrip_counts(6, 4))


@lru_cache(maxsize=None)
def _roundtrip_counts(max_weight: int, max_dim: int) -> tuple:
    total = formed = failures = disagreements = 0
    for w in weight_systems(max_weight, max_dim):
        total += 1
        primitive = all(content(v) == 1 for v in quotient_images(w))
        if primitive != weights_well_formed(w):
            disagreements += 1
        if not primitive:
            continue
        formed += 1
        fan = fan_from_weights(w)
        cl = class_group(fan)
        ok = (
            weights_of(fan).weights == w
            and validate(fan).ok
            and cl.free_rank == 1
            and not cl.torsion
            and tuple(d.free[0] for d in cl.degrees) == w
            and classify(fan).is_wps
        )
        failures += not ok
    return (
        ("systems", total),
        ("well_formed_systems", formed),
        ("roundtrip_failures", failures),
        ("primitive_iff_well_formed_violations", disagreements),
    )


def anchor_example2(budget: int) -> dict:
    fan = load_fan("example2.fan")
    cls = classify(fan)
    return {
        **_cl_summary(fan),
        "classification": str(cls),
        "weights": list(cls.weights.weights),
        "irrelevant_is_origin": irrelevant_locus(fan).is_origin(),
        "complete": validate(fan).ok,
    }


def anchor_remark_terminal(budget: int) -> dict:
    fan = load_fan("example2.fan")
    rep = singularity_report(fan, terminal=True, budget=budget)
    return {
        "terminal": rep.terminal,
        "picard_rank": class_group(fan).free_rank,
        "is_wps": classify(fan).is_wps,
        "dimension": fan.lattice_rank,
    }


def anchor_example3(budget: int) -> dict:
    fan = load_fan("example3.fan")
    rep = singularity_report(fan)
    cls = classify(fan)
    return {
        "rays_sum_to_zero": all(sum(col) == 0 for col in zip(*fan.rays)),
        "weights": list(weights_of(fan).weights),
        "three_subsets_smooth": all(cone_is_smooth(fan, c) for c in combinations(range(5), 3)),
        "isolated": rep.isolated,
        "cl_torsion": list(class_group(fan).torsion),
        "classification": str(cls),
    }


def _anchor_example4(p: int) -> Callable[[int], dict]:
    def run(budget: int) -> dict:
        fan = load_fan(f"example4_p{p}.fan")
        rep = singularity_report(fan)
        return {
            **_cl_summary(fan),
            "classification": str(classify(fan)),
            "irrelevant_is_origin": irrelevant_locus(fan).is_origin(),
            "isolated": rep.isolated,
        }

    run.__name__ = f"anchor_example4_p{p}"
    return run


def anchor_lemma(budget: int) -> dict:
    out = {}
    for name in FAN_FILES:
        fan = load_fan(name)
        if not is_gwps(fan):
            out[name] = "not gwps"
            continue
        cls = classify(fan)
        out[name] = cls.kind
        if cls.is_wps == bool(class_group(fan).torsion):
            out[name] = "inconsistent"
    return out


def anchor_remark_well_formed(budget: int) -> dict:
    try:
        fan_from_weights((1, 2, 2))
        refused = False
    except ValueError:
        refused = True
    return {
        "(1,2,2,3)": weights_well_formed((1, 2, 2, 3)),
        "(1,2,2)": weights_well_formed((1, 2, 2)),
        "(1,2,2) image content": [content(v) for v in quotient_images((1, 2, 2))],
        "(1,2,2) construction refused": refused,
    }


def anchor_lefschetz(budget: int) -> dict:
    out = {f"P^{n}": list(ambient_betti(projective_space_fan(n)).ambient) for n in range(1, 7)}
    q = lefschetz_predict(load_spec("quintic_p4.spec").spec)
    out["quintic ci_low"] = list(q.ci_low)
    c = lefschetz_predict(load_spec("curve11_p1xp1.spec").spec)
    out["curve ci_low"] = list(c.ci_low)
    out["P1xP1"] = list(ambient_betti(load_fan("p1xp1.fan")).ambient)
    return out


def anchor_corollary_pic(budget: int) -> dict:
    from .wci import CiSpec

    f5 = load_fan("example4_p5.fan")
    cl5 = class_group(f5)
    three = pic_rank_transfer(CiSpec(f5, (cl5.make([2]),)))
    f2 = load_fan("example2.fan")
    cl2 = class_group(f2)
    two = pic_rank_transfer(CiSpec(f2, (cl2.make([2]),)))
    return {
        "threefold in example4_p5": [three.pic_rank_x, three.exact],
        "surface in example2": [two.pic_rank_x, two.exact],
    }


def _verdict_summary(name: str) -> dict:
    v = theorem_verdict(load_spec(name).spec)
    return {
        "conclusion": v.conclusion.value,
        "failed": list(v.failed),
        "proposition_branch": v.proposition_branch,
        "smoothness_unverified": "X is smooth" in v.inconclusive,
        "fano_index": v.fano_index,
    }


def anchor_proposition(budget: int) -> dict:
    return _verdict_summary("fano_example2.spec")


def anchor_theorem_wps(budget: int) -> dict:
    out = _verdict_summary("x22_p5.spec")
    wf = wci_well_formed((1, 1, 1, 1, 2, 3), (6,))
    out["X6 in P(1,1,1,1,2,3) well formed"] = wf.well_formed
    return out


def anchor_counterexample_dim1(budget: int) -> dict:
    return _verdict_summary("curve11_p1xp1.spec")


def anchor_counterexample_not_fano(budget: int) -> dict:
    return _verdict_summary("general_type_example4.spec")


def anchor_counterexample_smoothness(budget: int) -> dict:
    return _verdict_summary("hyperplane_example4.spec")


ANCHORS: dict[str, tuple[str, Callable[[int], dict]]] = {
    "example1": ("Example 1: weighted projective space, Cl = Z, Z = {0}", anchor_example1),
    "relation-roundtrip": ("weights <-> rays round trip, N <= 4, weights <= 6", anchor_relation_roundtrip),
    "example2": ("Example 2: Cl = Z + Z/5, P^3/(Z/5)", anchor_example2),
    "remark-terminal": ("Remark: Example 2 is terminal of Picard rank 1", anchor_remark_terminal),
    "example3": ("Example 3: quotient of P^4 with isolated singularities", anchor_example3),
    "example4-p3": ("Example 4, p = 3", _anchor_example4(3)),
    "example4-p5": ("Example 4, p = 5", _anchor_example4(5)),
    "example4-p7": ("Example 4, p = 7", _anchor_example4(7)),
    "lemma": ("Lemma: every gwps is a WPS or a quotient of one", anchor_lemma),
    "remark-well-formed": ("Remark: toric weights are well formed", anchor_remark_well_formed),
    "lefschetz": ("Lefschetz theorem and connectedness", anchor_lefschetz),
    "corollary-pic": ("Corollary: Pic(Y) -> Pic(X)", anchor_corollary_pic),
    "proposition": ("Proposition: Fano CI in a quotient is singular", anchor_proposition),
    "theorem-wps": ("Theorem on a weighted projective ambient", anchor_theorem_wps),
    "counterexample-dim1": ("Closing remark: (1,1) curve in P^1 x P^1", anchor_counterexample_dim1),
    "counterexample-not-fano": ("Closing remark: general type divisor", anchor_counterexample_not_fano),
    "counterexample-smoothness": ("Closing remark: singular hyperplane image", anchor_counterexample_smoothness),
}


@dataclass
class AnchorResult:
    name: str
    title: str
    status: str  # PASS, FAIL, ERRATUM, ERROR
    diffs: list[str] = field(default_factory=list)
    errata: list[str] = field(default_factory=list)
    actual: dict = field(default_factory=dict)


def load_golden(path: Path | None = None) -> dict:
    return json.loads((path or GOLDEN).read_text(encoding="utf-8"))


def _normalize(x: Any) -> Any:
    return json.loads(json.dumps(x))


def compute_anchor(name: str, budget: int = DEFAULT_BUDGET) -> dict:
    return _normalize(ANCHORS[name][1](budget))


def compare(name: str, expected: dict, actual: dict) -> AnchorResult:
    res = AnchorResult(name, ANCHORS[name][0], "PASS", actual=actual)
    for key, exp in expected.items():
        got = actual.get(key, "<missing>")
        if isinstance(exp, dict) and "erratum" in exp:
            if got == exp["computed"]:
                res.errata.append(
                    f"{key}: printed {_js(exp['printed'])}, computed {_js(got)} ({exp['erratum']})"
                )
                continue
            exp = exp["computed"]
        if got != exp:
            res.diffs.append(f"{key}: expected {_js(exp)}, got {_js(got)}")
    for key in sorted(actual.keys() - expected.keys()):
        res.diffs.append(f"{key}: computed but has no golden value")
    if res.diffs:
        res.status = "FAIL"
    elif res.errata:
        res.status = "ERRATUM"
    return res


def _js(x: Any) -> str:
    return json.dumps(x, ensure_ascii=False)


def check_anchor(name: str, expected: dict, budget: int = DEFAULT_BUDGET) -> AnchorResult:
    return compare(name, expected, compute_anchor(name, budget))


def verify_paper(
    golden: dict | None = None,
    name_filter: str | None = None,
    budget: int = DEFAULT_BUDGET,
    workers: int = 4,
) -> list[AnchorResult]:
    """Evaluate anchors (concurrently) and return results in corpus order."""
    golden = load_golden() if golden is None else golden
    names = [n for n in ANCHORS if name_filter is None or name_filter in n]
    for n in names:
        if n not in golden:
            raise KeyError(f"no golden values for anchor '{n}'")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda n: check_anchor(n, golden[n], budget), names))
