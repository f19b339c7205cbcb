"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

Run under pytest (lines appear in the normal output) or directly with
``python3 tests/test_acceptance.py`` for just the scorecard.
"""

import json
import random
import sys
from functools import reduce
from itertools import combinations
from math import gcd

import pytest

from toric_wci import cli
from toric_wci.coxcl import class_group, group_D, irrelevant_locus, is_ample
from toric_wci.exactmat import IntMatrix, content, smith_normal_form
from toric_wci.fan import Fan, cone_is_smooth, singularity_report
from toric_wci.gwps import (
    classify,
    cyclic_quotient_generator,
    projective_space_fan,
    refine_lattice,
    weights_of,
)
from toric_wci.io import load_fan, load_spec
from toric_wci.paperchecks import _roundtrip_counts, load_golden
from toric_wci.wci import (
    CiSpec,
    Conclusion,
    ambient_betti,
    lefschetz_predict,
    monomial_exists,
    theorem_verdict,
)


def report(n, title, checks):
    """Print one line for criterion ``n``; ``checks`` maps label -> bool."""
    failed = [k for k, ok in checks.items() if not ok]
    status = "PASS" if not failed else "FAIL"
    detail = "" if not failed else "  failed: " + "; ".join(failed)
    line = f"[criterion {n}] {status}  {title}{detail}"
    cap = getattr(report, "capture", None)
    if cap is not None:
        with cap.disabled():
            print("\n" + line)
    else:
        print(line)
    return not failed


@pytest.fixture(autouse=True)
def _show(capsys):
    report.capture = capsys
    yield
    report.capture = None


def fan_of(rays, cones):
    return Fan(len(rays[0]), tuple(map(tuple, rays)), tuple(map(tuple, cones)))


def test_criterion_1_example2():
    rays = [(1, 0, 0), (0, 1, 0), (1, -3, 5), (-2, 2, -5)]
    fan = fan_of(rays, combinations(range(4), 3))
    cl = class_group(fan)
    D = group_D(cl)
    c = classify(fan)
    checks = {
        "Cl = Z + Z/5": (cl.free_rank, cl.torsion) == (1, (5,)),
        "D = C* x Z/5": (D.torus_rank, D.finite_part) == (1, (5,)),
        "P^3 quotient by Z/5": (c.kind, c.weights.dim, c.quotient_group) == ("quotient", 3, (5,)),
        "weights (1,1,1,1)": c.weights.weights == (1, 1, 1, 1),
        "irrelevant locus = origin": irrelevant_locus(fan).is_origin(),
    }
    assert report(1, "Example 2: Cl, D, classification, weights, irrelevant locus", checks)


def test_criterion_2_example3():
    fan = load_fan("example3.fan")
    cl = class_group(fan)
    checks = {
        "rays sum to zero": all(sum(col) == 0 for col in zip(*fan.rays)),
        "weights (1,1,1,1,1)": weights_of(fan).weights == (1, 1, 1, 1, 1),
        f"Cl = Z + Z/3 (computed {cl})": (cl.free_rank, cl.torsion) == (1, (3,)),
        "every 3-subset smooth": all(cone_is_smooth(fan, s) for s in combinations(range(5), 3)),
        "isolated singularities": singularity_report(fan).isolated,
    }
    assert report(2, "Example 3: relation, Cl, smooth 3-cones, isolated", checks)


def test_criterion_3_example4():
    checks = {}
    for p in (3, 5, 7):
        fan = refine_lattice(projective_space_fan(p - 1), [cyclic_quotient_generator(p)])
        cl = class_group(fan)
        c = classify(fan)
        checks[f"p={p}: Cl = Z + Z/{p}"] = (cl.free_rank, cl.torsion) == (1, (p,))
        checks[f"p={p}: P^{p - 1} quotient by Z/{p}"] = (
            c.kind == "quotient" and c.weights.weights == (1,) * p and c.quotient_group == (p,)
        )
    assert report(3, "Example 4 for p = 3, 5, 7", checks)


def _sweep():
    return dict(_roundtrip_counts(6, 4))


def test_criterion_4_weight_round_trip():
    s = _sweep()
    checks = {
        f"{s['well_formed_systems']} well-formed systems, 0 failures": s["roundtrip_failures"] == 0,
        "nonempty sweep": s["well_formed_systems"] > 0,
    }
    assert report(4, f"weights <-> fan round trip over {s['systems']} systems (N <= 4, weights <= 6)", checks)


def test_criterion_5_primitive_iff_well_formed():
    s = _sweep()
    checks = {"primitive rays iff well formed": s["primitive_iff_well_formed_violations"] == 0}
    assert report(5, f"primitive images iff well formed, {s['systems']} systems", checks)


def test_criterion_6_lefschetz():
    checks = {
        f"b(P^{N})": ambient_betti(projective_space_fan(N)).ambient == tuple(1 - k % 2 for k in range(2 * N + 1))
        for N in range(1, 7)
    }
    q = lefschetz_predict(load_spec("quintic_p4.spec").spec)
    checks["quintic b0,b1,b2 = 1,0,1"] = q.ci_low == (1, 0, 1)
    c = lefschetz_predict(load_spec("curve11_p1xp1.spec").spec)
    checks["(1,1) curve: connectedness only"] = c.dim_x == 1 and c.ci_low == (1,)
    assert report(6, "Lefschetz and connectedness predictions", checks)


QUOTIENTS = ["example2.fan", "example4_p3.fan", "example4_p5.fan", "example4_p7.fan"]


def _fano_ample_systems(fan, cl, rng, n):
    out = []
    while len(out) < n:
        k = rng.randint(1, fan.lattice_rank - 1)
        degs = tuple(cl.make([rng.randint(1, 3)], [rng.randrange(cl.torsion[0])]) for _ in range(k))
        if all(monomial_exists(cl, d) for d in degs):
            out.append(degs)
    return out


def test_criterion_7_verdicts():
    rng = random.Random(7)
    checks = {}
    prop_ok, fano_seen, count = True, 0, 0
    per = 25  # 4 ambients x 25 = 100 randomized specs
    for name in QUOTIENTS:
        fan = load_fan(name)
        cl = class_group(fan)
        for degs in _fano_ample_systems(fan, cl, rng, per):
            count += 1
            v = theorem_verdict(CiSpec(fan, degs))
            ample = all(is_ample(fan, cl, d) for d in degs)
            fano = ample and sum(d.free[0] for d in degs) < fan.n_rays
            if ample and fano:
                fano_seen += 1
                prop_ok &= v.proposition_branch and v.conclusion is Conclusion.QUOTIENT_FORCES_SINGULAR
            else:
                prop_ok &= not v.proposition_branch
    checks[f"Proposition branch on all {fano_seen} ample Fano systems among {count}"] = prop_ok and fano_seen > 0
    v = theorem_verdict(load_spec("fano_example2.spec").spec)
    checks["corpus Fano spec on Example 2"] = v.proposition_branch
    v = theorem_verdict(load_spec("curve11_p1xp1.spec").spec)
    checks["(1,1) curve fails exactly dim_ge_2"] = v.failed == ("dim_ge_2",)
    v = theorem_verdict(load_spec("general_type_example4.spec").spec)
    checks["general type fails exactly fano, index -2"] = v.failed == ("fano",) and v.fano_index == -2
    v = theorem_verdict(load_spec("hyperplane_example4.spec").spec)
    checks["hyperplane: smoothness unverifiable"] = (
        v.failed == () and "X is smooth" in v.inconclusive and v.conclusion is not Conclusion.Y_IS_WPS
    )
    assert report(7, "verdicts: Proposition branch and closing counterexamples", checks)


def _minors_oracle(rays):
    """Rays extend to a lattice basis iff the gcd of the maximal minors is 1."""
    k = len(rays)
    minors = []
    for cols in combinations(range(3), k):
        M = [[r[c] for c in cols] for r in rays]
        minors.append(IntMatrix.from_rows(M).det())
    return reduce(gcd, minors, 0) == 1


def test_criterion_8_oracles():
    rng = random.Random(8)
    smooth_ok, cones = True, 0
    while cones < 1000:
        k = rng.randint(1, 3)
        rays = [tuple(rng.randint(-5, 5) for _ in range(3)) for _ in range(k)]
        if any(content(r) != 1 for r in rays) or IntMatrix.from_rows(rays).rank() < k:
            continue
        cones += 1
        fan = Fan(3, tuple(rays), (tuple(range(k)),))
        smooth_ok &= cone_is_smooth(fan, tuple(range(k))) == _minors_oracle(rays)
    snf_ok = True
    for _ in range(1000):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        A = IntMatrix.from_rows([[rng.randint(-20, 20) for _ in range(n)] for _ in range(m)])
        s = smith_normal_form(A)
        snf_ok &= s.left @ A @ s.right == s.diagonal() and abs(s.left.det()) == 1 and abs(s.right.det()) == 1
    checks = {"cone_is_smooth vs minors oracle, 1000 cones": smooth_ok, "SNF reconstruction, 1000 matrices": snf_ok}
    assert report(8, "oracle equivalence", checks)


def test_criterion_9_negative_control(tmp_path, capsys):
    golden = load_golden()
    golden["example2"]["cl_torsion"] = [7]
    path = tmp_path / "tampered.json"
    path.write_text(json.dumps(golden))
    code = cli.main(["verify-paper", "--golden", str(path)])
    out = capsys.readouterr().out
    fails = [line.split()[1] for line in out.splitlines() if line.startswith("FAIL")]
    clean = cli.main(["verify-paper"])
    clean_out = capsys.readouterr().out
    checks = {
        "tampered golden exits nonzero": code == 1,
        "failure names example2 only": fails == ["example2"],
        "diff shows 7 vs 5": "cl_torsion: expected [7], got [5]" in out,
        "untampered golden exits 0": clean == 0 and "0 fail" in clean_out.splitlines()[-1],
    }
    assert report(9, "negative control on the golden file", checks)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
