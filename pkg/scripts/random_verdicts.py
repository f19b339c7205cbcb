"""Tabulate verdict conclusions over random degree systems on the corpus ambients."""

import argparse
import random
from collections import Counter

from toric_wci.coxcl import class_group
from toric_wci.io import load_fan
from toric_wci.wci import CiSpec, monomial_exists, theorem_verdict

AMBIENTS = ["p2.fan", "p3.fan", "p4.fan", "p1xp1.fan", "example2.fan", "example4_p3.fan", "example4_p5.fan", "example4_p7.fan"]


def random_spec(rng, fan, cl):
    k = rng.randint(1, fan.lattice_rank - 1)
    degs = []
    for _ in range(k):
        free = [rng.randint(0, 4) for _ in range(cl.free_rank)]
        tors = [rng.randrange(d) for d in cl.torsion]
        degs.append(cl.make(free, tors))
    if not all(monomial_exists(cl, d) for d in degs):
        return None
    return CiSpec(fan, tuple(degs))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=200, help="specs per ambient")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    for name in AMBIENTS:
        fan = load_fan(name)
        cl = class_group(fan)
        tally, failed = Counter(), Counter()
        made = 0
        while made < args.n:
            spec = random_spec(rng, fan, cl)
            if spec is None or any(not any(d.free) for d in spec.degrees):
                continue
            made += 1
            v = theorem_verdict(spec)
            tally[v.conclusion.value] += 1
            failed.update(v.failed)
        print(f"{name:<18} " + "  ".join(f"{k}={c}" for k, c in sorted(tally.items())))
        if failed:
            print(f"{'':<18} failed flags: " + ", ".join(f"{k}={c}" for k, c in sorted(failed.items())))


if __name__ == "__main__":
    main()
