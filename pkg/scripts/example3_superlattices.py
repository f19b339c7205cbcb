"""Can any quotient of P^4 by Z/3 have all 3-dimensional cones smooth?

An index-3 superlattice of Z^4 is Z^4 + Z g/3 for a nonzero g in (Z/3)^4,
up to sign: 40 candidates.  For each, refine the fan of P^4 and report the
class group and whether every 3-cone stays smooth.  The printed rays of the
five-vector example have unimodular 4-subsets, so they describe P^4 itself.
"""

from fractions import Fraction
from itertools import combinations, product

from toric_wci.coxcl import class_group
from toric_wci.fan import cone_is_smooth, singularity_report
from toric_wci.gwps import lattice_isomorphic, projective_space_fan, refine_lattice
from toric_wci.io import load_fan


def main():
    base = projective_space_fan(4)
    ex3 = load_fan("example3.fan")
    print(f"example3 is P^4: {lattice_isomorphic(ex3, base)}; Cl = {class_group(ex3)}")
    seen, hits, both = set(), 0, 0
    for g in product(range(3), repeat=4):
        if not any(g):
            continue
        key = min(g, tuple((-x) % 3 for x in g))
        if key in seen:
            continue
        seen.add(key)
        fan = refine_lattice(base, [tuple(Fraction(x, 3) for x in g)])
        ok3 = all(cone_is_smooth(fan, c) for c in combinations(range(5), 3))
        rep = singularity_report(fan)
        cl = class_group(fan)
        hits += ok3
        both += ok3 and cl.torsion == (3,)
        print(f"g = {g}/3  Cl = {str(cl):<10} 3-cones smooth: {ok3!s:<5} "
              f"isolated: {rep.isolated}")
    print(f"{len(seen)} superlattices, {hits} with every 3-cone smooth, "
          f"{both} of those with Cl = Z + Z/3")


if __name__ == "__main__":
    main()
