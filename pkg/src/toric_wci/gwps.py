"""Generalized weighted projective spaces: weights, classification, lattices."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import combinations, permutations
from math import lcm
from typing import Sequence

from .coxcl import class_group
from .exactmat import (
    IntMatrix,
    content,
    hermite_normal_form,
    kernel_basis,
    primitive,
    rational_inverse,
    smith_normal_form,
)
from .fan import Fan


class NotGwpsError(ValueError):
    """The fan is not a generalized weighted projective space."""


@dataclass(frozen=True)
class WeightSystem:
    weights: tuple[int, ...]

    def __post_init__(self):
        w = tuple(int(a) for a in self.weights)
        object.__setattr__(self, "weights", w)
        if len(w) < 2:
            raise ValueError("need at least two weights")
        if any(a < 1 for a in w):
            raise ValueError(f"weights must be positive: {w}")
        if content(w) != 1:
            raise ValueError(f"weights {w} have a common factor")

    @property
    def dim(self) -> int:
        return len(self.weights) - 1

    def __iter__(self):
        return iter(self.weights)

    def __len__(self):
        return len(self.weights)

    def __str__(self) -> str:
        return "P(" + ",".join(map(str, self.weights)) + ")"


@dataclass(frozen=True)
class GwpsClassification:
    kind: str  # "WPS" or "quotient"
    weights: WeightSystem
    quotient_group: tuple[int, ...] = ()

    @property
    def is_wps(self) -> bool:
        return self.kind == "WPS"

    def __str__(self) -> str:
        if self.is_wps:
            return f"weighted projective space {_pname(self.weights)}"
        grp = " × ".join(f"Z/{d}" for d in self.quotient_group)
        return f"quotient of {_pname(self.weights)} by {grp}"


def _pname(w: WeightSystem) -> str:
    if all(a == 1 for a in w.weights):
        return f"P^{w.dim}"
    return str(w)


def is_gwps(fan: Fan) -> bool:
    return fan.n_rays == fan.lattice_rank + 1


@lru_cache(maxsize=1024)
def weights_of(fan: Fan) -> WeightSystem:
    """The positive primitive relation ``sum a_i v_i = 0`` among the rays."""
    if not is_gwps(fan):
        raise NotGwpsError(f"{fan.n_rays} rays in rank {fan.lattice_rank}: not N+1")
    ker = kernel_basis(fan.ray_matrix())
    if len(ker) != 1:
        raise NotGwpsError(f"ray relations have rank {len(ker)}, expected 1")
    k = ker[0]
    if all(x < 0 for x in k):
        k = tuple(-x for x in k)
    if not all(x > 0 for x in k):
        raise NotGwpsError(f"ray relation {k} is not positive; the rays do not span positively")
    return WeightSystem(k)


def classify(fan: Fan) -> GwpsClassification:
    w = weights_of(fan)
    torsion = class_group(fan).torsion
    return GwpsClassification("quotient" if torsion else "WPS", w, torsion)


def weights_well_formed(w: WeightSystem | Sequence[int]) -> bool:
    """Every leave-one-out gcd equals 1."""
    a = tuple(w)
    return all(content(a[:i] + a[i + 1:]) == 1 for i in range(len(a)))


def quotient_images(w: WeightSystem | Sequence[int]) -> list[tuple[int, ...]]:
    """Images of the standard basis in ``Z^{N+1} / Z (a_0, ..., a_N)``.

    Coordinates come from the Smith right-transform ``R``: ``w @ R`` is a
    multiple of the first unit vector, so dropping the first coordinate of
    ``x @ R`` kills exactly ``Z w``.  The images are not primitivized; image
    ``i`` has content ``gcd`` of the weights other than ``a_i``.
    """
    a = tuple(w)
    R = smith_normal_form([a]).right
    return [R.row(i)[1:] for i in range(len(a))]


def fan_from_weights(w: WeightSystem | Sequence[int]) -> Fan:
    if not isinstance(w, WeightSystem):
        w = WeightSystem(tuple(w))
    if not weights_well_formed(w):
        raise ValueError(f"{w} is not well formed; the quotient lattice images are not primitive")
    rays = quotient_images(w)
    N = w.dim
    cones = list(combinations(range(N + 1), N))
    return Fan(N, tuple(rays), tuple(cones))


def _rationals(v) -> tuple[Fraction, ...]:
    out = []
    for x in v:
        if isinstance(x, (list, tuple)):
            if len(x) != 2:
                raise ValueError(f"rational must be a [numerator, denominator] pair: {x!r}")
            out.append(Fraction(int(x[0]), int(x[1])))
        elif isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            out.append(Fraction(x))
        else:
            raise ValueError(f"not an exact rational: {x!r}")
    return tuple(out)


def superlattice_basis(rank: int, gens: Sequence[Sequence]) -> tuple[int, list[list[int]]]:
    """Basis of ``Z^rank + sum Z g`` as ``(q, B)``: the rows of ``B / q``."""
    gens = [_rationals(g) for g in gens]
    for g in gens:
        if len(g) != rank:
            raise ValueError(f"generator of length {len(g)} in a rank-{rank} lattice")
    q = lcm(1, *(x.denominator for g in gens for x in g))
    rows = [[q * int(i == j) for j in range(rank)] for i in range(rank)]
    rows += [[int(q * x) for x in g] for g in gens]
    H, _ = hermite_normal_form(rows)
    return q, [list(H.row(i)) for i in range(rank)]


def refine_lattice(fan: Fan, superlattice_gens: Sequence[Sequence]) -> Fan:
    """Read the same rays in the finite-index superlattice generated by
    ``Z^N`` and ``superlattice_gens`` (rationals as Fractions or pairs).
    """
    N = fan.lattice_rank
    q, B = superlattice_basis(N, superlattice_gens)
    Binv = rational_inverse(B)
    rays = []
    for v in fan.rays:
        c = [q * sum(Fraction(v[k]) * Binv[k][j] for k in range(N)) for j in range(N)]
        if any(x.denominator != 1 for x in c):
            raise ValueError("ray is not a lattice vector of the superlattice")
        rays.append(primitive([int(x) for x in c]))
    return Fan(N, tuple(rays), fan.max_cones)


def lattice_index(fan_or_rank, gens: Sequence[Sequence]) -> int:
    rank = fan_or_rank.lattice_rank if isinstance(fan_or_rank, Fan) else fan_or_rank
    q, B = superlattice_basis(rank, gens)
    return q**rank // abs(IntMatrix.from_rows(B).det())


def lattice_isomorphic(f1: Fan, f2: Fan) -> bool:
    """Is there a unimodular map sending the rays of ``f1`` onto those of
    ``f2`` and maximal cones onto maximal cones?

    Searches ray permutations; fine for the small fans handled here.
    """
    N, b = f1.lattice_rank, f1.n_rays
    if (N, b, len(f1.max_cones)) != (f2.lattice_rank, f2.n_rays, len(f2.max_cones)):
        return False
    basis = _independent_rows(f1.rays, N)
    if basis is None:
        return False
    A_inv = rational_inverse([f1.rays[i] for i in basis])
    cones2 = {tuple(sorted(c)) for c in f2.max_cones}
    for perm in permutations(range(b)):
        if {tuple(sorted(perm[i] for i in c)) for c in f1.max_cones} != cones2:
            continue
        target = [f2.rays[perm[i]] for i in basis]
        g = [[sum(A_inv[r][k] * target[k][c] for k in range(N)) for c in range(N)] for r in range(N)]
        if any(x.denominator != 1 for row in g for x in row):
            continue
        G = IntMatrix.from_rows([[int(x) for x in row] for row in g])
        if abs(G.det()) != 1:
            continue
        if all(
            tuple(sum(f1.rays[i][k] * G[k, c] for k in range(N)) for c in range(N)) == f2.rays[perm[i]]
            for i in range(b)
        ):
            return True
    return False


def _independent_rows(rows, N) -> list[int] | None:
    chosen: list[int] = []
    for i in range(len(rows)):
        trial = chosen + [i]
        if IntMatrix.from_rows([rows[j] for j in trial], cols=N).rank() == len(trial):
            chosen = trial
            if len(chosen) == N:
                return chosen
    return None


def projective_space_fan(n: int) -> Fan:
    """Standard fan of P^n: rays ``-(e_1+...+e_n), e_1, ..., e_n``."""
    rays = [tuple(-1 for _ in range(n))] + [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return Fan(n, tuple(rays), tuple(combinations(range(n + 1), n)))


def cyclic_quotient_generator(p: int) -> tuple[Fraction, ...]:
    """Lattice generator for ``P^{p-1} / (Z/p)`` acting by ``x_i -> e^i x_i``.

    In the coordinates of :func:`projective_space_fan`, where ray ``i`` is
    the image of ``x_i``, this is ``(1/p) (1, 2, ..., p-1)``.
    """
    return tuple(Fraction(i, p) for i in range(1, p))
