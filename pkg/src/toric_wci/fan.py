"""Simplicial fans: validation, completeness, smooth and terminal cones."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import prod
from typing import Iterable, Sequence

from .exactmat import (
    IntMatrix,
    adjugate,
    content,
    feasible_point,
    smith_normal_form,
    solve_rational,
)

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    """A lattice enumeration would visit more points than allowed."""


@dataclass(frozen=True)
class Fan:
    """A fan given by primitive rays and maximal cones (as ray-index tuples)."""

    lattice_rank: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(
            self, "max_cones", tuple(tuple(sorted(int(i) for i in c)) for c in self.max_cones)
        )

    @property
    def dim(self) -> int:
        return self.lattice_rank

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def ray_matrix(self) -> IntMatrix:
        return IntMatrix.from_rows(self.rays, cols=self.lattice_rank)

    def cone_matrix(self, cone: Iterable[int]) -> IntMatrix:
        return IntMatrix.from_rows([self.rays[i] for i in cone], cols=self.lattice_rank)

    def cones(self) -> list[tuple[int, ...]]:
        """All nonzero cones, i.e. the nonempty faces of the maximal cones."""
        seen = set()
        for c in self.max_cones:
            for k in range(1, len(c) + 1):
                seen.update(combinations(c, k))
        return sorted(seen, key=lambda c: (len(c), c))

    def f_vector(self) -> tuple[int, ...]:
        """``(f_0, ..., f_N)``: number of cones of each dimension, with ``f_0 = 1``."""
        f = [0] * (self.lattice_rank + 1)
        f[0] = 1
        for c in self.cones():
            f[len(c)] += 1
        return tuple(f)


@dataclass(frozen=True)
class Violation:
    kind: str
    indices: tuple
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


def validate(fan: Fan, *, check_complete: bool = True) -> ValidationReport:
    """Collect every violated fan invariant; never raises on bad input."""
    out: list[Violation] = []
    N, b = fan.lattice_rank, fan.n_rays
    for i, r in enumerate(fan.rays):
        if len(r) != N:
            out.append(Violation("ray-dimension", (i,), f"ray {i} has {len(r)} coordinates, expected {N}"))
        elif not any(r):
            out.append(Violation("zero-ray", (i,), f"ray {i} is zero"))
        elif content(r) != 1:
            out.append(Violation("non-primitive-ray", (i,), f"ray {i} = {r} is not primitive"))
    seen: dict[tuple[int, ...], int] = {}
    for i, r in enumerate(fan.rays):
        if r in seen:
            out.append(Violation("duplicate-ray", (seen[r], i), f"rays {seen[r]} and {i} coincide"))
        else:
            seen[r] = i
    used = set()
    for k, c in enumerate(fan.max_cones):
        if len(set(c)) != len(c):
            out.append(Violation("repeated-index", (k,), f"cone {k} repeats a ray index"))
        bad = [i for i in c if not 0 <= i < b]
        if bad:
            out.append(Violation("index-range", (k, *bad), f"cone {k} refers to missing rays {bad}"))
        used.update(c)
    if len(set(fan.max_cones)) != len(fan.max_cones):
        out.append(Violation("duplicate-cone", (), "a maximal cone is listed twice"))
    unused = sorted(set(range(b)) - used)
    if unused:
        out.append(Violation("unused-ray", tuple(unused), f"rays {unused} lie in no cone"))
    if out:  # geometry below assumes well-typed data
        return ValidationReport(tuple(out))

    good = []
    full = all(len(c) == N for c in fan.max_cones)
    dets = [d for _, d in _duals(fan)] if full else None
    for k, c in enumerate(fan.max_cones):
        if len(c) != N:
            out.append(Violation("not-full-dimensional", (k,), f"cone {k} has {len(c)} rays, expected {N}"))
        elif (dets[k] if dets is not None else fan.cone_matrix(c).det()) == 0:
            out.append(Violation("not-simplicial", (k,), f"rays of cone {k} are linearly dependent"))
        else:
            good.append(k)
    if len(good) == len(fan.max_cones) and _is_degree_one_cover(fan):
        return ValidationReport(tuple(out))
    for k, l in combinations(good, 2):
        if not _meet_in_common_face(fan, fan.max_cones[k], fan.max_cones[l]):
            out.append(Violation("bad-intersection", (k, l), f"cones {k} and {l} overlap beyond a common face"))
    if check_complete and not out and not is_complete(fan):
        out.append(Violation("not-complete", (), "the cones do not cover the whole space"))
    return ValidationReport(tuple(out))


def _meet_in_common_face(fan: Fan, s: Sequence[int], t: Sequence[int]) -> bool:
    """Separating-hyperplane test for two simplicial cones.

    Looks for ``h`` vanishing on the shared rays, positive on the rest of
    ``s`` and negative on the rest of ``t``; strictness is normalized to 1.
    """
    shared = set(s) & set(t)
    N = fan.lattice_rank
    eq = [(fan.rays[i], 0) for i in sorted(shared)]
    le = [([-x for x in fan.rays[i]], -1) for i in s if i not in shared]
    le += [(fan.rays[j], -1) for j in t if j not in shared]
    return feasible_point(N, eq=eq, le=le) is not None


def _ridge_counts(fan: Fan) -> dict[tuple[int, ...], list[int]]:
    ridges: dict[tuple[int, ...], list[int]] = {}
    for k, c in enumerate(fan.max_cones):
        for r in combinations(c, len(c) - 1):
            ridges.setdefault(r, []).append(k)
    return ridges


@lru_cache(maxsize=256)
def _duals(fan: Fan) -> tuple[tuple[tuple[tuple[int, ...], ...], int], ...]:
    """Per maximal cone, ``(adj, det)`` with ``lam * det = x @ adj``."""
    out = []
    for c in fan.max_cones:
        adj, d = adjugate([fan.rays[i] for i in c])
        out.append((tuple(map(tuple, adj)), d))
    return tuple(out)


def _scaled_coefficients(adj, d, point) -> list[int]:
    """Barycentric coefficients times ``|det|``: same signs, integers only."""
    N = len(adj)
    s = 1 if d > 0 else -1
    return [s * sum(point[k] * adj[k][j] for k in range(N)) for j in range(N)]


def cone_coefficients(fan: Fan, cone: Sequence[int], point: Sequence) -> tuple[Fraction, ...]:
    """Coefficients ``lam`` with ``point = sum lam_i v_i`` over a full-dimensional simplicial cone."""
    cols = [[fan.rays[i][r] for i in cone] for r in range(fan.lattice_rank)]
    return solve_rational(cols, point)


def containing_cones(fan: Fan, point: Sequence) -> list[tuple[int, bool]]:
    """Maximal cones containing ``point``, each with an interior flag."""
    hits = []
    for k, (adj, d) in enumerate(_duals(fan)):
        lam = _scaled_coefficients(adj, d, point)
        if all(x >= 0 for x in lam):
            hits.append((k, all(x > 0 for x in lam)))
    return hits


def sample_coverage(fan: Fan, n: int = 64, seed: int = 0, radius: int = 10**6) -> tuple[bool, bool]:
    """Random-point check of the cover.

    Returns ``(covered, unique)``: every sample lies in some maximal cone,
    and no sample lies in the interior of two of them.
    """
    rng = random.Random(seed)
    covered = unique = True
    for _ in range(n):
        p = [rng.randint(-radius, radius) for _ in range(fan.lattice_rank)]
        if not any(p):
            continue
        hits = containing_cones(fan, p)
        if not hits:
            covered = False
        if sum(1 for _, inner in hits if inner) > 1:
            unique = False
    return covered, unique


def _dual_graph_connected(fan: Fan, ridges) -> bool:
    adj: dict[int, set[int]] = {k: set() for k in range(len(fan.max_cones))}
    for a, b in ridges.values():
        adj[a].add(b)
        adj[b].add(a)
    stack, seen = [0], {0}
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(fan.max_cones)


def _is_degree_one_cover(fan: Fan, seed: int = 0) -> bool:
    """Exact sufficient test that full-dimensional simplicial cones form a complete fan.

    If every ridge lies in two cones on opposite sides of it and the dual
    graph is connected, the cones cover the sphere with a constant number of
    sheets; one generic point lying in exactly one cone makes that number 1,
    which rules out any improper overlap.
    """
    if not fan.max_cones:
        return False
    ridges = _ridge_counts(fan)
    if any(len(v) != 2 for v in ridges.values()) or not _dual_graph_connected(fan, ridges):
        return False
    duals = _duals(fan)
    for r, (a, b) in ridges.items():
        # w must have a negative coordinate along u in cone a's basis
        pos = next(j for j, i in enumerate(fan.max_cones[a]) if i not in r)
        w = next(i for i in fan.max_cones[b] if i not in r)
        adj, d = duals[a]
        if d == 0 or _scaled_coefficients(adj, d, fan.rays[w])[pos] >= 0:
            return False
    rng = random.Random(seed)
    for _ in range(100):
        p = [rng.randint(-10**9, 10**9) for _ in range(fan.lattice_rank)]
        hits = containing_cones(fan, p)
        if any(not inner for _, inner in hits):
            continue  # on a wall; draw again
        return len(hits) == 1
    return False


def is_complete(fan: Fan, *, samples: int = 64, seed: int = 0) -> bool:
    """Ridge regularity plus connected dual graph, confirmed by sampling."""
    if not fan.max_cones or any(len(c) != fan.lattice_rank for c in fan.max_cones):
        return False
    ridges = _ridge_counts(fan)
    if any(len(v) != 2 for v in ridges.values()):
        return False
    if not _dual_graph_connected(fan, ridges):
        return False
    covered, _ = sample_coverage(fan, n=samples, seed=seed)
    return covered


def cone_is_smooth(fan: Fan, cone: Sequence[int]) -> bool:
    """True iff the cone's rays extend to a basis of the lattice."""
    if not cone:
        return True
    snf = smith_normal_form(fan.cone_matrix(cone))
    return all(d == 1 for d in snf.invariant_factors)


def cone_multiplicity(fan: Fan, cone: Sequence[int]) -> int:
    """Index of the rays' span in the saturated sublattice."""
    if not cone:
        return 1
    return prod(smith_normal_form(fan.cone_matrix(cone)).invariant_factors)


def box_points(fan: Fan, cone: Sequence[int], budget: int = DEFAULT_BUDGET):
    """Yield ``(point, coefficients)`` for lattice points in the half-open
    parallelepiped spanned by the cone's rays, the origin excluded.
    """
    V = fan.cone_matrix(cone)
    snf = smith_normal_form(V)
    d = snf.invariant_factors
    if any(x == 0 for x in d):
        raise ValueError(f"cone {tuple(cone)} is not simplicial")
    total = prod(d)
    if total > budget:
        raise BudgetExceeded(f"cone {tuple(cone)} has {total} box points, budget is {budget}")
    k = len(cone)
    L = snf.left
    # left @ V @ right = diag(d): the group (lattice in the span) / (ray lattice)
    # is generated by the rows of left^-1 @ diag(1/d) read back through V,
    # so coefficients of representative c are (c_i / d_i) @ left, reduced mod 1.
    for c in product(*(range(x) for x in d)):
        if not any(c):
            continue
        lam = [sum(Fraction(c[i], d[i]) * L[i, j] for i in range(k)) for j in range(k)]
        lam = [x - (x.numerator // x.denominator) for x in lam]
        point = tuple(
            int(sum(lam[j] * V[j, r] for j in range(k))) for r in range(fan.lattice_rank)
        )
        yield point, tuple(lam)


def cone_is_terminal(fan: Fan, cone: Sequence[int], budget: int = DEFAULT_BUDGET) -> bool:
    """True iff the simplex on 0 and the cone's rays has no other lattice points.

    A non-vertex lattice point of that simplex has all barycentric
    coefficients in [0, 1), so it shows up among the box points.
    """
    if cone_is_smooth(fan, cone):
        return True
    return all(sum(lam) > 1 for _, lam in box_points(fan, cone, budget))


@dataclass(frozen=True)
class SingularityReport:
    smooth_cones: dict = field(compare=False)
    singular_cones: tuple[tuple[int, ...], ...]
    codim: int | None  # None when smooth
    isolated: bool
    terminal: bool | None = None

    @property
    def smooth(self) -> bool:
        return not self.singular_cones


def singularity_report(fan: Fan, *, terminal: bool = False, budget: int = DEFAULT_BUDGET) -> SingularityReport:
    """Stratify the singular locus by cones.

    The orbit closure of a cone of dimension ``k`` has codimension ``k``, so
    the singular locus has codimension equal to the smallest singular cone.
    """
    flags = {c: cone_is_smooth(fan, c) for c in fan.cones()}
    singular = tuple(c for c, ok in flags.items() if not ok)
    codim = min((len(c) for c in singular), default=None)
    isolated = all(len(c) == fan.lattice_rank for c in singular)
    term = None
    if terminal:
        term = all(cone_is_terminal(fan, c, budget) for c in fan.max_cones)
    return SingularityReport(flags, singular, codim, isolated, term)
