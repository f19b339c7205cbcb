"""Cox quotient data: class group, grading, irrelevant locus, ampleness."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exactmat import IntMatrix, hermite_normal_form, smith_normal_form
from .fan import Fan, _duals


@dataclass(frozen=True, order=True)
class DivisorClass:
    """Element of ``Z^r + Z/d_1 + ... + Z/d_t``; torsion residues are reduced."""

    free: tuple[int, ...]
    torsion: tuple[int, ...] = ()
    moduli: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.torsion) != len(self.moduli):
            raise ValueError("torsion part and moduli differ in length")
        object.__setattr__(self, "free", tuple(int(x) for x in self.free))
        object.__setattr__(self, "torsion", tuple(int(x) % m for x, m in zip(self.torsion, self.moduli)))
        object.__setattr__(self, "moduli", tuple(int(m) for m in self.moduli))

    def _check(self, other: DivisorClass):
        if len(self.free) != len(other.free) or self.moduli != other.moduli:
            raise ValueError("classes live in different groups")

    def __add__(self, other: DivisorClass) -> DivisorClass:
        self._check(other)
        return DivisorClass(
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple(a + b for a, b in zip(self.torsion, other.torsion)),
            self.moduli,
        )

    def __neg__(self) -> DivisorClass:
        return DivisorClass(tuple(-a for a in self.free), tuple(-a for a in self.torsion), self.moduli)

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        return self + (-other)

    def __rmul__(self, k: int) -> DivisorClass:
        return DivisorClass(tuple(k * a for a in self.free), tuple(k * a for a in self.torsion), self.moduli)

    def is_torsion(self) -> bool:
        return not any(self.free)

    def __str__(self) -> str:
        free = ",".join(map(str, self.free))
        if not self.moduli:
            return free if len(self.free) == 1 else f"({free})"
        tors = ",".join(f"{t} mod {m}" for t, m in zip(self.torsion, self.moduli))
        return f"({free} | {tors})"


@dataclass(frozen=True)
class ClassGroupData:
    """Cl(Y) with the grading of the Cox ring.

    ``projection`` has one row per group coordinate (free rows first, then
    one row per torsion factor) and one column per ray; column ``i`` is the
    class of ``D_i``.
    """

    free_rank: int
    torsion: tuple[int, ...]
    projection: IntMatrix
    lift: IntMatrix  # b x b inverse of the full unimodular change of basis
    n_trivial: int  # rows of the SNF with factor 1, skipped in projection

    @property
    def n_rays(self) -> int:
        return self.projection.cols

    def zero(self) -> DivisorClass:
        return DivisorClass((0,) * self.free_rank, (0,) * len(self.torsion), self.torsion)

    def class_of(self, coeffs: Sequence[int]) -> DivisorClass:
        """Class of the torus-invariant divisor ``sum coeffs[i] * D_i``."""
        if len(coeffs) != self.n_rays:
            raise ValueError(f"expected {self.n_rays} coefficients, got {len(coeffs)}")
        v = [sum(self.projection[r, i] * c for i, c in enumerate(coeffs)) for r in range(self.projection.rows)]
        return DivisorClass(tuple(v[: self.free_rank]), tuple(v[self.free_rank:]), self.torsion)

    @property
    def degrees(self) -> tuple[DivisorClass, ...]:
        b = self.n_rays
        return tuple(self.class_of([int(i == j) for j in range(b)]) for i in range(b))

    def make(self, free: Sequence[int], torsion: Sequence[int] = ()) -> DivisorClass:
        torsion = tuple(torsion) or (0,) * len(self.torsion)
        if len(free) != self.free_rank or len(torsion) != len(self.torsion):
            raise ValueError("class does not match the group's shape")
        return DivisorClass(tuple(free), torsion, self.torsion)

    def lift_class(self, cls: DivisorClass) -> tuple[int, ...]:
        """Some invariant divisor (coefficient vector) in the given class."""
        if len(cls.free) != self.free_rank or cls.moduli != self.torsion:
            raise ValueError("class does not belong to this group")
        y = [0] * self.n_trivial + list(cls.torsion) + list(cls.free)
        b = self.n_rays
        return tuple(sum(self.lift[i, j] * y[j] for j in range(b)) for i in range(b))

    def __str__(self) -> str:
        return _group_string(self.free_rank, self.torsion)


def _group_string(free_rank: int, torsion: Sequence[int], torus: bool = False) -> str:
    if torus:
        parts = ["C*" if free_rank == 1 else f"(C*)^{free_rank}"] if free_rank else []
        parts += [f"Z/{d}" for d in torsion]
        return " × ".join(parts) or "1"
    parts = ["Z" if free_rank == 1 else f"Z^{free_rank}"] if free_rank else []
    parts += [f"Z/{d}" for d in torsion]
    return " ⊕ ".join(parts) or "0"


@lru_cache(maxsize=1024)
def class_group(fan: Fan) -> ClassGroupData:
    """Cokernel of the ray matrix, with canonical coordinates.

    With ``L @ A @ R = D`` in Smith form, ``L`` maps Z^b onto coordinates
    where the image of ``A`` is ``D Z^N``.  Rows with factor 1 vanish in the
    quotient, rows with factor ``d > 1`` are torsion coordinates mod ``d``,
    and the remaining rows are free.  The free rows are brought to Hermite
    form so that, e.g., a weighted projective space gets its positive weights.
    """
    A = fan.ray_matrix()
    b, N = A.rows, A.cols
    if N == 0:
        L = IntMatrix.identity(b)
        factors: tuple[int, ...] = ()
    else:
        snf = smith_normal_form(A)
        L, factors = snf.left, snf.invariant_factors
    rank = sum(1 for d in factors if d)
    n_trivial = sum(1 for d in factors if d == 1)
    torsion_rows = [t for t in range(rank) if factors[t] > 1]
    torsion = tuple(factors[t] for t in torsion_rows)
    free_block = L.select_rows(range(rank, b))
    Hf = hermite_normal_form(free_block)[0] if free_block.rows else free_block
    rows = [Hf.row(i) for i in range(Hf.rows)]
    rows += [tuple(x % factors[t] for x in L.row(t)) for t in torsion_rows]
    projection = IntMatrix.from_rows(rows, cols=b)

    # full change of basis P: trivial rows, torsion rows, HNF free rows; lift = P^-1
    P_rows = [L.row(t) for t in range(n_trivial)] + [L.row(t) for t in torsion_rows] + rows[: Hf.rows]
    P = IntMatrix.from_rows(P_rows, cols=b)
    lift = _unimodular_inverse(P)
    return ClassGroupData(b - rank, torsion, projection, lift, n_trivial)


def _unimodular_inverse(P: IntMatrix) -> IntMatrix:
    n = P.rows
    H, U = hermite_normal_form(P)
    # H is upper triangular with unit pivots for a unimodular P, hence the identity
    if H != IntMatrix.identity(n):
        raise ValueError("matrix is not unimodular")
    return U


@dataclass(frozen=True)
class GroupD:
    """``Hom(Cl(Y), C*)``: a torus times a finite abelian group."""

    torus_rank: int
    finite_part: tuple[int, ...]

    @property
    def connected(self) -> bool:
        return not self.finite_part

    def __str__(self) -> str:
        return _group_string(self.torus_rank, self.finite_part, torus=True)


def group_D(cl: ClassGroupData) -> GroupD:
    return GroupD(cl.free_rank, cl.torsion)


def describe_cl(cl: ClassGroupData) -> str:
    return _group_string(cl.free_rank, cl.torsion)


@dataclass(frozen=True)
class IrrelevantLocus:
    """Monomial generators of the irrelevant ideal, as ray-index sets."""

    generators: tuple[tuple[int, ...], ...]
    n_vars: int

    def components(self) -> tuple[tuple[int, ...], ...]:
        """Irreducible components of Z, each the coordinate subspace
        ``{x_i = 0 : i in C}``; these are the minimal transversals.
        """
        gens = [set(g) for g in self.generators]
        found: list[tuple[int, ...]] = []
        for k in range(self.n_vars + 1):
            for C in combinations(range(self.n_vars), k):
                s = set(C)
                if all(g & s for g in gens) and not any(set(f) <= s for f in found):
                    found.append(C)
        return tuple(found)

    def is_origin(self) -> bool:
        return self.components() == (tuple(range(self.n_vars)),)


def _minimal(sets) -> tuple[tuple[int, ...], ...]:
    sets = sorted(set(sets), key=lambda s: (len(s), s))
    keep: list[tuple[int, ...]] = []
    for s in sets:
        if not any(set(k) <= set(s) for k in keep):
            keep.append(s)
    return tuple(sorted(keep))


def irrelevant_locus(fan: Fan) -> IrrelevantLocus:
    b = fan.n_rays
    comps = (tuple(i for i in range(b) if i not in set(c)) for c in fan.max_cones)
    return IrrelevantLocus(_minimal(comps), b)


def degree_of_monomial(cl: ClassGroupData, exponents: Sequence[int]) -> DivisorClass:
    if len(exponents) != cl.n_rays:
        raise ValueError(f"monomial needs {cl.n_rays} exponents, got {len(exponents)}")
    if any(e < 0 for e in exponents):
        raise ValueError("exponents must be nonnegative")
    return cl.class_of(exponents)


@dataclass(frozen=True)
class Homogeneity:
    degree: DivisorClass | None
    mismatch: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.degree is not None


def is_homogeneous(cl: ClassGroupData, monomials: Sequence[Sequence[int]]) -> Homogeneity:
    """Common degree of the monomials, or the first pair with different degrees."""
    if not monomials:
        raise ValueError("need at least one monomial")
    first = degree_of_monomial(cl, monomials[0])
    for j, m in enumerate(monomials[1:], start=1):
        if degree_of_monomial(cl, m) != first:
            return Homogeneity(None, (0, j))
    return Homogeneity(first)


def support_function_slopes(fan: Fan, coeffs: Sequence[int]) -> list[tuple[Fraction, ...]]:
    """For each maximal cone, the ``m`` with ``<m, v_i> = -c_i`` on its rays."""
    return [
        tuple(Fraction(x, d) for x in _scaled_slope(adj, cone, coeffs))
        for cone, (adj, d) in zip(fan.max_cones, _duals(fan))
    ]


def _scaled_slope(adj, cone, coeffs) -> list[int]:
    # rays-as-rows matrix A has A @ adj = det I, so m = adj @ (-c) / det
    return [-sum(adj[r][k] * coeffs[i] for k, i in enumerate(cone)) for r in range(len(adj))]


def is_ample(
    fan: Fan,
    cl: ClassGroupData,
    cls: DivisorClass,
    witness_coeffs: Sequence[int] | None = None,
) -> bool:
    """Strict convexity of the support function of a Q-Cartier divisor.

    ``witness_coeffs`` is an invariant divisor in ``cls``; when omitted one
    is lifted from the class.  Ampleness does not depend on the choice: two
    witnesses differ by a divisor with a torsion class, whose support
    function is linear.
    """
    if witness_coeffs is None:
        witness_coeffs = cl.lift_class(cls)
    elif cl.class_of(witness_coeffs) != cls:
        raise ValueError(
            f"witness {tuple(witness_coeffs)} has class {cl.class_of(witness_coeffs)}, not {cls}"
        )
    c = list(witness_coeffs)
    for cone, (adj, d) in zip(fan.max_cones, _duals(fan)):
        if d == 0:
            raise ValueError(f"cone {cone} is not full-dimensional simplicial")
        m = _scaled_slope(adj, cone, c)
        sign = 1 if d > 0 else -1
        inside = set(cone)
        for j, v in enumerate(fan.rays):
            # <m/d, v_j> > -c_j, scaled by |d|
            if j not in inside and sign * sum(a * x for a, x in zip(m, v)) <= -c[j] * abs(d):
                return False
    return True


def anticanonical(cl: ClassGroupData) -> DivisorClass:
    return cl.class_of([1] * cl.n_rays)
