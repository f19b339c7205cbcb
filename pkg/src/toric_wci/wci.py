"""Complete intersections in toric varieties: Betti and Picard predictions,
well-formedness, Fano index and the verdict on the weighted-projective
characterization.

All statements are about *generic* members of the given degrees; no
specific polynomial is ever examined.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, lcm
from typing import Sequence, Union

from .coxcl import ClassGroupData, DivisorClass, anticanonical, class_group, is_ample
from .exactmat import feasible_point
from .fan import Fan, is_complete, singularity_report, validate
from .gwps import WeightSystem, classify, fan_from_weights, is_gwps, weights_well_formed

RATIONAL_NOTE = "ranks of rational cohomology; torsion in H^*(-, Z) is not computed"


class SpecError(ValueError):
    """Malformed complete-intersection data."""


class NotAmpleError(ValueError):
    def __init__(self, index: int, degree):
        super().__init__(f"degree #{index} ({degree}) is not ample")
        self.index = index
        self.degree = degree


class UnsupportedError(ValueError):
    pass


@dataclass(frozen=True)
class CiSpec:
    """Degrees of ``k`` hypersurfaces in an ambient toric variety.

    For a :class:`WeightSystem` ambient the degrees are positive integers;
    for a :class:`Fan` ambient they are :class:`DivisorClass` values, with
    optional invariant-divisor witnesses (coefficient vectors).
    """

    ambient: Union[Fan, WeightSystem]
    degrees: tuple
    witnesses: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(self.degrees))
        if self.witnesses is not None:
            object.__setattr__(self, "witnesses", tuple(tuple(w) for w in self.witnesses))

    @property
    def k(self) -> int:
        return len(self.degrees)

    @property
    def ambient_dim(self) -> int:
        a = self.ambient
        return a.dim if isinstance(a, WeightSystem) else a.lattice_rank

    @property
    def dim(self) -> int:
        return self.ambient_dim - self.k


@dataclass(frozen=True)
class Ambient:
    """Everything derived from the ambient once: fan, grading, degrees."""

    fan: Fan
    cl: ClassGroupData
    degrees: tuple[DivisorClass, ...]
    witnesses: tuple[tuple[int, ...], ...]
    weights: WeightSystem | None  # set for weight-system ambients


def resolve(spec: CiSpec) -> Ambient:
    """Check a spec and put it in fan form.  Raises :class:`SpecError`."""
    if spec.k < 1:
        raise SpecError("need at least one hypersurface")
    if spec.dim < 1:
        raise SpecError(f"{spec.k} equations in dimension {spec.ambient_dim}: X would not be positive-dimensional")
    a = spec.ambient
    if isinstance(a, WeightSystem):
        if not weights_well_formed(a):
            raise SpecError(f"{a} is not well formed")
        if spec.witnesses is not None:
            raise SpecError("witnesses only apply to fan ambients")
        for d in spec.degrees:
            if not isinstance(d, int) or isinstance(d, bool) or d < 1:
                raise SpecError(f"degrees on {a} must be positive integers, got {d!r}")
            if not monomial_exists_weighted(a.weights, d):
                raise SpecError(f"no monomial of degree {d} in {a}")
        fan = fan_from_weights(a)
        cl = class_group(fan)
        degs = tuple(cl.make([d]) for d in spec.degrees)
        wits = tuple(cl.lift_class(c) for c in degs)
        return Ambient(fan, cl, degs, wits, a)
    if not isinstance(a, Fan):
        raise SpecError(f"unsupported ambient {type(a).__name__}")
    report = validate(a, check_complete=False)
    if not report.ok:
        raise SpecError("invalid fan: " + "; ".join(v.message for v in report.violations))
    cl = class_group(a)
    degs = []
    for d in spec.degrees:
        if not isinstance(d, DivisorClass) or len(d.free) != cl.free_rank or d.moduli != cl.torsion:
            raise SpecError(f"degree {d!r} is not a class in Cl(Y) = {cl}")
        degs.append(d)
    if spec.witnesses is None:
        wits = tuple(cl.lift_class(d) for d in degs)
    else:
        if len(spec.witnesses) != spec.k:
            raise SpecError("one witness per degree is required")
        for i, (d, w) in enumerate(zip(degs, spec.witnesses)):
            if len(w) != a.n_rays or cl.class_of(w) != d:
                raise SpecError(f"witness #{i} does not represent degree {d}")
        wits = spec.witnesses
    for d in degs:
        if not monomial_exists(cl, d):
            raise SpecError(f"no monomial of degree {d}")
    return Ambient(a, cl, tuple(degs), tuple(wits), None)


# Monomial existence


def monomial_exists_weighted(weights: Sequence[int], d: int, variables: Sequence[int] | None = None) -> bool:
    """Is there a monomial of weighted degree ``d`` in the given variables?"""
    if variables is None:
        variables = range(len(weights))
    ws = sorted({weights[i] for i in variables})
    if d < 0:
        return False
    reach = [False] * (d + 1)
    reach[0] = True
    for v in range(1, d + 1):
        reach[v] = any(w <= v and reach[v - w] for w in ws)
    return reach[d]


@lru_cache(maxsize=64)
def _positive_functional(cl: ClassGroupData) -> tuple[int, ...]:
    """Integer functional on the free part, at least 1 on every ray degree.

    Exists whenever the fan is complete: no nonzero effective invariant
    divisor is torsion.
    """
    degs = cl.degrees
    x = feasible_point(cl.free_rank, le=[([-f for f in d.free], -1) for d in degs])
    if x is None:
        raise SpecError("ray degrees do not lie in a pointed cone (is the fan complete?)")
    q = lcm(1, *(t.denominator for t in x))
    return tuple(int(t * q) for t in x)


def monomial_exists(cl: ClassGroupData, degree: DivisorClass, variables: Sequence[int] | None = None) -> bool:
    """Exact search for ``prod x_i^{r_i}`` (``i`` in ``variables``) of the given class.

    Dynamic programming over the value of a positive functional, so only
    finitely many partial degrees are ever visited.
    """
    if variables is None:
        variables = range(cl.n_rays)
    if cl.free_rank == 0:
        raise SpecError("class group has no free part")
    ell = _positive_functional(cl)
    val = lambda c: sum(a * b for a, b in zip(ell, c.free))  # noqa: E731
    degs = cl.degrees
    steps = sorted({(val(degs[i]), degs[i]) for i in variables})
    target = val(degree)
    if target < 0:
        return False
    reach: list[set[DivisorClass]] = [set() for _ in range(target + 1)]
    reach[0].add(cl.zero())
    for v in range(1, target + 1):
        for w, g in steps:
            if w <= v:
                reach[v].update(c + g for c in reach[v - w])
    return degree in reach[target]


# Betti numbers


@dataclass(frozen=True)
class BettiPrediction:
    """Rational Betti numbers of Y and what Lefschetz says about X.

    ``ci_low[i]`` equals ``b_i(X)`` for ``i < dim X``; in the middle degree
    only the lower bound ``b_{dim X}(X) >= middle_lower_bound`` is claimed.
    """

    ambient: tuple[int, ...]
    dim_x: int | None = None
    ci_low: tuple[int, ...] = ()
    middle_lower_bound: int | None = None
    note: str = RATIONAL_NOTE


def h_vector(fan: Fan) -> tuple[int, ...]:
    f = fan.f_vector()
    N = fan.lattice_rank
    return tuple(
        sum((-1) ** (k - i) * comb(N - i, k - i) * f[i] for i in range(k + 1)) for k in range(N + 1)
    )


def ambient_betti(fan: Fan) -> BettiPrediction:
    """``b_{2k}(Y) = h_k`` of the fan; odd Betti numbers vanish."""
    h = h_vector(fan)
    betti = []
    for k, hk in enumerate(h):
        betti.append(hk)
        if k < len(h) - 1:
            betti.append(0)
    return BettiPrediction(tuple(betti))


def _check_ample(amb: Ambient) -> None:
    for i, (d, w) in enumerate(zip(amb.degrees, amb.witnesses)):
        if not is_ample(amb.fan, amb.cl, d, w):
            raise NotAmpleError(i, d)


def lefschetz_predict(spec: CiSpec) -> BettiPrediction:
    return _lefschetz(resolve(spec), spec.dim)


def _lefschetz(amb: Ambient, n: int) -> BettiPrediction:
    _check_ample(amb)
    Y = ambient_betti(amb.fan).ambient
    return BettiPrediction(Y, n, Y[:n], Y[n])


# Picard rank


@dataclass(frozen=True)
class PicReport:
    dim_x: int
    cl_rank_y: int
    pic_rank_x: int
    exact: bool  # False: pic_rank_x is only a lower bound
    note: str = ""


def pic_rank_transfer(spec: CiSpec) -> PicReport:
    return _pic(resolve(spec), spec.dim)


def _pic(amb: Ambient, n: int) -> PicReport:
    if n <= 1:
        raise UnsupportedError(f"dim X = {n}: no Picard statement below dimension 2")
    _check_ample(amb)
    r = amb.cl.free_rank
    if n >= 3:
        return PicReport(n, r, r, True, "restriction Pic(Y) -> Pic(X) is an isomorphism")
    return PicReport(
        n, r, r, False,
        "restriction is injective: rk Pic(X) >= rk Cl(Y); also rk Cl(X) >= rk Cl(Y) if X is Q-factorial",
    )


# Well-formedness


@dataclass(frozen=True)
class Stratum:
    """A singular stratum of Y and the expected dimension of its trace on X."""

    label: str  # "m=2" for weight strata, cone indices for fan strata
    indices: tuple[int, ...]  # variables allowed to be nonzero on the stratum
    dim: int
    cutting: tuple[int, ...]  # equations not vanishing identically on it
    trace_dim: int  # -1 means the generic X misses the stratum
    ok: bool


@dataclass(frozen=True)
class WellFormedness:
    well_formed: bool
    strata: tuple[Stratum, ...] = ()
    caveats: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.well_formed


def _trace(dim_stratum: int, n_cut: int) -> int:
    return max(dim_stratum - n_cut, -1)


def wci_well_formed(weights: WeightSystem | Sequence[int], degrees: Sequence[int]) -> WellFormedness:
    """``codim_X(X ∩ Sing Y) >= 2`` for a generic ``X_{d_1..d_k}`` in ``P(a)``.

    For each ``m > 1`` dividing some weight, the stratum where only the
    variables with ``m | a_i`` are nonzero has dimension ``|S_m| - 1``, and
    each equation with a monomial in those variables cuts it once more.
    """
    a = tuple(weights)
    if not weights_well_formed(a):
        raise ValueError(f"weights {a} are not well formed")
    degrees = tuple(degrees)
    if any(d < 1 for d in degrees):
        raise ValueError("degrees must be positive")
    dim_x = len(a) - 1 - len(degrees)
    ms = sorted({m for w in a for m in range(2, w + 1) if w % m == 0})
    strata = []
    for m in ms:
        S = tuple(i for i, w in enumerate(a) if w % m == 0)
        cut = tuple(j for j, d in enumerate(degrees) if monomial_exists_weighted(a, d, S))
        t = _trace(len(S) - 1, len(cut))
        strata.append(Stratum(f"m={m}", S, len(S) - 1, cut, t, t <= dim_x - 2))
    caveats = ()
    if dim_x <= 1:
        caveats = (f"dim X = {dim_x}: the condition only asks that X miss Sing Y",)
    return WellFormedness(all(s.ok for s in strata), tuple(strata), caveats)


def fan_well_formed(fan: Fan, cl: ClassGroupData, degrees: Sequence[DivisorClass]) -> WellFormedness:
    """The same generic count on a toric ambient, stratum by singular cone.

    The orbit closure of cone ``tau`` is ``{x_i = 0 : i in tau}``, of
    dimension ``N - |tau|``.
    """
    N = fan.lattice_rank
    dim_x = N - len(degrees)
    rep = singularity_report(fan)
    strata = []
    for tau in rep.singular_cones:
        free_vars = tuple(i for i in range(fan.n_rays) if i not in tau)
        cut = tuple(j for j, d in enumerate(degrees) if monomial_exists(cl, d, free_vars))
        t = _trace(N - len(tau), len(cut))
        strata.append(Stratum("cone " + ",".join(map(str, tau)), free_vars, N - len(tau), cut, t, t <= dim_x - 2))
    caveats = []
    if dim_x <= 1:
        caveats.append(f"dim X = {dim_x}: the condition only asks that X miss Sing Y")
    if rep.codim is not None and rep.codim > len(degrees) + 1:
        caveats.append(f"Sing Y has codimension {rep.codim} > k+1: well formed for every X of this codimension")
    return WellFormedness(all(s.ok for s in strata), tuple(strata), tuple(caveats))


def fano_index(weights: WeightSystem | Sequence[int], degrees: Sequence[int]) -> int:
    """``sum(a) - sum(d)``; a well formed quasi-smooth X is Fano iff positive."""
    return sum(weights) - sum(degrees)


# Verdict


class Conclusion(str, enum.Enum):
    Y_IS_WPS = "Y-must-be-WPS"
    QUOTIENT_FORCES_SINGULAR = "no-smooth-well-formed-fano-ci"
    NOT_MET = "hypotheses-not-met"
    INCONCLUSIVE = "inconclusive"


FLAGS = ("q_factorial", "complete", "ample_all", "fano", "dim_ge_2", "well_formed", "pic_rank_one_predicted")

ASSUMPTIONS = (
    "X is smooth",
    "the equations form a regular sequence (X is a complete intersection)",
)


@dataclass(frozen=True)
class TheoremVerdict:
    flags: dict
    conclusion: Conclusion
    failed: tuple[str, ...]
    inconclusive: tuple[str, ...]
    proposition_branch: bool
    classification: str
    text: str
    fano_index: int | None = None
    well_formedness: WellFormedness | None = None
    betti: BettiPrediction | None = None
    pic: PicReport | None = None
    notes: tuple[str, ...] = field(default=())


def theorem_verdict(spec: CiSpec) -> TheoremVerdict:
    """Evaluate every checkable hypothesis and draw the conclusion.

    ``Y-must-be-WPS`` is only reported when no flag is false; on a
    nontrivial quotient of a weighted projective space with ample Fano
    degrees the quotient branch applies instead: X cannot be smooth.
    """
    amb = resolve(spec)
    fan, cl = amb.fan, amb.cl
    n = spec.dim
    notes: list[str] = []
    flags: dict[str, bool | None] = dict.fromkeys(FLAGS)

    flags["q_factorial"] = True  # resolve() rejects non-simplicial fans
    flags["complete"] = is_complete(fan)
    ample = [is_ample(fan, cl, d, w) for d, w in zip(amb.degrees, amb.witnesses)]
    flags["ample_all"] = all(ample)
    flags["dim_ge_2"] = n >= 2

    index = None
    if amb.weights is not None:
        index = fano_index(amb.weights, spec.degrees)
        flags["fano"] = index > 0
        wf = wci_well_formed(amb.weights, spec.degrees)
    else:
        K = anticanonical(cl)
        rest = K
        wit = [1] * fan.n_rays
        for d, w in zip(amb.degrees, amb.witnesses):
            rest = rest - d
            wit = [a - b for a, b in zip(wit, w)]
        flags["fano"] = is_ample(fan, cl, rest, wit)
        if cl.free_rank == 1:
            index = rest.free[0]
        wf = fan_well_formed(fan, cl, amb.degrees)
    flags["well_formed"] = wf.well_formed
    notes.extend(wf.caveats)

    pic = None
    if cl.free_rank > 1 and n >= 2:
        flags["pic_rank_one_predicted"] = False
    elif n >= 3 and flags["ample_all"]:
        pic = _pic(amb, n)
        flags["pic_rank_one_predicted"] = pic.pic_rank_x == 1
    elif n == 2 and flags["ample_all"]:
        pic = _pic(amb, n)
        notes.append("dim X = 2: only rk Pic(X) >= 1 is known")

    betti = _lefschetz(amb, n) if flags["ample_all"] else None

    if is_gwps(fan):
        try:
            cls = classify(fan)
            classification = str(cls)
            quotient = not cls.is_wps
            is_wps = cls.is_wps
        except ValueError as exc:
            classification, quotient, is_wps = f"not a generalized weighted projective space ({exc})", False, False
    else:
        classification = "not a generalized weighted projective space (b ≠ N+1)"
        quotient = is_wps = False

    failed = tuple(f for f in FLAGS if flags[f] is False)
    unknown = tuple(f"{f} (not decidable from degree data)" for f in FLAGS if flags[f] is None)
    inconclusive = ASSUMPTIONS + unknown

    proposition = (
        quotient and n >= 1 and bool(flags["ample_all"]) and bool(flags["fano"])
        and bool(flags["complete"]) and bool(flags["q_factorial"])
    )
    if proposition:
        conclusion = Conclusion.QUOTIENT_FORCES_SINGULAR
        text = (
            f"Y is a {classification}: any well formed Fano complete intersection "
            "of these degrees is singular, so no smooth one exists here"
        )
    elif failed:
        conclusion = Conclusion.NOT_MET
        text = "hypotheses not met: " + ", ".join(failed)
    elif is_wps:
        conclusion = Conclusion.Y_IS_WPS
        text = f"consistent: Y is already a {classification}"
    else:
        conclusion = Conclusion.INCONCLUSIVE
        text = "inconclusive: " + ", ".join(unknown)
    return TheoremVerdict(
        flags, conclusion, failed, inconclusive, proposition, classification, text,
        index, wf, betti, pic, tuple(notes),
    )
