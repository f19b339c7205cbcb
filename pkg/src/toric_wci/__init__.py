"""Exact Cox-quotient computations for simplicial toric varieties and
hypothesis checks for complete intersections in them."""

from .coxcl import ClassGroupData, DivisorClass, class_group, group_D, irrelevant_locus, is_ample
from .exactmat import IntMatrix, hermite_normal_form, kernel_basis, smith_normal_form
from .fan import BudgetExceeded, Fan, singularity_report, validate
from .gwps import GwpsClassification, WeightSystem, classify, fan_from_weights, refine_lattice, weights_of
from .wci import CiSpec, Conclusion, TheoremVerdict, lefschetz_predict, pic_rank_transfer, theorem_verdict

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "CiSpec", "ClassGroupData", "Conclusion", "DivisorClass", "Fan",
    "GwpsClassification", "IntMatrix", "TheoremVerdict", "WeightSystem", "class_group",
    "classify", "fan_from_weights", "group_D", "hermite_normal_form", "irrelevant_locus",
    "is_ample", "kernel_basis", "lefschetz_predict", "pic_rank_transfer", "refine_lattice",
    "singularity_report", "smith_normal_form", "theorem_verdict", "validate", "weights_of",
]
