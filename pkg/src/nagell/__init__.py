"""Exact solver for x^2 - kxy + y^2 = +-2^n via generalized Pell classes."""

from .formsolver import FormInstance, SolutionPair, SolveOutcome, solvable_k_set, solve_all
from .gpell import ClassRep, ClassSet, class_reps, class_solutions, nagell_bounds, same_class, solve_gpell
from .pell import PellFundamental, cf_expand, pell_fundamental, pell_solutions

__version__ = "0.1.0"

__all__ = [
    "ClassRep",
    "ClassSet",
    "FormInstance",
    "PellFundamental",
    "SolutionPair",
    "SolveOutcome",
    "cf_expand",
    "class_reps",
    "class_solutions",
    "nagell_bounds",
    "pell_fundamental",
    "pell_solutions",
    "same_class",
    "solvable_k_set",
    "solve_all",
    "solve_gpell",
]
