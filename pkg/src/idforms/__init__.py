"""Exact verification toolkit for identically distributed pairs of linear forms on abelian groups."""
from __future__ import annotations

__version__ = "0.1.0"

from .groups import Group, GroupElement, DualPoint, Subgroup, admissible, subgroups, annihilator  # noqa: E402
from .distributions import Pmf, classify, degenerate, haar, uniform  # noqa: E402
from .forms import FormSystem, InstanceSpec, condition_indices, identically_distributed, joint_pmf  # noqa: E402
from .elimination import eliminate, reduce_coefficients  # noqa: E402
from .engine import Verdict, special_case_derivations, sweep, verify, verify_instance  # noqa: E402
from .counterexamples import certify, haar_construction, identity_construction, prop2_construction  # noqa: E402

__all__ = [
    "__version__", "Group", "GroupElement", "DualPoint", "Subgroup", "admissible", "subgroups", "annihilator",
    "Pmf", "classify", "degenerate", "haar", "uniform",
    "FormSystem", "InstanceSpec", "condition_indices", "identically_distributed", "joint_pmf",
    "eliminate", "reduce_coefficients", "Verdict", "special_case_derivations", "sweep", "verify", "verify_instance",
    "certify", "haar_construction", "identity_construction", "prop2_construction",
]
