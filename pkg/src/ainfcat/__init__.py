"""Filtered curved A-infinity categories, Hochschild invariants and the signs that hold them together.

The submodules are independent layers: ``graded`` (grading data and sign
ledgers), ``coeff`` (coefficient rings), ``complexes``, ``ainfty``, ``hoch``,
``bimod``, ``bc`` (bounding cochains), ``domains`` (domain combinatorics) and
``verify`` (operation templates and input documents).
"""

from .ainfty import AinfCategory, CategoryError, Cochain, Functor, check_ainfty, cup, hochschild_differential
from .bc import bc_category, pre_bc_category, solve_mc
from .bimod import Bimodule, BimoduleHom, cshriek, diagonal, mu_bar
from .coeff import CoefficientRing, RingElement, novikov_specialize
from .domains import boundary_strata, build_family, sigma_degree
from .graded import GradingDatum, SignLedger, TorsorWord, koszul_reorder_sign, parse_ledger
from .hoch import HochschildChain, b, cap, hh_compute
from .report import Report
from .verify import OperationBundle, load_document, verify_cardy, verify_co_algebra, verify_oc_module

__version__ = "0.1.0"

__all__ = [
    "AinfCategory", "CategoryError", "Cochain", "Functor", "check_ainfty", "cup", "hochschild_differential",
    "bc_category", "pre_bc_category", "solve_mc",
    "Bimodule", "BimoduleHom", "cshriek", "diagonal", "mu_bar",
    "CoefficientRing", "RingElement", "novikov_specialize",
    "boundary_strata", "build_family", "sigma_degree",
    "GradingDatum", "SignLedger", "TorsorWord", "koszul_reorder_sign", "parse_ledger",
    "HochschildChain", "b", "cap", "hh_compute",
    "Report",
    "OperationBundle", "load_document", "verify_cardy", "verify_co_algebra", "verify_oc_module",
]
