import logging
from typing import Dict, Iterable, List, Optional

from src.algebra.cyclotomic import RootOfUnity
from src.models.form_report import FormCheckReport
from src.seifert.forms import SeifertMatrix, form_from_matrix
from src.seifert.lattice import search_metabolizer
from src.signature.levine_tristram import DEFAULT_RESOLUTION, hyperbolic_obstruction

logger = logging.getLogger(__name__)


def check_form(m: SeifertMatrix, bound: int, test_set: Optional[Iterable[RootOfUnity]] = None,
               resolution: int = DEFAULT_RESOLUTION, max_search_rank: int = 8,
               printed: Optional[Dict[str, List[List[int]]]] = None) -> FormCheckReport:
    """
    Build the Seifert form of m, check its axioms, search for a metabolizer and run the
    hyperbolic obstruction.

    A non-unimodular pairing yields a report with no form and no further checks. The
    metabolizer search is skipped above `max_search_rank`. `printed`, when given, holds
    published b and t matrices to compare against.
    """
    determinant = m.pairing_determinant() if m.size else 1
    report = FormCheckReport(m.name, m.epsilon, m.size, determinant, search_bound=bound)
    if not report.unimodular:
        logger.debug(f"{m}: pairing determinant {determinant}, no form")
        return report

    form = form_from_matrix(m)
    report.axioms = form.check_axioms()
    report.b = [list(r) for r in form.b]
    report.t = [list(r) for r in form.t]
    if printed is not None:
        report.printed_match = report.b == printed["b"] and report.t == printed["t"]

    if m.size > max_search_rank:
        logger.info(f"Skipping metabolizer search on rank {m.size} > {max_search_rank}")
        report.search_skipped = True
    else:
        report.metabolizer = search_metabolizer(m, bound)

    report.hyperbolic = hyperbolic_obstruction(m, test_set, resolution)
    return report
