import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Tuple

from src.algebra.laurent import LaurentPolynomial
from src.errors import KnotObsError
from src.groups.foxcalc import (
    AbelianizationMap,
    GroupWord,
    OpaqueRelator,
    Presentation,
    fox_derivative,
    fox_jacobian,
)
from src.models.obstruction_report import ObstructionReport, ScanRow, Verdict

logger = logging.getLogger(__name__)


class BoundaryObstructionError(KnotObsError):
    """Raised when a presentation lacks the data the longitude test needs"""
    pass


class PretzelParameterError(BoundaryObstructionError):
    """Raised for pretzel parameters outside p >= 1, n >= 1"""
    pass


@dataclass(frozen=True)
class PretzelParams:
    """Parameters of the pretzel link P(2p+1, 2n, -2n, -2p-1)"""
    p: int
    n: int

    def __post_init__(self):
        for label, value in (("p", self.p), ("n", self.n)):
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise PretzelParameterError(f"{label} must be a positive integer, got {value!r}")

    @property
    def period(self) -> int:
        return 2 * (2 * self.p + 1)


PRETZEL_ABELIANIZATION = {"a": "s^-1", "b": "s", "c": "t", "d": "s"}

a, b, c, d = (GroupWord.generator(g) for g in "abcd")


def _b_conjugate(p: int) -> GroupWord:
    # (ab^-1)^p a b a^-1 (ba^-1)^p
    return (a * b.inverse()) ** p * a * b * a.inverse() * (b * a.inverse()) ** p


def relator_r1(params: PretzelParams) -> GroupWord:
    p = params.p
    return (_b_conjugate(p)
            * (a * d.inverse()) ** p * a * d.inverse() * a.inverse() * (d * a.inverse()) ** p)


def relator_r2(params: PretzelParams) -> GroupWord:
    """
    Second Wirtinger relator, spelled so that it abelianizes to 1.

    (ab^-1)^p aba^-1 (ba^-1)^p a (c^-1 b)^n (cb^-1)^n; its b-derivative equals the closed
    form returned by relator_derivative_closed_form.
    """
    return (_b_conjugate(params.p) * a
            * (c.inverse() * b) ** params.n * (c * b.inverse()) ** params.n)


def printed_r2(params: PretzelParams) -> GroupWord:
    """
    The typeset spelling (ab^-1)^p aba^-1 (ba^-1)^p (bc^-1)^n b (cb^-1)^n.

    It abelianizes to s^2, so it is not a relator of the link group; kept for comparison.
    """
    return (_b_conjugate(params.p)
            * (b * c.inverse()) ** params.n * b * (c * b.inverse()) ** params.n)


def longitude_word(params: PretzelParams) -> GroupWord:
    """b^n d^-n, the longitude of the knotted component once c is ignored"""
    return b ** params.n * d ** (-params.n)


def pretzel_presentation(params: PretzelParams) -> Presentation:
    presentation = Presentation(
        generators=("a", "b", "c", "d"),
        relators=(relator_r1(params), relator_r2(params)),
        abelianization=AbelianizationMap(PRETZEL_ABELIANIZATION),
        opaque_relators=(OpaqueRelator("r3", frozenset("acd")),),
        longitude=longitude_word(params),
        distinguished_generator="b",
        name=f"L_{{{params.p},{params.n}}}",
        notes=["longitude is the t=1 reduction b^n d^-n of the true longitude",
               "r3 involves only a, c and d"],
    )
    presentation.validate()
    return presentation


def _geometric(ratio: LaurentPolynomial, count: int) -> LaurentPolynomial:
    total, power = LaurentPolynomial.zero(), LaurentPolynomial.one()
    for _ in range(count):
        total = total + power
        power = power * ratio
    return total


def relator_derivative_closed_form(params: PretzelParams) -> Tuple[LaurentPolynomial, LaurentPolynomial]:
    """
    Closed forms of the b-derivatives of r1 and r2:

        s^(-2p-1) (1 - s + s^2 - ... + s^2p)
        s^(-2p-1) (1 - s + s^2 - ... + s^2p) + (t^-1 - 1)(1 + st^-1 + ... + (st^-1)^(n-1))
    """
    s = LaurentPolynomial.variable("s")
    t = LaurentPolynomial.variable("t")
    first = s ** (-2 * params.p - 1) * _geometric(-s, 2 * params.p + 1)
    second = first + (t ** -1 - 1) * _geometric(s * t ** -1, params.n)
    return first, second


def _kept_variable(presentation: Presentation, generator: str) -> str:
    image = presentation.abelianization.image(generator)
    if len(image.variables) != 1:
        raise BoundaryObstructionError(
            f"Image {image} of {generator} must involve exactly one variable")
    return image.variables[0]


def longitude_obstruction(presentation: Presentation) -> ObstructionReport:
    """
    Test whether the longitude derivative lies in the ideal of the relator derivatives.

    Every variable except the one carried by the distinguished generator is set to 1
    before the membership test in QQ[s, 1/s]. Obstructed means the link is not a
    boundary link; Inconclusive decides nothing.
    """
    if presentation.longitude is None:
        raise BoundaryObstructionError(f"{presentation.name} has no longitude")
    if presentation.distinguished_generator is None:
        raise BoundaryObstructionError(f"{presentation.name} has no distinguished generator")

    g = presentation.distinguished_generator
    keep = _kept_variable(presentation, g)
    target = fox_derivative(presentation.longitude, g, presentation.abelianization)
    column = fox_jacobian(presentation, g)

    others = set(target.variables)
    for poly in column:
        others.update(poly.variables)
    others.discard(keep)
    assignments = {v: 1 for v in others}

    target = target.specialize(assignments)
    specialized = [poly.specialize(assignments) for poly in column]
    report = ObstructionReport.from_membership(target, specialized, generator=g, source=presentation.name)
    logger.debug(f"{presentation.name}: target {target}, gcd {report.witness.gcd}, verdict {report.verdict.value}")
    return report


def closed_form_obstructed(params: PretzelParams) -> bool:
    """n is not a multiple of 2(2p+1)"""
    return params.n % params.period != 0


def is_pretzel_boundary_obstructed(params: PretzelParams) -> bool:
    report = longitude_obstruction(pretzel_presentation(params))
    return report.verdict == Verdict.OBSTRUCTED


def _scan_cell(cell: Tuple[int, int]) -> ScanRow:
    params = PretzelParams(*cell)
    report = longitude_obstruction(pretzel_presentation(params))
    return ScanRow(params.p, params.n, report.verdict, closed_form_obstructed(params), report)


def pretzel_scan(p_max: int, n_max: int, workers: int = 1) -> List[ScanRow]:
    """
    Run the full pipeline on every 1 <= p <= p_max, 1 <= n <= n_max.

    Cells are independent; with workers > 1 they are spread over a process pool and
    returned in grid order.
    """
    if p_max < 1 or n_max < 1:
        raise PretzelParameterError(f"Scan bounds must be positive, got p_max={p_max}, n_max={n_max}")
    cells = [(p, n) for p in range(1, p_max + 1) for n in range(1, n_max + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_scan_cell, cells, chunksize=max(1, len(cells) // (4 * workers))))
    else:
        rows = [_scan_cell(cell) for cell in cells]
    for row in rows:
        if not row.agrees:
            logger.warning(f"Pipeline and closed form disagree at p={row.p}, n={row.n}")
    logger.info(f"Scanned {len(rows)} pretzel links")
    return rows
