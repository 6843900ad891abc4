import logging
from cmath import phase
from fractions import Fraction
from functools import lru_cache
from math import floor, gcd, pi
from typing import Iterable, List, Optional, Tuple

from sympy import Poly, cyclotomic_poly

from src.algebra.cyclotomic import RootOfUnity
from src.models.signature_report import Arc, DsBound, HyperbolicCertificate, HyperbolicVerdict, SignatureProfile
from src.seifert.forms import X, Rows, SeifertMatrix, alexander_polynomial, pattern_blocks, reverse_sum, sub_rows
from src.signature.hermitian import (
    SignatureError,
    exact_signature,
    hermitian_matrix,
    hermitian_matrix_numeric,
    numeric_signature,
)

logger = logging.getLogger(__name__)

DEFAULT_RESOLUTION = 12
DEFAULT_PRECISION = 30

# unit-circle test for numerically located roots, and the denominator cap used to
# snap their angles to fractions of a turn
UNIT_CIRCLE_TOLERANCE = 1e-12
TURN_DENOMINATOR_LIMIT = 10 ** 6


@lru_cache(maxsize=4096)
def _block_signature(block: Rows, omega: RootOfUnity) -> int:
    return exact_signature(hermitian_matrix(block, omega))


def signature_at(m: SeifertMatrix, omega: RootOfUnity) -> int:
    """
    Exact Levine-Tristram signature of psi at omega.

    The Hermitian matrix is block diagonal along the connected blocks of psi + psi^T, so
    each block is eliminated separately.
    """
    return sum(_block_signature(sub_rows(m.psi, block), omega) for block in pattern_blocks(m.psi))


def signature_numeric(m: SeifertMatrix, turn, precision: int = DEFAULT_PRECISION) -> int:
    """
    Floating-point signature at w = e^{2 pi i turn}; turn may be any real number.

    Raises:
        UncertifiableSignError: if an eigenvalue is too close to zero at this precision
    """
    if Fraction(turn) % 1 == 0:
        raise SignatureError("The signature is only defined away from w = 1")
    return numeric_signature(hermitian_matrix_numeric(m.psi, turn, precision))


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Fraction with the smallest denominator in the open interval (lo, hi), lo >= 0"""
    n = floor(lo)
    if n + 1 < hi:
        return Fraction(n + 1)
    if lo == n:
        return n + Fraction(1, floor(1 / (hi - n)) + 1)
    return n + 1 / simplest_between(1 / (hi - n), 1 / (lo - n))


def primitive_turns(order: int) -> List[Fraction]:
    return [Fraction(k, order) for k in range(1, order) if gcd(k, order) == 1]


@lru_cache(maxsize=None)
def _cyclotomic_coefficients(k: int) -> tuple:
    return tuple(Poly(cyclotomic_poly(k, X), X).all_coeffs())


def _cyclotomic_order(factor: Poly) -> Optional[int]:
    """k with factor = +-Phi_k, or None"""
    factor = factor.monic()
    if not factor.is_cyclotomic:
        return None
    degree = factor.degree()
    coefficients = tuple(factor.all_coeffs())
    # phi(k) >= sqrt(k/2)
    for k in range(1, 2 * degree * degree + 3):
        if _cyclotomic_coefficients(k) == coefficients:
            return k
    return None


def jump_candidates(m: SeifertMatrix, resolution: int) -> Tuple[List[Fraction], List[float]]:
    """
    Unit-circle roots of det(psi - x psi^T) as turns.

    Roots of cyclotomic factors Phi_k with k <= resolution are exact; every other root on
    the circle is located numerically. A vanishing polynomial makes every root of unity of
    order <= resolution a candidate.
    """
    delta = alexander_polynomial(m)
    exact = set()
    approximate = set()
    if delta.is_zero:
        for order in range(2, resolution + 1):
            exact.update(primitive_turns(order))
        return sorted(exact), []

    _, factors = delta.factor_list()
    for factor, _ in factors:
        if factor.degree() < 1:
            continue
        order = _cyclotomic_order(factor)
        if order is not None and order <= resolution:
            exact.update(primitive_turns(order))
            continue
        for root in factor.nroots(n=30):
            root = complex(root)
            if abs(abs(root) - 1) > UNIT_CIRCLE_TOLERANCE:
                continue
            turn = (phase(root) / (2 * pi)) % 1.0
            if turn > UNIT_CIRCLE_TOLERANCE and 1 - turn > UNIT_CIRCLE_TOLERANCE:
                approximate.add(turn)
    return sorted(exact), sorted(approximate)


def signature_profile(m: SeifertMatrix, resolution: int = DEFAULT_RESOLUTION) -> SignatureProfile:
    """Signature on every arc between jump candidates and exactly at each exact candidate"""
    if resolution < 1:
        raise SignatureError(f"Resolution must be positive, got {resolution}")
    exact, approximate = jump_candidates(m, resolution)
    cuts = sorted(set(exact) | {Fraction(t).limit_denominator(TURN_DENOMINATOR_LIMIT) for t in approximate})
    bounds = [Fraction(0)] + cuts + [Fraction(1)]

    arcs = []
    for lo, hi in zip(bounds, bounds[1:]):
        sample = RootOfUnity.from_turn(simplest_between(lo, hi))
        arcs.append(Arc(lo, hi, signature_at(m, sample), sample))
    point_values = [(RootOfUnity.from_turn(t), signature_at(m, RootOfUnity.from_turn(t))) for t in exact]
    logger.debug(f"{m}: {len(exact)} exact and {len(approximate)} approximate jumps")
    return SignatureProfile(m.name, arcs, point_values, list(approximate), resolution)


def default_test_set(m: SeifertMatrix, resolution: int = DEFAULT_RESOLUTION) -> List[RootOfUnity]:
    """Exact jump points and one sample per arc, ascending by angle"""
    exact, approximate = jump_candidates(m, resolution)
    cuts = sorted(set(exact) | {Fraction(t).limit_denominator(TURN_DENOMINATOR_LIMIT) for t in approximate})
    bounds = [Fraction(0)] + cuts + [Fraction(1)]
    turns = set(exact) | {simplest_between(lo, hi) for lo, hi in zip(bounds, bounds[1:])}
    return [RootOfUnity.from_turn(t) for t in sorted(turns)]


def _resolve_test_set(m: SeifertMatrix, test_set: Optional[Iterable[RootOfUnity]], resolution: int) -> List[RootOfUnity]:
    if test_set is None:
        return default_test_set(m, resolution)
    points = list(test_set)
    if not points:
        raise SignatureError("The test set must contain at least one root of unity")
    return points


def hyperbolic_obstruction(m: SeifertMatrix, test_set: Optional[Iterable[RootOfUnity]] = None,
                           resolution: int = DEFAULT_RESOLUTION) -> HyperbolicCertificate:
    """
    A hyperbolic Seifert form has vanishing signature at every w != 1; the first point of
    the test set with nonzero signature certifies that the form is not hyperbolic.
    """
    points = _resolve_test_set(m, test_set, resolution)
    for omega in points:
        value = signature_at(m, omega)
        if value:
            logger.debug(f"{m}: signature {value} at {omega}")
            return HyperbolicCertificate(HyperbolicVerdict.VIOLATED, (omega, value), points, m.name)
    return HyperbolicCertificate(HyperbolicVerdict.VANISHES_ON_TEST_SET, None, points, m.name)


def reverse_sum_obstruction(m: SeifertMatrix, test_set: Optional[Iterable[RootOfUnity]] = None,
                            resolution: int = DEFAULT_RESOLUTION) -> HyperbolicCertificate:
    """Hyperbolicity test for diag(psi, psi^T), the Seifert form of K # K^r"""
    return hyperbolic_obstruction(reverse_sum(m), test_set, resolution)


def ds_bound_report(m: SeifertMatrix, test_set: Optional[Iterable[RootOfUnity]] = None,
                    resolution: int = DEFAULT_RESOLUTION) -> DsBound:
    points = _resolve_test_set(m, test_set, resolution)
    best, witness, witness_value = 0, None, 0
    for omega in points:
        value = signature_at(m, omega)
        if 2 * abs(value) > best:
            best, witness, witness_value = 2 * abs(value), omega, value
    return DsBound(best, witness, witness_value, points, m.name)


def bing_double_ds_bound(m: SeifertMatrix, test_set: Optional[Iterable[RootOfUnity]] = None,
                         resolution: int = DEFAULT_RESOLUTION) -> int:
    """max 2|sigma(w)| over the test set: a lower bound for the doubly slice genus of the Bing double"""
    return ds_bound_report(m, test_set, resolution).bound
