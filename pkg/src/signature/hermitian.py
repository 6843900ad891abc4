import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import mpmath

from src.algebra.cyclotomic import CyclotomicElement, RootOfUnity
from src.errors import KnotObsError
from src.seifert.forms import Rows

logger = logging.getLogger(__name__)

EXACT = "exact"
NUMERIC = "numeric"


class SignatureError(KnotObsError):
    """Base exception for signature computations"""
    pass


class UncertifiableSignError(SignatureError):
    """Raised in numeric mode when an eigenvalue cannot be separated from zero"""
    pass


@dataclass(frozen=True)
class HermitianMatrix:
    """
    The matrix (1 - w) psi + (1 - conj w) psi^T.

    Exact mode stores CyclotomicElement entries of QQ(zeta_m) for w = zeta_m^k; numeric
    mode stores mpmath complex entries computed at `precision` decimal digits.
    """
    entries: Tuple[Tuple, ...]
    mode: str
    omega: Optional[RootOfUnity] = None
    turn: Optional[Fraction] = None
    precision: int = 0

    @property
    def size(self) -> int:
        return len(self.entries)

    def is_hermitian(self) -> bool:
        n = self.size
        if self.mode == EXACT:
            return all(self.entries[i][j] == self.entries[j][i].conjugate() for i in range(n) for j in range(n))
        with mpmath.workdps(self.precision):
            return all(self.entries[i][j] == mpmath.conj(self.entries[j][i]) for i in range(n) for j in range(n))

    def to_complex(self, dps: int = 15) -> List[List[mpmath.mpc]]:
        if self.mode == NUMERIC:
            return [list(row) for row in self.entries]
        return [[entry.to_complex(dps) for entry in row] for row in self.entries]


def hermitian_matrix(psi: Rows, omega: RootOfUnity) -> HermitianMatrix:
    """Exact Hermitian matrix over QQ(zeta_m), m the order of omega"""
    m = omega.m
    zeta_k = CyclotomicElement.zeta_power(m, omega.k)
    one_minus = 1 - zeta_k
    one_minus_bar = one_minus.conjugate()
    n = len(psi)
    entries = tuple(
        tuple(one_minus * psi[i][j] + one_minus_bar * psi[j][i] for j in range(n))
        for i in range(n)
    )
    return HermitianMatrix(entries, EXACT, omega=omega, turn=omega.turn)


def hermitian_matrix_numeric(psi: Rows, turn: Union[Fraction, float], precision: int) -> HermitianMatrix:
    """Hermitian matrix at w = e^{2 pi i turn}, any real turn, in floating point"""
    n = len(psi)
    with mpmath.workdps(precision):
        w = mpmath.expjpi(2 * mpmath.mpf(turn.numerator) / turn.denominator
                          if isinstance(turn, Fraction) else 2 * mpmath.mpf(turn))
        a, a_bar = 1 - w, 1 - mpmath.conj(w)
        entries = tuple(tuple(a * psi[i][j] + a_bar * psi[j][i] for j in range(n)) for i in range(n))
    return HermitianMatrix(entries, NUMERIC, turn=turn if isinstance(turn, Fraction) else None, precision=precision)


def exact_signature(h: HermitianMatrix) -> int:
    """
    Signature by symmetric Gaussian elimination over QQ(zeta_m).

    A nonzero diagonal pivot contributes its certified sign and is eliminated by a
    congruence. When every remaining diagonal entry vanishes but some off-diagonal entry h
    does not, the 2x2 block [[0, h], [conj h, 0]] has eigenvalues ±|h|, contributes 0,
    and is eliminated through its Schur complement.
    """
    if h.mode != EXACT:
        raise SignatureError("exact_signature needs an exact Hermitian matrix")
    a = [list(row) for row in h.entries]
    active = list(range(h.size))
    signature = 0
    while active:
        pivot = next((i for i in active if not a[i][i].is_zero()), None)
        if pivot is not None:
            d = a[pivot][pivot]
            signature += d.sign()
            d_inv = d.inverse()
            active.remove(pivot)
            for r in active:
                if a[r][pivot].is_zero():
                    continue
                factor = a[r][pivot] * d_inv
                for c in active:
                    if not a[pivot][c].is_zero():
                        a[r][c] = a[r][c] - factor * a[pivot][c]
            continue

        pair = next(((i, j) for i in active for j in active if i < j and not a[i][j].is_zero()), None)
        if pair is None:
            break
        i, j = pair
        h_ij = a[i][j]
        h_inv, h_bar_inv = h_ij.inverse(), h_ij.conjugate().inverse()
        active.remove(i)
        active.remove(j)
        logger.debug(f"hyperbolic block step on ({i}, {j})")
        # S_rc = A_rc - (A_rj A_ic / h + A_ri A_jc / conj h)
        for r in active:
            u, v = a[r][i], a[r][j]
            if u.is_zero() and v.is_zero():
                continue
            left_v = v * h_inv
            left_u = u * h_bar_inv
            for c in active:
                x, y = a[i][c], a[j][c]
                if x.is_zero() and y.is_zero():
                    continue
                a[r][c] = a[r][c] - (left_v * x + left_u * y)
    return signature


def numeric_signature(h: HermitianMatrix) -> int:
    """
    Signature from mpmath eigenvalues.

    Raises:
        UncertifiableSignError: if some eigenvalue lies within 10^(-precision/2) (1 + |H|) of 0
    """
    if h.mode != NUMERIC:
        raise SignatureError("numeric_signature needs a numeric Hermitian matrix")
    if h.size == 0:
        return 0
    with mpmath.workdps(h.precision):
        matrix = mpmath.matrix([list(row) for row in h.to_complex(h.precision)])
        eigenvalues = mpmath.eigh(matrix, eigvals_only=True)
        tolerance = mpmath.mpf(10) ** (-mpmath.mpf(h.precision) / 2) * (1 + mpmath.mnorm(matrix, 1))
        signature = 0
        for value in eigenvalues:
            value = mpmath.re(value)
            if abs(value) < tolerance:
                raise UncertifiableSignError(
                    f"Eigenvalue {mpmath.nstr(value, 5)} is within {mpmath.nstr(tolerance, 3)} of zero "
                    f"at {h.precision} digits")
            signature += 1 if value > 0 else -1
    return signature


def characteristic_polynomial(h: HermitianMatrix) -> List[CyclotomicElement]:
    """
    Coefficients of det(x I - H), highest degree first, by the Faddeev-LeVerrier recursion.

    For a Hermitian H all coefficients are real elements of QQ(zeta_m).
    """
    if h.mode != EXACT:
        raise SignatureError("characteristic_polynomial needs an exact Hermitian matrix")
    n = h.size
    m = h.omega.m if h.omega else 1
    zero = CyclotomicElement(m)
    a = [list(row) for row in h.entries]
    coefficients = [CyclotomicElement.from_rational(m, 1)]
    previous = [[zero] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        current = [[_dot(a[i], [previous[r][j] for r in range(n)], zero) for j in range(n)] for i in range(n)]
        for i in range(n):
            current[i][i] = current[i][i] + coefficients[-1]
        trace = zero
        for i in range(n):
            trace = trace + _dot(a[i], [current[r][i] for r in range(n)], zero)
        coefficients.append(trace * Fraction(-1, k))
        previous = current
    return coefficients


def _dot(row: Sequence[CyclotomicElement], column: Sequence[CyclotomicElement], zero: CyclotomicElement):
    total = zero
    for x, y in zip(row, column):
        if not x.is_zero() and not y.is_zero():
            total = total + x * y
    return total
