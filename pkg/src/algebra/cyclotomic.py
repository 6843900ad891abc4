import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from contextlib import contextmanager
from functools import lru_cache
from math import gcd
from typing import Dict, List, Sequence, Tuple, Union

import mpmath
from mpmath.ctx_iv import MPIntervalContext
from sympy import Poly, QQ, Symbol, cyclotomic_poly
from sympy.polys.densearith import dup_add, dup_mul, dup_mul_ground, dup_neg, dup_rem, dup_sub
from sympy.polys.densebasic import dup_strip
from sympy.polys.euclidtools import dup_invert

from src.errors import KnotObsError

logger = logging.getLogger(__name__)

# working precision (bits) at which certified sign determination gives up
MAX_SIGN_PRECISION = 1 << 16


class CyclotomicError(KnotObsError):
    """Base exception for cyclotomic arithmetic errors"""
    pass


class TrivialRootError(CyclotomicError):
    """Raised when a root of unity equals 1"""
    pass


class FieldMismatchError(CyclotomicError):
    """Raised when combining elements of different cyclotomic fields"""
    pass


@dataclass(frozen=True)
class RootOfUnity:
    """The point e^{2 pi i k/m} of the unit circle, stored with 0 < k < m and gcd(k, m) = 1"""
    k: int
    m: int

    def __post_init__(self):
        if self.m <= 0:
            raise CyclotomicError(f"Order must be positive, got {self.m}")
        k = self.k % self.m
        if k == 0:
            raise TrivialRootError(f"{self.k}/{self.m} is the trivial root of unity")
        g = gcd(k, self.m)
        object.__setattr__(self, "k", k // g)
        object.__setattr__(self, "m", self.m // g)

    @classmethod
    def parse(cls, text: str) -> "RootOfUnity":
        """Parse `k/m`, meaning e^{2 pi i k/m}"""
        num, sep, den = text.strip().partition("/")
        try:
            return cls(int(num), int(den) if sep else 1)
        except ValueError:
            raise CyclotomicError(f"Expected k/m, got {text!r}")

    @classmethod
    def from_turn(cls, turn: Fraction) -> "RootOfUnity":
        return cls(turn.numerator, turn.denominator)

    @property
    def turn(self) -> Fraction:
        """Angle as a fraction of a full turn"""
        return Fraction(self.k, self.m)

    def conjugate(self) -> "RootOfUnity":
        return RootOfUnity(self.m - self.k, self.m)

    def to_complex(self, dps: int = 15) -> mpmath.mpc:
        with mpmath.workdps(dps):
            return mpmath.expjpi(mpmath.mpf(2 * self.k) / self.m)

    def __lt__(self, other: "RootOfUnity") -> bool:
        return self.turn < other.turn

    def __str__(self):
        return f"{self.k}/{self.m}"


@lru_cache(maxsize=None)
def _modulus(m: int) -> Tuple:
    """Dense coefficients (highest first, over QQ) of the m-th cyclotomic polynomial"""
    x = Symbol("x")
    return tuple(QQ.from_sympy(c) for c in Poly(cyclotomic_poly(m, x), x).all_coeffs())


@lru_cache(maxsize=None)
def _conjugate_powers(m: int) -> Tuple:
    """Residues of zeta^-j modulo the m-th cyclotomic polynomial, for j below its degree"""
    modulus = list(_modulus(m))
    return tuple(tuple(dup_rem([QQ(1)] + [QQ(0)] * ((-j) % m), modulus, QQ))
                 for j in range(max(len(modulus) - 1, 1)))


class _IntervalWorkspace(threading.local):
    """Interval context and cosine enclosures private to one thread"""

    def __init__(self):
        self.ctx = MPIntervalContext()
        self.ctx._mp = mpmath.mp
        self.cosines: Dict[Tuple[int, int, int], Tuple] = {}


_workspace = _IntervalWorkspace()


@contextmanager
def _interval_precision(prec: int):
    """This thread's interval context, set to `prec` bits"""
    ctx = _workspace.ctx
    saved = ctx.prec
    ctx.prec = prec
    try:
        yield ctx
    finally:
        ctx.prec = saved


def _cosines(ctx, m: int, count: int) -> Tuple:
    """Enclosures of cos(2 pi j/m) for j < count at the current precision of ctx"""
    key = (m, count, ctx.prec)
    cached = _workspace.cosines.get(key)
    if cached is None:
        cached = _workspace.cosines[key] = tuple(ctx.cos(2 * ctx.pi * j / m) for j in range(count))
    return cached


class CyclotomicElement:
    """
    Element of QQ(zeta_m), zeta_m = e^{2 pi i/m}, stored as a residue modulo the
    m-th cyclotomic polynomial (dense coefficient list, highest degree first).
    """

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs: Sequence = ()):
        self.m = m
        self.coeffs = tuple(dup_rem(dup_strip(list(coeffs)), list(_modulus(m)), QQ))

    ###################
    # Constructors
    ###################
    @classmethod
    def from_rational(cls, m: int, value: Union[int, Fraction]) -> "CyclotomicElement":
        value = Fraction(value)
        return cls(m, [QQ(value.numerator, value.denominator)])

    @classmethod
    def zeta_power(cls, m: int, k: int) -> "CyclotomicElement":
        k %= m
        return cls(m, [QQ(1)] + [QQ(0)] * k)

    @classmethod
    def from_low_first(cls, m: int, values: Sequence[Union[int, Fraction]]) -> "CyclotomicElement":
        """Build from coefficients of 1, zeta, zeta^2, ..."""
        dense = [QQ(Fraction(v).numerator, Fraction(v).denominator) for v in reversed(values)]
        return cls(m, dense)

    ###################
    # Accessors
    ###################
    @property
    def degree_bound(self) -> int:
        return len(_modulus(self.m)) - 1

    def low_first(self) -> List[Fraction]:
        return [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(self.coeffs)]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise CyclotomicError(f"{self} is not rational")
        return self.low_first()[0] if self.coeffs else Fraction(0)

    def is_real(self) -> bool:
        return self == self.conjugate()

    ###################
    # Field operations
    ###################
    def _check(self, other: "CyclotomicElement") -> None:
        if self.m != other.m:
            raise FieldMismatchError(f"QQ(zeta_{self.m}) and QQ(zeta_{other.m}) elements do not mix")

    def _lift(self, other) -> "CyclotomicElement":
        if isinstance(other, CyclotomicElement):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicElement.from_rational(self.m, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return CyclotomicElement(self.m, dup_add(list(self.coeffs), list(other.coeffs), QQ))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return CyclotomicElement(self.m, dup_sub(list(self.coeffs), list(other.coeffs), QQ))

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return CyclotomicElement(self.m, dup_neg(list(self.coeffs), QQ))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return CyclotomicElement(
                self.m, dup_mul_ground(list(self.coeffs), QQ(other.numerator, other.denominator), QQ))
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return CyclotomicElement(self.m, dup_mul(list(self.coeffs), list(other.coeffs), QQ))

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicElement":
        if self.is_zero():
            raise ZeroDivisionError("Zero has no inverse in a cyclotomic field")
        return CyclotomicElement(self.m, dup_invert(list(self.coeffs), list(_modulus(self.m)), QQ))

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def conjugate(self) -> "CyclotomicElement":
        """Complex conjugation, zeta -> zeta^(m-1)"""
        if self.is_rational():
            return self
        table = _conjugate_powers(self.m)
        total = []
        for j, c in enumerate(reversed(self.coeffs)):
            if c:
                total = dup_add(total, dup_mul_ground(list(table[j]), c, QQ), QQ)
        return CyclotomicElement(self.m, total)

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.m, self.coeffs))

    ###################
    # Embedding
    ###################
    def real_enclosure(self, prec: int):
        """Interval enclosure of the real part under zeta -> e^{2 pi i/m}"""
        values = self.low_first()
        with _interval_precision(prec) as ctx:
            total = ctx.mpf(0)
            for c, cos_j in zip(values, _cosines(ctx, self.m, len(values))):
                if c:
                    total += ctx.mpf(c.numerator) / c.denominator * cos_j
            return total

    def sign(self) -> int:
        """
        Certified sign of a real element.

        Exact zero is decided algebraically; nonzero elements are separated from 0 by
        interval evaluation at doubling precision.
        """
        if self.is_zero():
            return 0
        if self.is_rational():
            return 1 if self.rational_value() > 0 else -1
        if not self.is_real():
            raise CyclotomicError(f"Sign requested for non-real element {self}")
        prec = 64
        while prec <= MAX_SIGN_PRECISION:
            enclosure = self.real_enclosure(prec)
            if enclosure.a > 0:
                return 1
            if enclosure.b < 0:
                return -1
            logger.debug(f"sign of {self} undecided at {prec} bits")
            prec *= 2
        raise CyclotomicError(f"Could not separate {self} from zero")

    def to_complex(self, dps: int = 15) -> mpmath.mpc:
        with mpmath.workdps(dps):
            zeta = mpmath.expjpi(mpmath.mpf(2) / self.m)
            return mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * zeta ** j
                               for j, c in enumerate(self.low_first()))

    def __str__(self):
        if self.is_zero():
            return "0"
        pieces = []
        for j, c in enumerate(self.low_first()):
            if not c:
                continue
            if j == 0:
                pieces.append(str(c))
            else:
                power = "z" if j == 1 else f"z^{j}"
                pieces.append(power if c == 1 else f"{c}*{power}")
        return " + ".join(pieces).replace("+ -", "- ")

    def __repr__(self):
        return f"CyclotomicElement(m={self.m}, {self})"
