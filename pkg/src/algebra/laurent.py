import logging
import re
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import Poly, QQ, Rational, Symbol, gcd as sympy_gcd

from src.errors import KnotObsError

logger = logging.getLogger(__name__)

Coefficient = Union[int, Fraction]
Exponents = Tuple[int, ...]


class LaurentError(KnotObsError):
    """Base exception for Laurent polynomial errors"""
    pass


class MultivariableError(LaurentError):
    """Raised when a one-variable operation receives several variables"""
    pass


class ZeroDivisorError(LaurentError):
    """Raised when dividing by the zero polynomial"""
    pass


class SpecializationError(LaurentError):
    """Raised when a substitution would leave the Laurent ring"""
    pass


class PolynomialParseError(LaurentError):
    """Raised when polynomial text cannot be parsed"""
    pass


def _normalize_coefficient(c) -> Coefficient:
    if isinstance(c, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return _normalize_coefficient(Fraction(int(c.p), int(c.q)))
    raise TypeError(f"Unsupported coefficient type: {type(c).__name__}")


class LaurentPolynomial:
    """
    Immutable Laurent polynomial with rational (usually integer) coefficients.

    Variables are kept sorted and minimal: a variable that does not occur with a
    nonzero exponent in any term is dropped, so equality does not depend on the
    ambient variable universe.
    """

    __slots__ = ("_variables", "_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Exponents, Coefficient]] = None,
                 variables: Sequence[str] = ()):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise LaurentError(f"Repeated variable names: {variables}")

        order = sorted(range(len(variables)), key=lambda i: variables[i])
        merged: Dict[Exponents, Coefficient] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(variables):
                raise LaurentError(
                    f"Exponent vector {exps} does not match variables {variables}")
            key = tuple(exps[i] for i in order)
            merged[key] = merged.get(key, 0) + _normalize_coefficient(coeff)

        self._set_canonical(tuple(variables[i] for i in order), merged)

    def _set_canonical(self, variables: Tuple[str, ...], terms: Dict[Exponents, Coefficient]) -> None:
        terms = {e: _normalize_coefficient(c) for e, c in terms.items() if c != 0}
        used = [i for i in range(len(variables)) if any(e[i] != 0 for e in terms)]
        self._variables = tuple(variables[i] for i in used)
        self._terms = {tuple(e[i] for i in used): c for e, c in terms.items()}
        self._hash = None

    @classmethod
    def _from_canonical(cls, variables: Tuple[str, ...], terms: Dict[Exponents, Coefficient]) -> "LaurentPolynomial":
        poly = cls.__new__(cls)
        poly._set_canonical(variables, terms)
        return poly

    ###################
    # Constructors
    ###################
    @classmethod
    def zero(cls) -> "LaurentPolynomial":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPolynomial":
        return cls.constant(1)

    @classmethod
    def constant(cls, c: Coefficient) -> "LaurentPolynomial":
        return cls({(): c}, ())

    @classmethod
    def variable(cls, name: str) -> "LaurentPolynomial":
        return cls({(1,): 1}, (name,))

    @classmethod
    def monomial(cls, exponents: Mapping[str, int], coefficient: Coefficient = 1) -> "LaurentPolynomial":
        names = tuple(exponents)
        return cls({tuple(exponents[v] for v in names): coefficient}, names)

    @classmethod
    def parse(cls, text: str) -> "LaurentPolynomial":
        return parse_polynomial(text)

    ###################
    # Accessors
    ###################
    @property
    def variables(self) -> Tuple[str, ...]:
        return self._variables

    @property
    def terms(self) -> Dict[Exponents, Coefficient]:
        return dict(self._terms)

    def items(self) -> List[Tuple[Exponents, Coefficient]]:
        """Terms sorted by exponent vector"""
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._variables

    def constant_value(self) -> Coefficient:
        if not self.is_constant():
            raise LaurentError(f"{self} is not a constant")
        return self._terms.get((), 0)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_unit_monomial(self) -> bool:
        """True for ±(monomial): the units of the integral Laurent ring"""
        return self.is_monomial() and next(iter(self._terms.values())) in (1, -1)

    def exponents_of(self, name: str) -> List[int]:
        if name not in self._variables:
            return [0] if self._terms else []
        i = self._variables.index(name)
        return [e[i] for e in self._terms]

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self._terms.values())

    ###################
    # Ring operations
    ###################
    def _aligned(self, other: "LaurentPolynomial"):
        if self._variables == other._variables:
            return self._variables, self._terms, other._terms
        universe = tuple(sorted(set(self._variables) | set(other._variables)))
        return universe, _embed(self, universe), _embed(other, universe)

    @staticmethod
    def _coerce(value) -> "LaurentPolynomial":
        if isinstance(value, LaurentPolynomial):
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return LaurentPolynomial.constant(value)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        universe, mine, theirs = self._aligned(other)
        result = dict(mine)
        for e, c in theirs.items():
            result[e] = result.get(e, 0) + c
        return LaurentPolynomial._from_canonical(universe, result)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial._from_canonical(self._variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        universe, mine, theirs = self._aligned(other)
        result: Dict[Exponents, Coefficient] = {}
        for e1, c1 in mine.items():
            for e2, c2 in theirs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                result[e] = result.get(e, 0) + c1 * c2
        return LaurentPolynomial._from_canonical(universe, result)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = LaurentPolynomial.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "LaurentPolynomial":
        """Inverse of a monomial (integral only for unit monomials)"""
        if not self.is_monomial():
            raise LaurentError(f"{self} is not invertible in the Laurent ring")
        (exps, coeff), = self._terms.items()
        return LaurentPolynomial._from_canonical(
            self._variables, {tuple(-e for e in exps): Fraction(1) / coeff})

    ###################
    # Comparison
    ###################
    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._variables == other._variables and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._variables, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    ###################
    # Substitution
    ###################
    def specialize(self, assignments: Mapping[str, Union[int, "LaurentPolynomial"]]) -> "LaurentPolynomial":
        """
        Substitute values for variables.

        Args:
            assignments: variable -> ±1 or a unit monomial in any variables

        Returns:
            LaurentPolynomial: the substituted polynomial over the remaining variables

        Raises:
            SpecializationError: if a value is 0 or is not a unit of the Laurent ring
        """
        values: Dict[str, LaurentPolynomial] = {}
        for name, value in assignments.items():
            if isinstance(value, LaurentPolynomial):
                poly = value
            elif isinstance(value, int) and not isinstance(value, bool):
                poly = LaurentPolynomial.constant(value)
            else:
                raise SpecializationError(f"Unsupported value for {name}: {value!r}")
            if poly.is_zero():
                raise SpecializationError(f"Cannot specialize {name} at 0: units must stay invertible")
            if not poly.is_unit_monomial():
                raise SpecializationError(
                    f"Value {poly} for {name} is not ±1 or a unit monomial")
            values[name] = poly

        if not values:
            return self

        kept = tuple(v for v in self._variables if v not in values)
        kept_idx = [self._variables.index(v) for v in kept]
        result = LaurentPolynomial.zero()
        for exps, coeff in self._terms.items():
            term = LaurentPolynomial._from_canonical(kept, {tuple(exps[i] for i in kept_idx): coeff})
            for name, value in values.items():
                if name in self._variables:
                    term = term * value ** exps[self._variables.index(name)]
            result = result + term
        return result

    def evaluate(self, values: Mapping[str, complex]):
        """Numeric value; every variable of the polynomial needs a value"""
        missing = [v for v in self._variables if v not in values]
        if missing:
            raise LaurentError(f"Missing values for: {', '.join(missing)}")
        total = 0
        for exps, coeff in self._terms.items():
            term = coeff
            for name, e in zip(self._variables, exps):
                term = term * values[name] ** e
            total += term
        return total

    ###################
    # Formatting
    ###################
    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"LaurentPolynomial('{format_polynomial(self)}')"


def _embed(poly: LaurentPolynomial, universe: Tuple[str, ...]) -> Dict[Exponents, Coefficient]:
    positions = [universe.index(v) for v in poly.variables]
    embedded = {}
    for exps, coeff in poly._terms.items():
        full = [0] * len(universe)
        for pos, e in zip(positions, exps):
            full[pos] = e
        embedded[tuple(full)] = coeff
    return embedded


def format_polynomial(poly: LaurentPolynomial) -> str:
    if poly.is_zero():
        return "0"
    pieces = []
    for exps, coeff in poly.items():
        factors = []
        for name, e in zip(poly.variables, exps):
            if e == 1:
                factors.append(name)
            elif e != 0:
                factors.append(f"{name}^{e}")
        magnitude = abs(coeff)
        if not factors:
            body = str(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(magnitude)] + factors)
        pieces.append(("-" if coeff < 0 else "+", body))

    sign, body = pieces[0]
    text = f"-{body}" if sign == "-" else body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_NUMBER_PREFIX = re.compile(r"^(\d+(/\d+)?)?")


def parse_polynomial(text: str) -> LaurentPolynomial:
    """Parse `-3*s^-2*t^4 + 2/3*s - 1` style text"""
    compact = re.sub(r"\s+", "", text)
    if not compact:
        raise PolynomialParseError("Empty polynomial text")

    # signs that follow '^' are exponent signs, not term separators
    pieces = re.split(r"(?<!\^)([+-])", compact)
    head, rest = pieces[0], pieces[1:]
    terms: List[Tuple[int, str]] = [(1, head)] if head else []
    for op, body in zip(rest[0::2], rest[1::2]):
        if not body:
            raise PolynomialParseError(f"Dangling or repeated operator in {text!r}")
        terms.append((-1 if op == "-" else 1, body))

    result = LaurentPolynomial.zero()
    for sign, body in terms:
        result = result + sign * _parse_term(body, text)
    return result


def _parse_term(body: str, text: str) -> LaurentPolynomial:
    coefficient: Coefficient = 1
    exponents: Dict[str, int] = {}
    for factor in body.split("*"):
        if not factor:
            raise PolynomialParseError(f"Empty factor in {text!r}")
        # `2s^3` is `2*s^3`
        number = _NUMBER_PREFIX.match(factor).group(0)
        if number:
            try:
                coefficient = coefficient * Fraction(number)
            except ZeroDivisionError:
                raise PolynomialParseError(f"Zero denominator in {factor!r} of {text!r}")
            factor = factor[len(number):]
            if not factor:
                continue
        name, _, power = factor.partition("^")
        if not _NAME.match(name):
            raise PolynomialParseError(f"Bad factor {factor!r} in {text!r}")
        try:
            e = int(power) if power else 1
        except ValueError:
            raise PolynomialParseError(f"Bad exponent in {factor!r}")
        exponents[name] = exponents.get(name, 0) + e
    return LaurentPolynomial.monomial(exponents, coefficient)


###################
# One-variable arithmetic over QQ[s, 1/s]
###################
def common_variable(*polys: LaurentPolynomial) -> Optional[str]:
    """The single variable shared by the inputs (None if all are constants)"""
    names = set()
    for poly in polys:
        names.update(poly.variables)
    if len(names) > 1:
        raise MultivariableError(f"Expected one-variable input, got variables {sorted(names)}")
    return next(iter(names), None)


def _to_poly(poly: LaurentPolynomial, name: str) -> Tuple[Poly, int]:
    """Split p = name^shift * P with P an ordinary polynomial, P(0) != 0"""
    symbol = Symbol(name)
    if poly.is_zero():
        return Poly(0, symbol, domain=QQ), 0
    exps = poly.exponents_of(name)
    shift = min(exps)
    rep = {}
    for e, c in zip(exps, poly._terms.values()):
        c = Fraction(c)
        rep[(e - shift,)] = Rational(c.numerator, c.denominator)
    return Poly.from_dict(rep, symbol, domain=QQ), shift


def _from_poly(poly: Poly, name: str, shift: int = 0) -> LaurentPolynomial:
    terms = {}
    for (e,), c in poly.terms():
        if c != 0:
            terms[(e + shift,)] = Fraction(int(c.p), int(c.q))
    return LaurentPolynomial(terms, (name,))


def divmod_single_var(f: LaurentPolynomial, d: LaurentPolynomial) -> Tuple[LaurentPolynomial, LaurentPolynomial]:
    """
    Division with remainder in QQ[s, 1/s] after clearing monomial units.

    Returns (q, r) with f = q*d + r; r == 0 exactly when d divides f.
    """
    if d.is_zero():
        raise ZeroDivisorError("Division by the zero polynomial")
    name = common_variable(f, d) or "s"
    F, a = _to_poly(f, name)
    D, b = _to_poly(d, name)
    Q, R = F.div(D)
    return _from_poly(Q, name, a - b), _from_poly(R, name, a)


def divides(d: LaurentPolynomial, f: LaurentPolynomial) -> bool:
    """True iff f = q*d for some q in QQ[s, 1/s]"""
    if d.is_zero():
        raise ZeroDivisorError("Zero is not a divisor")
    common_variable(d, f)
    if f.is_zero():
        return True
    _, r = divmod_single_var(f, d)
    return r.is_zero()


def gcd_single_var(polys: Iterable[LaurentPolynomial]) -> LaurentPolynomial:
    """Monic gcd over QQ of one-variable Laurent polynomials (0 for an all-zero list)"""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return LaurentPolynomial.zero()
    name = common_variable(*polys) or "s"
    g = None
    for poly in polys:
        P, _ = _to_poly(poly, name)
        g = P if g is None else sympy_gcd(g, P)
    return _from_poly(g.monic(), name)


def ideal_membership_single_var(target: LaurentPolynomial, generators: Sequence[LaurentPolynomial]) -> bool:
    """
    Decide whether target lies in the ideal of QQ[s, 1/s] spanned by generators.

    The ring is a principal ideal domain, so the ideal is generated by the gcd.
    """
    common_variable(target, *generators)
    if target.is_zero():
        return True
    g = gcd_single_var(generators)
    if g.is_zero():
        return False
    member = divides(g, target)
    logger.debug(f"membership of {target} in ({g}): {member}")
    return member
