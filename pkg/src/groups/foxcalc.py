import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from src.algebra.laurent import LaurentPolynomial, PolynomialParseError
from src.errors import KnotObsError

logger = logging.getLogger(__name__)

PRESENTATION_FIELDS = ["name", "generators", "relators", "abelianization"]


class FoxCalculusError(KnotObsError):
    """Base exception for free-group and Fox calculus errors"""
    pass


class UnknownGeneratorError(FoxCalculusError):
    """Raised when a word uses a generator the context does not declare"""
    pass


class WordParseError(FoxCalculusError):
    """Raised on malformed word syntax"""
    pass


class PresentationError(FoxCalculusError):
    """Raised when a presentation is inconsistent"""
    pass


Letter = Tuple[str, int]


def _freely_reduce(letters: Sequence[Letter]) -> Tuple[Letter, ...]:
    stack: List[Letter] = []
    for name, sign in letters:
        if sign not in (1, -1):
            raise FoxCalculusError(f"Letter exponents must be +1 or -1, got {name}^{sign}")
        if stack and stack[-1] == (name, -sign):
            stack.pop()
        else:
            stack.append((name, sign))
    return tuple(stack)


@dataclass(frozen=True)
class GroupWord:
    """Freely reduced word in a free group, a sequence of (generator, ±1) letters"""
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _freely_reduce(self.letters))

    @classmethod
    def identity(cls) -> "GroupWord":
        return cls()

    @classmethod
    def generator(cls, name: str, power: int = 1) -> "GroupWord":
        sign = 1 if power >= 0 else -1
        return cls(((name, sign),) * abs(power))

    @classmethod
    def parse(cls, text: str) -> "GroupWord":
        from src.groups.wordparse import parse_letters
        return cls(tuple(parse_letters(text)))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        if not isinstance(other, GroupWord):
            return NotImplemented
        return GroupWord(self.letters + other.letters)

    def __pow__(self, k: int) -> "GroupWord":
        base = self if k >= 0 else self.inverse()
        return GroupWord(base.letters * abs(k))

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((name, -sign) for name, sign in reversed(self.letters)))

    def generators(self) -> FrozenSet[str]:
        return frozenset(name for name, _ in self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def __len__(self):
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __str__(self):
        if not self.letters:
            return "1"
        # runs of one letter print as a power
        pieces = []
        i = 0
        while i < len(self.letters):
            j = i
            while j < len(self.letters) and self.letters[j] == self.letters[i]:
                j += 1
            name, sign = self.letters[i]
            power = sign * (j - i)
            pieces.append(name if power == 1 else f"{name}^{power}")
            i = j
        return " ".join(pieces)


class AbelianizationMap:
    """Images of generators in a Laurent polynomial ring, each a unit monomial with coefficient 1"""

    def __init__(self, images: Mapping[str, Union[LaurentPolynomial, str]]):
        self._images: Dict[str, LaurentPolynomial] = {}
        for name, image in images.items():
            if isinstance(image, str):
                try:
                    image = LaurentPolynomial.parse(image)
                except PolynomialParseError as e:
                    raise PresentationError(f"Bad abelianization image for {name}: {e}")
            if not image.is_monomial() or image.items()[0][1] != 1:
                raise PresentationError(f"Image of {name} must be a monomial with coefficient 1, got {image}")
            self._images[name] = image
        self._inverses = {name: image.inverse() for name, image in self._images.items()}

    def image(self, name: str, sign: int = 1) -> LaurentPolynomial:
        try:
            return self._images[name] if sign > 0 else self._inverses[name]
        except KeyError:
            raise UnknownGeneratorError(f"No abelianization image for generator {name!r}")

    def generators(self) -> List[str]:
        return list(self._images)

    def to_dict(self) -> Dict[str, str]:
        return {name: str(image) for name, image in self._images.items()}

    def __contains__(self, name: str) -> bool:
        return name in self._images

    def __eq__(self, other):
        if not isinstance(other, AbelianizationMap):
            return NotImplemented
        return self._images == other._images

    def __repr__(self):
        return f"AbelianizationMap({self.to_dict()})"


###################
# Fox calculus
###################
def abelianize(word: GroupWord, abelianization: AbelianizationMap) -> LaurentPolynomial:
    """Product of the images of the letters of `word`"""
    result = LaurentPolynomial.one()
    for name, sign in word:
        result = result * abelianization.image(name, sign)
    return result


def fox_derivative(word: GroupWord, generator: str, abelianization: AbelianizationMap) -> LaurentPolynomial:
    """
    Left Fox derivative of `word` with respect to `generator`, pushed into the Laurent ring.

    Uses d(uv) = d(u) + ab(u) d(v), d_g(g) = 1 and d_g(g^-1) = -ab(g)^-1, accumulating
    the abelianized prefix while scanning the word once.
    """
    if generator not in abelianization:
        raise UnknownGeneratorError(f"No abelianization image for generator {generator!r}")
    derivative = LaurentPolynomial.zero()
    prefix = LaurentPolynomial.one()
    for name, sign in word:
        image = abelianization.image(name, sign)
        if name == generator:
            derivative = derivative + prefix if sign > 0 else derivative - prefix * image
        prefix = prefix * image
    return derivative


@dataclass(frozen=True)
class OpaqueRelator:
    """A relator known only through the generators it involves"""
    name: str
    letters: FrozenSet[str]


@dataclass
class Presentation:
    """Finite group presentation with abelianization and optional longitude data"""
    generators: Tuple[str, ...]
    relators: Tuple[GroupWord, ...]
    abelianization: AbelianizationMap
    opaque_relators: Tuple[OpaqueRelator, ...] = ()
    longitude: Optional[GroupWord] = None
    distinguished_generator: Optional[str] = None
    name: str = "presentation"
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.generators = tuple(self.generators)
        self.relators = tuple(self.relators)
        self.opaque_relators = tuple(self.opaque_relators)
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError(f"Duplicate generators in {self.generators}")
        declared = set(self.generators)

        missing = [g for g in self.generators if g not in self.abelianization]
        if missing:
            raise PresentationError(f"Generators without abelianization image: {', '.join(missing)}")
        for i, relator in enumerate(self.relators):
            self._check_letters(relator.generators(), declared, f"relator {i + 1}")
        for opaque in self.opaque_relators:
            self._check_letters(opaque.letters, declared, f"relator {opaque.name}")
        if self.longitude is not None:
            self._check_letters(self.longitude.generators(), declared, "longitude")
        if self.distinguished_generator is not None and self.distinguished_generator not in declared:
            raise UnknownGeneratorError(f"Distinguished generator {self.distinguished_generator!r} is not declared")

    @staticmethod
    def _check_letters(letters, declared, where: str) -> None:
        unknown = sorted(set(letters) - declared)
        if unknown:
            raise UnknownGeneratorError(f"{where} uses undeclared generators: {', '.join(unknown)}")

    def unkilled_relators(self) -> List[int]:
        """Indices of spelled relators whose abelianization is not 1"""
        return [i for i, r in enumerate(self.relators) if abelianize(r, self.abelianization) != 1]

    def validate(self) -> None:
        unkilled = self.unkilled_relators()
        if unkilled:
            listing = ", ".join(f"r{i + 1}" for i in unkilled)
            raise PresentationError(f"Abelianization does not kill {listing} in {self.name}")

    def to_dict(self) -> Dict:
        data = {
            "name": self.name,
            "generators": list(self.generators),
            "relators": [str(r) for r in self.relators],
            "opaque_relators": [{"name": o.name, "letters": sorted(o.letters)} for o in self.opaque_relators],
            "abelianization": self.abelianization.to_dict(),
        }
        if self.longitude is not None:
            data["longitude"] = str(self.longitude)
        if self.distinguished_generator is not None:
            data["distinguished_generator"] = self.distinguished_generator
        if self.notes:
            data["notes"] = list(self.notes)
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "Presentation":
        missing_fields = [f for f in PRESENTATION_FIELDS if f not in data]
        if missing_fields:
            raise PresentationError(f"Missing required fields: {', '.join(missing_fields)}")
        longitude = data.get("longitude")
        return cls(
            generators=tuple(data["generators"]),
            relators=tuple(GroupWord.parse(r) for r in data["relators"]),
            abelianization=AbelianizationMap(data["abelianization"]),
            opaque_relators=tuple(OpaqueRelator(o["name"], frozenset(o["letters"]))
                                  for o in data.get("opaque_relators", [])),
            longitude=GroupWord.parse(longitude) if longitude is not None else None,
            distinguished_generator=data.get("distinguished_generator"),
            name=data["name"],
            notes=list(data.get("notes", [])),
        )


def fox_jacobian(presentation: Presentation, generator: str) -> List[LaurentPolynomial]:
    """Derivatives of every relator (spelled, then opaque) with respect to `generator`"""
    column = [fox_derivative(r, generator, presentation.abelianization) for r in presentation.relators]
    for opaque in presentation.opaque_relators:
        if generator in opaque.letters:
            raise PresentationError(
                f"Relator {opaque.name} involves {generator} but is not spelled; its derivative is unknown")
        column.append(LaurentPolynomial.zero())
    return column


def load_presentation(path: Union[str, Path]) -> Presentation:
    """Read a presentation from a JSON file and check that its relators die under abelianization"""
    path = Path(path)
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except FileNotFoundError:
        raise PresentationError(f"Presentation file not found: {path}")
    except json.JSONDecodeError as e:
        raise PresentationError(f"{path} contains invalid JSON: {e}")
    presentation = Presentation.from_dict(data)
    presentation.validate()
    logger.debug(f"Loaded presentation {presentation.name} with {len(presentation.relators)} spelled relators")
    return presentation
