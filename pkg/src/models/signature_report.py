from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from src.algebra.cyclotomic import RootOfUnity


@dataclass
class Arc:
    """Open arc of the unit circle between two turns in [0, 1] on which the signature is constant"""
    start: Fraction
    end: Fraction
    value: int
    sample: RootOfUnity

    def contains(self, omega: RootOfUnity) -> bool:
        return self.start < omega.turn < self.end

    def to_dict(self) -> Dict:
        return {"start": str(self.start), "end": str(self.end), "value": self.value, "sample": str(self.sample)}

    @classmethod
    def from_dict(cls, data: Dict) -> "Arc":
        return cls(Fraction(data["start"]), Fraction(data["end"]), data["value"], RootOfUnity.parse(data["sample"]))


@dataclass
class SignatureProfile:
    """Piecewise-constant signature function: arc values plus exact values at jump points"""
    name: str
    arcs: List[Arc]
    point_values: List[Tuple[RootOfUnity, int]]
    approximate_jumps: List[float] = field(default_factory=list)
    resolution: int = 0

    def value_at(self, omega: RootOfUnity) -> Optional[int]:
        """Signature at omega when the profile already determines it"""
        for point, value in self.point_values:
            if point == omega:
                return value
        for arc in self.arcs:
            if arc.contains(omega):
                return arc.value
        return None

    def jump_points(self) -> List[RootOfUnity]:
        return [point for point, _ in self.point_values]

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "resolution": self.resolution,
            "arcs": [arc.to_dict() for arc in self.arcs],
            "point_values": [{"omega": str(point), "value": value} for point, value in self.point_values],
            "approximate_jumps": list(self.approximate_jumps),
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "SignatureProfile":
        return cls(
            name=data["name"],
            arcs=[Arc.from_dict(a) for a in data["arcs"]],
            point_values=[(RootOfUnity.parse(p["omega"]), p["value"]) for p in data["point_values"]],
            approximate_jumps=list(data.get("approximate_jumps", [])),
            resolution=data.get("resolution", 0),
        )


class HyperbolicVerdict(str, Enum):
    VIOLATED = "Violated"
    VANISHES_ON_TEST_SET = "VanishesOnTestSet"


@dataclass
class HyperbolicCertificate:
    """
    Result of testing whether the signature vanishes on a set of roots of unity.

    VIOLATED certifies the form is not hyperbolic; the witness can be re-checked by
    evaluating the signature at the stored point.
    """
    verdict: HyperbolicVerdict
    witness: Optional[Tuple[RootOfUnity, int]]
    tested_points: List[RootOfUnity]
    name: str = ""

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "verdict": self.verdict.value,
            "witness": None if self.witness is None else {"omega": str(self.witness[0]), "value": self.witness[1]},
            "tested_points": [str(w) for w in self.tested_points],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "HyperbolicCertificate":
        witness = data.get("witness")
        return cls(
            verdict=HyperbolicVerdict(data["verdict"]),
            witness=None if witness is None else (RootOfUnity.parse(witness["omega"]), witness["value"]),
            tested_points=[RootOfUnity.parse(w) for w in data["tested_points"]],
            name=data.get("name", ""),
        )


@dataclass
class DsBound:
    """Lower bound 2|sigma(omega)| for the doubly slice genus of the Bing double"""
    bound: int
    witness: Optional[RootOfUnity]
    signature: int
    tested_points: List[RootOfUnity]
    name: str = ""

    NOTE = "meaningful when the matrix is a Seifert matrix of a slice knot"

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "bound": self.bound,
            "witness": None if self.witness is None else str(self.witness),
            "signature": self.signature,
            "tested_points": [str(w) for w in self.tested_points],
            "note": self.NOTE,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "DsBound":
        witness = data.get("witness")
        return cls(
            bound=data["bound"],
            witness=None if witness is None else RootOfUnity.parse(witness),
            signature=data["signature"],
            tested_points=[RootOfUnity.parse(w) for w in data["tested_points"]],
            name=data.get("name", ""),
        )


@dataclass
class SignatureEvaluation:
    """Signature at a single point, with the characteristic polynomial of H when computed exactly"""
    name: str
    omega: str
    mode: str
    value: int
    characteristic_polynomial: Optional[List[str]] = None
    precision: int = 0

    def to_dict(self) -> Dict:
        data = {"name": self.name, "omega": self.omega, "mode": self.mode, "signature": self.value}
        if self.characteristic_polynomial is not None:
            data["characteristic_polynomial"] = list(self.characteristic_polynomial)
        if self.precision:
            data["precision"] = self.precision
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "SignatureEvaluation":
        return cls(
            name=data["name"],
            omega=data["omega"],
            mode=data["mode"],
            value=data["signature"],
            characteristic_polynomial=data.get("characteristic_polynomial"),
            precision=data.get("precision", 0),
        )
