from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

from src.algebra.laurent import LaurentPolynomial, divmod_single_var, gcd_single_var, ideal_membership_single_var


class Verdict(str, Enum):
    """Outcome of a one-sided obstruction test"""
    OBSTRUCTED = "Obstructed"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class ObstructionWitness:
    """gcd of the specialized relator derivatives and the target's remainder modulo it"""
    gcd: LaurentPolynomial
    remainder: LaurentPolynomial


@dataclass
class ObstructionReport:
    """Longitude membership test result"""
    verdict: Verdict
    target: LaurentPolynomial
    generators_specialized: List[LaurentPolynomial]
    witness: Optional[ObstructionWitness] = None
    generator: str = ""
    source: str = ""

    def recheck(self) -> Verdict:
        member = ideal_membership_single_var(self.target, self.generators_specialized)
        return Verdict.INCONCLUSIVE if member else Verdict.OBSTRUCTED

    @classmethod
    def from_membership(cls, target: LaurentPolynomial, generators: List[LaurentPolynomial],
                        generator: str = "", source: str = "") -> "ObstructionReport":
        member = ideal_membership_single_var(target, generators)
        g = gcd_single_var(generators)
        remainder = target if g.is_zero() else divmod_single_var(target, g)[1]
        return cls(
            verdict=Verdict.INCONCLUSIVE if member else Verdict.OBSTRUCTED,
            target=target,
            generators_specialized=list(generators),
            witness=ObstructionWitness(gcd=g, remainder=remainder),
            generator=generator,
            source=source,
        )

    def to_dict(self) -> Dict:
        return {
            "source": self.source,
            "generator": self.generator,
            "verdict": self.verdict.value,
            "target": str(self.target),
            "generators_specialized": [str(g) for g in self.generators_specialized],
            "witness": None if self.witness is None else {
                "gcd": str(self.witness.gcd),
                "remainder": str(self.witness.remainder),
            },
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "ObstructionReport":
        witness = data.get("witness")
        return cls(
            verdict=Verdict(data["verdict"]),
            target=LaurentPolynomial.parse(data["target"]),
            generators_specialized=[LaurentPolynomial.parse(g) for g in data["generators_specialized"]],
            witness=None if witness is None else ObstructionWitness(
                gcd=LaurentPolynomial.parse(witness["gcd"]),
                remainder=LaurentPolynomial.parse(witness["remainder"]),
            ),
            generator=data.get("generator", ""),
            source=data.get("source", ""),
        )


@dataclass
class ScanRow:
    """One (p, n) cell of a pretzel grid scan"""
    p: int
    n: int
    verdict: Verdict
    closed_form_obstructed: bool
    report: Optional[ObstructionReport] = field(default=None, compare=False)

    @property
    def pipeline_obstructed(self) -> bool:
        return self.verdict == Verdict.OBSTRUCTED

    @property
    def agrees(self) -> bool:
        return self.pipeline_obstructed == self.closed_form_obstructed

    def to_dict(self) -> Dict:
        return {
            "p": self.p,
            "n": self.n,
            "verdict": self.verdict.value,
            "closed_form_obstructed": self.closed_form_obstructed,
            "agrees": self.agrees,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "ScanRow":
        return cls(p=data["p"], n=data["n"], verdict=Verdict(data["verdict"]),
                   closed_form_obstructed=data["closed_form_obstructed"])
