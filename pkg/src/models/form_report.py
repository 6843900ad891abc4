from dataclasses import dataclass, field
from typing import Dict, List, Optional

from src.models.signature_report import HyperbolicCertificate, HyperbolicVerdict
from src.seifert.lattice import Sublattice


@dataclass
class FormCheckReport:
    """Combined result of building a Seifert form and probing its metabolic structure"""
    name: str
    epsilon: int
    rank: int
    determinant: int
    axioms: Dict[str, bool] = field(default_factory=dict)
    b: Optional[List[List[int]]] = None
    t: Optional[List[List[int]]] = None
    printed_match: Optional[bool] = None
    search_bound: int = 0
    metabolizer: Optional[Sublattice] = None
    search_skipped: bool = False
    hyperbolic: Optional[HyperbolicCertificate] = None

    @property
    def unimodular(self) -> bool:
        return abs(self.determinant) == 1

    @property
    def passed(self) -> bool:
        """Form built, every axiom holds, and no published matrix disagrees"""
        return self.unimodular and all(self.axioms.values()) and self.printed_match is not False

    @property
    def metabolic_not_hyperbolic(self) -> bool:
        return (self.metabolizer is not None and self.hyperbolic is not None
                and self.hyperbolic.verdict == HyperbolicVerdict.VIOLATED)

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "epsilon": self.epsilon,
            "rank": self.rank,
            "determinant": self.determinant,
            "unimodular": self.unimodular,
            "axioms": dict(self.axioms),
            "b": self.b,
            "t": self.t,
            "printed_match": self.printed_match,
            "search_bound": self.search_bound,
            "search_skipped": self.search_skipped,
            "metabolizer": None if self.metabolizer is None else self.metabolizer.to_dict(),
            "hyperbolic": None if self.hyperbolic is None else self.hyperbolic.to_dict(),
            "passed": self.passed,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "FormCheckReport":
        metabolizer = data.get("metabolizer")
        hyperbolic = data.get("hyperbolic")
        return cls(
            name=data["name"],
            epsilon=data["epsilon"],
            rank=data["rank"],
            determinant=data["determinant"],
            axioms=dict(data.get("axioms", {})),
            b=data.get("b"),
            t=data.get("t"),
            printed_match=data.get("printed_match"),
            search_bound=data.get("search_bound", 0),
            metabolizer=None if metabolizer is None else Sublattice(
                metabolizer["ambient"], tuple(tuple(v) for v in metabolizer["basis"])),
            search_skipped=data.get("search_skipped", False),
            hyperbolic=None if hyperbolic is None else HyperbolicCertificate.from_dict(hyperbolic),
        )
