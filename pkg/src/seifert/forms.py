import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from sympy import Matrix, Poly, Symbol, eye, zeros

from src.errors import KnotObsError

logger = logging.getLogger(__name__)

Rows = Tuple[Tuple[int, ...], ...]

X = Symbol("x")


class SeifertError(KnotObsError):
    """Base exception for Seifert matrix and form errors"""
    pass


class NonUnimodularError(SeifertError):
    """Raised when psi + epsilon psi^T is not unimodular"""

    def __init__(self, determinant: int, name: str = ""):
        self.determinant = determinant
        label = f" for {name}" if name else ""
        super().__init__(f"psi + epsilon*psi^T has determinant {determinant}{label}, expected +1 or -1")


class EpsilonMismatchError(SeifertError):
    """Raised when combining matrices of different symmetry"""
    pass


class DimensionMismatchError(SeifertError):
    """Raised when a sublattice or matrix has the wrong ambient dimension"""
    pass


def _rows_of(matrix: Matrix) -> Rows:
    return tuple(tuple(int(matrix[i, j]) for j in range(matrix.cols)) for i in range(matrix.rows))


def to_matrix(rows: Rows, size: int = None) -> Matrix:
    """sympy Matrix from integer rows (0 x 0 for an empty row list)"""
    if not rows:
        return zeros(size or 0, size or 0)
    return Matrix([list(r) for r in rows])


@dataclass(frozen=True)
class SeifertMatrix:
    """Square integer matrix psi together with the symmetry sign epsilon"""
    psi: Rows
    epsilon: int = -1
    name: str = field(default="", compare=False)

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.psi)
        if any(len(row) != len(rows) for row in rows):
            raise SeifertError(f"Seifert matrix must be square, got row lengths {[len(r) for r in rows]}")
        if self.epsilon not in (1, -1):
            raise SeifertError(f"epsilon must be +1 or -1, got {self.epsilon}")
        object.__setattr__(self, "psi", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], epsilon: int = -1, name: str = "") -> "SeifertMatrix":
        return cls(tuple(tuple(r) for r in rows), epsilon, name)

    @property
    def size(self) -> int:
        return len(self.psi)

    def matrix(self) -> Matrix:
        return to_matrix(self.psi)

    def pairing_matrix(self) -> Matrix:
        psi = self.matrix()
        return psi + self.epsilon * psi.T

    def pairing_determinant(self) -> int:
        return int(self.pairing_matrix().det())

    def is_admissible(self) -> bool:
        return abs(self.pairing_determinant()) == 1

    def quadratic_value(self, x: Sequence[int]) -> int:
        return sum(x[i] * self.psi[i][j] * x[j] for i in range(self.size) for j in range(self.size))

    def bilinear_value(self, x: Sequence[int], y: Sequence[int]) -> int:
        """x^T psi y"""
        return sum(x[i] * self.psi[i][j] * y[j] for i in range(self.size) if x[i] for j in range(self.size))

    def to_dict(self) -> Dict:
        return {"name": self.name, "epsilon": self.epsilon, "rows": [list(r) for r in self.psi]}

    def __str__(self):
        return self.name or f"{self.size}x{self.size} matrix"


@dataclass(frozen=True)
class SeifertForm:
    """Lattice Z^rank with epsilon-symmetric unimodular pairing b and endomorphism t"""
    rank: int
    b: Rows
    t: Rows
    epsilon: int
    psi: Rows

    def check_axioms(self) -> Dict[str, bool]:
        n = self.rank
        b, t, psi = to_matrix(self.b, n), to_matrix(self.t, n), to_matrix(self.psi, n)
        return {
            "epsilon_symmetric": b.T == self.epsilon * b,
            "unimodular": abs(b.det()) == 1,
            "b_t_equals_psi": b * t == psi,
            "form_axiom": t.T * b == b * (eye(n) - t),
        }

    def holds(self) -> bool:
        return all(self.check_axioms().values())


def form_from_matrix(m: SeifertMatrix) -> SeifertForm:
    """
    Build (Z^2g, b, t) with b = psi + epsilon psi^T and t = b^-1 psi.

    Raises:
        NonUnimodularError: if det(b) is not ±1
    """
    b = m.pairing_matrix()
    det = int(b.det())
    if abs(det) != 1:
        raise NonUnimodularError(det, m.name)
    # for det = ±1 the inverse is det * adjugate, hence integral
    t = (det * b.adjugate()) * m.matrix() if m.size else zeros(0, 0)
    return SeifertForm(rank=m.size, b=_rows_of(b), t=_rows_of(t), epsilon=m.epsilon, psi=m.psi)


def block_sum(first: Rows, second: Rows) -> Rows:
    n1, n2 = len(first), len(second)
    top = tuple(tuple(row) + (0,) * n2 for row in first)
    bottom = tuple((0,) * n1 + tuple(row) for row in second)
    return top + bottom


def connected_sum(m1: SeifertMatrix, m2: SeifertMatrix) -> SeifertMatrix:
    """Block sum diag(psi1, psi2); an empty matrix is neutral whatever its epsilon"""
    if not m1.size:
        return SeifertMatrix(m2.psi, m2.epsilon, m2.name)
    if not m2.size:
        return SeifertMatrix(m1.psi, m1.epsilon, m1.name)
    if m1.epsilon != m2.epsilon:
        raise EpsilonMismatchError(f"Cannot sum {m1} (epsilon {m1.epsilon}) with {m2} (epsilon {m2.epsilon})")
    name = f"{m1.name}#{m2.name}" if m1.name and m2.name else ""
    return SeifertMatrix(block_sum(m1.psi, m2.psi), m1.epsilon, name)


def connected_sum_power(m: SeifertMatrix, copies: int) -> SeifertMatrix:
    total = SeifertMatrix((), m.epsilon)
    for _ in range(copies):
        total = connected_sum(total, m)
    return SeifertMatrix(total.psi, m.epsilon, f"#{copies} {m.name}" if m.name else "")


def transpose_rows(rows: Rows) -> Rows:
    return tuple(zip(*rows)) if rows else ()


def reverse(m: SeifertMatrix) -> SeifertMatrix:
    """Seifert matrix of the reversed knot: psi^T"""
    return SeifertMatrix(transpose_rows(m.psi), m.epsilon, f"{m.name}^r" if m.name else "")


def reverse_sum(m: SeifertMatrix) -> SeifertMatrix:
    """diag(psi, psi^T), the Seifert matrix of K # K^r"""
    name = f"{m.name}#{m.name}^r" if m.name else ""
    return SeifertMatrix(block_sum(m.psi, transpose_rows(m.psi)), m.epsilon, name)


def epsilon_for_dimension(q: int) -> int:
    """Symmetry sign (-1)^q of Seifert forms of (2q-1)-knots"""
    if q < 1:
        raise SeifertError(f"q must be positive, got {q}")
    return -1 if q % 2 else 1


def pattern_blocks(psi: Rows) -> List[List[int]]:
    """Index sets of the connected components of the nonzero pattern of psi + psi^T"""
    n = len(psi)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if psi[i][j] or psi[j][i]:
                parent[find(i)] = find(j)
    blocks: Dict[int, List[int]] = {}
    for i in range(n):
        blocks.setdefault(find(i), []).append(i)
    return list(blocks.values())


def sub_rows(psi: Rows, indices: Sequence[int]) -> Rows:
    return tuple(tuple(psi[i][j] for j in indices) for i in indices)


@lru_cache(maxsize=256)
def _alexander_block(psi: Rows) -> Poly:
    m = to_matrix(psi)
    return Poly((m - X * m.T).det(method="berkowitz"), X)


def alexander_polynomial(m: SeifertMatrix) -> Poly:
    """det(psi - x psi^T) as a polynomial in x, multiplied out over the blocks of psi"""
    result = Poly(1, X)
    for block in pattern_blocks(m.psi):
        result = result * _alexander_block(sub_rows(m.psi, block))
    return result
