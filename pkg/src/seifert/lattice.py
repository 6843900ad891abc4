import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import hermite_normal_form, invariant_factors, smith_normal_decomp

from src.seifert.forms import DimensionMismatchError, SeifertError, SeifertForm, SeifertMatrix, to_matrix

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class Sublattice:
    """Sublattice of Z^ambient spanned by integer column vectors"""
    ambient: int
    basis: Tuple[Vector, ...] = ()

    def __post_init__(self):
        basis = tuple(tuple(int(v) for v in column) for column in self.basis)
        for column in basis:
            if len(column) != self.ambient:
                raise DimensionMismatchError(
                    f"Basis vector {column} does not live in Z^{self.ambient}")
        object.__setattr__(self, "basis", basis)

    @classmethod
    def span_of_units(cls, ambient: int, indices: Sequence[int]) -> "Sublattice":
        """span{e_i : i in indices}, 0-based"""
        return cls(ambient, tuple(tuple(int(i == k) for i in range(ambient)) for k in indices))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrix(self) -> Matrix:
        """Basis vectors as the columns of an ambient x rank matrix"""
        if not self.basis:
            return Matrix.zeros(self.ambient, 0)
        return Matrix([list(column) for column in self.basis]).T

    def is_independent(self) -> bool:
        return not self.basis or self.matrix().rank() == self.rank

    def is_primitive(self) -> bool:
        """Independent with all invariant factors 1, i.e. a direct summand of Z^ambient"""
        if not self.basis:
            return True
        if not self.is_independent():
            return False
        factors = invariant_factors(self.matrix(), domain=ZZ)
        return len(factors) == self.rank and all(abs(f) == 1 for f in factors)

    def canonical(self) -> "Sublattice":
        """Same lattice, with the column Hermite normal form as basis"""
        if not self.basis:
            return self
        hnf = hermite_normal_form(self.matrix())
        return Sublattice(self.ambient, tuple(tuple(int(v) for v in hnf.col(j)) for j in range(hnf.cols)))

    def saturation(self) -> "Sublattice":
        """
        The primitive sublattice (rational span) cap Z^ambient.

        With m = S^-1 D T^-1 the Smith decomposition of the basis matrix, the first rank
        columns of S^-1 are a basis. The basis must be independent.
        """
        if not self.basis:
            return self
        if not self.is_independent():
            raise SeifertError(f"Saturation needs an independent basis, got {self}")
        _, s, _ = smith_normal_decomp(self.matrix(), domain=ZZ)
        columns = s.inv()
        return Sublattice(self.ambient, tuple(tuple(int(v) for v in columns.col(j)) for j in range(self.rank)))

    def same_lattice(self, other: "Sublattice") -> bool:
        return self.ambient == other.ambient and self.canonical().basis == other.canonical().basis

    def to_dict(self):
        return {"ambient": self.ambient, "basis": [list(v) for v in self.basis]}

    def __str__(self):
        return "span{" + ", ".join(str(list(v)) for v in self.basis) + "}"


def _check_dimension(expected: int, *lattices: Sublattice) -> None:
    for lattice in lattices:
        if lattice.ambient != expected:
            raise DimensionMismatchError(f"Sublattice of Z^{lattice.ambient} used with rank {expected} form")


def verify_metabolizer(m: SeifertMatrix, lattice: Sublattice) -> bool:
    """True iff lattice is primitive, of half rank, and psi vanishes on it"""
    _check_dimension(m.size, lattice)
    if m.size % 2 or 2 * lattice.rank != m.size:
        return False
    for x in lattice.basis:
        for y in lattice.basis:
            if m.bilinear_value(x, y):
                return False
    return lattice.is_primitive()


def _isotropic_candidates(m: SeifertMatrix, bound: int) -> np.ndarray:
    """
    Primitive vectors x with entries in [-bound, bound], positive leading entry and
    x^T psi x = 0, as rows sorted by l1 norm and then by descending entries.
    """
    n = m.size
    psi = np.array(m.psi, dtype=np.int64)
    values = np.arange(-bound, bound + 1, dtype=np.int64)
    tail = np.stack(np.meshgrid(*([values] * (n - 1)), indexing="ij"), axis=-1).reshape(-1, n - 1)
    chunks = []
    # a positive leading entry rules out negative first coordinates
    for head in range(bound + 1):
        x = np.hstack([np.full((len(tail), 1), head, dtype=np.int64), tail])
        keep = _leading_entries(x) > 0
        keep &= np.gcd.reduce(np.abs(x), axis=1) == 1
        keep &= ((x @ psi) * x).sum(axis=1) == 0
        chunks.append(x[keep])
    candidates = np.vstack(chunks)
    norm = np.abs(candidates).sum(axis=1)
    order = np.lexsort([-candidates[:, j] for j in reversed(range(n))] + [norm])
    return candidates[order]


def _leading_entries(rows: np.ndarray) -> np.ndarray:
    """First nonzero entry of each row (0 for zero rows)"""
    return rows[np.arange(len(rows)), (rows != 0).argmax(axis=1)]


def _reduce(echelon: List[Tuple[int, np.ndarray]], vectors: np.ndarray) -> np.ndarray:
    """
    Representatives of the lines of vectors modulo the span of an echelon basis.

    Each output row is zero on every pivot column, primitive, with positive leading entry;
    two vectors give equal rows iff they span the same line modulo the echelon span, and
    vectors inside the span give zero rows.
    """
    reduced = vectors.copy()
    for pivot, row in echelon:
        reduced = row[pivot] * reduced - reduced[:, pivot:pivot + 1] * row
    divisors = np.gcd.reduce(np.abs(reduced), axis=1)
    divisors[divisors == 0] = 1
    reduced //= divisors[:, None]
    return reduced * np.where(_leading_entries(reduced) < 0, -1, 1)[:, None]


def search_metabolizer(m: SeifertMatrix, bound: int) -> Optional[Sublattice]:
    """
    Search for a metabolizer spanned by vectors with entries in [-bound, bound].

    Candidates are primitive psi-isotropic vectors, ordered as in `_isotropic_candidates`.
    The search walks psi-isotropic rational subspaces spanned by candidates, entering each
    one only through its greedy basis (the earliest candidate, then the earliest candidate
    outside the span so far, and so on), so no subspace is visited twice. A half-rank
    isotropic subspace V yields the metabolizer V cap Z^n, returned in Hermite normal form.
    None means no metabolizer is spanned by such vectors, which proves nothing about
    metabolicity.
    """
    if bound < 1:
        raise ValueError(f"Search bound must be at least 1, got {bound}")
    n = m.size
    if n % 2:
        return None
    if n == 0:
        return Sublattice(0)
    half = n // 2
    candidates = _isotropic_candidates(m, bound)
    logger.debug(f"{m}: {len(candidates)} isotropic candidates at bound {bound}")

    psi = np.array(m.psi, dtype=np.int64)
    # y is psi-orthogonal to candidate i iff left[i] . y == 0 and right[i] . y == 0
    left = candidates @ psi
    right = candidates @ psi.T
    visited = 0

    def orthogonal_to(index: int, pool: np.ndarray) -> np.ndarray:
        rows = candidates[pool]
        return pool[(rows @ left[index] == 0) & (rows @ right[index] == 0)]

    def extend(chosen: List[int], echelon: List[Tuple[int, np.ndarray]], pool: np.ndarray) -> Optional[Sublattice]:
        # pool: every candidate psi-orthogonal to the chosen span, in candidate order
        nonlocal visited
        visited += 1
        if len(chosen) == half:
            return _saturated_metabolizer(m, candidates[chosen])
        if len(pool) < half - len(chosen):
            return None
        reduced = _reduce(echelon, candidates[pool])
        _, first = np.unique(reduced, axis=0, return_index=True)
        earliest = np.zeros(len(pool), dtype=bool)
        earliest[first] = True
        earliest &= reduced.any(axis=1)
        if chosen:
            earliest &= pool > chosen[-1]
        for position in np.flatnonzero(earliest):
            index = int(pool[position])
            row = reduced[position]
            pivot = int(np.flatnonzero(row)[0])
            found = extend(chosen + [index], echelon + [(pivot, row)], orthogonal_to(index, pool))
            if found is not None:
                return found
        return None

    result = extend([], [], np.arange(len(candidates)))
    logger.debug(f"{m}: visited {visited} isotropic subspaces")
    return result


def _saturated_metabolizer(m: SeifertMatrix, vectors: np.ndarray) -> Optional[Sublattice]:
    lattice = Sublattice(m.size, tuple(tuple(int(v) for v in row) for row in vectors)).saturation()
    if not verify_metabolizer(m, lattice):
        logger.warning(f"{m}: saturated isotropic span {lattice} failed verification")
        return None
    return lattice.canonical()


def verify_hyperbolic_splitting(form: SeifertForm, first: Sublattice, second: Sublattice) -> bool:
    """
    True iff Z^rank = first (+) second with both summands t-invariant and self-orthogonal under b.

    Given the direct sum, a half-rank b-isotropic summand equals its own orthogonal complement
    because b is unimodular.
    """
    n = form.rank
    _check_dimension(n, first, second)
    if first.rank + second.rank != n:
        return False
    if n == 0:
        return True

    combined = Matrix([list(v) for v in first.basis + second.basis]).T
    if abs(combined.det()) != 1:
        return False

    b = to_matrix(form.b, n)
    t = to_matrix(form.t, n)
    inverse = combined.inv()
    blocks = ((first, range(0, first.rank)), (second, range(first.rank, n)))
    for lattice, own in blocks:
        if 2 * lattice.rank != n:
            return False
        for x in lattice.basis:
            coords = inverse * (t * Matrix(x))
            if any(coords[i] != 0 for i in range(n) if i not in own):
                return False
        for x in lattice.basis:
            for y in lattice.basis:
                if (Matrix(x).T * b * Matrix(y))[0, 0] != 0:
                    return False
    return True
