import itertools
import time

import pytest

from conftest import random_root, random_square, random_unimodular
from src.library import resolve_matrix
from src.seifert.forms import (
    DimensionMismatchError,
    SeifertError,
    SeifertMatrix,
    connected_sum,
    form_from_matrix,
    reverse_sum,
)
from src.seifert.lattice import (
    Sublattice,
    search_metabolizer,
    verify_hyperbolic_splitting,
    verify_metabolizer,
)
from src.signature.levine_tristram import signature_at


def test_sublattice_basics():
    lattice = Sublattice.span_of_units(4, [0, 1])
    assert lattice.rank == 2
    assert lattice.basis == ((1, 0, 0, 0), (0, 1, 0, 0))
    assert lattice.is_primitive()
    assert not Sublattice(2, ((2, 0),)).is_primitive()
    assert not Sublattice(2, ((1, 1), (2, 2))).is_independent()
    with pytest.raises(DimensionMismatchError):
        Sublattice(3, ((1, 0),))


def test_canonical_basis_identifies_equal_lattices():
    a = Sublattice(3, ((1, 1, 0), (0, 1, 0)))
    b = Sublattice(3, ((1, 0, 0), (0, 1, 0)))
    assert a.same_lattice(b)
    assert not a.same_lattice(Sublattice(3, ((1, 0, 0), (0, 0, 1))))
    assert a.canonical().canonical() == a.canonical()


def test_verify_metabolizer_examples(evenq, unknot):
    assert verify_metabolizer(evenq, Sublattice.span_of_units(4, [0, 1]))
    assert not verify_metabolizer(evenq, Sublattice.span_of_units(4, [2, 3]))
    assert not verify_metabolizer(evenq, Sublattice.span_of_units(4, [0]))
    assert verify_metabolizer(unknot, Sublattice(0))
    with pytest.raises(DimensionMismatchError):
        verify_metabolizer(evenq, Sublattice.span_of_units(2, [0]))


def test_imprimitive_isotropic_lattice_is_rejected():
    m = SeifertMatrix.from_rows([[0, 1], [0, 0]])
    assert verify_metabolizer(m, Sublattice(2, ((1, 0),)))
    assert not verify_metabolizer(m, Sublattice(2, ((2, 0),)))


def test_search_finds_evenq_metabolizer(evenq):
    found = search_metabolizer(evenq, 1)
    assert found is not None
    assert found.same_lattice(Sublattice.span_of_units(4, [0, 1]))
    assert verify_metabolizer(evenq, found)


def test_search_finds_8_20_metabolizer(m820):
    found = search_metabolizer(m820, 1)
    assert found is not None
    assert verify_metabolizer(m820, found)
    assert found.same_lattice(Sublattice(4, ((0, 0, 0, 1), (1, -1, 0, 0))))
    assert verify_metabolizer(m820, search_metabolizer(m820, 2))


def test_search_none_found(trefoil):
    assert search_metabolizer(trefoil, 3) is None


def test_search_degenerate_inputs(unknot):
    assert search_metabolizer(unknot, 1) == Sublattice(0)
    assert search_metabolizer(SeifertMatrix.from_rows([[0]]), 2) is None
    with pytest.raises(ValueError):
        search_metabolizer(unknot, 0)


def _metabolic_instance(rng, genus=None):
    g = genus or rng.randint(1, 2)
    n = 2 * g
    p = random_unimodular(rng, n, steps=3)
    # psi = P B P^T with B vanishing on the first g coordinates is isotropic on P^-T e_1, ..., P^-T e_g
    inner = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i >= g or j >= g:
                inner[i][j] = rng.randint(-1, 1)
    rows = [[sum(p[i][a] * inner[a][b] * p[j][b] for a in range(n) for b in range(n)) for j in range(n)]
            for i in range(n)]
    return SeifertMatrix.from_rows(rows)


def _verified_search_count(rng, count):
    found = 0
    for _ in range(count):
        m = _metabolic_instance(rng)
        result = search_metabolizer(m, 2)
        if result is not None:
            found += 1
            assert verify_metabolizer(m, result), m.psi
    return found


def test_search_result_always_verifies(rng):
    assert _verified_search_count(rng, 60) > 0


@pytest.mark.slow
def test_search_result_always_verifies_full_sweep(rng):
    assert _verified_search_count(rng, 200) > 0


def _has_isotropic_plane(m, bound):
    """Two independent mutually psi-orthogonal isotropic vectors with entries in [-bound, bound]"""
    vectors = [v for v in itertools.product(range(-bound, bound + 1), repeat=4)
               if any(v) and m.bilinear_value(v, v) == 0]
    for x, y in itertools.combinations(vectors, 2):
        independent = any(x[i] * y[j] != x[j] * y[i] for i in range(4) for j in range(i + 1, 4))
        if independent and m.bilinear_value(x, y) == 0 and m.bilinear_value(y, x) == 0:
            return True
    return False


def test_search_agrees_with_pairwise_enumeration(rng, m820, evenq):
    fixed = [m820, evenq, resolve_matrix("trefoil#trefoil"), resolve_matrix("trefoil#unknot#trefoil")]
    assert [_has_isotropic_plane(m, 1) for m in fixed] == [True, True, False, False]
    randoms = [_metabolic_instance(rng, genus=2) for _ in range(10)]
    randoms += [SeifertMatrix.from_rows(random_square(rng, 4, -1, 1)) for _ in range(10)]
    for m in fixed + randoms:
        assert (search_metabolizer(m, 1) is not None) == _has_isotropic_plane(m, 1), m.psi


def test_saturation():
    assert Sublattice(2, ((2, 0),)).saturation().same_lattice(Sublattice(2, ((1, 0),)))
    saturated = Sublattice(3, ((1, 1, 0), (1, -1, 0))).saturation()
    assert saturated.same_lattice(Sublattice.span_of_units(3, [0, 1]))
    assert saturated.is_primitive()
    lattice = Sublattice(4, ((2, 4, 0, 6), (0, 3, 3, 0)))
    saturated = lattice.saturation()
    assert saturated.is_primitive()
    assert saturated.rank == 2
    assert saturated.matrix().row_join(lattice.matrix()).rank() == 2
    assert Sublattice(0).saturation() == Sublattice(0)
    with pytest.raises(SeifertError):
        Sublattice(2, ((1, 1), (2, 2))).saturation()


@pytest.mark.slow
@pytest.mark.parametrize("name", ["8_20#trefoil#trefoil", "trefoil#8_20#trefoil"])
def test_rank_8_search_without_metabolizer_finishes(name):
    m = resolve_matrix(name)
    start = time.perf_counter()
    assert search_metabolizer(m, 2) is None
    assert time.perf_counter() - start < 60


@pytest.mark.slow
def test_rank_8_metabolic_searches(m820):
    for m in (connected_sum(m820, m820), reverse_sum(m820)):
        start = time.perf_counter()
        found = search_metabolizer(m, 2)
        assert time.perf_counter() - start < 30
        assert found is not None
        assert found.rank == 4
        assert verify_metabolizer(m, found)


def test_hyperbolic_splitting_examples(evenq):
    m = SeifertMatrix.from_rows([[0, 1], [0, 0]], -1)
    form = form_from_matrix(m)
    assert [list(r) for r in form.t] == [[0, 0], [0, 1]]
    assert verify_hyperbolic_splitting(form, Sublattice.span_of_units(2, [0]), Sublattice.span_of_units(2, [1]))
    assert not verify_hyperbolic_splitting(form, Sublattice.span_of_units(2, [0]), Sublattice.span_of_units(2, [0]))
    empty = form_from_matrix(SeifertMatrix((), -1))
    assert verify_hyperbolic_splitting(empty, Sublattice(0), Sublattice(0))


def _bounded_metabolizers(m, bound):
    """Distinct rank-2 metabolizers spanned by two vectors with entries in [-bound, bound]"""
    vectors = [v for v in itertools.product(range(-bound, bound + 1), repeat=m.size)
               if any(v) and next(c for c in v if c) > 0 and m.bilinear_value(v, v) == 0]
    found = {}
    for x, y in itertools.combinations(vectors, 2):
        if m.bilinear_value(x, y) or m.bilinear_value(y, x):
            continue
        lattice = Sublattice(m.size, (x, y))
        if verify_metabolizer(m, lattice):
            canonical = lattice.canonical()
            found[canonical.basis] = canonical
    return list(found.values())


def _assert_no_hyperbolic_splitting(m, bound):
    form = form_from_matrix(m)
    lattices = _bounded_metabolizers(m, bound)
    assert lattices
    for first in lattices:
        for second in lattices:
            assert not verify_hyperbolic_splitting(form, first, second)


def test_evenq_has_no_small_hyperbolic_splitting(evenq):
    _assert_no_hyperbolic_splitting(evenq, 1)


@pytest.mark.slow
def test_evenq_has_no_hyperbolic_splitting_at_bound_2(evenq):
    _assert_no_hyperbolic_splitting(evenq, 2)


def test_hyperbolic_splitting_implies_metabolic_and_vanishing_signature(rng):
    for _ in range(15):
        g = rng.randint(1, 2)
        # [[0, P], [0, 0]] with P unimodular splits along the coordinate halves
        p = random_unimodular(rng, g)
        rows = [[0] * g + p[i] for i in range(g)] + [[0] * (2 * g) for _ in range(g)]
        m = SeifertMatrix.from_rows(rows, -1)
        form = form_from_matrix(m)
        first = Sublattice.span_of_units(2 * g, range(g))
        second = Sublattice.span_of_units(2 * g, range(g, 2 * g))
        assert verify_hyperbolic_splitting(form, first, second)
        assert verify_metabolizer(m, first) and verify_metabolizer(m, second)
        for _ in range(10):
            assert signature_at(m, random_root(rng)) == 0
