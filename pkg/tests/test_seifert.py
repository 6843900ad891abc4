import pytest
from sympy import Poly, factor_list

from conftest import random_admissible
from src.library import PRINTED_FORMS
from src.seifert.forms import (
    X,
    EpsilonMismatchError,
    NonUnimodularError,
    SeifertError,
    SeifertMatrix,
    alexander_polynomial,
    connected_sum,
    connected_sum_power,
    epsilon_for_dimension,
    form_from_matrix,
    pattern_blocks,
    reverse,
    reverse_sum,
)


def rows(form_rows):
    return [list(r) for r in form_rows]


def test_matrix_validation():
    with pytest.raises(SeifertError):
        SeifertMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(SeifertError):
        SeifertMatrix.from_rows([[1]], epsilon=0)


def test_printed_forms_reproduced(m820, evenq):
    for m in (m820, evenq):
        form = form_from_matrix(m)
        assert rows(form.b) == PRINTED_FORMS[m.name]["b"]
        assert rows(form.t) == PRINTED_FORMS[m.name]["t"]
        assert form.holds()


def test_8_20_pairing_is_skew(m820):
    b = m820.pairing_matrix()
    assert b == m820.matrix() - m820.matrix().T
    assert m820.pairing_determinant() == 1


def test_non_unimodular_reports_determinant():
    with pytest.raises(NonUnimodularError) as info:
        form_from_matrix(SeifertMatrix.from_rows([[1]], -1, "one"))
    assert info.value.determinant == 0
    with pytest.raises(NonUnimodularError) as info:
        form_from_matrix(SeifertMatrix.from_rows([[1]], 1))
    assert info.value.determinant == 2


def test_empty_form(unknot):
    form = form_from_matrix(unknot)
    assert form.rank == 0
    assert form.holds()


@pytest.mark.parametrize("epsilon", [-1, 1])
def test_form_axioms_on_random_matrices(rng, epsilon):
    for _ in range(60):
        m = random_admissible(rng, epsilon)
        assert m.is_admissible()
        checks = form_from_matrix(m).check_axioms()
        assert all(checks.values()), (m.psi, checks)


@pytest.mark.slow
@pytest.mark.parametrize("epsilon", [-1, 1])
def test_form_axioms_full_sweep(rng, epsilon):
    for _ in range(500):
        m = random_admissible(rng, epsilon, genus=rng.randint(1, 3))
        assert form_from_matrix(m).holds(), m.psi


def test_connected_sum(m820, trefoil, unknot, evenq):
    total = connected_sum(m820, m820)
    assert total.size == 8
    assert total.psi[4:] == tuple((0,) * 4 + row for row in m820.psi)
    assert total.name == "8_20#8_20"
    assert connected_sum(m820, unknot) == m820
    assert connected_sum(unknot, trefoil) == trefoil
    with pytest.raises(EpsilonMismatchError):
        connected_sum(m820, evenq)


def test_connected_sum_power(m820):
    cube = connected_sum_power(m820, 3)
    assert cube.size == 12
    assert cube == connected_sum(connected_sum(m820, m820), m820)
    assert connected_sum_power(m820, 0).size == 0


def test_reverse_and_reverse_sum(m820, unknot):
    assert reverse(m820).matrix() == m820.matrix().T
    doubled = reverse_sum(m820)
    assert doubled.size == 8
    assert doubled.psi[:4] == tuple(r + (0,) * 4 for r in m820.psi)
    assert doubled.psi[4:] == tuple((0,) * 4 + r for r in reverse(m820).psi)
    assert reverse_sum(unknot).size == 0


def test_epsilon_for_dimension():
    assert epsilon_for_dimension(1) == -1
    assert epsilon_for_dimension(2) == 1
    with pytest.raises(SeifertError):
        epsilon_for_dimension(0)


def test_pattern_blocks(m820):
    block = SeifertMatrix.from_rows([[1, 0, 0], [0, 2, 3], [0, 0, 4]])
    assert sorted(sorted(b) for b in pattern_blocks(block.psi)) == [[0], [1, 2]]
    assert pattern_blocks(connected_sum(m820, m820).psi) == [[0, 1, 2, 3], [4, 5, 6, 7]]


def test_alexander_polynomials(m820, trefoil, evenq, unknot):
    assert alexander_polynomial(trefoil) == Poly(X ** 2 - X + 1, X)
    assert alexander_polynomial(m820) == Poly((X ** 2 - X + 1) ** 2, X)
    assert alexander_polynomial(evenq) == Poly((X ** 2 + X + 1) ** 2, X)
    assert alexander_polynomial(unknot) == Poly(1, X)
    doubled = alexander_polynomial(connected_sum(m820, trefoil))
    assert doubled == alexander_polynomial(m820) * alexander_polynomial(trefoil)
    _, factors = factor_list(doubled.as_expr())
    assert factors == [(X ** 2 - X + 1, 3)]
