import random
from math import gcd
from typing import List

import pytest

from src.algebra.cyclotomic import RootOfUnity
from src.library import builtin_matrix
from src.seifert.forms import SeifertMatrix


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def m820():
    return builtin_matrix("8_20")


@pytest.fixture
def evenq():
    return builtin_matrix("evenq_example")


@pytest.fixture
def trefoil():
    return builtin_matrix("trefoil")


@pytest.fixture
def unknot():
    return builtin_matrix("unknot")


def random_root(rng: random.Random, max_order: int = 12) -> RootOfUnity:
    m = rng.randint(2, max_order)
    k = rng.choice([k for k in range(1, m) if gcd(k, m) == 1])
    return RootOfUnity(k, m)


def random_unimodular(rng: random.Random, n: int, steps: int = 6) -> List[List[int]]:
    p = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        p[i] = [a + c * b for a, b in zip(p[i], p[j])]
    return p


def random_admissible(rng: random.Random, epsilon: int, genus: int = None) -> SeifertMatrix:
    """
    P psi0 P^T + S with psi0 a sum of [[0, 1], [0, 0]] blocks, P unimodular, and S symmetric
    for epsilon = -1 (antisymmetric for epsilon = +1) so that psi + epsilon psi^T stays unimodular.
    """
    g = genus or rng.randint(1, 2)
    n = 2 * g
    psi0 = [[0] * n for _ in range(n)]
    for k in range(g):
        psi0[2 * k][2 * k + 1] = 1
    p = random_unimodular(rng, n)
    core = [[sum(p[i][a] * psi0[a][b] * p[j][b] for a in range(n) for b in range(n)) for j in range(n)]
            for i in range(n)]
    s = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = rng.randint(-2, 2)
            if epsilon == -1:
                s[i][j] = s[j][i] = v
            elif i != j:
                s[i][j], s[j][i] = v, -v
    rows = [[core[i][j] + s[i][j] for j in range(n)] for i in range(n)]
    return SeifertMatrix.from_rows(rows, epsilon)


def random_square(rng: random.Random, n: int, low: int = -3, high: int = 3) -> List[List[int]]:
    return [[rng.randint(low, high) for _ in range(n)] for _ in range(n)]
