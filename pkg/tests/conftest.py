"""Fixtures compartilhadas para testes."""

import random
from fractions import Fraction

import pytest

from src.algebra.field import FieldSpec
from src.algebra.points import PointSet, normalize
from src.geometry.decomposition import Decomposition, decomposition_from_points
from src.geometry.veronese import AmbientVector, VeroneseSpace, veronese_vectors


def make_decomposition(field: FieldSpec, space: VeroneseSpace, coords: list, weights: list) -> Decomposition:
    """Decomposicao a partir de coordenadas e pesos (P = sum w_i nu_d(a_i))."""
    points = [normalize(field, c) for c in coords]
    vectors = veronese_vectors(points, space.d)
    target = field.linear_combination([field.coerce(w) for w in weights], vectors)
    return decomposition_from_points(AmbientVector(field, tuple(target)), PointSet.of(points), space)


@pytest.fixture
def f5():
    """Corpo F_5."""
    return FieldSpec.prime(5)


@pytest.fixture
def f7():
    """Corpo F_7."""
    return FieldSpec.prime(7)


@pytest.fixture
def f101():
    """Corpo F_101."""
    return FieldSpec.prime(101)


@pytest.fixture
def f10007():
    """Corpo F_10007 (o padrao da CLI)."""
    return FieldSpec.prime(10007)


@pytest.fixture
def qq():
    """Corpo dos racionais."""
    return FieldSpec.rational()


@pytest.fixture
def rng():
    """Gerador deterministico."""
    return random.Random(12345)


@pytest.fixture
def plane_cubic_space():
    """Cubicas planas: r=2, d=3."""
    return VeroneseSpace(2, 3)


@pytest.fixture
def three_general_points_qq(qq, plane_cubic_space):
    """Tres pontos nao colineares de P^2(Q) com pesos 1, 2, -1/2."""
    return make_decomposition(
        qq,
        plane_cubic_space,
        [(1, 0, 0), (0, 1, 0), (1, 1, 1)],
        [1, 2, Fraction(-1, 2)],
    )



@pytest.fixture
def decomposition_factory():
    """Fabrica make_decomposition(field, space, coords, weights)."""
    return make_decomposition
