"""Testes para a algebra linear exata."""

import random
from fractions import Fraction

import pytest

from src.algebra.field import FieldSpec
from src.algebra.linalg import (
    IncrementalSpan,
    Matrix,
    kernel_basis,
    mat_rank,
    row_reduce,
    solve,
    span_basis,
    subspace_intersect,
    vectors_rank,
)
from src.exceptions import DimensionMismatchError


def random_matrix(field: FieldSpec, rng: random.Random, nrows: int, ncols: int, rank: int) -> Matrix:
    """Produto de fatores aleatorios: rank <= rank pedido."""
    left = [[field.random_element(rng, bound=4) for _ in range(rank)] for _ in range(nrows)]
    right = [[field.random_element(rng, bound=4) for _ in range(ncols)] for _ in range(rank)]
    rows = [[field.dot(row, [right[k][j] for k in range(rank)]) for j in range(ncols)] for row in left]
    return Matrix.from_rows(field, rows, ncols)


@pytest.fixture(params=["rational", "prime"])
def field(request):
    """Q e F_10007."""
    return FieldSpec.rational() if request.param == "rational" else FieldSpec.prime(10007)


class TestRank:
    """Testes para mat_rank e row_reduce."""

    def test_rank_rational(self, qq):
        """Linhas proporcionais tem rank 1."""
        M = Matrix.from_rows(qq, [[1, 2], [2, 4]])
        assert mat_rank(M) == 1

    def test_rank_depends_on_field(self, f5, qq):
        """det = -5 anula-se em F_5 mas nao em Q."""
        rows = [[1, 2], [3, 1]]
        assert mat_rank(Matrix.from_rows(f5, rows)) == 1
        assert mat_rank(Matrix.from_rows(qq, rows)) == 2

    def test_empty_matrix(self, qq):
        """Matriz vazia tem rank 0."""
        assert mat_rank(Matrix.from_rows(qq, [])) == 0
        assert vectors_rank(qq, []) == 0

    def test_not_rectangular(self, qq):
        """Linhas de comprimentos diferentes."""
        with pytest.raises(DimensionMismatchError):
            Matrix.from_rows(qq, [[1, 2], [1]])

    def test_rref_is_reduced(self, qq):
        """Pivots a 1 e colunas pivot limpas."""
        rows, pivots = row_reduce(qq, [[2, 4, 6], [1, 1, 1]], 3)
        assert pivots == [0, 1]
        assert rows[0][0] == 1 and rows[1][1] == 1
        assert rows[0][1] == 0
        assert rows[0] == [1, 0, Fraction(-1)]

    def test_low_rank_products(self, field):
        """Produtos de fatores n x k e k x m tem rank <= k."""
        rng = random.Random(7)
        for _ in range(30):
            k = rng.randint(1, 4)
            M = random_matrix(field, rng, 6, 5, k)
            assert mat_rank(M) <= k


class TestKernel:
    """Testes para kernel_basis e solve."""

    def test_rank_nullity(self, field):
        """rank + dim nucleo = colunas, e M v = 0 na base."""
        rng = random.Random(11)
        for _ in range(1000):
            M = random_matrix(field, rng, rng.randint(1, 6), rng.randint(1, 7), rng.randint(1, 4))
            kernel = kernel_basis(M)
            assert len(kernel) + mat_rank(M) == M.ncols
            for v in kernel:
                assert all(x == 0 for x in M.apply(v))
            assert vectors_rank(field, kernel) == len(kernel)

    def test_solve_consistent(self, qq):
        """Solucao de um sistema compativel."""
        M = Matrix.from_rows(qq, [[1, 1], [1, -1]])
        x = solve(M, [3, 1])
        assert x == [2, 1]

    def test_solve_inconsistent(self, qq):
        """Sistema impossivel retorna None."""
        M = Matrix.from_rows(qq, [[1, 1], [2, 2]])
        assert solve(M, [1, 3]) is None

    def test_solve_wrong_length(self, qq):
        """Lado direito com comprimento errado."""
        with pytest.raises(DimensionMismatchError):
            solve(Matrix.from_rows(qq, [[1, 0]]), [1, 2])

    def test_solve_random(self, field):
        """M x = M x0 tem solucao e reproduz o lado direito."""
        rng = random.Random(3)
        for _ in range(30):
            M = random_matrix(field, rng, 5, 4, rng.randint(1, 4))
            x0 = [field.random_element(rng) for _ in range(4)]
            x = solve(M, M.apply(x0))
            assert x is not None
            assert M.apply(x) == M.apply(x0)


class TestSubspaces:
    """Testes para spans e intersecoes."""

    def test_grassmann_formula(self, field):
        """dim(U inter W) = dim U + dim W - dim(U + W)."""
        rng = random.Random(5)
        for _ in range(1000):
            n = rng.randint(3, 7)
            U = [[field.random_element(rng, bound=3) for _ in range(n)] for _ in range(rng.randint(1, n))]
            W = [[field.random_element(rng, bound=3) for _ in range(n)] for _ in range(rng.randint(1, n))]
            meet = subspace_intersect(field, U, W)
            expected = vectors_rank(field, U) + vectors_rank(field, W) - vectors_rank(field, U + W)
            assert len(meet) == expected
            for v in meet:
                assert vectors_rank(field, U + [v]) == vectors_rank(field, U)
                assert vectors_rank(field, W + [v]) == vectors_rank(field, W)

    def test_intersection_of_coordinate_planes(self, qq):
        """<e0, e1> inter <e1, e2> = <e1>."""
        meet = subspace_intersect(qq, [[1, 0, 0], [0, 1, 0]], [[0, 1, 0], [0, 0, 1]])
        assert meet == [[0, 1, 0]]

    def test_empty_intersection_input(self, qq):
        """Base vazia da intersecao vazia."""
        assert subspace_intersect(qq, [], [[1, 0]]) == []

    def test_span_basis_canonical(self, qq):
        """Bases diferentes do mesmo span dao a mesma RREF."""
        a = span_basis(qq, [[1, 1, 0], [0, 1, 1]])
        b = span_basis(qq, [[1, 2, 1], [2, 3, 1]])
        assert a == b


class TestIncrementalSpan:
    """Testes para IncrementalSpan."""

    def test_extend_and_contains(self, f7):
        """Vetores dependentes nao estendem o span."""
        span = IncrementalSpan(f7).extend([1, 2, 3])
        span = span.extend([0, 1, 1])
        assert span.dim == 2
        assert span.contains([1, 3, 4])
        assert span.extend([2, 6, 1]) is None
        assert not span.contains([0, 0, 1])

    def test_old_spans_unchanged(self, qq):
        """Estender devolve um objeto novo."""
        base = IncrementalSpan(qq).extend([1, 0])
        bigger = base.extend([0, 1])
        assert base.dim == 1 and bigger.dim == 2
        assert not base.contains([0, 1])
