"""Testes para formas binarias: Sylvester, familias, projecao e levantamento."""

import random

import pytest

from src.algebra.forms import parse_form
from src.algebra.points import PointSet, ProjPoint, distinct_random_points, normalize
from src.exceptions import (
    DegenerateProjectionError,
    DimensionMismatchError,
    FamilyEmptyError,
    InputError,
    NotMinimalCertificateError,
    ZeroFormError,
)
from src.geometry.veronese import veronese_vectors
from src.services.binary import (
    BinaryDecomposition,
    BinaryForm,
    apolar_system,
    border_rank,
    catalecticant,
    decompose_at_nodes,
    decomposition_family,
    is_square_free,
    lift_decomposition,
    lifted_family,
    project_from_nodes,
    split_roots,
    sylvester_analyze,
    sylvester_decompose,
)


def binary(field, text):
    return BinaryForm.from_form(parse_form(text, field, r=1))


def from_nodes(field, d, coords, weights):
    nodes = [normalize(field, c) for c in coords]
    moments = field.linear_combination([field.coerce(w) for w in weights], veronese_vectors(nodes, d))
    return BinaryForm.from_moments(field, d, moments)


def tangent_form(field, d, u0, nodes, weights):
    """Vetor tangente a nu_d em (1:u0) somado a potencias simples: rank de fronteira #nodes + 2."""
    moments = [field.mul(i, field.power(u0, i - 1)) if i else 0 for i in range(d + 1)]
    if nodes:
        simple = field.linear_combination(weights, veronese_vectors(nodes, d))
        moments = [field.add(a, b) for a, b in zip(moments, simple)]
    return BinaryForm.from_moments(field, d, moments)


class TestBinaryForm:
    """Testes para BinaryForm."""

    def test_zero_form(self, f7):
        """Forma nula e rejeitada."""
        with pytest.raises(ZeroFormError):
            BinaryForm(f7, 2, (0, 0, 0))

    def test_wrong_length(self, f7):
        """d+1 coeficientes."""
        with pytest.raises(DimensionMismatchError):
            BinaryForm(f7, 3, (1, 0))

    def test_moments_of_power(self, qq):
        """(x + 2y)^2 tem momentos nu_2(1:2)."""
        f = binary(qq, "x0^2 + 4*x0*x1 + 4*x1^2")
        assert f.moments() == [1, 2, 4]

    def test_from_moments_inverse(self, f101):
        """from_moments inverte moments."""
        f = binary(f101, "3*x0^4 + x0*x1^3 + 7*x1^4")
        assert BinaryForm.from_moments(f101, 4, f.moments()) == f


class TestRoots:
    """Testes para raizes e fatores livres de quadrados."""

    def test_split_by_scan(self, f7):
        """alpha*beta tem raizes (0:1) e (1:0)."""
        roots = split_roots(f7, [0, 1, 0])
        assert [pt.coords for pt in roots] == [(0, 1), (1, 0)]

    def test_irreducible_quadric(self, f7):
        """alpha^2 + beta^2 nao decompoe em F_7."""
        assert split_roots(f7, [1, 0, 1]) is None
        assert is_square_free(f7, [1, 0, 1])

    def test_double_root(self, f7):
        """alpha^2 nao e livre de quadrados."""
        assert split_roots(f7, [1, 0, 0]) is None
        assert not is_square_free(f7, [1, 0, 0])

    def test_split_by_factorization(self, f10007):
        """beta - beta^3 fatoriza com sympy em p grande."""
        roots = split_roots(f10007, [0, 1, 0, -1 % 10007])
        assert [pt.coords for pt in roots] == [(1, 0), (1, 1), (1, 10006)]

    def test_root_at_infinity(self, f10007, qq):
        """Coeficiente nulo no topo da raiz (0:1)."""
        assert [pt.coords for pt in split_roots(f10007, [1, 0])] == [(0, 1)]
        assert [pt.coords for pt in split_roots(qq, [1, -1])] == [(1, 1)]

    def test_rational_roots(self, qq):
        """alpha^2 - beta^2 sobre Q."""
        roots = split_roots(qq, [-1, 0, 1])
        assert sorted(pt.coords for pt in roots) == [(1, -1), (1, 1)]


class TestCatalecticant:
    """Testes para catalecticantes e sistemas apolares."""

    def test_shape(self, f101):
        """H_k e (d-k+1) x (k+1)."""
        f = binary(f101, "x0^5 + x1^5")
        M = catalecticant(f, 2)
        assert M.nrows == 4 and M.ncols == 3

    def test_degree_out_of_range(self, f101):
        """k fora de [0, d]."""
        f = binary(f101, "x0^3 + x1^3")
        with pytest.raises(InputError):
            catalecticant(f, 4)

    def test_system_above_degree(self, f101):
        """Acima de d todas as formas sao apolares."""
        f = binary(f101, "x0^3")
        assert len(apolar_system(f, 4)) == 5

    def test_border_rank(self, f101):
        """Potencia tem t = 1; x0*x1 tem t = 2."""
        assert border_rank(binary(f101, "x0^4")) == 1
        assert border_rank(binary(f101, "x0*x1")) == 2

    def test_border_rank_bound(self, f101):
        """1 <= t <= (d+2)//2 em formas aleatorias."""
        rng = random.Random(2)
        for d in range(2, 9):
            coeffs = tuple(f101.random_element(rng) for _ in range(d)) + (1,)
            t = border_rank(BinaryForm(f101, d, coeffs))
            assert 1 <= t <= (d + 2) // 2


class TestSylvester:
    """Testes para sylvester_analyze e sylvester_decompose."""

    def test_power_has_rank_one(self, f101):
        """x0^3 tem rank 1 e decomposicao unica."""
        analysis = sylvester_analyze(binary(f101, "x0^3"))
        assert analysis.rank == 1
        assert analysis.family_dim == 0

    @pytest.mark.parametrize("d", range(3, 9))
    def test_x_y_power(self, f101, d):
        """rank(x0 * x1^(d-1)) = d."""
        analysis = sylvester_analyze(binary(f101, f"x0*x1^{d - 1}"))
        assert analysis.border_rank == 2
        assert analysis.rank == d
        assert analysis.generic_rank == d

    def test_example_cubic(self, f101, qq):
        """x0*x1^2 tem rank 3 sobre F_101 e sobre Q."""
        assert sylvester_analyze(binary(f101, "x0*x1^2")).rank == 3
        assert sylvester_analyze(binary(qq, "x0*x1^2")).rank == 3

    def test_rational_rank_above_generic(self, f7):
        """x0^3 - 3*x0*x1^2 e soma de potencias conjugadas: rank 3 em F_7."""
        analysis = sylvester_analyze(binary(f7, "x0^3 - 3*x0*x1^2"))
        assert analysis.border_rank == 2
        assert analysis.generic_rank == 2
        assert analysis.rank == 3

    def test_sum_of_squares_f5(self, f5):
        """x0^2 + x1^2 em F_5: nos (1:1), (1:4) com pesos 1/2."""
        dec = sylvester_decompose(binary(f5, "x0^2 + x1^2"))
        assert [pt.coords for pt in dec.nodes] == [(1, 1), (1, 4)]
        assert dec.weights == (3, 3)

    def test_sum_of_squares_rational(self, qq):
        """x0^2 + x1^2 sobre Q: nos (1:0), (0:1)."""
        dec = sylvester_decompose(binary(qq, "x0^2 + x1^2"))
        assert dec.size == 2
        assert dec.reconstruction() == dec.form.moments()

    def test_decomposition_reconstructs(self, f101):
        """Decomposicao de forma aleatoria reproduz os momentos."""
        rng = random.Random(9)
        for d in (3, 4, 5, 6):
            coeffs = tuple(f101.random_element(rng) for _ in range(d + 1))
            if all(c == 0 for c in coeffs):
                continue
            f = BinaryForm(f101, d, coeffs)
            dec = sylvester_decompose(f)
            assert dec.size == sylvester_analyze(f).rank
            assert dec.reconstruction() == f.moments()
            assert all(w != 0 for w in dec.weights)

    def test_decompose_at_wrong_nodes(self, f101):
        """Nos que nao geram a forma."""
        f = from_nodes(f101, 4, [(1, 0), (1, 1)], [1, 1])
        assert decompose_at_nodes(f, [ProjPoint(f101, (1, 2)), ProjPoint(f101, (1, 3))]) is None

    def test_unique_below_half(self, f101):
        """Com rank <= (d+1)/2 a familia tem dimensao zero."""
        f = from_nodes(f101, 5, [(1, 0), (1, 1), (1, 2)], [2, 3, 4])
        analysis = sylvester_analyze(f)
        assert analysis.rank == 3
        assert analysis.family_dim == 0
        assert [pt.coords for pt in analysis.witness_nodes] == [(1, 0), (1, 1), (1, 2)]


class TestFamily:
    """Testes para decomposition_family."""

    def test_family_members_distinct(self, f101):
        """Membros distintos, todos com o mesmo tamanho."""
        f = binary(f101, "x0*x1^2")
        members = decomposition_family(f, 5, seed=1)
        assert len(members) == 5
        assert len({m.node_key() for m in members}) == 5
        for m in members:
            assert m.size == 3
            assert m.reconstruction() == f.moments()

    def test_family_deterministic(self, f101):
        """Mesma seed, mesma familia."""
        f = binary(f101, "x0^4 + x0*x1^3")
        first = [m.node_key() for m in decomposition_family(f, 4, seed=3)]
        second = [m.node_key() for m in decomposition_family(f, 4, seed=3)]
        assert first == second

    def test_unique_decomposition(self, f101):
        """family_dim 0 retorna so a decomposicao unica."""
        assert len(decomposition_family(binary(f101, "x0^3"), 10, seed=0)) == 1

    def test_zero_count(self, f101):
        """count <= 0 retorna lista vazia."""
        assert decomposition_family(binary(f101, "x0*x1"), 0, seed=0) == []

    def test_rational_family(self, qq):
        """Sobre Q a familia e amostrada."""
        f = binary(qq, "x0*x1^2")
        members = decomposition_family(f, 3, seed=0)
        assert len(members) >= 1
        for m in members:
            assert m.reconstruction() == f.moments()


class TestProjection:
    """Testes para project_from_nodes e lift_decomposition."""

    def test_empty_projection(self, f101):
        """E vazio nao altera a forma."""
        f = binary(f101, "x0^3 + x1^3")
        assert project_from_nodes(f, PointSet()) == f

    def test_too_many_nodes(self, f101):
        """#E <= d - 2."""
        f = binary(f101, "x0^3 + x1^3")
        E = PointSet.of([ProjPoint(f101, (1, 0)), ProjPoint(f101, (1, 1))])
        with pytest.raises(InputError):
            project_from_nodes(f, E)

    def test_degenerate_projection(self, f101):
        """Projetar uma potencia a partir do seu no anula a forma."""
        f = from_nodes(f101, 4, [(1, 5)], [1])
        with pytest.raises(DegenerateProjectionError):
            project_from_nodes(f, PointSet.of([ProjPoint(f101, (1, 5))]))

    def test_projection_kills_node(self, f101):
        """A projecao a partir de um no reduz o rank em um."""
        f = from_nodes(f101, 6, [(1, 0), (1, 1), (1, 2), (1, 3)], [1, 2, 3, 4])
        g = project_from_nodes(f, PointSet.of([ProjPoint(f101, (1, 3))]))
        assert g.d == 5
        assert sylvester_analyze(g).rank == 3

    def test_lift(self, f101):
        """U uniao E decompoe a forma original."""
        coords = [(1, 0), (1, 1), (1, 2), (1, 3)]
        f = from_nodes(f101, 6, coords, [1, 2, 3, 4])
        E = PointSet.of([ProjPoint(f101, (1, 3))])
        U = sylvester_decompose(project_from_nodes(f, E))
        lifted = lift_decomposition(f, E, U)
        assert [pt.coords for pt in lifted.nodes] == coords
        assert lifted.weights == (1, 2, 3, 4)

    def test_lift_rejects_overlap(self, f101):
        """U a tocar E nao e levantado."""
        f = from_nodes(f101, 6, [(1, 0), (1, 1), (1, 2), (1, 3)], [1, 2, 3, 4])
        E = PointSet.of([ProjPoint(f101, (1, 3))])
        g = project_from_nodes(f, E)
        U = BinaryDecomposition(g, E, (1,))
        with pytest.raises(NotMinimalCertificateError):
            lift_decomposition(f, E, U)


    def test_lifted_family_random_forms(self, f101):
        """50 formas com rank s = d+2-t > t: todos os membros projetados levantam."""
        rng = random.Random(21)
        checked = 0
        while checked < 50:
            d = rng.choice([5, 6, 7])
            t = rng.choice([2, 3])
            if 2 * t >= d + 2:
                continue
            points = distinct_random_points(f101, 1, t - 1, rng)
            if any(pt.coords[0] == 0 for pt in points):
                continue
            u0, simple = points[0].coords[1], points[1:]
            weights = [f101.random_element(rng, nonzero=True) for _ in simple]
            f = tangent_form(f101, d, u0, simple, weights)
            s = d + 2 - t
            if border_rank(f) != t or sylvester_analyze(f).rank != s:
                continue
            A = list(sylvester_decompose(f).nodes)
            E = PointSet.of(A[:s - t])
            members = lifted_family(f, E, 3, seed=rng.randrange(1000))
            assert members
            for dec in members:
                assert dec.size == s
                assert dec.reconstruction() == f.moments()
                assert all(pt in dec.nodes for pt in E)
            checked += 1

    def test_lifted_family_unique_below_threshold(self, f101):
        """Sem familia na forma projetada o levantamento devolve a decomposicao original."""
        coords = [(1, 0), (1, 1), (1, 2), (1, 3)]
        f = from_nodes(f101, 7, coords, [1, 2, 3, 4])
        E = PointSet.of([ProjPoint(f101, (1, 3))])
        members = lifted_family(f, E, 5, seed=0)
        assert [[pt.coords for pt in m.nodes] for m in members] == [coords]


class TestFamilyBatches:
    """Testes para lotes de familias por seed."""

    def test_exhaustive_batches_disjoint(self, f101):
        """Seeds 1, 2, 3 devolvem lotes disjuntos num sistema percorrido por inteiro."""
        f = binary(f101, "x0*x1^2")
        batches = [{m.node_key() for m in decomposition_family(f, 5, seed=s)} for s in (1, 2, 3)]
        assert all(len(b) == 5 for b in batches)
        assert not batches[0] & batches[1]
        assert not batches[0] & batches[2]
        assert not batches[1] & batches[2]

    def test_pencil_batches_disjoint(self, f10007):
        """Feixe apolar sobre F_10007: lotes de 10 disjuntos e todos validos."""
        f = from_nodes(f10007, 4, [(1, 0), (1, 1), (1, 2)], [1, 2, 3])
        assert sylvester_analyze(f).family_dim == 1
        batches = []
        for seed in (1, 2, 3):
            members = decomposition_family(f, 10, seed=seed)
            assert len(members) == 10
            for m in members:
                assert m.size == 3
                assert m.reconstruction() == f.moments()
            batches.append({m.node_key() for m in members})
        assert not batches[0] & batches[1]
        assert not batches[0] & batches[2]
        assert not batches[1] & batches[2]

    def test_distant_seeds_disjoint(self, f101):
        """Seeds afastadas leem janelas afastadas da ordem canonica."""
        f = binary(f101, "x0*x1^2")
        first = {m.node_key() for m in decomposition_family(f, 4, seed=1)}
        second = {m.node_key() for m in decomposition_family(f, 4, seed=4)}
        assert not first & second

    def test_sampled_batches_disjoint(self, qq):
        """Sobre Q a reparticao e por hash dos nos."""
        f = binary(qq, "x0*x1^2")
        batches = [{m.node_key() for m in decomposition_family(f, 2, seed=s)} for s in (0, 1, 2)]
        assert not batches[0] & batches[1]
        assert not batches[0] & batches[2]
        assert not batches[1] & batches[2]

    def test_avoid_respected(self, f101):
        """Nenhum membro toca os nos proibidos."""
        f = binary(f101, "x0*x1^2")
        avoid = PointSet.of([ProjPoint(f101, (1, 0)), ProjPoint(f101, (1, 1))])
        members = decomposition_family(f, 6, seed=2, avoid=avoid)
        assert len(members) == 6
        for m in members:
            assert m.nodes.intersection(avoid).is_empty()

    def test_avoid_unique_decomposition(self, f101):
        """Decomposicao unica a tocar os nos proibidos."""
        f = binary(f101, "x0^3")
        with pytest.raises(FamilyEmptyError):
            decomposition_family(f, 2, seed=0, avoid=PointSet.of([ProjPoint(f101, (1, 0))]))
