"""Testes para os construtores de casos e o exemplo da cubica plana."""

import pytest

from src.algebra.field import FieldSpec
from src.exceptions import CurveTooSmallError, InfeasibleParametersError
from src.services.cert import lemma_v1_check, verify_decomposition
from src.services.classify import CaseKind, VerdictKind, classify_decomposition, generate_family, uniqueness_verdict
from src.services.constructions import (
    build_case_a,
    build_case_b,
    build_case_c,
    build_example_i1,
    find_cubic,
)

F101 = FieldSpec.prime(101)


@pytest.fixture(scope="module")
def example_i1():
    """Exemplo de grau 6 sobre F_13."""
    return build_example_i1(6, FieldSpec.prime(13), seed=0)


class TestCaseBuilders:
    """Testes para build_case_a, build_case_b e build_case_c."""

    @pytest.mark.parametrize("d,r,line_count,off_count", [(5, 2, 4, 2), (4, 2, 3, 2), (6, 3, 5, 3), (3, 1, 3, 0)])
    def test_case_a(self, d, r, line_count, off_count):
        """Instancias classificadas como reta pesada."""
        target, dec = build_case_a(d, r, line_count, off_count, F101, seed=1)
        assert dec.size == line_count + off_count
        assert dec.target == target
        assert verify_decomposition(dec).valid
        report = classify_decomposition(dec)
        assert report.case is CaseKind.CASE_A
        assert len(report.curve_points) == line_count

    @pytest.mark.parametrize("d,conic_count,off_count", [(4, 5, 0), (5, 6, 1)])
    def test_case_b(self, d, conic_count, off_count):
        """Instancias classificadas como conica lisa pesada."""
        _, dec = build_case_b(d, 2, conic_count, off_count, F101, seed=2)
        report = classify_decomposition(dec)
        assert report.case is CaseKind.CASE_B
        assert len(report.curve_points) == conic_count

    @pytest.mark.parametrize("d", [3, 5])
    def test_case_c(self, d):
        """Duas retas com (d+1)/2 pontos cada."""
        _, dec = build_case_c(d, 2, F101, seed=3)
        assert dec.size == d + 1
        assert classify_decomposition(dec).case is CaseKind.CASE_C

    def test_deterministic(self):
        """Mesma seed, mesma instancia."""
        _, first = build_case_a(5, 2, 4, 1, F101, seed=9)
        _, second = build_case_a(5, 2, 4, 1, F101, seed=9)
        assert first.points == second.points
        assert first.weights == second.weights

    def test_large_family(self):
        """Vinte membros distintos e certificados."""
        _, dec = build_case_a(5, 2, 4, 2, F101, seed=4)
        report = classify_decomposition(dec)
        family = generate_family(dec, report, 20, seed=0)
        assert len(family) == 20
        assert len({m.node_key() for m in family}) == 20
        assert all(verify_decomposition(m).valid for m in family)


class TestInfeasibleParameters:
    """Parametros rejeitados antes de sortear."""

    def test_line_below_threshold(self):
        """Menos de teto((d+2)/2) pontos na reta."""
        with pytest.raises(InfeasibleParametersError):
            build_case_a(5, 2, 3, 0, F101, seed=0)

    def test_line_above_degree(self):
        """Mais de d pontos numa reta."""
        with pytest.raises(InfeasibleParametersError):
            build_case_a(6, 2, 7, 0, F101, seed=0)

    def test_out_of_regime(self):
        """Total >= 3d/2."""
        with pytest.raises(InfeasibleParametersError):
            build_case_a(5, 2, 5, 3, F101, seed=0)

    def test_off_points_need_plane(self):
        """Pontos fora da reta exigem r >= 2."""
        with pytest.raises(InfeasibleParametersError):
            build_case_a(5, 1, 4, 1, F101, seed=0)

    def test_small_characteristic(self):
        """p <= d."""
        with pytest.raises(InfeasibleParametersError):
            build_case_a(5, 2, 4, 0, FieldSpec.prime(5), seed=0)
        with pytest.raises(InfeasibleParametersError):
            build_case_b(4, 2, 5, 0, FieldSpec.prime(7), seed=0)

    def test_conic_degree(self):
        """Conica pesada exige d >= 4 e d+1 pontos."""
        with pytest.raises(InfeasibleParametersError):
            build_case_b(3, 2, 4, 0, F101, seed=0)
        with pytest.raises(InfeasibleParametersError):
            build_case_b(5, 2, 5, 0, F101, seed=0)

    def test_two_lines_even_degree(self):
        """Caso C exige d impar e r >= 2."""
        with pytest.raises(InfeasibleParametersError):
            build_case_c(4, 2, F101, seed=0)
        with pytest.raises(InfeasibleParametersError):
            build_case_c(5, 1, F101, seed=0)


class TestCubic:
    """Testes para find_cubic."""

    def test_points_on_curve(self):
        """Pontos projetivos anulam y^2 z - x^3 - a x z^2 - b z^3."""
        a, b, points = find_cubic(FieldSpec.prime(13), 10)
        assert len(points) >= 10
        assert (4 * a ** 3 + 27 * b ** 2) % 13 != 0
        for pt in points:
            x, y, z = pt.coords
            assert (y * y * z - x ** 3 - a * x * z * z - b * z ** 3) % 13 == 0
        assert (0, 1, 0) in [pt.coords for pt in points]

    def test_fewest_points(self):
        """A cubica escolhida e a menor acima do minimo."""
        _, _, small = find_cubic(FieldSpec.prime(13), 5)
        _, _, large = find_cubic(FieldSpec.prime(13), 15)
        assert 5 <= len(small) <= len(large)

    def test_field_too_small(self):
        """F_5 nao tem cubicas com 18 pontos."""
        with pytest.raises(CurveTooSmallError):
            find_cubic(FieldSpec.prime(5), 18)

    def test_rational_field(self):
        """So corpos primos."""
        with pytest.raises(CurveTooSmallError):
            find_cubic(FieldSpec.rational(), 3)


class TestExampleI1:
    """Testes para build_example_i1."""

    def test_odd_degree(self):
        """d impar e rejeitado."""
        with pytest.raises(InfeasibleParametersError):
            build_example_i1(7, FieldSpec.prime(13), seed=0)

    def test_small_degree(self):
        """d < 6 e rejeitado."""
        with pytest.raises(InfeasibleParametersError):
            build_example_i1(4, FieldSpec.prime(13), seed=0)

    def test_small_field(self):
        """F_5 nao tem cubica com 3d pontos."""
        with pytest.raises(CurveTooSmallError):
            build_example_i1(6, FieldSpec.prime(5), seed=0)

    def test_two_decompositions(self, example_i1):
        """Duas decomposicoes distintas de 3d/2 pontos na cubica."""
        result = example_i1
        assert result.first.size == result.second.size == 9
        assert result.first.points != result.second.points
        assert verify_decomposition(result.first).valid
        assert verify_decomposition(result.second).valid
        assert result.in_curve_count >= 2
        assert result.first.points in result.in_curve_sets
        assert result.second.points in result.in_curve_sets

    def test_points_on_cubic(self, example_i1):
        """Todos os pontos estao na cubica."""
        result = example_i1
        for pt in result.first.points.union(result.second.points):
            assert result.curve.contains(pt)

    def test_defect_of_union(self, example_i1):
        """A uniao tem defeito de Hilbert positivo."""
        assert lemma_v1_check(example_i1.first, example_i1.second).valid

    def test_out_of_regime(self, example_i1):
        """#A = 3d/2 esta fora do regime de unicidade."""
        assert uniqueness_verdict(example_i1.first).kind is VerdictKind.OUT_OF_REGIME

    def test_off_curve_counts(self, example_i1):
        """Tentativas fora da cubica registadas."""
        assert example_i1.off_curve_trials >= 0
        assert 0 <= example_i1.off_curve_found <= example_i1.off_curve_trials
