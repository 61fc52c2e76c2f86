"""Testes para corpos, pontos projetivos e formas."""

import random
from fractions import Fraction

import pytest

from src.algebra.field import FieldSpec, parse_field_spec
from src.algebra.forms import (
    ambient_dimension,
    check_characteristic,
    form_to_vector,
    monomials,
    parse_form,
    print_form,
    vector_to_form,
)
from src.algebra.points import (
    PointSet,
    ProjPoint,
    distinct_random_points,
    normalize,
    projective_count,
    projective_points,
)
from src.exceptions import (
    AllZeroError,
    DimensionMismatchError,
    FieldError,
    NotHomogeneousError,
    ParseError,
    ZeroFormError,
)


class TestFieldSpec:
    """Testes para FieldSpec."""

    def test_prime_field_reduces(self, f7):
        """Inteiros sao reduzidos mod p."""
        assert f7.coerce(10) == 3
        assert f7.coerce(-1) == 6

    def test_fraction_in_prime_field(self, f5):
        """1/2 em F_5 e 3."""
        assert f5.coerce(Fraction(1, 2)) == 3

    def test_fraction_with_p_in_denominator(self, f5):
        """Denominador multiplo de p nao e invertivel."""
        with pytest.raises(FieldError):
            f5.coerce(Fraction(1, 5))

    def test_non_prime_rejected(self):
        """p composto ou menor que 3 e rejeitado."""
        with pytest.raises(FieldError):
            FieldSpec.prime(4)
        with pytest.raises(FieldError):
            FieldSpec.prime(2)

    def test_inverse_of_zero(self, f7, qq):
        """Inverso de zero levanta ZeroDivisionError."""
        with pytest.raises(ZeroDivisionError):
            f7.inv(0)
        with pytest.raises(ZeroDivisionError):
            qq.inv(Fraction(0))

    def test_field_axioms_random(self, f10007, rng):
        """Distributividade e inversos em F_10007."""
        for _ in range(200):
            a, b, c = (f10007.random_element(rng) for _ in range(3))
            left = f10007.mul(a, f10007.add(b, c))
            right = f10007.add(f10007.mul(a, b), f10007.mul(a, c))
            assert left == right
            if a != 0:
                assert f10007.mul(a, f10007.inv(a)) == 1

    def test_parse_scalar(self, qq, f7):
        """Escalares em texto."""
        assert qq.parse_scalar("3/4") == Fraction(3, 4)
        assert qq.parse_scalar("-2") == Fraction(-2)
        assert f7.parse_scalar("1/2") == 4

    def test_parse_scalar_invalid(self, qq):
        """Texto invalido ou denominador zero."""
        with pytest.raises(ParseError):
            qq.parse_scalar("x")
        with pytest.raises(ParseError):
            qq.parse_scalar("1/0")

    def test_format_scalar(self, qq, f7):
        """Representacao canonica."""
        assert qq.format_scalar(Fraction(-3, 4)) == "-3/4"
        assert qq.format_scalar(Fraction(6, 3)) == "2"
        assert f7.format_scalar(13) == "6"

    def test_parse_field_spec(self):
        """Especificacoes da CLI."""
        assert parse_field_spec("q", 101).is_prime is False
        assert parse_field_spec("rational", 101).is_prime is False
        assert parse_field_spec("p=101", 7).p == 101
        assert parse_field_spec("q=3", 7).p == 3
        assert parse_field_spec("13", 7).p == 13
        assert parse_field_spec(None, 10007).p == 10007
        with pytest.raises(FieldError):
            parse_field_spec("abc", 7)

    def test_to_dict(self, qq, f5):
        """Codificacao JSON."""
        assert f5.to_dict() == {"kind": "prime", "p": 5}
        assert qq.to_dict() == {"kind": "rational"}


class TestPoints:
    """Testes para pontos projetivos."""

    def test_normalize_first_nonzero_is_one(self, f5):
        """Primeira coordenada nao nula passa a 1."""
        assert normalize(f5, (0, 2, 4)).coords == (0, 1, 2)

    def test_normalize_rational(self, qq):
        """Sobre Q divide pela primeira coordenada nao nula."""
        pt = normalize(qq, (2, 3, 0))
        assert pt.coords == (1, Fraction(3, 2), 0)

    def test_normalize_all_zero(self, f5):
        """Vetor nulo nao e ponto."""
        with pytest.raises(AllZeroError):
            normalize(f5, (0, 0, 0))

    def test_scalar_multiples_are_equal(self, f7):
        """Representantes proporcionais dao o mesmo ponto."""
        assert normalize(f7, (2, 4, 6)) == normalize(f7, (1, 2, 3))

    def test_projective_enumeration(self):
        """P^2(F_3) tem 13 pontos distintos em ordem lexicografica."""
        f3 = FieldSpec.prime(3)
        points = projective_points(f3, 2)
        assert len(points) == projective_count(3, 2) == 13
        assert len({pt.coords for pt in points}) == 13
        assert [pt.coords for pt in points] == sorted(pt.coords for pt in points)

    def test_point_set_dedup_and_order(self, f5):
        """PointSet remove duplicados e ordena."""
        a = ProjPoint(f5, (1, 2))
        b = ProjPoint(f5, (0, 1))
        s = PointSet.of([a, b, a])
        assert len(s) == 2
        assert list(s) == [b, a]

    def test_point_set_mixed_dimensions(self, f5):
        """Pontos de P^1 e P^2 nao se misturam."""
        with pytest.raises(DimensionMismatchError):
            PointSet.of([ProjPoint(f5, (1, 0)), ProjPoint(f5, (1, 0, 0))])

    def test_distinct_random_points(self, f7):
        """Pontos sorteados sao distintos."""
        points = distinct_random_points(f7, 2, 10, random.Random(1))
        assert len(PointSet.of(points)) == 10


class TestForms:
    """Testes para formas homogeneas."""

    def test_monomial_order(self):
        """grlex com x0^d primeiro."""
        assert monomials(1, 2) == ((2, 0), (1, 1), (0, 2))
        assert monomials(2, 2) == ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))
        assert ambient_dimension(2, 3) == 9

    def test_parse_form(self, qq):
        """Leitura de uma forma binaria."""
        form = parse_form("x0^2 + 2*x0*x1", qq)
        assert form.r == 1 and form.d == 2
        assert form.terms == (((2, 0), 1), ((1, 1), 2))

    def test_parse_not_homogeneous(self, qq):
        """Graus diferentes sao rejeitados."""
        with pytest.raises(NotHomogeneousError):
            parse_form("x0^2 + x1", qq)

    def test_parse_zero_form(self, qq):
        """Forma que cancela e nula."""
        with pytest.raises(ZeroFormError):
            parse_form("x0 - x0", qq)

    def test_parse_invalid(self, qq):
        """Texto fora da gramatica."""
        with pytest.raises(ParseError):
            parse_form("x0^^2", qq)
        with pytest.raises(ParseError):
            parse_form("", qq)

    def test_variable_outside_space(self, qq):
        """x2 numa forma binaria."""
        with pytest.raises(DimensionMismatchError):
            parse_form("x0*x2", qq, r=1)

    def test_print_form(self, qq):
        """Escrita canonica com sinais."""
        form = parse_form("x0^2 - 3/2*x0*x1", qq)
        assert print_form(form) == "x0^2 - 3/2*x0*x1"

    def test_power_of_linear_form_is_veronese_point(self, qq):
        """(x0 + x1)^2 tem coordenadas tensoriais (1, 1, 1)."""
        form = parse_form("x0^2 + 2*x0*x1 + x1^2", qq)
        assert form_to_vector(form) == [1, 1, 1]

    def test_tensor_coordinates_divide_by_multinomial(self, qq):
        """x0*x1 tem P_(1,1) = 1/2."""
        assert form_to_vector(parse_form("x0*x1", qq)) == [0, Fraction(1, 2), 0]

    def test_vector_to_form_inverse(self, f101):
        """vector_to_form inverte form_to_vector."""
        form = parse_form("3*x0^3 + x0*x1*x2 + 5*x2^3", f101)
        again = vector_to_form(f101, 2, 3, form_to_vector(form))
        assert again == form

    def test_small_characteristic(self, f5):
        """Conversao exige p > d."""
        with pytest.raises(FieldError):
            check_characteristic(f5, 5)
        with pytest.raises(FieldError):
            form_to_vector(parse_form("x0^5 + x1^5", f5))
