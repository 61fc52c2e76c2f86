"""Formas homogeneas: monomios grlex, leitura/escrita e coordenadas tensoriais."""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Sequence

from sympy import Poly, Symbol
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)

from src.algebra.field import FieldSpec, Scalar
from src.exceptions import (
    DimensionMismatchError,
    FieldError,
    NotHomogeneousError,
    ParseError,
    ZeroFormError,
)

ExponentVector = tuple[int, ...]

_FACTOR = r"(?:\d+(?:/\d+)?|x\d+(?:\^\d+)?)"
_TERM = rf"{_FACTOR}(?:\s*\*\s*{_FACTOR})*"
_FORM_RE = re.compile(rf"^\s*[+-]?\s*{_TERM}(?:\s*[+-]\s*{_TERM})*\s*$")
_VAR_RE = re.compile(r"x(\d+)")
_TRANSFORMATIONS = standard_transformations + (convert_xor,)


@lru_cache(maxsize=256)
def monomials(r: int, d: int) -> tuple[ExponentVector, ...]:
    """
    Vetores de expoentes de grau d em r+1 variaveis, em ordem grlex.

    O primeiro monomio e x0^d e o ultimo xr^d.
    """
    if r == 0:
        return ((d,),)
    result: list[ExponentVector] = []
    for first in range(d, -1, -1):
        for rest in monomials(r - 1, d - first):
            result.append((first,) + rest)
    return tuple(result)


def ambient_dimension(r: int, d: int) -> int:
    """N = C(r+d, r) - 1."""
    return comb(r + d, r) - 1


def multinomial(exps: ExponentVector) -> int:
    """Coeficiente multinomial d! / prod(e_i!)."""
    value = factorial(sum(exps))
    for e in exps:
        value //= factorial(e)
    return value


def monomial_values(field: FieldSpec, coords: Sequence[Scalar], d: int) -> list[Scalar]:
    """Valores de todos os monomios de grau d num vetor, em ordem grlex."""
    powers = []
    for c in coords:
        row = [field.one]
        for _ in range(d):
            row.append(field.mul(row[-1], c))
        powers.append(row)
    values = []
    for exps in monomials(len(coords) - 1, d):
        value = field.one
        for i, e in enumerate(exps):
            if e:
                value = field.mul(value, powers[i][e])
        values.append(value)
    return values


@dataclass(frozen=True)
class HomogeneousForm:
    """
    Forma de grau d em r+1 variaveis com coeficientes exatos.

    Os termos guardam apenas coeficientes nao nulos, em ordem grlex.
    """

    field: FieldSpec
    r: int
    d: int
    terms: tuple[tuple[ExponentVector, Scalar], ...]

    def __post_init__(self) -> None:
        """Valida grau, numero de variaveis e canoniza os termos."""
        if self.d < 1:
            raise NotHomogeneousError("Grau deve ser >= 1")
        cleaned: dict[ExponentVector, Scalar] = {}
        for exps, coeff in self.terms:
            if len(exps) != self.r + 1:
                raise DimensionMismatchError(f"Monomio {exps} com numero de variaveis errado")
            if sum(exps) != self.d:
                raise NotHomogeneousError(f"Monomio {exps} com grau diferente de {self.d}")
            value = self.field.coerce(coeff)
            if value != 0:
                cleaned[tuple(exps)] = value
        if not cleaned:
            raise ZeroFormError("Forma nula")
        order = {m: i for i, m in enumerate(monomials(self.r, self.d))}
        ordered = tuple(sorted(cleaned.items(), key=lambda item: order[item[0]]))
        object.__setattr__(self, "terms", ordered)

    def coefficient(self, exps: ExponentVector) -> Scalar:
        for m, c in self.terms:
            if m == exps:
                return c
        return self.field.zero

    def coefficient_vector(self) -> list[Scalar]:
        """Coeficientes em todos os monomios grlex (incluindo zeros)."""
        lookup = dict(self.terms)
        return [lookup.get(m, self.field.zero) for m in monomials(self.r, self.d)]

    def evaluate(self, coords: Sequence[Scalar]) -> Scalar:
        """Valor da forma num vetor de coordenadas."""
        if len(coords) != self.r + 1:
            raise DimensionMismatchError("Ponto com numero de coordenadas errado")
        values = monomial_values(self.field, coords, self.d)
        return self.field.dot(self.coefficient_vector(), values)


def check_characteristic(field: FieldSpec, d: int) -> None:
    if field.is_prime and field.p <= d:
        raise FieldError(
            f"Conversao forma/tensor exige p > d (p={field.p}, d={d})"
        )


def form_to_vector(form: HomogeneousForm) -> list[Scalar]:
    """
    Coordenadas tensoriais P_alpha = f_alpha / multinomial(alpha).

    Com esta normalizacao P = sum c_i nu_d(a_i) se e so se
    f = sum c_i (a_i . x)^d.

    Raises:
        FieldError: Se p <= d
    """
    field = form.field
    check_characteristic(field, form.d)
    coeffs = form.coefficient_vector()
    return [
        field.div(c, field.coerce(multinomial(m)))
        for c, m in zip(coeffs, monomials(form.r, form.d))
    ]


def vector_to_form(field: FieldSpec, r: int, d: int, coords: Sequence[Scalar]) -> HomogeneousForm:
    """Inverso de form_to_vector."""
    check_characteristic(field, d)
    mons = monomials(r, d)
    if len(coords) != len(mons):
        raise DimensionMismatchError("Vetor com comprimento diferente de N+1")
    terms = tuple(
        (m, field.mul(field.coerce(c), field.coerce(multinomial(m))))
        for m, c in zip(mons, coords)
    )
    return HomogeneousForm(field, r, d, terms)


# ============ LEITURA E ESCRITA ============

def parse_form(text: str, field: FieldSpec, r: int | None = None) -> HomogeneousForm:
    """
    Le uma forma na gramatica "c*x<i>^<e>*..." unida por + e -.

    Args:
        text: Texto da forma (ex: "x0^3 + 3*x0*x1^2")
        field: Corpo dos coeficientes
        r: Dimensao (None usa o maior indice de variavel)

    Returns:
        HomogeneousForm validada

    Raises:
        ParseError: Texto fora da gramatica
        NotHomogeneousError: Monomios de graus diferentes
        ZeroFormError: Forma nula
    """
    if not text or not _FORM_RE.match(text):
        raise ParseError(f"Forma invalida: '{text}'")
    indices = [int(i) for i in _VAR_RE.findall(text)]
    if not indices:
        raise ParseError("Forma sem variaveis")
    top = max(indices)
    if r is None:
        r = max(top, 1)
    elif top > r:
        raise DimensionMismatchError(f"Variavel x{top} fora de P^{r}")

    gens = [Symbol(f"x{i}") for i in range(r + 1)]
    try:
        expr = parse_expr(
            text,
            local_dict={str(g): g for g in gens},
            transformations=_TRANSFORMATIONS,
        )
    except (SyntaxError, TypeError, ValueError) as e:
        raise ParseError(f"Forma invalida: '{text}'") from e
    if expr == 0:
        raise ZeroFormError("Forma nula")

    poly = Poly(expr, *gens)
    terms: list[tuple[ExponentVector, Scalar]] = []
    degrees = set()
    for exps, coeff in poly.terms():
        value = Fraction(int(coeff.p), int(coeff.q))
        if field.is_prime and value.denominator != 1:
            raise ParseError(f"Coeficiente {coeff} nao inteiro sobre {field.label}")
        scalar = field.coerce(value)
        if scalar == 0:
            continue
        degrees.add(sum(exps))
        terms.append((tuple(exps), scalar))
    if not terms:
        raise ZeroFormError("Forma nula")
    if len(degrees) != 1:
        raise NotHomogeneousError(f"Graus {sorted(degrees)} diferentes")
    d = degrees.pop()
    if d < 1:
        raise NotHomogeneousError("Forma constante")
    return HomogeneousForm(field, r, d, tuple(terms))


def _format_monomial(exps: ExponentVector) -> str:
    parts = []
    for i, e in enumerate(exps):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return "*".join(parts)


def print_form(form: HomogeneousForm) -> str:
    """Representacao canonica da forma (termos em ordem grlex)."""
    field = form.field
    pieces: list[str] = []
    for exps, coeff in form.terms:
        negative = not field.is_prime and coeff < 0
        magnitude = -coeff if negative else coeff
        text = field.format_scalar(magnitude)
        body = _format_monomial(exps)
        term = body if text == "1" else f"{text}*{body}"
        if not pieces:
            pieces.append(f"-{term}" if negative else term)
        else:
            pieces.append(f" - {term}" if negative else f" + {term}")
    return "".join(pieces)
