"""Corpos exatos: racionais (Fraction) e corpos primos F_p (inteiros 0..p-1)."""

import random
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import isprime

from src.exceptions import FieldError, ParseError

Scalar = int | Fraction

_INT_RE = re.compile(r"^[+-]?\d+$")
_FRACTION_RE = re.compile(r"^[+-]?\d+/\d+$")


class FieldKind(str, Enum):
    """Tipos de corpo suportados."""
    RATIONAL = "rational"
    PRIME = "prime"


@dataclass(frozen=True)
class FieldSpec:
    """
    Corpo exato onde vivem todos os escalares.

    Sobre Q os escalares sao Fraction; sobre F_p sao inteiros em [0, p).
    Nenhuma operacao arredonda.
    """

    kind: FieldKind
    p: int | None = None

    def __post_init__(self) -> None:
        """Valida o primo."""
        if self.kind is FieldKind.PRIME:
            if self.p is None or self.p < 3 or not isprime(self.p):
                raise FieldError(f"p deve ser um primo >= 3 (recebido {self.p})")
        elif self.p is not None:
            raise FieldError("Corpo racional nao aceita p")

    @classmethod
    def rational(cls) -> "FieldSpec":
        """Corpo dos racionais."""
        return cls(FieldKind.RATIONAL)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        """Corpo primo F_p."""
        return cls(FieldKind.PRIME, p)

    @property
    def is_prime(self) -> bool:
        """True para F_p."""
        return self.kind is FieldKind.PRIME

    @property
    def label(self) -> str:
        """Nome curto (Q ou F_p)."""
        return f"F_{self.p}" if self.is_prime else "Q"

    @property
    def zero(self) -> Scalar:
        return 0 if self.is_prime else Fraction(0)

    @property
    def one(self) -> Scalar:
        return 1 if self.is_prime else Fraction(1)

    # ============ ARITMETICA ============

    def coerce(self, value: int | Fraction) -> Scalar:
        """
        Converte um inteiro ou racional para um elemento do corpo.

        Raises:
            FieldError: Se o denominador e divisivel por p
        """
        if not self.is_prime:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise FieldError(f"Denominador {value.denominator} nao invertivel em {self.label}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return value % self.p

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        if self.is_prime:
            return (a + b) % self.p
        return a + b

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        if self.is_prime:
            return (a - b) % self.p
        return a - b

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        if self.is_prime:
            return a * b % self.p
        return a * b

    def neg(self, a: Scalar) -> Scalar:
        if self.is_prime:
            return -a % self.p
        return -a

    def inv(self, a: Scalar) -> Scalar:
        """Inverso multiplicativo (ZeroDivisionError para zero)."""
        if self.is_prime:
            if a % self.p == 0:
                raise ZeroDivisionError("inverso de zero")
            return pow(a, -1, self.p)
        return 1 / Fraction(a)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def power(self, a: Scalar, e: int) -> Scalar:
        if self.is_prime:
            return pow(a, e, self.p)
        return a ** e

    def is_zero(self, a: Scalar) -> bool:
        return a == 0

    # ============ VETORES ============

    def combine(self, v: Sequence[Scalar], c: Scalar, w: Sequence[Scalar]) -> list[Scalar]:
        """Retorna v - c*w."""
        if self.is_prime:
            p = self.p
            return [(x - c * y) % p for x, y in zip(v, w)]
        return [x - c * y for x, y in zip(v, w)]

    def scale(self, c: Scalar, v: Sequence[Scalar]) -> list[Scalar]:
        if self.is_prime:
            p = self.p
            return [c * x % p for x in v]
        return [c * x for x in v]

    def dot(self, u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
        total = sum(x * y for x, y in zip(u, v))
        if self.is_prime:
            return total % self.p
        return Fraction(total)

    def linear_combination(
        self,
        weights: Sequence[Scalar],
        vectors: Sequence[Sequence[Scalar]],
    ) -> list[Scalar]:
        """Retorna sum(weights[i] * vectors[i])."""
        length = len(vectors[0])
        total = [0] * length
        for c, v in zip(weights, vectors):
            if c == 0:
                continue
            for j in range(length):
                total[j] += c * v[j]
        if self.is_prime:
            return [x % self.p for x in total]
        return [Fraction(x) for x in total]

    # ============ TEXTO E ORDEM ============

    def parse_scalar(self, text: str) -> Scalar:
        """
        Le um escalar ("17", "-3", "3/4").

        Sobre F_p o inteiro e reduzido mod p; fracoes usam o inverso do denominador.

        Raises:
            ParseError: Texto invalido
        """
        raw = str(text).strip()
        if _INT_RE.match(raw):
            return self.coerce(int(raw))
        if _FRACTION_RE.match(raw):
            num, den = raw.split("/")
            if int(den) == 0:
                raise ParseError(f"Denominador zero em '{raw}'")
            try:
                return self.coerce(Fraction(int(num), int(den)))
            except FieldError as e:
                raise ParseError(e.message) from e
        raise ParseError(f"Escalar invalido: '{raw}'")

    def format_scalar(self, a: Scalar) -> str:
        """Representacao canonica como string."""
        if self.is_prime:
            return str(a % self.p)
        frac = Fraction(a)
        if frac.denominator == 1:
            return str(frac.numerator)
        return f"{frac.numerator}/{frac.denominator}"

    def sort_key(self, a: Scalar) -> tuple[int, ...]:
        """Chave de ordem total: inteiros 0..p-1 ou (num, den)."""
        if self.is_prime:
            return (a % self.p,)
        frac = Fraction(a)
        return (frac.numerator, frac.denominator)

    # ============ AMOSTRAGEM ============

    def random_element(self, rng: random.Random, nonzero: bool = False, bound: int = 10) -> Scalar:
        """
        Sorteia um elemento (uniforme em F_p; inteiro em [-bound, bound] sobre Q).

        Args:
            rng: Gerador deterministico
            nonzero: Excluir o zero
            bound: Caixa usada sobre Q
        """
        while True:
            if self.is_prime:
                value: Scalar = rng.randrange(self.p)
            else:
                value = Fraction(rng.randint(-bound, bound))
            if not nonzero or value != 0:
                return value

    def elements(self) -> Iterable[int]:
        """Todos os elementos de F_p, por ordem canonica."""
        if not self.is_prime:
            raise FieldError("Q nao e enumeravel")
        return range(self.p)

    def to_dict(self) -> dict:
        """Codificacao JSON do corpo."""
        if self.is_prime:
            return {"kind": "prime", "p": self.p}
        return {"kind": "rational"}


def parse_field_spec(text: str | None, default_prime: int) -> FieldSpec:
    """
    Le a especificacao de corpo usada na CLI.

    Aceita "q", "Q", "rational" para os racionais e "p=101", "q=101" ou "101"
    para F_p.

    Args:
        text: Texto da opcao --field (None usa o primo padrao)
        default_prime: Primo padrao das settings

    Raises:
        FieldError: Especificacao invalida
    """
    if text is None:
        return FieldSpec.prime(default_prime)
    raw = text.strip().lower()
    if raw in ("q", "qq", "rational"):
        return FieldSpec.rational()
    if "=" in raw:
        _, raw = raw.split("=", 1)
    if not raw.isdigit():
        raise FieldError(f"Corpo invalido: '{text}'")
    return FieldSpec.prime(int(raw))
