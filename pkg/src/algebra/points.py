"""Pontos projetivos canonicos e conjuntos finitos de pontos."""

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from src.algebra.field import FieldSpec, Scalar
from src.exceptions import AllZeroError, DimensionMismatchError


@dataclass(frozen=True)
class ProjPoint:
    """
    Ponto de P^r com representante canonico.

    A primeira coordenada nao nula vale 1, por isso a igualdade de pontos e a
    igualdade coordenada a coordenada.
    """

    field: FieldSpec
    coords: tuple[Scalar, ...]

    @property
    def r(self) -> int:
        """Dimensao do espaco projetivo."""
        return len(self.coords) - 1

    def sort_key(self) -> tuple:
        return tuple(self.field.sort_key(c) for c in self.coords)

    def __repr__(self) -> str:
        inner = ", ".join(self.field.format_scalar(c) for c in self.coords)
        return f"ProjPoint({inner})"


def normalize(field: FieldSpec, raw_coords: Sequence[Scalar]) -> ProjPoint:
    """
    Retorna o representante canonico de um vetor nao nulo.

    Args:
        field: Corpo das coordenadas
        raw_coords: Coordenadas em qualquer escala

    Returns:
        ProjPoint com primeira coordenada nao nula igual a 1

    Raises:
        AllZeroError: Se todas as coordenadas sao zero
    """
    coords = [field.coerce(c) for c in raw_coords]
    for c in coords:
        if c != 0:
            inv = field.inv(c)
            return ProjPoint(field, tuple(field.scale(inv, coords)))
    raise AllZeroError("Todas as coordenadas sao zero")


@dataclass(frozen=True)
class PointSet:
    """Conjunto finito de pontos distintos, por ordem canonica."""

    points: tuple[ProjPoint, ...] = ()

    def __post_init__(self) -> None:
        """Ordena e remove duplicados."""
        unique = {pt.coords: pt for pt in self.points}
        ordered = tuple(sorted(unique.values(), key=ProjPoint.sort_key))
        if ordered and len({pt.r for pt in ordered}) > 1:
            raise DimensionMismatchError("Pontos com dimensoes diferentes")
        object.__setattr__(self, "points", ordered)

    @classmethod
    def of(cls, points: Iterable[ProjPoint]) -> "PointSet":
        return cls(tuple(points))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[ProjPoint]:
        return iter(self.points)

    def __contains__(self, item: object) -> bool:
        return item in self.points

    def union(self, other: "PointSet") -> "PointSet":
        return PointSet(self.points + other.points)

    def difference(self, other: "PointSet") -> "PointSet":
        excluded = set(other.points)
        return PointSet(tuple(pt for pt in self.points if pt not in excluded))

    def intersection(self, other: "PointSet") -> "PointSet":
        kept = set(other.points)
        return PointSet(tuple(pt for pt in self.points if pt in kept))

    def is_empty(self) -> bool:
        return not self.points


def projective_points(field: FieldSpec, r: int) -> list[ProjPoint]:
    """
    Enumera P^r(F_p) por ordem lexicografica das coordenadas canonicas.

    Args:
        field: Corpo primo
        r: Dimensao

    Returns:
        Lista com (p^(r+1) - 1) / (p - 1) pontos
    """
    points: list[ProjPoint] = []
    elements = list(field.elements())
    for lead in range(r, -1, -1):
        # coordenadas (0, ..., 0, 1, *, ..., *)
        for tail in itertools.product(elements, repeat=r - lead):
            coords = (0,) * lead + (1,) + tail
            points.append(ProjPoint(field, coords))
    return points


def random_point(field: FieldSpec, r: int, rng: random.Random) -> ProjPoint:
    """Ponto aleatorio de P^r (uniforme sobre F_p; caixa inteira sobre Q)."""
    while True:
        coords = [field.random_element(rng) for _ in range(r + 1)]
        if any(c != 0 for c in coords):
            return normalize(field, coords)


def distinct_random_points(field: FieldSpec, r: int, count: int, rng: random.Random) -> list[ProjPoint]:
    """count pontos distintos de P^r, pela ordem de sorteio."""
    chosen: dict[tuple, ProjPoint] = {}
    while len(chosen) < count:
        pt = random_point(field, r, rng)
        chosen.setdefault(pt.coords, pt)
    return list(chosen.values())


def projective_count(p: int, r: int) -> int:
    """Numero de pontos de P^r(F_p)."""
    return (p ** (r + 1) - 1) // (p - 1)
