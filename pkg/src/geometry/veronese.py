"""Mergulho de Veronese, spans de conjuntos finitos e defeitos de Hilbert."""

from dataclasses import dataclass
from typing import Sequence

from src.algebra.field import FieldSpec, Scalar
from src.algebra.forms import HomogeneousForm, ambient_dimension, monomial_values, monomials
from src.algebra.linalg import (
    Matrix,
    Vector,
    mat_rank,
    solve,
    subspace_intersect,
    vectors_rank,
)
from src.algebra.points import PointSet, ProjPoint
from src.exceptions import DimensionMismatchError, InputError


@dataclass(frozen=True)
class VeroneseSpace:
    """Espaco P^N alvo de nu_d: P^r -> P^N, N = C(r+d, r) - 1."""

    r: int
    d: int

    def __post_init__(self) -> None:
        if self.r < 1 or self.d < 1:
            raise InputError(f"Espaco invalido: r={self.r}, d={self.d}")

    @property
    def N(self) -> int:
        return ambient_dimension(self.r, self.d)

    @property
    def monomials(self) -> tuple[tuple[int, ...], ...]:
        return monomials(self.r, self.d)


@dataclass(frozen=True)
class AmbientVector:
    """Vetor de P^N (ou direcao no seu cone), com N+1 coordenadas exatas."""

    field: FieldSpec
    coords: tuple[Scalar, ...]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def canonical(self) -> tuple[Scalar, ...]:
        """Representante com primeira coordenada nao nula igual a 1."""
        for c in self.coords:
            if c != 0:
                return tuple(self.field.scale(self.field.inv(c), self.coords))
        return self.coords

    def same_point(self, other: "AmbientVector") -> bool:
        """Igualdade projetiva (ambos nao nulos)."""
        return not self.is_zero() and self.canonical() == other.canonical()


@dataclass(frozen=True)
class Hypersurface:
    """Hipersuperficie D = {equation = 0} de grau t em P^r."""

    equation: HomogeneousForm

    @property
    def degree(self) -> int:
        return self.equation.d

    def contains(self, point: ProjPoint) -> bool:
        return self.equation.evaluate(point.coords) == 0


# ============ MERGULHO ============

def veronese_map(a: ProjPoint, space: VeroneseSpace) -> AmbientVector:
    """
    nu_d(a): todos os monomios de grau d em a, em ordem grlex.

    Como a e canonico, o resultado tambem e (o primeiro monomio nao nulo e
    uma potencia da primeira coordenada nao nula).

    Raises:
        DimensionMismatchError: Se a nao tem r+1 coordenadas
    """
    if a.r != space.r:
        raise DimensionMismatchError(f"Ponto de P^{a.r} num espaco com r={space.r}")
    return AmbientVector(a.field, tuple(monomial_values(a.field, a.coords, space.d)))


def veronese_vectors(points: Sequence[ProjPoint], d: int) -> list[Vector]:
    """Imagens nu_d dos pontos como listas de escalares."""
    return [monomial_values(pt.field, pt.coords, d) for pt in points]


def evaluation_matrix(Z: PointSet, t: int) -> Matrix:
    """Matriz #Z x C(r+t, r) dos monomios de grau t avaliados em Z."""
    points = list(Z)
    field = points[0].field
    if t == 0:
        return Matrix.from_rows(field, [[field.one] for _ in points])
    return Matrix.from_rows(field, veronese_vectors(points, t))


def span_dim(A: PointSet, space: VeroneseSpace) -> int:
    """Dimensao projetiva de <nu_d(A)>."""
    if A.is_empty():
        raise InputError("Conjunto vazio")
    return mat_rank(evaluation_matrix(A, space.d)) - 1


def hilbert_function(Z: PointSet, t: int) -> int:
    """Numero de condicoes independentes que Z impoe as formas de grau t."""
    if Z.is_empty():
        return 0
    return mat_rank(evaluation_matrix(Z, t))


def hilbert_function_values(Z: PointSet, t_max: int) -> list[int]:
    """Valores h_Z(0), ..., h_Z(t_max)."""
    return [hilbert_function(Z, t) for t in range(t_max + 1)]


def hilbert_defect(Z: PointSet, t: int) -> int:
    """
    h^1(I_Z(t)) = #Z - (condicoes independentes em grau t).

    Para conjuntos reduzidos coincide com a cohomologia; o vazio tem defeito 0.
    """
    return len(Z) - hilbert_function(Z, t)


def trace(Z: PointSet, D: Hypersurface) -> PointSet:
    """Z interseccao D."""
    return PointSet(tuple(pt for pt in Z if D.contains(pt)))


def residual(Z: PointSet, D: Hypersurface) -> PointSet:
    """Res_D(Z) = Z \\ (Z interseccao D) para Z reduzido."""
    return PointSet(tuple(pt for pt in Z if not D.contains(pt)))


def trace_defect(Z: PointSet, D: Hypersurface, t: int) -> int:
    """
    h^1 do traco de Z em D em grau t.

    A restricao H^0(O(t)) -> H^0(O_D(t)) e sobrejetiva numa hipersuperficie,
    logo o valor e hilbert_defect(Z interseccao D, t).
    """
    return hilbert_defect(trace(Z, D), t)


# ============ SPANS ============

def in_span(P: AmbientVector, A: PointSet, space: VeroneseSpace) -> list[Scalar] | None:
    """
    Pesos exatos c_i com sum c_i nu_d(a_i) = P, ou None se P nao esta no span.
    """
    if A.is_empty():
        raise InputError("Conjunto vazio")
    if len(P.coords) != space.N + 1:
        raise DimensionMismatchError("Vetor com comprimento diferente de N+1")
    columns = veronese_vectors(list(A), space.d)
    return solve(Matrix.from_columns(P.field, columns), list(P.coords))


def span_intersect_sets(
    U: Sequence[AmbientVector],
    W: Sequence[AmbientVector],
) -> list[AmbientVector]:
    """Base da intersecao de <U> e <W> (ver subspace_intersect)."""
    if not U or not W:
        return []
    field = U[0].field
    lengths = {len(v.coords) for v in list(U) + list(W)}
    if len(lengths) != 1:
        raise DimensionMismatchError("Vetores de espacos diferentes")
    basis = subspace_intersect(field, [list(u.coords) for u in U], [list(w.coords) for w in W])
    return [AmbientVector(field, tuple(v)) for v in basis]


def is_proportional(field: FieldSpec, u: Sequence[Scalar], v: Sequence[Scalar]) -> bool:
    """True se u e v sao nao nulos e proporcionais."""
    if all(x == 0 for x in u) or all(x == 0 for x in v):
        return False
    return vectors_rank(field, [u, v]) == 1
