"""
Forca bruta sobre corpos finitos pequenos: rank F_p-racional e enumeracao
de todas as decomposicoes minimas.
"""

import itertools
import logging
from dataclasses import dataclass, field as dc_field

from src.algebra.field import FieldSpec
from src.algebra.linalg import IncrementalSpan, Matrix, solve, vectors_rank
from src.algebra.points import PointSet, ProjPoint, projective_count, projective_points
from src.config import settings
from src.exceptions import BudgetExceededError, DimensionMismatchError, InputError
from src.geometry.veronese import AmbientVector, VeroneseSpace, veronese_vectors

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleBudget:
    """Limites da enumeracao exaustiva."""

    max_points: int = dc_field(default_factory=lambda: settings.oracle_max_points)
    max_rank: int = dc_field(default_factory=lambda: settings.oracle_max_rank)
    max_subsets: int = dc_field(default_factory=lambda: settings.oracle_max_subsets)

    def __post_init__(self) -> None:
        if min(self.max_points, self.max_rank, self.max_subsets) < 1:
            raise InputError("Limites do oraculo devem ser positivos")


class SubsetCounter:
    """Conta subconjuntos visitados e aplica o limite."""

    def __init__(self, limit: int):
        self.limit = limit
        self.visited = 0

    def tick(self) -> None:
        self.visited += 1
        if self.visited > self.limit:
            raise BudgetExceededError(
                "Limite de subconjuntos do oraculo excedido",
                {"max_subsets": self.limit},
            )


def _universe(
    P: AmbientVector,
    space: VeroneseSpace,
    field: FieldSpec,
    budget: OracleBudget,
) -> tuple[list[ProjPoint], list[list]]:
    if not field.is_prime:
        raise InputError("O oraculo so enumera sobre F_p")
    if P.field != field:
        raise InputError("Alvo e oraculo em corpos diferentes")
    if len(P.coords) != space.N + 1:
        raise DimensionMismatchError("Vetor com comprimento diferente de N+1")
    if P.is_zero():
        raise InputError("Alvo nulo")
    count = projective_count(field.p, space.r)
    if count > budget.max_points:
        raise BudgetExceededError(
            f"P^{space.r}(F_{field.p}) tem {count} pontos (limite {budget.max_points})",
            {"points": count, "max_points": budget.max_points},
        )
    points = projective_points(field, space.r)
    return points, veronese_vectors(points, space.d)


def _all_weights_nonzero(
    field: FieldSpec,
    P: AmbientVector,
    vectors: list[list],
) -> bool:
    weights = solve(Matrix.from_columns(field, vectors), list(P.coords))
    return weights is not None and all(w != 0 for w in weights)


def pruned_search(
    P: AmbientVector,
    s: int,
    points: list[ProjPoint],
    images: list[list],
    counter: SubsetCounter,
    first_only: bool,
) -> list[PointSet]:
    """DFS por indices crescentes; subconjuntos com imagens dependentes sao cortados."""
    field = P.field
    target = list(P.coords)
    found: list[PointSet] = []
    chosen: list[int] = []

    def visit(start: int, span: IncrementalSpan) -> bool:
        depth = len(chosen)
        if depth == s:
            if span.contains(target) and _all_weights_nonzero(
                field, P, [images[i] for i in chosen]
            ):
                found.append(PointSet.of(points[i] for i in chosen))
                return first_only
            return False
        for i in range(start, len(points) - (s - depth) + 1):
            counter.tick()
            extended = span.extend(images[i])
            if extended is None:
                continue
            chosen.append(i)
            stop = visit(i + 1, extended)
            chosen.pop()
            if stop:
                return True
        return False

    visit(0, IncrementalSpan(field))
    return found


def plain_search(
    P: AmbientVector,
    s: int,
    points: list[ProjPoint],
    images: list[list],
    counter: SubsetCounter,
    first_only: bool,
) -> list[PointSet]:
    """Todos os s-subconjuntos, sem cortes."""
    field = P.field
    found: list[PointSet] = []
    for combo in itertools.combinations(range(len(points)), s):
        counter.tick()
        vectors = [images[i] for i in combo]
        if vectors_rank(field, vectors) != s:
            continue
        if _all_weights_nonzero(field, P, vectors):
            found.append(PointSet.of(points[i] for i in combo))
            if first_only:
                break
    return found


def enumerate_S(
    P: AmbientVector,
    s: int,
    space: VeroneseSpace,
    field: FieldSpec,
    budget: OracleBudget | None = None,
    prune: bool = True,
) -> list[PointSet]:
    """
    Todos os s-subconjuntos A de P^r(F_p) que decompoem P.

    Cada A tem nu_d(A) independente e pesos todos nao nulos. Ordem canonica.

    Raises:
        BudgetExceededError: Limites do oraculo excedidos
    """
    budget = budget or OracleBudget()
    if s < 1:
        raise InputError("s deve ser >= 1")
    points, images = _universe(P, space, field, budget)
    counter = SubsetCounter(budget.max_subsets)
    search = pruned_search if prune else plain_search
    found = search(P, s, points, images, counter, first_only=False)
    logger.debug("enumerate_S(s=%d): %d conjuntos, %d subconjuntos visitados", s, len(found), counter.visited)
    return found


def brute_rank(
    P: AmbientVector,
    space: VeroneseSpace,
    field: FieldSpec,
    budget: OracleBudget | None = None,
) -> int:
    """
    Menor s <= max_rank com um s-subconjunto de nu_d(P^r(F_p)) cujo span contem P.

    Raises:
        BudgetExceededError: Nenhum s dentro dos limites
    """
    budget = budget or OracleBudget()
    points, images = _universe(P, space, field, budget)
    counter = SubsetCounter(budget.max_subsets)
    for s in range(1, budget.max_rank + 1):
        if pruned_search(P, s, points, images, counter, first_only=True):
            return s
    raise BudgetExceededError(
        f"Rank acima de {budget.max_rank}",
        {"max_rank": budget.max_rank, "visited": counter.visited},
    )
