"""Decomposicoes P = sum w_i nu_d(a_i) com pontos e pesos exatos."""

from dataclasses import dataclass

from src.algebra.field import FieldSpec, Scalar
from src.algebra.points import PointSet
from src.exceptions import NotMinimalCertificateError
from src.geometry.veronese import AmbientVector, VeroneseSpace, in_span, veronese_vectors


@dataclass(frozen=True)
class Decomposition:
    """
    Conjunto A de pontos de P^r com pesos que reconstroem o alvo P.

    Os pesos seguem a ordem canonica de points.
    """

    space: VeroneseSpace
    target: AmbientVector
    points: PointSet
    weights: tuple[Scalar, ...]

    @property
    def field(self) -> FieldSpec:
        return self.target.field

    @property
    def size(self) -> int:
        return len(self.points)

    def vectors(self) -> list[list[Scalar]]:
        """Imagens nu_d dos pontos."""
        return veronese_vectors(list(self.points), self.space.d)

    def node_key(self) -> tuple:
        """Chave do conjunto de pontos (para deduplicar familias)."""
        return tuple(pt.coords for pt in self.points)

    def reconstruction(self) -> list[Scalar]:
        """sum w_i nu_d(a_i)."""
        return self.field.linear_combination(list(self.weights), self.vectors())


def decomposition_from_points(
    target: AmbientVector,
    points: PointSet,
    space: VeroneseSpace,
) -> Decomposition:
    """
    Resolve os pesos de P no span de nu_d(points).

    Raises:
        NotMinimalCertificateError: Se P nao pertence ao span
    """
    weights = in_span(target, points, space)
    if weights is None:
        raise NotMinimalCertificateError(
            "Alvo fora do span dos pontos",
            {"points": len(points)},
        )
    return Decomposition(space, target, points, tuple(weights))
