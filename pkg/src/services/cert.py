"""
Certificados de decomposicoes e verificacoes diretas dos lemas de
intersecao de spans.

Os certificados nunca abortam numa falha semantica: registam-na.
"""

from dataclasses import dataclass

from src.algebra.linalg import span_basis, subspace_intersect, vectors_rank
from src.algebra.points import PointSet
from src.exceptions import (
    BudgetExceededError,
    HypothesisFailedError,
    InputError,
    PreconditionFailedError,
    TooLargeError,
)
from src.geometry.decomposition import Decomposition
from src.geometry.veronese import (
    Hypersurface,
    VeroneseSpace,
    hilbert_defect,
    is_proportional,
    residual,
    trace,
    veronese_vectors,
)
from src.services.oracle import OracleBudget, enumerate_S


@dataclass(frozen=True)
class CertificateCheck:
    """Uma verificacao com nome, resultado e detalhe."""

    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class Certificate:
    """Conjuncao de verificacoes."""

    checks: tuple[CertificateCheck, ...]

    @classmethod
    def of(cls, *checks: CertificateCheck) -> "Certificate":
        return cls(tuple(checks))

    @property
    def valid(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> list[str]:
        return [check.name for check in self.checks if not check.passed]

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
        }


def verify_decomposition(dec: Decomposition) -> Certificate:
    """
    Reconstrucao exata, independencia de nu_d(A) e pesos nao nulos.

    Independencia e pesos nao nulos implicam que nenhum subconjunto proprio
    de A tem P no span.
    """
    field = dec.field
    vectors = dec.vectors()
    target = list(dec.target.coords)

    if len(dec.weights) != len(vectors):
        reconstruction = CertificateCheck("reconstruction", False, "numero de pesos diferente de #A")
    else:
        total = field.linear_combination(list(dec.weights), vectors)
        ok = is_proportional(field, total, target)
        reconstruction = CertificateCheck(
            "reconstruction", ok, "" if ok else "sum w_i nu_d(a_i) nao e proporcional a P",
        )

    rank = vectors_rank(field, vectors)
    independence = CertificateCheck(
        "independence", rank == len(vectors), f"rank {rank} de {len(vectors)} imagens",
    )

    zeros = sum(1 for w in dec.weights if w == 0)
    nonzero = CertificateCheck("nonzero_weights", zeros == 0, f"{zeros} pesos nulos")
    return Certificate.of(reconstruction, independence, nonzero)


def _require_same_target(A: Decomposition, B: Decomposition) -> None:
    if A.space != B.space:
        raise PreconditionFailedError("Decomposicoes em espacos diferentes")
    if not A.target.same_point(B.target):
        raise PreconditionFailedError("Decomposicoes de alvos diferentes")


def lemma_v1_check(A: Decomposition, B: Decomposition) -> Certificate:
    """
    Duas decomposicoes distintas do mesmo P tem h^1(I_{A uniao B}(d)) > 0.

    Raises:
        PreconditionFailedError: Alvos diferentes, A = B ou decomposicao invalida
    """
    _require_same_target(A, B)
    if A.points == B.points:
        raise PreconditionFailedError("As decomposicoes tem os mesmos pontos")
    for name, dec in (("A", A), ("B", B)):
        cert = verify_decomposition(dec)
        if not cert.valid:
            raise PreconditionFailedError(
                f"Decomposicao {name} invalida",
                {"failures": cert.failures()},
            )
    union = A.points.union(B.points)
    defect = hilbert_defect(union, A.space.d)
    return Certificate.of(
        CertificateCheck("hilbert_defect_positive", defect > 0, f"h1 = {defect} em {len(union)} pontos"),
    )


def _images(points: PointSet, space: VeroneseSpace) -> list[list]:
    return veronese_vectors(list(points), space.d) if not points.is_empty() else []


def lemma_v2_split(A: Decomposition, B: Decomposition, D: Hypersurface) -> Certificate:
    """
    Com h^1(I_{Res_D(A uniao B)}(d - deg D)) = 0: residuos iguais, nu_d(F)
    independente e <nu_d(A)> inter <nu_d(B)> igual a soma direta de <nu_d(F)>
    com <nu_d(A inter D)> inter <nu_d(B inter D)>.

    Raises:
        HypothesisFailedError: Hipotese de h^1 falha
    """
    if A.space != B.space:
        raise PreconditionFailedError("Decomposicoes em espacos diferentes")
    space = A.space
    field = A.field
    t = space.d - D.degree
    if t < 0:
        raise HypothesisFailedError(f"Grau da hipersuperficie acima de d ({D.degree} > {space.d})")
    if D.equation.r != space.r:
        raise InputError("Hipersuperficie noutro espaco projetivo")

    rest = residual(A.points.union(B.points), D)
    defect = hilbert_defect(rest, t)
    if defect != 0:
        raise HypothesisFailedError(
            f"h1 do residuo em grau {t} vale {defect}",
            {"defect": defect, "degree": t},
        )

    res_a = residual(A.points, D)
    res_b = residual(B.points, D)
    equal = CertificateCheck("residuals_equal", res_a == res_b, f"{len(res_a)} e {len(res_b)} pontos fora de D")

    F = residual(A.points.intersection(B.points), D)
    f_images = _images(F, space)
    f_rank = vectors_rank(field, f_images)
    independent = CertificateCheck("residual_independent", f_rank == len(F), f"rank {f_rank} de {len(F)}")

    whole = subspace_intersect(field, _images(A.points, space), _images(B.points, space))
    on_d = subspace_intersect(
        field, _images(trace(A.points, D), space), _images(trace(B.points, D), space),
    )
    pieces = span_basis(field, f_images + on_d)
    direct = len(pieces) == len(f_images) + len(on_d)
    contained = vectors_rank(field, whole + pieces) == len(whole)
    split = CertificateCheck(
        "span_split",
        direct and contained and len(pieces) == len(whole),
        f"dim intersecao {len(whole)}, dim F {len(f_images)}, dim em D {len(on_d)}",
    )
    return Certificate.of(equal, independent, split)


def bgl_uniqueness_probe(dec: Decomposition, budget: OracleBudget | None = None) -> Certificate:
    """
    Para #A <= (d+1)/2, o oraculo encontra exatamente uma decomposicao: A.

    Raises:
        PreconditionFailedError: #A > (d+1)/2 ou corpo racional
        TooLargeError: Instancia fora dos limites do oraculo
    """
    space = dec.space
    if 2 * dec.size > space.d + 1:
        raise PreconditionFailedError(
            f"Sonda de unicidade exige #A <= (d+1)/2 (#A={dec.size}, d={space.d})",
        )
    if not dec.field.is_prime:
        raise PreconditionFailedError("Sonda de unicidade exige F_p")
    try:
        found = enumerate_S(dec.target, dec.size, space, dec.field, budget)
    except BudgetExceededError as e:
        raise TooLargeError(e.message, e.details) from e
    return Certificate.of(
        CertificateCheck("exactly_one", len(found) == 1, f"{len(found)} decomposicoes encontradas"),
        CertificateCheck("is_input", found == [dec.points], "a decomposicao encontrada e a dada"),
    )
