"""
Estrutura de decomposicoes com rank abaixo de 3d/2.

Detecta retas e conicas pesadas, calcula o ponto de colagem da parte da
decomposicao que vive na curva, gera familias de decomposicoes E uniao F e
decide unicidade.
"""

import itertools
import logging
import random
from dataclasses import dataclass, field as dc_field
from enum import Enum

from src.algebra.field import FieldSpec, Scalar
from src.algebra.linalg import Matrix, solve
from src.algebra.points import PointSet, ProjPoint
from src.config import settings
from src.exceptions import (
    EmptyIntersectionError,
    FamilyEmptyError,
    InputError,
    NotMinimalCertificateError,
    NotUniqueError,
)
from src.geometry.curves import Conic, ConicKind, Line, pullback_matrix
from src.geometry.decomposition import Decomposition, decomposition_from_points
from src.geometry.veronese import (
    AmbientVector,
    hilbert_function_values,
    is_proportional,
    span_dim,
    span_intersect_sets,
    veronese_map,
    veronese_vectors,
)
from src.services.binary import (
    BinaryForm,
    apolar_system,
    border_rank,
    decompose_at_nodes,
    decomposition_family,
    split_roots,
    sylvester_analyze,
)
from src.services.cert import verify_decomposition
from src.utils.helpers import heavy_line_threshold, in_regime, make_rng, seed_residue

logger = logging.getLogger(__name__)

Curve = Line | Conic


class CaseKind(str, Enum):
    """Resultado da classificacao."""
    CASE_A = "A"
    CASE_B = "B"
    CASE_C = "C"
    UNIQUE = "unique_witness"
    UNKNOWN = "unknown"


class VerdictKind(str, Enum):
    """Veredito de unicidade."""
    UNIQUE = "unique"
    NON_UNIQUE = "non_unique"
    OUT_OF_REGIME = "out_of_regime"


@dataclass(frozen=True)
class StructureEvidence:
    """Contagens e spans usados na classificacao."""

    size: int
    degree: int
    span_dim: int
    hilbert_function: tuple[int, ...]
    max_line_points: int
    no_three_collinear: bool
    heavy_lines: int = 0
    heavy_conics: int = 0
    splice_rank: int | None = None
    family_dim: int | None = None


@dataclass(frozen=True)
class StructureReport:
    """
    Caso encontrado e os dados que o sustentam.

    CASE_A guarda line, CASE_B guarda conic (lisa), CASE_C guarda lines e a
    conica redutivel; curve_points e a parte de A na curva e rest = F.
    """

    case: CaseKind
    evidence: StructureEvidence
    line: Line | None = None
    conic: Conic | None = None
    lines: tuple[Line, Line] | None = None
    curve_points: PointSet | None = None
    rest: PointSet | None = None
    splice_form: BinaryForm | None = None

    @property
    def curve(self) -> Curve | None:
        return self.line if self.case is CaseKind.CASE_A else self.conic


@dataclass(frozen=True)
class Verdict:
    """Unicidade de S(P) decidida a partir de uma decomposicao."""

    kind: VerdictKind
    report: StructureReport | None = None
    witnesses: tuple[Decomposition, ...] = dc_field(default_factory=tuple)


# ============ CURVAS PESADAS ============

def _incidence_key(item: tuple[Curve, PointSet]) -> tuple:
    curve, incident = item
    return (-len(incident), [pt.sort_key() for pt in incident])


def find_heavy_line(A: PointSet, threshold: int) -> list[tuple[Line, PointSet]]:
    """
    Retas geradas por pares de A com pelo menos threshold pontos de A.

    Raises:
        InputError: threshold < 2
    """
    if threshold < 2:
        raise InputError("Limiar de reta deve ser >= 2")
    points = list(A)
    seen: dict[tuple, tuple[Line, PointSet]] = {}
    for p, q in itertools.combinations(points, 2):
        line = Line.through(p, q)
        if line.key() in seen:
            continue
        incident = PointSet.of(pt for pt in points if line.contains(pt))
        seen[line.key()] = (line, incident)
    heavy = [item for item in seen.values() if len(item[1]) >= threshold]
    return sorted(heavy, key=_incidence_key)


def find_heavy_conic(A: PointSet, threshold: int) -> list[tuple[Conic, PointSet]]:
    """
    Conicas (pelos 5-subconjuntos coplanares com conica unica e pelos pares de
    retas de A) com pelo menos threshold pontos de A.

    Raises:
        InputError: threshold < 5
    """
    if threshold < 5:
        raise InputError("Limiar de conica deve ser >= 5")
    points = list(A)
    seen: dict[tuple, tuple[Conic, PointSet]] = {}

    def add(conic: Conic | None) -> None:
        if conic is None or conic.key() in seen:
            return
        seen[conic.key()] = (conic, PointSet.of(pt for pt in points if conic.contains(pt)))

    for subset in itertools.combinations(points, 5):
        add(Conic.through(subset))
    lines = find_heavy_line(A, 2)
    for (first, on_first), (second, on_second) in itertools.combinations(lines, 2):
        if len(on_first.union(on_second)) >= threshold:
            add(Conic.from_lines(first, second))
    heavy = [item for item in seen.values() if len(item[1]) >= threshold]
    return sorted(heavy, key=_incidence_key)


# ============ COLAGEM ============

def _splice_vector(dec: Decomposition, curve_points: PointSet) -> AmbientVector:
    if curve_points.is_empty():
        raise EmptyIntersectionError("Nenhum ponto da decomposicao na curva")
    field = dec.field
    rest = dec.points.difference(curve_points)
    on_curve = [AmbientVector(field, tuple(v)) for v in veronese_vectors(list(curve_points), dec.space.d)]
    others = [dec.target] + [
        AmbientVector(field, tuple(v)) for v in veronese_vectors(list(rest), dec.space.d)
    ]
    meet = span_intersect_sets(on_curve, others)
    if not meet:
        raise EmptyIntersectionError("Spans sem ponto comum")
    if len(meet) != 1:
        raise NotUniqueError(f"Intersecao de dimensao {len(meet) - 1}, esperado um ponto")
    return meet[0]


def _pull_back(curve: Curve, vector: AmbientVector, d: int) -> BinaryForm:
    field = vector.field
    M = pullback_matrix(field, curve.param_components(), d)
    moments = solve(M, list(vector.coords))
    if moments is None:
        raise EmptyIntersectionError("Ponto fora do span da curva")
    return BinaryForm.from_moments(field, d * curve.param_degree, moments)


def splice_point(dec: Decomposition, curve_points: PointSet, curve: Curve) -> BinaryForm:
    """
    Ponto de <nu_d(A inter curva)> inter <{P} uniao nu_d(F)>, puxado para a
    parametrizacao da curva (grau d numa reta, 2d numa conica lisa).

    Raises:
        EmptyIntersectionError: curve_points vazio ou spans disjuntos
        NotUniqueError: Intersecao com mais de um ponto
    """
    return _pull_back(curve, _splice_vector(dec, curve_points), dec.space.d)


# ============ CLASSIFICACAO ============

def _evidence(dec: Decomposition, **extra) -> StructureEvidence:
    A = dec.points
    lines = find_heavy_line(A, 2) if len(A) >= 2 else []
    max_line = len(lines[0][1]) if lines else min(len(A), 1)
    return StructureEvidence(
        size=len(A),
        degree=dec.space.d,
        span_dim=span_dim(A, dec.space),
        hilbert_function=tuple(hilbert_function_values(A, dec.space.d)),
        max_line_points=max_line,
        no_three_collinear=max_line < 3,
        **extra,
    )


def _curve_family_dim(incident: PointSet, form: BinaryForm) -> int | None:
    """
    family_dim da forma colada, ou None se a pesquisa nao atingiu #incident.

    Raises:
        NotMinimalCertificateError: A parte na curva nao e minima
    """
    analysis = sylvester_analyze(form)
    if analysis.rank < len(incident):
        raise NotMinimalCertificateError(
            "Parte na curva substituivel por menos pontos",
            {"curve_points": len(incident), "curve_rank": analysis.rank},
        )
    if analysis.rank > len(incident):
        logger.warning("Rank da forma colada acima de %d; curva ignorada", len(incident))
        return None
    return analysis.family_dim


def classify_decomposition(dec: Decomposition) -> StructureReport:
    """
    Classifica A: reta pesada (A), conica lisa pesada (B), par de retas (C)
    ou testemunha de unicidade.

    Raises:
        NotMinimalCertificateError: dec falha verify_decomposition
    """
    cert = verify_decomposition(dec)
    if not cert.valid:
        raise NotMinimalCertificateError("Decomposicao invalida", {"failures": cert.failures()})
    d = dec.space.d
    A = dec.points
    if not in_regime(len(A), d):
        return StructureReport(CaseKind.UNKNOWN, _evidence(dec))

    heavy_lines = find_heavy_line(A, heavy_line_threshold(d)) if len(A) >= 2 else []
    for line, incident in heavy_lines:
        form = splice_point(dec, incident, line)
        family_dim = _curve_family_dim(incident, form)
        if family_dim is not None and family_dim >= 1:
            return StructureReport(
                CaseKind.CASE_A,
                _evidence(dec, heavy_lines=len(heavy_lines), splice_rank=len(incident), family_dim=family_dim),
                line=line,
                curve_points=incident,
                rest=A.difference(incident),
                splice_form=form,
            )

    heavy_conics = []
    if d >= 4 and len(A) >= d + 1:
        heavy_conics = [
            item for item in find_heavy_conic(A, d + 1) if item[0].kind is ConicKind.SMOOTH
        ]
    for conic, incident in heavy_conics:
        form = splice_point(dec, incident, conic)
        family_dim = _curve_family_dim(incident, form)
        if family_dim is not None and family_dim >= 1:
            return StructureReport(
                CaseKind.CASE_B,
                _evidence(dec, heavy_lines=len(heavy_lines), heavy_conics=len(heavy_conics),
                          splice_rank=len(incident), family_dim=family_dim),
                conic=conic,
                curve_points=incident,
                rest=A.difference(incident),
                splice_form=form,
            )

    if d % 2 == 1 and len(A) >= 2:
        half = (d + 1) // 2
        candidates = [item for item in find_heavy_line(A, 2) if len(item[1]) == half]
        for (first, on_first), (second, on_second) in itertools.combinations(candidates, 2):
            conic = Conic.from_lines(first, second)
            if conic is None or conic.node is None or conic.node in A:
                continue
            on_conic = on_first.union(on_second)
            return StructureReport(
                CaseKind.CASE_C,
                _evidence(dec, heavy_lines=len(heavy_lines), heavy_conics=len(heavy_conics)),
                conic=conic,
                lines=(first, second),
                curve_points=on_conic,
                rest=A.difference(on_conic),
            )

    return StructureReport(
        CaseKind.UNIQUE,
        _evidence(dec, heavy_lines=len(heavy_lines), heavy_conics=len(heavy_conics)),
    )


# ============ FAMILIAS ============

def _accept(dec: Decomposition, points: PointSet) -> Decomposition | None:
    """Decomposicao certificada do alvo de dec nos pontos dados, com #A preservado."""
    if len(points) != dec.size:
        return None
    try:
        candidate = decomposition_from_points(dec.target, points, dec.space)
    except NotMinimalCertificateError:
        return None
    if not verify_decomposition(candidate).valid:
        return None
    return candidate


def generate_family(
    dec: Decomposition,
    report: StructureReport,
    count: int,
    seed: int,
) -> list[Decomposition]:
    """
    Ate count decomposicoes E uniao F, com E a percorrer as decomposicoes da
    forma colada mapeadas pela parametrizacao da curva.

    Raises:
        FamilyEmptyError: Caso sem familia ou nenhum membro certificado
    """
    if count <= 0:
        return []
    if report.case not in (CaseKind.CASE_A, CaseKind.CASE_B) or report.splice_form is None:
        raise FamilyEmptyError(f"Familia E uniao F exige caso A ou B (recebido {report.case.value})")
    curve = report.curve
    rest = report.rest or PointSet()
    requested = count + len(rest) + 1
    found: dict[tuple, Decomposition] = {}
    for binary_dec in decomposition_family(report.splice_form, requested, seed):
        E = PointSet.of(curve.point_at(node) for node in binary_dec.nodes)
        if len(E) != binary_dec.size or not E.intersection(rest).is_empty():
            continue
        candidate = _accept(dec, E.union(rest))
        if candidate is not None:
            found.setdefault(candidate.node_key(), candidate)
        if len(found) >= count:
            break
    if not found:
        raise FamilyEmptyError("Nenhum membro certificado na familia")
    logger.debug("generate_family: %d membros (seed=%d)", len(found), seed)
    return list(found.values())


def _line_columns(line: Line, d: int) -> tuple[Matrix, list[AmbientVector]]:
    field = line.field
    M = pullback_matrix(field, line.param_components(), d)
    columns = [AmbientVector(field, tuple(col)) for col in M.transpose().rows]
    return M, columns


def _split_on_line(
    line: Line,
    M: Matrix,
    vector: AmbientVector,
    d: int,
    node: ProjPoint,
) -> PointSet | None:
    """
    Decomposicao de rank (d+1)/2 de vector em nu_d(line), longe do no.

    Com 2t < d+2 o rank e t so quando a forma apolar de grau t, unica, e
    decomposta e livre de quadrados.
    """
    moments = solve(M, list(vector.coords))
    if moments is None or all(m == 0 for m in moments):
        return None
    form = BinaryForm.from_moments(vector.field, d, moments)
    half = (d + 1) // 2
    if border_rank(form) != half:
        return None
    roots = split_roots(vector.field, apolar_system(form, half)[0])
    binary_dec = decompose_at_nodes(form, roots) if roots is not None else None
    if binary_dec is None:
        return None
    points = PointSet.of(line.point_at(n) for n in binary_dec.nodes)
    if node in points:
        return None
    return points


def _class_scalars(field: FieldSpec, seed: int, attempts: int, rng: random.Random) -> list[Scalar]:
    """
    Ate attempts escalares distintos: primeiro os congruentes com o resto da
    seed modulo family_batch_stride, depois (so em F_p) os restantes.

    Q1 depende injetivamente do escalar, por isso seeds de restos distintos
    nao repetem membros enquanto a propria classe chega.
    """
    stride = settings.family_batch_stride
    residue = seed_residue(seed, stride)
    if not field.is_prime:
        box = range(residue - stride * attempts, residue + stride * attempts + 1, stride)
        return [field.coerce(x) for x in rng.sample(box, attempts)]
    own = list(range(residue, field.p, stride))
    others = [x for x in range(field.p) if x % stride != residue]
    rng.shuffle(own)
    rng.shuffle(others)
    return (own + others)[:attempts]


def case_c_family(
    dec: Decomposition,
    report: StructureReport,
    count: int,
    seed: int,
) -> list[Decomposition]:
    """
    Familia do caso de duas retas.

    Sorteia Q1 na reta D1 = <nu_d(L1)> inter <{P_T} uniao nu_d(L2)> fora de
    nu_d(O), fixa Q2 em <nu_d(L2)> com P_T em <Q1, Q2> e decompoe Q1 e Q2 nas
    curvas racionais normais das retas.

    Raises:
        FamilyEmptyError: Precondicoes falham ou nenhum membro certificado
    """
    if count <= 0:
        return []
    d = dec.space.d
    if report.case is not CaseKind.CASE_C or report.lines is None or d % 2 == 0:
        raise FamilyEmptyError("Familia de duas retas exige caso C com d impar")
    first, second = report.lines
    node = report.conic.node if report.conic is not None else first.intersection(second)
    if node is None or node in dec.points:
        raise FamilyEmptyError("No das retas ausente ou em A")

    field = dec.field
    rest = report.rest or PointSet()
    P_T = _splice_vector(dec, report.curve_points)
    nu_node = veronese_map(node, dec.space)
    M1, span_first = _line_columns(first, d)
    M2, span_second = _line_columns(second, d)

    D1 = span_intersect_sets(span_first, [P_T] + span_second)
    if len(D1) != 2:
        raise FamilyEmptyError(f"Reta auxiliar degenerada (dimensao {len(D1)})")
    direction = next(v for v in D1 if not is_proportional(field, v.coords, nu_node.coords))
    second_columns = [list(v.coords) for v in span_second]

    rng = make_rng(seed, "case-c", field.label)
    found: dict[tuple, Decomposition] = {}
    attempts = settings.family_retry_factor * count * settings.family_batch_stride
    for lam in _class_scalars(field, seed, attempts, rng):
        if len(found) >= count:
            break
        q1 = [field.add(x, field.mul(lam, y)) for x, y in zip(direction.coords, nu_node.coords)]
        system = Matrix.from_columns(field, [q1] + second_columns)
        solution = solve(system, list(P_T.coords))
        if solution is None or solution[0] == 0:
            continue
        q2 = field.combine(list(P_T.coords), solution[0], q1)
        if all(x == 0 for x in q2) or is_proportional(field, q2, nu_node.coords):
            continue
        part1 = _split_on_line(first, M1, AmbientVector(field, tuple(q1)), d, node)
        part2 = _split_on_line(second, M2, AmbientVector(field, tuple(q2)), d, node)
        if part1 is None or part2 is None:
            continue
        candidate = _accept(dec, rest.union(part1).union(part2))
        if candidate is not None:
            found.setdefault(candidate.node_key(), candidate)
    if not found:
        raise FamilyEmptyError("Nenhum membro certificado na familia de duas retas")
    if len(found) < count:
        logger.warning("Familia de duas retas com %d de %d membros", len(found), count)
    return list(found.values())


def uniqueness_verdict(
    dec: Decomposition,
    count: int | None = None,
    seed: int = 0,
) -> Verdict:
    """
    Unico, nao unico (com testemunhas) ou fora do regime #A < 3d/2.

    Raises:
        NotMinimalCertificateError: dec invalida
        FamilyEmptyError: Familia com menos de 2 testemunhas distintas
    """
    if not in_regime(dec.size, dec.space.d):
        return Verdict(VerdictKind.OUT_OF_REGIME)
    report = classify_decomposition(dec)
    if report.case is CaseKind.UNIQUE:
        return Verdict(VerdictKind.UNIQUE, report)
    wanted = max(count or settings.verdict_witness_count, 2)
    if report.case is CaseKind.CASE_C:
        witnesses = case_c_family(dec, report, wanted, seed)
    else:
        witnesses = generate_family(dec, report, wanted, seed)
    distinct = {w.node_key() for w in witnesses}
    if len(distinct) < 2:
        raise FamilyEmptyError(
            "Menos de 2 testemunhas distintas para nao-unicidade",
            {"case": report.case.value, "witnesses": len(distinct)},
        )
    return Verdict(VerdictKind.NON_UNIQUE, report, tuple(witnesses))
