"""Conversao entre objetos do dominio e os modelos JSON."""

import json
from pathlib import Path
from typing import Sequence

from pydantic import ValidationError

from src.algebra.field import FieldSpec, Scalar
from src.algebra.forms import print_form, vector_to_form
from src.algebra.points import PointSet, normalize
from src.api.models import (
    BinaryAnalysisModel,
    BinaryDecompositionModel,
    CertificateCheckModel,
    CertificateModel,
    CurveModel,
    DecompositionModel,
    EvidenceModel,
    FieldKindModel,
    FieldModel,
    FormModel,
    StructureReportModel,
    TermModel,
    VerdictModel,
)
from src.exceptions import DimensionMismatchError, FieldError, InputError, ParseError
from src.geometry.curves import Conic, Line
from src.geometry.decomposition import Decomposition, decomposition_from_points
from src.geometry.veronese import AmbientVector, VeroneseSpace
from src.services.binary import BinaryAnalysis, BinaryDecomposition
from src.services.cert import Certificate, verify_decomposition
from src.services.classify import StructureReport, Verdict


# ============ ESCALARES E PONTOS ============

def scalars(field: FieldSpec, values: Sequence[Scalar]) -> list[str]:
    return [field.format_scalar(v) for v in values]


def points_to_lists(points: PointSet) -> list[list[str]]:
    return [scalars(pt.field, pt.coords) for pt in points]


def field_to_model(field: FieldSpec) -> FieldModel:
    return FieldModel(**field.to_dict())


def field_from_model(model: FieldModel) -> FieldSpec:
    """
    Raises:
        FieldError: Corpo primo sem p
    """
    if model.kind is FieldKindModel.RATIONAL:
        return FieldSpec.rational()
    if model.p is None:
        raise FieldError("Corpo primo sem 'p'")
    return FieldSpec.prime(model.p)


# ============ FORMAS ============

def vector_to_form_model(field: FieldSpec, space: VeroneseSpace, coords: Sequence[Scalar]) -> FormModel | None:
    """Forma associada ao vetor (None se p <= d ou vetor nulo)."""
    if all(c == 0 for c in coords):
        return None
    if field.is_prime and field.p <= space.d:
        return None
    form = vector_to_form(field, space.r, space.d, coords)
    return FormModel(
        degree=form.d,
        vars=form.r + 1,
        terms=[TermModel(exps=list(m), coeff=field.format_scalar(c)) for m, c in form.terms],
        text=print_form(form),
    )


# ============ CERTIFICADOS ============

def certificate_to_model(cert: Certificate) -> CertificateModel:
    return CertificateModel(
        valid=cert.valid,
        checks=[CertificateCheckModel(name=c.name, passed=c.passed, detail=c.detail) for c in cert.checks],
    )


# ============ DECOMPOSICOES ============

def decomposition_to_model(dec: Decomposition, certify: bool = True) -> DecompositionModel:
    field = dec.field
    return DecompositionModel(
        field=field_to_model(field),
        r=dec.space.r,
        d=dec.space.d,
        target=scalars(field, dec.target.coords),
        points=points_to_lists(dec.points),
        weights=scalars(field, dec.weights),
        form=vector_to_form_model(field, dec.space, dec.target.coords),
        certificate=certificate_to_model(verify_decomposition(dec)) if certify else None,
    )


def decomposition_from_model(model: DecompositionModel) -> Decomposition:
    """
    Reconstroi a decomposicao; os pesos sao recalculados a partir dos pontos.

    Raises:
        DimensionMismatchError: Coordenadas com comprimento errado
        NotMinimalCertificateError: Alvo fora do span dos pontos
    """
    field = field_from_model(model.field)
    space = VeroneseSpace(model.r, model.d)
    target_coords = tuple(field.parse_scalar(x) for x in model.target)
    if len(target_coords) != space.N + 1:
        raise DimensionMismatchError(
            f"Alvo com {len(target_coords)} coordenadas (esperado {space.N + 1})"
        )
    if not model.points:
        raise InputError("Decomposicao sem pontos")
    points = []
    for coords in model.points:
        if len(coords) != space.r + 1:
            raise DimensionMismatchError(f"Ponto com {len(coords)} coordenadas em P^{space.r}")
        points.append(normalize(field, [field.parse_scalar(x) for x in coords]))
    return decomposition_from_points(AmbientVector(field, target_coords), PointSet.of(points), space)


def read_decomposition(path: str | Path) -> Decomposition:
    """
    Le uma decomposicao JSON (o formato emitido pela CLI).

    Aceita tanto o modelo direto como um relatorio com "result.decomposition".

    Raises:
        ParseError: JSON invalido ou fora do esquema
    """
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"Nao foi possivel ler '{path}': {e}") from e
    if isinstance(payload, dict) and "result" in payload:
        payload = payload["result"].get("decomposition", payload["result"])
    try:
        model = DecompositionModel.model_validate(payload)
    except ValidationError as e:
        raise ParseError(f"Decomposicao invalida em '{path}'", {"errors": e.errors()}) from e
    return decomposition_from_model(model)


# ============ BINARIAS ============

def binary_analysis_to_model(analysis: BinaryAnalysis) -> BinaryAnalysisModel:
    field = analysis.form.field
    return BinaryAnalysisModel(
        degree=analysis.form.d,
        coefficients=scalars(field, analysis.form.coeffs),
        border_rank=analysis.border_rank,
        rank=analysis.rank,
        generic_rank=analysis.generic_rank,
        family_dim=analysis.family_dim,
        apolar_low=scalars(field, analysis.apolar_low.coeffs),
        witness=scalars(field, analysis.witness.coeffs),
        witness_nodes=points_to_lists(analysis.witness_nodes),
    )


def binary_decomposition_to_model(dec: BinaryDecomposition) -> BinaryDecompositionModel:
    return BinaryDecompositionModel(
        nodes=points_to_lists(dec.nodes),
        weights=scalars(dec.form.field, dec.weights),
    )


# ============ ESTRUTURA ============

def curve_to_model(curve: Line | Conic) -> CurveModel:
    field = curve.field
    if isinstance(curve, Line):
        return CurveModel(kind="line", points=points_to_lists(PointSet.of(curve.base_points)))
    return CurveModel(
        kind="conic",
        points=[scalars(field, row) for row in curve.plane],
        equation=scalars(field, curve.equation),
        conic_kind=curve.kind.value,
    )


def report_to_model(report: StructureReport) -> StructureReportModel:
    ev = report.evidence
    curve = report.curve
    return StructureReportModel(
        case=report.case.value,
        evidence=EvidenceModel(
            size=ev.size,
            degree=ev.degree,
            span_dim=ev.span_dim,
            hilbert_function=list(ev.hilbert_function),
            max_line_points=ev.max_line_points,
            no_three_collinear=ev.no_three_collinear,
            heavy_lines=ev.heavy_lines,
            heavy_conics=ev.heavy_conics,
            splice_rank=ev.splice_rank,
            family_dim=ev.family_dim,
        ),
        curve=curve_to_model(curve) if curve is not None else None,
        lines=[curve_to_model(line) for line in report.lines] if report.lines else None,
        curve_points=points_to_lists(report.curve_points) if report.curve_points is not None else None,
        rest=points_to_lists(report.rest) if report.rest is not None else None,
        splice_form=(
            scalars(report.splice_form.field, report.splice_form.coeffs)
            if report.splice_form is not None else None
        ),
    )


def verdict_to_model(verdict: Verdict) -> VerdictModel:
    return VerdictModel(
        kind=verdict.kind.value,
        report=report_to_model(verdict.report) if verdict.report is not None else None,
        witnesses=[decomposition_to_model(w) for w in verdict.witnesses],
    )

