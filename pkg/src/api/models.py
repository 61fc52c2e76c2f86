"""Modelos Pydantic do formato JSON dos relatorios e das decomposicoes."""

import json
from enum import Enum
from typing import Any, Literal, Optional

from pydantic import BaseModel, Field


# ============ Enums ============

class FieldKindModel(str, Enum):
    """Tipo de corpo na codificacao JSON."""
    PRIME = "prime"
    RATIONAL = "rational"


class RankMethod(str, Enum):
    """Metodo usado para calcular o rank."""
    SYLVESTER = "sylvester"
    ORACLE = "oracle"


# ============ Componentes ============

class FieldModel(BaseModel):
    """Corpo: {"kind": "prime", "p": 10007} ou {"kind": "rational"}."""
    kind: FieldKindModel
    p: Optional[int] = Field(default=None, ge=2)


class TermModel(BaseModel):
    """Monomio com coeficiente exato em texto."""
    exps: list[int]
    coeff: str


class FormModel(BaseModel):
    """Forma homogenea: grau, numero de variaveis e termos grlex."""
    degree: int = Field(..., ge=1)
    vars: int = Field(..., ge=2)
    terms: list[TermModel]
    text: Optional[str] = None


class CertificateCheckModel(BaseModel):
    """Uma verificacao do certificado."""
    name: str
    passed: bool
    detail: str = ""


class CertificateModel(BaseModel):
    """Certificado: valido se todas as verificacoes passam."""
    valid: bool
    checks: list[CertificateCheckModel] = []


# ============ Decomposicoes ============

class DecompositionModel(BaseModel):
    """
    Decomposicao P = sum w_i nu_d(a_i).

    Pontos como listas de coordenadas canonicas; escalares como strings
    ("3/4" ou "17").
    """
    field: FieldModel
    r: int = Field(..., ge=1)
    d: int = Field(..., ge=1)
    target: list[str]
    points: list[list[str]]
    weights: list[str]
    form: Optional[FormModel] = None
    certificate: Optional[CertificateModel] = None


class BinaryDecompositionModel(BaseModel):
    """Decomposicao de uma forma binaria em nos de P^1."""
    nodes: list[list[str]]
    weights: list[str]


class BinaryAnalysisModel(BaseModel):
    """Resultado da analise de Sylvester."""
    degree: int
    coefficients: list[str]
    border_rank: int
    rank: int
    generic_rank: int
    family_dim: int
    apolar_low: list[str]
    witness: list[str]
    witness_nodes: list[list[str]]


# ============ Estrutura ============

class CurveModel(BaseModel):
    """Reta (dois pontos base) ou conica (plano e equacao)."""
    kind: Literal["line", "conic"]
    points: list[list[str]]
    equation: Optional[list[str]] = None
    conic_kind: Optional[str] = None


class EvidenceModel(BaseModel):
    """Contagens usadas na classificacao."""
    size: int
    degree: int
    span_dim: int
    hilbert_function: list[int]
    max_line_points: int
    no_three_collinear: bool
    heavy_lines: int = 0
    heavy_conics: int = 0
    splice_rank: Optional[int] = None
    family_dim: Optional[int] = None


class StructureReportModel(BaseModel):
    """Caso (A, B, C, unique_witness, unknown) e dados de suporte."""
    case: str
    evidence: EvidenceModel
    curve: Optional[CurveModel] = None
    lines: Optional[list[CurveModel]] = None
    curve_points: Optional[list[list[str]]] = None
    rest: Optional[list[list[str]]] = None
    splice_form: Optional[list[str]] = None


class VerdictModel(BaseModel):
    """Veredito de unicidade com testemunhas."""
    kind: str
    report: Optional[StructureReportModel] = None
    witnesses: list[DecompositionModel] = []


# ============ Relatorio ============

class Report(BaseModel):
    """Relatorio de um comando da CLI."""
    command: str
    field: FieldModel
    inputs: dict[str, Any] = {}
    result: dict[str, Any] = {}
    elapsed_seconds: float = 0.0

    def to_json(self, include_timing: bool = True) -> str:
        """JSON deterministico (chaves ordenadas)."""
        exclude = None if include_timing else {"elapsed_seconds"}
        payload = self.model_dump(mode="json", exclude=exclude)
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)
