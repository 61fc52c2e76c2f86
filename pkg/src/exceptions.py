"""Custom exceptions para o Waring Rank."""

from typing import Any


class WaringRankError(Exception):
    """Excecao base para todas as excecoes customizadas."""

    exit_code: int = 1

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        """
        Inicializa a excecao.

        Args:
            message: Mensagem de erro
            details: Detalhes adicionais (opcional)
        """
        self.message = message
        self.details = details or {}
        super().__init__(self.message)


# ============ INPUT (exit 2) ============

class InputError(WaringRankError):
    """Erro nos dados de entrada."""
    exit_code = 2


class AllZeroError(InputError):
    """Todas as coordenadas de um ponto projetivo sao zero."""
    pass


class ParseError(InputError):
    """Texto fora da gramatica de formas ou de escalares."""
    pass


class NotHomogeneousError(InputError):
    """Forma com monomios de graus diferentes."""
    pass


class ZeroFormError(InputError):
    """Forma identicamente nula."""
    pass


class DimensionMismatchError(InputError):
    """Numero de coordenadas incompativel com o espaco."""
    pass


class FieldError(InputError):
    """Corpo invalido (p nao primo, caracteristica pequena demais)."""
    pass


# ============ BUDGET (exit 3) ============

class BudgetError(WaringRankError):
    """Limite de computacao excedido."""
    exit_code = 3


class BudgetExceededError(BudgetError):
    """Oracle excedeu o orcamento de pontos ou subconjuntos."""
    pass


class SearchBudgetExceededError(BudgetError):
    """Pesquisa exaustiva excedeu o orcamento de nos."""
    pass


class TooLargeError(BudgetError):
    """Instancia fora dos limites do oracle."""
    pass


# ============ INFEASIBLE (exit 4) ============

class InfeasibleError(WaringRankError):
    """Parametros ou instancia sem solucao construtiva."""
    exit_code = 4


class InfeasibleParametersError(InfeasibleError):
    """Parametros de construcao incompativeis."""
    pass


class CurveTooSmallError(InfeasibleError):
    """Cubica sem pontos racionais suficientes."""
    pass


class FamilyEmptyError(InfeasibleError):
    """Nenhum membro da familia encontrado dentro do limite de tentativas."""
    pass


class NonSplitApolarError(InfeasibleError):
    """Sobre Q, nenhuma forma apolar livre de quadrados e decomponivel foi encontrada."""
    pass


class NoSplitWitnessError(InfeasibleError):
    """Nao existe testemunha decomponivel para extrair os nos."""
    pass


class DegenerateProjectionError(InfeasibleError):
    """A contracao que implementa a projecao e nula."""
    pass


class EmptyIntersectionError(InfeasibleError):
    """Intersecao de spans vazia."""
    pass


class NotUniqueError(InfeasibleError):
    """Intersecao de spans com dimensao diferente de um ponto."""
    pass


# ============ CERTIFICATE (exit 5) ============

class CertificateError(WaringRankError):
    """Certificado invalido ou hipotese nao verificada."""
    exit_code = 5


class NotMinimalCertificateError(CertificateError):
    """Decomposicao falha a verificacao estrutural."""
    pass


class PreconditionFailedError(CertificateError):
    """Pre-condicao de um teste de lema falhou."""
    pass


class HypothesisFailedError(CertificateError):
    """Hipotese h^1 de um lema nao se verifica."""
    pass
