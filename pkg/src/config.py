"""Configuracoes centrais do projeto usando pydantic-settings."""

from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Configuracoes da aplicacao carregadas de variaveis de ambiente."""

    model_config = SettingsConfigDict(
        env_prefix="WARINGRANK_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    # Corpo base
    default_prime: int = Field(
        default=10007,
        ge=3,
        description="Primo usado quando --field nao e indicado"
    )

    # Logging
    log_level: str = Field(
        default="WARNING",
        description="Nivel de logging"
    )

    # Oracle (forca bruta)
    oracle_max_points: int = Field(
        default=50,
        ge=1,
        description="Maximo de pontos de P^r(F_p) enumerados pelo oracle"
    )
    oracle_max_rank: int = Field(
        default=6,
        ge=1,
        description="Tamanho maximo dos subconjuntos testados pelo oracle"
    )
    oracle_max_subsets: int = Field(
        default=10_000_000,
        ge=1,
        description="Maximo de subconjuntos visitados pelo oracle"
    )

    # Amostragem de familias
    family_retry_factor: int = Field(
        default=64,
        ge=1,
        description="Tentativas por decomposicao pedida antes de FamilyEmpty"
    )
    family_batch_stride: int = Field(
        default=3,
        ge=1,
        description="Classes de seeds nas familias amostradas (restos distintos geram lotes disjuntos)"
    )
    exhaustive_search_cap: int = Field(
        default=20000,
        ge=1,
        description="Sistemas apolares com ate este numero de membros sao percorridos exaustivamente"
    )
    root_scan_limit: int = Field(
        default=257,
        ge=3,
        description="Primos ate este valor extraem raizes por varrimento de P^1(F_p)"
    )
    rational_search_bound: int = Field(
        default=3,
        ge=1,
        le=20,
        description="Caixa [-B, B] de coeficientes na pesquisa sobre Q"
    )

    # Construcoes
    builder_max_resamples: int = Field(
        default=16,
        ge=1,
        description="Reamostragens maximas dos construtores de casos"
    )
    i1_prime: int = Field(
        default=13,
        ge=5,
        description="Primo padrao para o exemplo da cubica plana"
    )
    i1_max_resamples: int = Field(
        default=32,
        ge=1,
        description="Reamostragens do exemplo da cubica quando a contagem difere de 2"
    )
    i1_search_budget: int = Field(
        default=3_000_000,
        ge=1,
        description="Nos visitados na pesquisa exaustiva dentro da cubica"
    )
    i1_off_curve_trials: int = Field(
        default=500,
        ge=0,
        description="Tentativas aleatorias fora da cubica"
    )

    # Veredicto
    verdict_witness_count: int = Field(
        default=3,
        ge=2,
        description="Membros da familia gerados para testemunhar nao-unicidade"
    )


@lru_cache
def get_settings() -> Settings:
    """Retorna instancia cached das settings."""
    return Settings()


# Instancia global para uso direto
settings = get_settings()
