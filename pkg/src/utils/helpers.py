"""Funcoes utilitarias."""

import hashlib
import random
from typing import Any, Iterable, TypeVar

T = TypeVar("T")


def derive_seed(seed: int, *labels: Any) -> int:
    """
    Deriva uma sub-seed deterministica.

    Args:
        seed: Seed da invocacao
        labels: Rotulos que identificam o consumidor (ex: "family", 3)

    Returns:
        Inteiro de 64 bits
    """
    text = "|".join([str(seed)] + [str(label) for label in labels])
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def make_rng(seed: int, *labels: Any) -> random.Random:
    """Gerador deterministico para (seed, labels)."""
    return random.Random(derive_seed(seed, *labels))


def ceil_half(n: int) -> int:
    """Teto de n/2 em inteiros."""
    return (n + 1) // 2


def heavy_line_threshold(d: int) -> int:
    """Minimo de pontos numa reta pesada: teto de (d+2)/2."""
    return ceil_half(d + 2)


def in_regime(size: int, d: int) -> bool:
    """True se size < 3d/2 (comparacao exata 2*size < 3d)."""
    return 2 * size < 3 * d


# ============ LOTES POR SEED ============

def seed_residue(seed: int, stride: int) -> int:
    """Classe da seed: seeds com restos distintos modulo stride geram lotes disjuntos."""
    return seed % stride


def in_seed_class(key: Any, seed: int, stride: int) -> bool:
    """True se a chave canonica pertence a classe da seed (particao por hash)."""
    return derive_seed(0, "seed-class", key) % stride == seed_residue(seed, stride)


def take_seed_batch(items: Iterable[T], seed: int, count: int) -> list[T]:
    """
    Janela de count elementos de uma sequencia deterministica, a comecar na
    posicao seed * count e com volta ao inicio.

    Seeds distintas leem janelas disjuntas enquanto a sequencia cobre todas;
    uma sequencia curta devolve ate count elementos rodados.

    Args:
        items: Sequencia com ordem independente da seed
        seed: Seed da invocacao
        count: Tamanho do lote
    """
    if count <= 0:
        return []
    start = max(seed, 0) * count
    pool: list[T] = []
    for item in items:
        pool.append(item)
        if len(pool) >= start + count:
            return pool[start:]
    if not pool:
        return []
    start %= len(pool)
    return (pool[start:] + pool[:start])[:count]


def truncate_string(text: str, max_length: int, suffix: str = "...") -> str:
    """
    Trunca string para tamanho maximo.

    Args:
        text: Texto a truncar
        max_length: Tamanho maximo
        suffix: Sufixo a adicionar se truncado

    Returns:
        String truncada
    """
    if not text or len(text) <= max_length:
        return text or ""

    return text[: max_length - len(suffix)] + suffix
