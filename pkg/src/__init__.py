"""Waring Rank - Decomposicoes de tensores simetricos em variedades de Veronese."""

__version__ = "1.0.0"
