"""Funcoes utilitarias e logging."""
