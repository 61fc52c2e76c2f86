"""Servicos: formas binarias, oraculo, certificados, classificacao e construcoes."""
