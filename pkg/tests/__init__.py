"""Testes do Waring Rank."""
