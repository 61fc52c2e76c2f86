"""Aritmetica exata: corpos, pontos projetivos, formas e algebra linear."""
