"""Modelos JSON e serializadores da CLI."""
