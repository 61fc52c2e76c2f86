"""Geometria de Veronese: mergulho, spans, defeitos de Hilbert e curvas."""
