"""Multi-parameter Littlewood-Paley square functions on the discrete torus."""

__version__ = "0.1.0"
