"""Polygraphic homology and nerve homology of small categories and free
omega-categories, computed exactly."""

from .abelianize import b2n_polygraph, lambda_complex, polygraphic_homology
from .cellcore import Comp, Gen, Generator, Polygraph, Unit, globe, sphere, validate_polygraph
from .homalg import ChainComplex, HomologyGroup, IntMatrix, homology, smith_normal_form

__version__ = "0.1.0"

__all__ = [
    "b2n_polygraph", "lambda_complex", "polygraphic_homology",
    "Comp", "Gen", "Generator", "Polygraph", "Unit", "globe", "sphere", "validate_polygraph",
    "ChainComplex", "HomologyGroup", "IntMatrix", "homology", "smith_normal_form",
]
