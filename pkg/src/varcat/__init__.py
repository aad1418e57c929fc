"""Deciding finiteness of categories generated by affine varieties over Q."""
from .decider import (Decider, DeciderConfig, Finite, Infinite, Witness,
                      decide, validate_witness)
from .geometry import (IntegralModel, Morphism, Variety, compose,
                       image_closure, is_dominant, restrict_to, spread_out)
from .groebner import (GroebnerBasis, Ideal, buchberger, dimension,
                       elimination_ideal, ideal_membership, normal_form)
from .parsing import parse_polynomial
from .poly import GREVLEX, LEX, MonomialOrder, Poly, block_order
from .probes import find_probe_pair, finite_order_test
from .quiver import Arrow, System, bfs_closure, path_components

__all__ = [
    "Decider", "DeciderConfig", "Finite", "Infinite", "Witness", "decide",
    "validate_witness", "IntegralModel", "Morphism", "Variety", "compose",
    "image_closure", "is_dominant", "restrict_to", "spread_out",
    "GroebnerBasis", "Ideal", "buchberger", "dimension", "elimination_ideal",
    "ideal_membership", "normal_form", "parse_polynomial", "GREVLEX", "LEX",
    "MonomialOrder", "Poly", "block_order", "find_probe_pair",
    "finite_order_test", "Arrow", "System", "bfs_closure", "path_components",
]

__version__ = "0.1.0"
