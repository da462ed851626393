"""Exact computations for block cohomology of finite groups over finite fields."""

from .field import GF
from .groups import FiniteGroup, Subgroup, make_group

__all__ = ["GF", "FiniteGroup", "Subgroup", "make_group"]
__version__ = "0.1.0"
