"""Sheaves of G-sets on finite sites with inertia, and the representability calculus."""

from .gset import FiniteGroup, GAction, EquivariantMap, Subgroup
from .site import FiniteSite, InertiaProfile, SiteMap
from .gsheaf import GSheaf, SheafMorphism
from .star import StarContext, classify

__version__ = "0.1.0"

__all__ = [
    "FiniteGroup", "GAction", "EquivariantMap", "Subgroup",
    "FiniteSite", "InertiaProfile", "SiteMap",
    "GSheaf", "SheafMorphism", "StarContext", "classify",
]
